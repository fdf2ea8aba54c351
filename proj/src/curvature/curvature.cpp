#include "rlc/curvature/curvature.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

namespace rlc {

namespace {

std::string describe(const std::vector<std::size_t>& idx) {
    std::ostringstream os;
    for (const auto i : idx) os << i + 1;
    return os.str();
}

}  // namespace

Tensor metric_tensor(const ExprMatrix& g) {
    Tensor t(g.size(), 2);
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b) t(a, b) = g[a][b];
    return t;
}

Tensor dual_connection(const MetricChart& M) {
    const std::size_t m = M.dim();
    // dg(c, a, b) = ∂_c g_ab
    Tensor dg(m, 3);
    for (std::size_t c = 0; c < m; ++c)
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a; b < m; ++b) dg(c, a, b) = dg(c, b, a) = differentiate(M.g(a, b), M.coord(c));
    Tensor G(m, 3);
    const Expr half = Expr::rational(1, 2);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c) G(a, b, c) = G(b, a, c) = half * (dg(a, b, c) + dg(b, a, c) - dg(c, a, b));
    return G;
}

Tensor christoffel(const MetricChart& M, const Tensor& first, const ExprMatrix& ginv) {
    const std::size_t m = M.dim();
    Tensor G(m, 3);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c) {
                Expr acc;
                for (std::size_t d = 0; d < m; ++d)
                    if (!ginv[c][d].is_zero() && !first(a, b, d).is_zero()) acc += ginv[c][d] * first(a, b, d);
                G(a, b, c) = G(b, a, c) = acc;
            }
    return G;
}

namespace {

// Components of T written as num[i] / den over one common denominator.
struct OverCommon {
    Poly den;
    std::vector<Poly> num;
};

std::optional<Poly> as_poly(const Expr& e) {
    if (!e.has_denominator()) return e.num();
    if (!e.den().is_constant()) return std::nullopt;
    return e.num() * (1 / e.den().constant_value());
}

std::optional<OverCommon> over_common(const Tensor& T) {
    OverCommon out{Poly(mpq_class(1)), {}};
    std::vector<const Poly*> seen;
    for (const auto& c : T.components()) {
        if (c.is_zero() || !c.has_denominator()) continue;
        if (std::any_of(seen.begin(), seen.end(), [&](const Poly* d) { return *d == c.den(); })) continue;
        seen.push_back(&c.den());
        const auto q = divide_exact(c.den(), gcd(out.den, c.den()));
        if (!q) return std::nullopt;
        out.den *= *q;
    }
    for (const auto& c : T.components()) {
        if (c.is_zero()) {
            out.num.emplace_back();
            continue;
        }
        const auto q = divide_exact(out.den, c.den());
        if (!q) return std::nullopt;
        out.num.push_back(c.num() * *q);
    }
    return out;
}

// One canonicalization per component instead of one per partial sum.
std::optional<Tensor> riemann_common(const MetricChart& M, const Tensor& first, const Tensor& second) {
    const std::size_t m = M.dim();
    const auto A = over_common(first), B = over_common(second);
    if (!A || !B) return std::nullopt;
    const auto g = gcd(A->den, B->den);
    const auto a_scale = divide_exact(B->den, g), b_scale = divide_exact(A->den, g);
    if (!a_scale || !b_scale) return std::nullopt;
    // K = [(∂P·D − P·∂D)·(B.den/g) + (Σ P₂P₁)·(A.den/g)] / (A.den · lcm)
    const Poly den = A->den * A->den * *a_scale;

    std::vector<std::vector<Poly>> dP(m, std::vector<Poly>(A->num.size()));
    std::vector<Poly> dD(m);
    for (std::size_t a = 0; a < m; ++a) {
        const auto d = as_poly(differentiate(Expr(A->den), M.coord(a)));
        if (!d) return std::nullopt;
        dD[a] = *d;
        for (std::size_t n = 0; n < A->num.size(); ++n) {
            if (A->num[n].is_zero()) continue;
            const auto p = as_poly(differentiate(Expr(A->num[n]), M.coord(a)));
            if (!p) return std::nullopt;
            dP[a][n] = *p;
        }
    }
    auto at = [m](std::size_t i, std::size_t j, std::size_t k) { return (i * m + j) * m + k; };

    Tensor K(m, 4);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < m; ++d) {
                    const auto& Pb = A->num[at(b, c, d)];
                    const auto& Pa = A->num[at(a, c, d)];
                    Poly deriv = dP[a][at(b, c, d)] - dP[b][at(a, c, d)];
                    deriv *= A->den;
                    if (!Pb.is_zero()) deriv -= Pb * dD[a];
                    if (!Pa.is_zero()) deriv += Pa * dD[b];
                    Poly quad;
                    for (std::size_t e = 0; e < m; ++e) {
                        const auto& s1 = B->num[at(b, c, e)];
                        const auto& f1 = A->num[at(a, d, e)];
                        if (!s1.is_zero() && !f1.is_zero()) quad -= s1 * f1;
                        const auto& s2 = B->num[at(a, c, e)];
                        const auto& f2 = A->num[at(b, d, e)];
                        if (!s2.is_zero() && !f2.is_zero()) quad += s2 * f2;
                    }
                    Poly num = deriv * *a_scale;
                    if (!quad.is_zero()) num += quad * *b_scale;
                    const Expr v = num.is_zero() ? Expr(0) : Expr::fraction(num, den);
                    K(a, b, d, c) = v;
                    K(b, a, d, c) = -v;
                }
    return K;
}

}  // namespace

Tensor riemann(const MetricChart& M, const Tensor& first, const Tensor& second) {
    if (auto K = riemann_common(M, first, second)) return *K;
    const std::size_t m = M.dim();
    // std(a,b,c,d) = g(R(∂a,∂b)∂c, ∂d); K(a,b,c,d) = std(a,b,d,c)
    Tensor K(m, 4);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < m; ++d) {
                    Expr v = differentiate(first(b, c, d), M.coord(a)) - differentiate(first(a, c, d), M.coord(b));
                    for (std::size_t e = 0; e < m; ++e) {
                        if (!second(b, c, e).is_zero() && !first(a, d, e).is_zero()) v -= second(b, c, e) * first(a, d, e);
                        if (!second(a, c, e).is_zero() && !first(b, d, e).is_zero()) v += second(a, c, e) * first(b, d, e);
                    }
                    K(a, b, d, c) = v;
                    K(b, a, d, c) = -v;
                }
    return K;
}

Tensor ricci(const Tensor& K, const ExprMatrix& ginv) {
    const std::size_t m = K.dim();
    Tensor Ric(m, 2);
    for (std::size_t b = 0; b < m; ++b)
        for (std::size_t d = 0; d < m; ++d) {
            Expr acc;
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t c = 0; c < m; ++c)
                    if (!ginv[a][c].is_zero() && !K(a, b, c, d).is_zero()) acc += ginv[a][c] * K(a, b, c, d);
            Ric(b, d) = acc;
        }
    return Ric;
}

Expr scalar(const Tensor& Ric, const ExprMatrix& ginv) {
    Expr acc;
    for (std::size_t b = 0; b < Ric.dim(); ++b)
        for (std::size_t d = 0; d < Ric.dim(); ++d)
            if (!ginv[b][d].is_zero() && !Ric(b, d).is_zero()) acc += ginv[b][d] * Ric(b, d);
    return acc;
}

Tensor schouten(const Tensor& Ric, const Expr& Sc, const ExprMatrix& g) {
    const std::size_t m = Ric.dim();
    if (m < 3) throw CurvatureError("the Schouten tensor needs dimension at least 3");
    const Expr c = Sc / Expr(static_cast<long>(2 * (m - 1)));
    const Expr inv = Expr::rational(1, static_cast<long>(m - 2));
    Tensor h(m, 2);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) h(a, b) = inv * (Ric(a, b) - c * g[a][b]);
    return h;
}

Tensor kulkarni_nomizu(const Tensor& th, const Tensor& om) {
    const std::size_t m = th.dim();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (th(a, b) != th(b, a) || om(a, b) != om(b, a))
                throw CurvatureError("Kulkarni-Nomizu product needs symmetric arguments");
    Tensor out(m, 4);
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y)
            for (std::size_t z = 0; z < m; ++z)
                for (std::size_t t = 0; t < m; ++t)
                    out(x, y, z, t) = th(x, z) * om(y, t) - om(x, t) * th(y, z) + om(x, z) * th(y, t) - th(x, t) * om(y, z);
    return out;
}

Tensor weyl(const Tensor& K, const Tensor& h, const ExprMatrix& g) {
    const Tensor hg = kulkarni_nomizu(h, metric_tensor(g));
    Tensor W(K.dim(), 4);
    for (std::size_t n = 0; n < W.components().size(); ++n) W.components()[n] = K.components()[n] - hg.components()[n];
    return W;
}

Tensor raise_second(const Tensor& W, const ExprMatrix& ginv) {
    const std::size_t m = W.dim();
    Tensor up(m, 4);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t e = 0; e < m; ++e)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < m; ++d) {
                    Expr acc;
                    for (std::size_t b = 0; b < m; ++b)
                        if (!ginv[e][b].is_zero() && !W(a, b, c, d).is_zero()) acc += ginv[e][b] * W(a, b, c, d);
                    up(a, e, c, d) = acc;
                }
    return up;
}

Connection connection(const MetricChart& M) {
    Connection C;
    C.ginv = inverse(M.g());
    C.first = dual_connection(M);
    C.second = christoffel(M, C.first, C.ginv);
    return C;
}

CurvatureBundle curvature(const MetricChart& M) {
    CurvatureBundle B;
    const std::size_t m = M.dim();
    static_cast<Connection&>(B) = connection(M);
    B.K = riemann(M, B.first, B.second);
    B.Ric = ricci(B.K, B.ginv);
    B.Sc = scalar(B.Ric, B.ginv);
    if (m >= 3) B.h = schouten(B.Ric, B.Sc, M.g());
    if (m >= 4) {
        B.W = weyl(B.K, B.h, M.g());
        B.Wup = raise_second(B.W, B.ginv);
    }
    return B;
}

Tensor in_frame(const Tensor& T, const std::vector<Vector>& E) {
    const std::size_t m = T.dim(), r = T.rank();
    Tensor cur = T;
    // contract one slot at a time
    for (std::size_t slot = 0; slot < r; ++slot) {
        Tensor next(m, r);
        for (std::size_t n = 0; n < next.components().size(); ++n) {
            auto idx = next.index_of(n);
            const std::size_t a = idx[slot];
            Expr acc;
            for (std::size_t i = 0; i < m; ++i) {
                if (E[a][i].is_zero()) continue;
                idx[slot] = i;
                const Expr& c = cur.at(idx);
                if (!c.is_zero()) acc += E[a][i] * c;
            }
            next.components()[n] = acc;
        }
        cur = std::move(next);
    }
    return cur;
}

std::string check_curvature_symmetries(const Tensor& T) {
    const std::size_t m = T.dim();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < m; ++d) {
                    const Expr& v = T(a, b, c, d);
                    if (!(v + T(b, a, c, d)).is_zero()) return "antisymmetry in the first pair at " + describe({a, b, c, d});
                    if (!(v + T(a, b, d, c)).is_zero()) return "antisymmetry in the second pair at " + describe({a, b, c, d});
                    if (!(v - T(c, d, a, b)).is_zero()) return "pair interchange at " + describe({a, b, c, d});
                    if (!(v + T(b, c, a, d) + T(c, a, b, d)).is_zero()) return "first Bianchi identity at " + describe({a, b, c, d});
                }
    return "";
}

std::string check_trace_free(const Tensor& W, const ExprMatrix& ginv) {
    const std::size_t m = W.dim();
    // by the symmetries every trace is ± one of these two
    for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y) {
            Expr t13, t14;
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t c = 0; c < m; ++c) {
                    if (ginv[a][c].is_zero()) continue;
                    t13 += ginv[a][c] * W(a, x, c, y);
                    t14 += ginv[a][c] * W(a, x, y, c);
                }
            if (!t13.is_zero()) return "trace over slots 1,3 at " + describe({x, y});
            if (!t14.is_zero()) return "trace over slots 1,4 at " + describe({x, y});
        }
    return "";
}

}  // namespace rlc
