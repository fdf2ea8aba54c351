#include "rlc/degeneracy/forms.hpp"

#include <cmath>

namespace rlc {

namespace {

Expr restrict_or(const MetricChart& M, const Expr& e, const char* what) {
    try {
        return M.sigma().restrict(e);
    } catch (const PoleOnSigma&) {
        throw DegeneracyError(std::string(what) + " has a pole on the degeneracy locus");
    }
}

Verdict all_vanish(const MetricChart& M, const std::vector<Expr>& es) {
    Verdict v{true, Evidence::Exact};
    for (const auto& e : es) {
        const Verdict z = vanishes_on_sigma(M, e);
        v.evidence = weaker(v.evidence, z.evidence);
        if (!z.value) return {false, v.evidence};
    }
    return v;
}

}  // namespace

Expr dual_derivative(const MetricChart& M, const Tensor& first, const Vector& X, const Vector& Y, const Vector& Z) {
    const std::size_t m = M.dim();
    Vector gZ(m);  // g(∂_b, Z)
    for (std::size_t b = 0; b < m; ++b)
        for (std::size_t c = 0; c < m; ++c)
            if (!Z[c].is_zero() && !M.g(b, c).is_zero()) gZ[b] += M.g(b, c) * Z[c];
    Expr acc;
    for (std::size_t a = 0; a < m; ++a) {
        if (X[a].is_zero()) continue;
        for (std::size_t b = 0; b < m; ++b) {
            if (!gZ[b].is_zero() && !Y[b].is_zero()) {
                const Expr dY = differentiate(Y[b], M.coord(a));
                if (!dY.is_zero()) acc += X[a] * dY * gZ[b];
            }
            if (Y[b].is_zero()) continue;
            for (std::size_t c = 0; c < m; ++c)
                if (!Z[c].is_zero() && !first(a, b, c).is_zero()) acc += X[a] * Y[b] * first(a, b, c) * Z[c];
        }
    }
    return acc;
}

Expr second_form(const MetricChart& M, const Tensor& first, const Vector& R, const Vector& X, const Vector& Y) {
    return dual_derivative(M, first, X, Y, R);
}

std::vector<std::size_t> tangent_indices(const MetricChart& M) {
    std::vector<std::size_t> out;
    for (std::size_t a = 0; a < M.dim(); ++a)
        if (a != M.tau_index()) out.push_back(a);
    return out;
}

FundamentalForms second_fundamental(const MetricChart& M, const Connection& B, const Vector& R) {
    const std::size_t m = M.dim();
    FundamentalForms F;
    F.R = R;
    F.II.assign(m, Vector(m));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b) {
            Expr acc;
            for (std::size_t c = 0; c < m; ++c)
                if (!R[c].is_zero()) acc += B.first(a, b, c) * R[c];
            F.II[a][b] = F.II[b][a] = restrict_or(M, acc, "II");
        }
    const auto T = tangent_indices(M);
    F.II_sigma.assign(T.size(), Vector(T.size()));
    F.g_sigma.assign(T.size(), Vector(T.size()));
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = 0; j < T.size(); ++j) {
            F.II_sigma[i][j] = F.II[T[i]][T[j]];
            F.g_sigma[i][j] = M.sigma().restrict(M.g(T[i], T[j]));
        }
    return F;
}

Proportionality proportional_to(const MetricChart& M, const ExprMatrix& T, const ExprMatrix& G) {
    Proportionality P;
    std::vector<Expr> all;
    for (const auto& row : T) all.insert(all.end(), row.begin(), row.end());
    const Verdict z = all_vanish(M, all);
    P.evidence = z.evidence;
    if (z.value) {
        P.zero = P.proportional = true;
        P.k = Expr(0);
        return P;
    }
    std::size_t p = 0;
    while (p < G.size() && G[p][p].is_zero()) ++p;
    if (p == G.size()) throw DegeneracyError("induced metric has a vanishing diagonal");
    P.k = T[p][p] / G[p][p];
    std::vector<Expr> residual;
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i; j < T.size(); ++j) residual.push_back(T[i][j] - P.k * G[i][j]);
    const Verdict r = all_vanish(M, residual);
    P.proportional = r.value;
    P.evidence = weaker(P.evidence, r.evidence);
    return P;
}

ExprMatrix third_fundamental(const MetricChart& M, const Connection& B, const FundamentalForms& F) {
    const auto flat = proportional_to(M, F.II_sigma, F.g_sigma);
    if (!flat.zero) throw NotIIFlat("III is only defined for II-flat metrics");
    const std::size_t m = M.dim();
    const Vector& R = F.R;
    // Q_c = II^R(∂_c, R) off Σ
    Vector Q(m);
    for (std::size_t c = 0; c < m; ++c) Q[c] = dual_derivative(M, B.first, coordinate_field(M, c), R, R);
    const auto T = tangent_indices(M);
    ExprMatrix III(T.size(), Vector(T.size()));
    for (std::size_t i = 0; i < T.size(); ++i)
        for (std::size_t j = i; j < T.size(); ++j) {
            Expr acc;
            for (std::size_t c = 0; c < m; ++c)
                if (!Q[c].is_zero() && !B.second(T[i], T[j], c).is_zero()) acc += B.second(T[i], T[j], c) * Q[c];
            III[i][j] = III[j][i] = restrict_or(M, acc, "II^R(∇_X Y, R)");
        }
    return III;
}

Vector canonical_radical(const MetricChart& M, const Tensor& first, const Vector& U) {
    const Expr v = M.sigma().restrict(second_form(M, first, U, U, U));
    if (v.is_zero()) throw DegeneracyError("II^U(U,U) vanishes on Σ: the radical is not transverse");
    const Expr s = root(Expr(1) / v, 3);
    Vector R(U.size());
    for (std::size_t a = 0; a < U.size(); ++a) R[a] = s * U[a];
    return R;
}

MetricChart sigma_chart(const MetricChart& M) {
    const auto T = tangent_indices(M);
    std::vector<std::string> names;
    ExprMatrix g(T.size(), Vector(T.size()));
    for (std::size_t i = 0; i < T.size(); ++i) {
        names.push_back(M.names()[T[i]]);
        for (std::size_t j = 0; j < T.size(); ++j) g[i][j] = M.sigma().restrict(M.g(T[i], T[j]));
    }
    ChartOptions opts = M.options();
    if (!opts.box.empty()) {
        std::vector<std::pair<double, double>> box;
        for (const auto i : T) box.push_back(opts.box[i]);
        opts.box = box;
    }
    // nothing degenerates here; the first coordinate is a placeholder
    return MetricChart(names, g, 0, Expr(1), opts);
}

GaussResult gauss_check(const MetricChart& M, const CurvatureBundle& B, const FundamentalForms& F) {
    GaussResult out;
    const auto tr = radical_transversality(M, F.R);
    if (tr.kind != Transversality::Transverse) throw DegeneracyError("gauss_check needs a transverse radical");
    const ExprMatrix III = third_fundamental(M, B, F);
    const MetricChart S = sigma_chart(M);
    const auto BS = curvature(S);
    const auto T = tangent_indices(M);
    const std::size_t n = T.size();

    std::vector<Expr> curv;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = c + 1; d < n; ++d)
                    curv.push_back(restrict_or(M, B.K(T[a], T[b], T[c], T[d]), "K") - BS.K(a, b, c, d));
    const Verdict vc = all_vanish(M, curv);

    const Expr uu = M.sigma().restrict(second_form(M, B.first, F.R, F.R, F.R));
    std::vector<Expr> conn;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a; b < n; ++b) {
            const Expr lambda = III[a][b] / uu;
            for (std::size_t c = 0; c < M.dim(); ++c) {
                Expr expected = lambda * F.R[c];
                if (c != M.tau_index()) expected += BS.second(a, b, c < M.tau_index() ? c : c - 1);
                conn.push_back(restrict_or(M, B.second(T[a], T[b], c), "Γ") - expected);
            }
        }
    const Verdict vn = all_vanish(M, conn);
    out.curvature_matches = vc.value;
    out.connection_matches = vn.value;
    out.evidence = weaker(vc.evidence, vn.evidence);
    if (!vc.value) out.detail = "K on TΣ differs from the induced curvature";
    else if (!vn.value) out.detail = "connection does not split as ∇^Σ + III·R";
    return out;
}

SigmaGeometry sigma_geometry(const MetricChart& M) {
    const MetricChart S = sigma_chart(M);
    SigmaGeometry G;
    G.bundle = curvature(S);
    const std::size_t n = S.dim();
    const auto pts = M.sigma_samples();
    auto max_at = [&](const Expr& e) {
        double v = 0;
        for (const auto& p : pts) v = std::max(v, std::abs(evaluate(e, p)));
        return v;
    };
    if (n == 3) {
        const auto& h = G.bundle.h;
        const auto& Gm = G.bundle.second;
        // ∇_a h_bc
        auto nabla = [&](std::size_t a, std::size_t b, std::size_t c) {
            Expr v = differentiate(h(b, c), S.coord(a));
            for (std::size_t d = 0; d < n; ++d) {
                if (!Gm(a, b, d).is_zero()) v -= Gm(a, b, d) * h(d, c);
                if (!Gm(a, c, d).is_zero()) v -= Gm(a, c, d) * h(b, d);
            }
            return v;
        };
        Tensor C(n, 3);
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c) {
                    C(a, b, c) = nabla(a, b, c) - nabla(b, a, c);
                    G.cotton_max = std::max(G.cotton_max, max_at(C(a, b, c)));
                }
        G.cotton = C;
    } else if (n > 3) {
        for (const auto& w : G.bundle.W.components()) G.weyl_max = std::max(G.weyl_max, max_at(w));
    }
    return G;
}

ExprMatrix schouten_gap(const MetricChart& M, const CurvatureBundle& B, const Frame& F) {
    const std::size_t m = M.dim(), n = m - 1, mi = m - 1;
    if (m < 4) throw DegeneracyError("the Schouten gap needs m ≥ 4");
    if (!F.completely_adapted) throw DegeneracyError("the Schouten gap needs a completely adapted frame");
    const Tensor K = in_frame(B.K, F.E);
    const Expr tau = M.tau();
    auto over_tau = [&](const Expr& e) {
        try {
            return M.sigma().restrict(M.sigma().divide(e));
        } catch (const NotDivisible&) {
            throw DegeneracyError("K(E_i, E_m, E_j, E_m) is not divisible by τ");
        }
    };
    auto eps = [&](std::size_t i) { return Expr(F.eps[i]); };
    Expr p, s;
    for (std::size_t k = 0; k < n; ++k) {
        p += eps(k) * over_tau(K(k, mi, k, mi));
        for (std::size_t l = 0; l < n; ++l) s += eps(k) * eps(l) * restrict_or(M, K(k, l, k, l), "K");
    }
    const Expr c3 = Expr::rational(1, static_cast<long>(m - 3));
    const Expr c1 = Expr::rational(1, static_cast<long>(m - 1));
    const Expr c2 = Expr::rational(-1, static_cast<long>(m - 2));
    ExprMatrix gap(n, Vector(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) {
            Expr a;
            for (std::size_t l = 0; l < n; ++l) a += eps(l) * restrict_or(M, K(i, l, j, l), "K");
            Expr v = over_tau(K(i, mi, j, mi)) - c3 * a;
            if (i == j) v -= c1 * (p - c3 * s) * eps(i);
            gap[i][j] = gap[j][i] = c2 * v;
        }
    return gap;
}

Tensor b_ijk(const MetricChart& M, const CurvatureBundle& B, const Frame& F) {
    const std::size_t m = M.dim(), n = m - 1, mi = m - 1;
    const Tensor K = in_frame(B.K, F.E);
    auto eps = [&](std::size_t i) { return Expr(F.eps[i]); };
    std::vector<Expr> Kimim(n);
    Expr trace;
    for (std::size_t l = 0; l < n; ++l) {
        Kimim[l] = restrict_or(M, K(l, mi, l, mi), "K");
        trace += eps(l) * Kimim[l];
    }
    const Expr inv = Expr::rational(1, static_cast<long>(m - 2));
    const Expr two = Expr::rational(2, static_cast<long>(m - 1));
    Tensor out(n, 3);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                if (i == k || j == k) continue;
                Expr v = eps(k) * restrict_or(M, K(i, mi, j, mi), "K");
                if (i == j) v += eps(i) * Kimim[k] - two * eps(k) * eps(i) * trace;
                out(i, j, k) = inv * v;
            }
    return out;
}

}  // namespace rlc
