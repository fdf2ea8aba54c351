#include "rlc/conformal/conformal.hpp"

#include <algorithm>

namespace rlc {

namespace {

LawCheck check(const MetricChart& M, const std::vector<Expr>& residuals, bool on_sigma) {
    LawCheck c{true, Evidence::Exact, 0};
    for (const auto& r : residuals) {
        if (r.is_zero()) continue;
        const Verdict v = on_sigma ? vanishes_on_sigma(M, r) : identically_zero(M, r);
        c.evidence = weaker(c.evidence, v.evidence);
        c.holds = c.holds && v.value;
        c.max_residual = std::max(c.max_residual, on_sigma ? max_abs_on_sigma(M, r) : max_abs_off_sigma(M, r));
    }
    return c;
}

// II^R(X, R)|Σ for X = grad of a function given by its coordinate gradient
Expr second_form_on_gradient(const MetricChart& M, const Connection& B, const Vector& R, const Expr& f) {
    const std::size_t m = M.dim();
    Vector grad(m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (B.ginv[a][b].is_zero()) continue;
            const Expr d = differentiate(f, M.coord(b));
            if (!d.is_zero()) grad[a] += B.ginv[a][b] * d;
        }
    Expr acc;
    for (std::size_t a = 0; a < m; ++a)
        if (!grad[a].is_zero()) acc += grad[a] * dual_derivative(M, B.first, coordinate_field(M, a), R, R);
    try {
        return M.sigma().restrict(acc);
    } catch (const PoleOnSigma&) {
        throw DegeneracyError("grad f does not extend across Σ");
    }
}

// ρ with R = ρ ∂_x on Σ, x the τ coordinate
Expr aligned_scale(const MetricChart& M, const Vector& R) {
    for (std::size_t a = 0; a < M.dim(); ++a)
        if (a != M.tau_index() && !M.sigma().restrict(R[a]).is_zero())
            throw ConformalUnsupported("the radical is not aligned with the τ coordinate");
    const Expr rho = M.sigma().restrict(R[M.tau_index()]);
    if (rho.is_zero()) throw ConformalUnsupported("the radical is tangent to Σ");
    return rho;
}

}  // namespace

MetricChart rescale(const MetricChart& M, const Expr& f) {
    const Expr e = exp(2 * f);
    ExprMatrix g = M.g();
    for (auto& row : g)
        for (auto& c : row) c = e * c;
    return MetricChart(M.names(), std::move(g), M.tau_index(), M.sigma().unit(), M.options());
}

LawCheck verify_II_law(const MetricChart& M, const Expr& f) {
    const MetricChart N = rescale(M, f);
    const Vector R = radical_field(M);
    const auto F = second_fundamental(M, connection(M), R);
    const auto Fb = second_fundamental(N, connection(N), R);
    const Expr Rf = M.sigma().restrict(apply(M, R, f));
    const Expr e = M.sigma().restrict(exp(2 * f));
    std::vector<Expr> res;
    for (std::size_t i = 0; i < F.II_sigma.size(); ++i)
        for (std::size_t j = i; j < F.II_sigma.size(); ++j)
            res.push_back(Fb.II_sigma[i][j] - e * (F.II_sigma[i][j] - Rf * F.g_sigma[i][j]));
    return check(M, res, true);
}

Gradient grad_extended(const MetricChart& M, const Expr& f) {
    const Frame F = build_adapted_frame(M);
    const std::size_t m = M.dim();
    Gradient g;
    g.field.assign(m, Expr(0));
    for (std::size_t i = 0; i + 1 < m; ++i) {
        const Expr c = Expr(F.eps[i]) * apply(M, F.E[i], f);
        if (c.is_zero()) continue;
        for (std::size_t a = 0; a < m; ++a) g.field[a] += c * F.E[i][a];
    }
    const Expr Rf = apply(M, F.E[m - 1], f);
    Expr c;
    try {
        c = M.sigma().divide(Rf);
        g.extends = true;
    } catch (const NotDivisible&) {
        c = Rf / M.tau();
        g.extends = false;
    }
    for (std::size_t a = 0; a < m; ++a) g.field[a] += c * F.E[m - 1][a];
    return g;
}

LawCheck verify_III_law(const MetricChart& M, const Expr& f) {
    const MetricChart N = rescale(M, f);
    const Vector R = radical_field(M);
    const auto B = connection(M), Bb = connection(N);
    const auto F = second_fundamental(M, B, R), Fb = second_fundamental(N, Bb, R);
    const auto III = third_fundamental(M, B, F);
    const auto IIIb = third_fundamental(N, Bb, Fb);
    const Expr beta = second_form_on_gradient(M, B, R, f);
    const Expr e = M.sigma().restrict(exp(2 * f));
    std::vector<Expr> res;
    for (std::size_t i = 0; i < III.size(); ++i)
        for (std::size_t j = i; j < III.size(); ++j)
            res.push_back(IIIb[i][j] - e * (III[i][j] - beta * F.g_sigma[i][j]));
    return check(M, res, true);
}

Expr flatten_II(const MetricChart& M) {
    const Vector R = radical_field(M);
    const auto F = second_fundamental(M, connection(M), R);
    const auto P = proportional_to(M, F.II_sigma, F.g_sigma);
    if (P.zero) return Expr(0);
    if (!P.proportional) throw DegeneracyError("not conformally II-flat");
    const Expr rho = aligned_scale(M, R);
    const Expr f = Expr::atom(M.coord(M.tau_index())) * (P.k / rho);
    const MetricChart N = rescale(M, f);
    const auto Fb = second_fundamental(N, connection(N), R);
    if (!proportional_to(N, Fb.II_sigma, Fb.g_sigma).zero) throw DegeneracyError("II-flattening did not verify");
    return f;
}

Expr flatten_III(const MetricChart& M) {
    const Vector R = radical_field(M);
    const auto B = connection(M);
    const auto F = second_fundamental(M, B, R);
    const auto P = proportional_to(M, third_fundamental(M, B, F), F.g_sigma);
    if (P.zero) return Expr(0);
    if (!P.proportional) throw DegeneracyError("not conformally III-flat");
    aligned_scale(M, R);
    const Expr x = Expr::atom(M.coord(M.tau_index()));
    const Expr half_square = x.pow(2) / 2;
    const Expr alpha = second_form_on_gradient(M, B, R, half_square);
    if (alpha.is_zero()) throw ConformalUnsupported("II^R(grad x²/2, R) vanishes on Σ");
    const Expr f = (P.k / alpha) * half_square;
    const MetricChart N = rescale(M, f);
    const auto Bb = connection(N);
    const auto Fb = second_fundamental(N, Bb, R);
    if (!proportional_to(N, third_fundamental(N, Bb, Fb), Fb.g_sigma).zero)
        throw DegeneracyError("III-flattening did not verify");
    return f;
}

WeylCheck verify_weyl_invariance(const MetricChart& M, const Expr& f) {
    if (M.dim() < 4) throw DegeneracyError("the Weyl tensor needs m ≥ 4");
    const MetricChart N = rescale(M, f);
    const auto B = curvature(M), Bb = curvature(N);
    const Expr e = exp(2 * f);
    std::vector<Expr> rw, ru;
    WeylCheck out;
    out.identical = true;
    for (std::size_t n = 0; n < B.W.components().size(); ++n) {
        rw.push_back(Bb.W.components()[n] - e * B.W.components()[n]);
        ru.push_back(Bb.Wup.components()[n] - B.Wup.components()[n]);
        out.identical = out.identical && Bb.Wup.components()[n] == B.Wup.components()[n];
    }
    out.W = check(M, rw, false);
    out.Wup = check(M, ru, false);
    return out;
}

}  // namespace rlc
