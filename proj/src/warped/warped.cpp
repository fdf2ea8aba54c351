#include "rlc/warped/warped.hpp"

#include <cmath>
#include <sstream>
#include <tuple>

#include <Eigen/Dense>
#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rlc {

namespace {

std::size_t dim_of(const WarpedSpec& s) { return s.base.size() + 1; }

Tensor lift(const Tensor& T, std::size_t m) {
    Tensor out(m, T.rank());
    for (std::size_t n = 0; n < T.components().size(); ++n) out.at(T.index_of(n)) = T.components()[n];
    return out;
}

Tensor scaled(const Expr& c, const Tensor& T) {
    Tensor out = T;
    for (auto& e : out.components())
        if (!e.is_zero()) e = c * e;
    return out;
}

Tensor sum(const Tensor& a, const Tensor& b) {
    Tensor out = a;
    for (std::size_t n = 0; n < out.components().size(); ++n) out.components()[n] += b.components()[n];
    return out;
}

// zero exactly, or numerically at the off-Σ samples
Verdict negligible(const MetricChart& M, const Expr& e, double& worst) {
    if (e.is_zero()) return {true, Evidence::Exact};
    double v = 0;
    for (const auto& p : M.off_sigma_samples()) v = std::max(v, std::abs(evaluate(e, p)));
    worst = std::max(worst, v);
    return {v <= 1e-9, Evidence::Numeric};
}

struct Integrand {
    Expr f;
    AtomId t;
    Valuation at;

    double operator()(double s) {
        at.coords[t] = s;
        return evaluate(f, at);
    }
};

Integrand integrand_for(const WarpedSpec& spec) {
    const MetricChart M = make_warped(spec);
    Integrand I{spec.f, coordinate_id(spec.t), {}};
    I.at.functions = M.function_models();
    return I;
}

double psi_with(Integrand& I, double t) {
    if (t == 0) return 0;
    const double sign = t > 0 ? 1.0 : -1.0;
    auto g = [&](double w) { return 2 * w * w / I(sign * w * w); };
    double error = 0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(g, 0.0, std::sqrt(std::abs(t)), 15, 1e-14, &error);
    if (!(error <= 1e-10)) throw WarpedError("quadrature for ψ did not converge");
    return sign * v;
}

}  // namespace

MetricChart base_chart(const WarpedSpec& spec) {
    ChartOptions opts = spec.options;
    if (opts.box.size() > spec.base.size()) opts.box.resize(spec.base.size());
    return MetricChart(spec.base_coords, spec.base, 0, Expr(1), opts);
}

MetricChart make_warped(const WarpedSpec& spec) {
    const std::size_t m = dim_of(spec);
    if (m < 4) throw WarpedError("warped products need m ≥ 4");
    if (spec.base_coords.size() != spec.base.size()) throw WarpedError("base metric and base coordinates disagree");
    const AtomId t = coordinate_id(spec.t);
    for (const auto& c : spec.base_coords)
        if (depends_on(spec.f, coordinate_id(c))) throw WarpedError("the warping function may only depend on " + spec.t);
    for (const auto& row : spec.base)
        for (const auto& e : row)
            if (depends_on(e, t)) throw WarpedError("the base metric may not depend on " + spec.t);

    std::vector<std::string> names = spec.base_coords;
    names.push_back(spec.t);
    ExprMatrix g(m, Vector(m));
    const Expr f2 = spec.f.pow(2);
    for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = 0; j + 1 < m; ++j)
            if (!spec.base[i][j].is_zero()) g[i][j] = f2 * spec.base[i][j];
    g[m - 1][m - 1] = -Expr::atom(t);
    MetricChart M(names, g, m - 1, Expr(-1), spec.options);

    const Expr f0 = M.sigma().restrict(spec.f);
    if (has_opaque_atoms(f0)) throw WarpedError("f(0) must be declared");
    if (!(evaluate(f0, M.sigma_samples(1).front()) > 0)) throw WarpedError("f(0) must be positive");
    for (const auto& p : M.off_sigma_samples())
        if (!(evaluate(spec.f, p) > 0)) throw WarpedError("f must be positive on the box");
    for (const auto& p : M.sigma_samples()) {
        Eigen::MatrixXd G(m - 1, m - 1);
        for (std::size_t i = 0; i + 1 < m; ++i)
            for (std::size_t j = 0; j + 1 < m; ++j)
                G(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = evaluate(spec.base[i][j], p);
        if (G.llt().info() != Eigen::Success) throw WarpedError("the base metric is not positive definite on the box");
    }
    return M;
}

CurvatureBundle closed_form_table(const WarpedSpec& spec) {
    const std::size_t m = dim_of(spec);
    if (m < 4) throw WarpedError("the closed-form table needs m ≥ 4");
    const MetricChart S = base_chart(spec);
    const CurvatureBundle BS = curvature(S);
    const AtomId tid = coordinate_id(spec.t);
    const Expr t = Expr::atom(tid), f = spec.f;
    const Expr f1 = differentiate(f, tid), f2 = differentiate(f1, tid);
    const auto num = [](long n) { return Expr(n); };
    const long ml = static_cast<long>(m);

    Tensor gS(m, 2), dt2(m, 2);
    for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = 0; j + 1 < m; ++j) gS(i, j) = spec.base[i][j];
    dt2(m - 1, m - 1) = Expr(1);

    const Expr bracket = f1 / t - 2 * f2;  // f′/t − 2f″
    CurvatureBundle T;
    T.K = sum(sum(scaled(f.pow(2), lift(BS.K, m)), scaled(f1.pow(2) * f.pow(2) / (2 * t), kulkarni_nomizu(gS, gS))),
              scaled(f / 2 * bracket, kulkarni_nomizu(gS, dt2)));
    T.Ric = sum(sum(lift(BS.Ric, m), scaled(-(f / (2 * t) * bracket - num(ml - 2) * f1.pow(2) / t), gS)),
                scaled(num(ml - 1) / (2 * f) * bracket, dt2));
    T.Sc = BS.Sc / f.pow(2) - num(ml - 1) / f.pow(2) * (f / t * bracket - num(ml - 2) * f1.pow(2) / t);
    T.h = sum(sum(scaled(Expr::rational(ml - 3, ml - 2), lift(BS.h, m)),
                  scaled(BS.Sc / (2 * num((ml - 2) * (ml - 2) * (ml - 1))) + f1.pow(2) / (2 * t), gS)),
              scaled(t * BS.Sc / (2 * num((ml - 1) * (ml - 2)) * f.pow(2)) + (f1.pow(2) / f + f1 / t - 2 * f2) / (2 * f), dt2));
    Tensor traceless = sum(lift(BS.Ric, m), scaled(-BS.Sc / num(ml - 1), gS));
    Tensor partner = sum(scaled(f.pow(2) / num(ml - 3), gS), scaled(t, dt2));
    T.W = scaled(Expr::rational(1, ml - 2), kulkarni_nomizu(traceless, partner));
    if (m - 1 >= 4) T.W = sum(T.W, scaled(f.pow(2), lift(BS.W, m)));
    return T;
}

CrossCheck cross_validate(const WarpedSpec& spec) {
    const MetricChart M = make_warped(spec);
    const CurvatureBundle E = curvature(M);
    const CurvatureBundle T = closed_form_table(spec);
    CrossCheck out{true, Evidence::Exact, 0, ""};
    auto compare = [&](const std::string& name, const Tensor& a, const Tensor& b) {
        for (std::size_t n = 0; n < a.components().size(); ++n) {
            const Verdict v = negligible(M, a.components()[n] - b.components()[n], out.max_residual);
            out.evidence = weaker(out.evidence, v.evidence);
            if (!v.value && out.agrees) {
                std::ostringstream os;
                os << name;
                for (const auto i : a.index_of(n)) os << (i + 1);
                out.mismatch = os.str();
                out.agrees = false;
            }
        }
    };
    compare("K", T.K, E.K);
    compare("Ric", T.Ric, E.Ric);
    compare("h", T.h, E.h);
    compare("W", T.W, E.W);
    const Verdict s = negligible(M, T.Sc - E.Sc, out.max_residual);
    out.evidence = weaker(out.evidence, s.evidence);
    if (!s.value && out.agrees) {
        out.agrees = false;
        out.mismatch = "Sc";
    }
    return out;
}

WarpedVerdicts warped_extendibility(const WarpedSpec& spec) {
    const MetricChart M = make_warped(spec);
    const AtomId t = coordinate_id(spec.t);
    const Expr f1 = differentiate(spec.f, t);
    WarpedVerdicts v;
    v.f1_at_zero = M.sigma().restrict(f1);
    const Expr f2_at_zero = M.sigma().restrict(differentiate(f1, t));
    if (has_opaque_atoms(v.f1_at_zero) || has_opaque_atoms(f2_at_zero))
        throw WarpedError("f′(0) and f″(0) must be declared");
    v.K = v.h = v.f1_at_zero.is_zero();
    v.ratio_defined = v.K;
    if (v.ratio_defined) v.ratio_at_zero = f2_at_zero;
    v.Ric = v.Sc = v.K && f2_at_zero.is_zero();
    v.W = true;
    return v;
}

double psi(const WarpedSpec& spec, double t) {
    Integrand I = integrand_for(spec);
    return psi_with(I, t);
}

PsiConformality verify_psi_conformality(const WarpedSpec& spec, std::size_t samples) {
    Integrand I = integrand_for(spec);
    double lo = -0.5, hi = 0.5;
    if (spec.options.box.size() == dim_of(spec)) std::tie(lo, hi) = spec.options.box.back();
    auto derivative = [&](double t) {
        // eighth-order central stencil on the quadrature; t ± 4h keeps the sign of t
        static constexpr double w[] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
        const double h = 5e-2 * std::abs(t);
        double d = 0;
        for (int k = 1; k <= 4; ++k) d += w[k - 1] * (psi_with(I, t + k * h) - psi_with(I, t - k * h));
        return d / h;
    };
    PsiConformality out;
    for (std::size_t k = 1; k <= samples; ++k) {
        const double frac = static_cast<double>(k) / static_cast<double>(samples + 1);
        for (const double t : {hi * frac, lo * frac}) {
            if (t == 0) continue;
            const double d = derivative(t);
            const double coef = -t / std::pow(I(t), 2);  // dt² coefficient of f⁻² g
            PsiBranch& b = t > 0 ? out.lorentz : out.riemannian;
            const double s = t > 0 ? -1.0 : 1.0;
            b.max_residual = std::max(b.max_residual, std::abs(s * d * d - coef));
            if (t < 0) out.single_sign_residual = std::max(out.single_sign_residual, std::abs(-d * d - coef));
        }
    }
    out.lorentz.conformal = out.lorentz.max_residual <= 1e-9;
    out.riemannian.conformal = out.riemannian.max_residual <= 1e-9;
    return out;
}

BaseConformalFlatness base_conformal_flatness(const WarpedSpec& spec) {
    const MetricChart S = base_chart(spec);
    const MetricChart M = make_warped(spec);
    const CurvatureBundle BS = curvature(S);
    const CurvatureBundle T = closed_form_table(spec);
    const std::size_t n = spec.base.size();
    double worst = 0;
    auto all_zero = [&](const MetricChart& C, const std::vector<Expr>& es) {
        for (const auto& e : es)
            if (!negligible(C, e, worst).value) return false;
        return true;
    };
    BaseConformalFlatness L;
    L.weyl_zero = all_zero(M, T.W.components());

    std::vector<Expr> base;
    if (n >= 4) base = BS.W.components();
    const Expr c = BS.Sc / Expr(static_cast<long>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) base.push_back(BS.Ric(i, j) - c * spec.base[i][j]);
    L.base_weyl_and_traceless_ricci_zero = all_zero(S, base);

    const Tensor gg = kulkarni_nomizu(metric_tensor(spec.base), metric_tensor(spec.base));
    Expr C;
    for (std::size_t a = 0; a < n && C.is_zero(); ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (!gg(a, b, a, b).is_zero()) {
                C = 2 * BS.K(a, b, a, b) / gg(a, b, a, b);
                break;
            }
    std::vector<Expr> cc;
    for (std::size_t a = 0; a < n; ++a) cc.push_back(differentiate(C, S.coord(a)));
    for (std::size_t k = 0; k < gg.components().size(); ++k) cc.push_back(BS.K.components()[k] - C / 2 * gg.components()[k]);
    L.constant_curvature = all_zero(S, cc);
    if (L.constant_curvature) L.curvature_constant = C;
    return L;
}

NormalForm warped_normal_form(const WarpedSpec& spec, const Expr& conformal_factor) {
    if (!base_conformal_flatness(spec).weyl_zero) throw WarpedError("the normal form needs W = 0");
    const MetricChart M = make_warped(spec);
    const std::size_t m = M.dim();
    const AtomId tid = coordinate_id(spec.t);
    const Expr t = Expr::atom(tid), f = spec.f;
    const Expr f0 = M.sigma().restrict(f);
    double worst = 0;

    bool isothermal = true;
    for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = 0; j + 1 < m; ++j) {
            const Expr r = f0.pow(2) * spec.base[i][j] - (i == j ? conformal_factor : Expr(0));
            isothermal = isothermal && negligible(M, r, worst).value;
        }
    if (!isothermal) throw WarpedError("the supplied factor does not make the base chart isothermal");

    const Expr factor = conformal_factor * f.pow(2) / f0.pow(2);
    const Expr unit = -f0.pow(2) / (conformal_factor * f.pow(2));
    const Expr tau = unit * t;
    ExprMatrix g(m, Vector(m));
    for (std::size_t i = 0; i + 1 < m; ++i) g[i][i] = factor;
    g[m - 1][m - 1] = factor * tau;

    bool factorization = true;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) factorization = factorization && (g[a][b] - M.g(a, b)).is_zero();

    const Verdict flat_dt = vanishes_on_sigma(M, differentiate(tau, tid));
    std::vector<std::string> names = M.names();
    return NormalForm{MetricChart(names, g, m - 1, unit, spec.options), tau, factor, isothermal, factorization, !flat_dt.value};
}

}  // namespace rlc
