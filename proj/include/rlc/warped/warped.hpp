#pragma once

// Warped products g = f(t)² g_S − t dt² and their closed-form curvature.

#include <string>
#include <vector>

#include "rlc/curvature/curvature.hpp"

namespace rlc {

class WarpedError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

struct WarpedSpec {
    std::vector<std::string> base_coords;  // chart of S
    ExprMatrix base;                       // g_S, Riemannian
    std::string t = "t";
    Expr f;                                // warping function of t alone
    ChartOptions options;                  // box and seed cover base_coords then t
};

// Coordinates (base..., t), τ = −t; throws WarpedError for m < 4, f(0) ≤ 0 or g_S not positive.
MetricChart make_warped(const WarpedSpec& spec);
MetricChart base_chart(const WarpedSpec& spec);

// K, Ric, Sc, h, W assembled from the curvature of g_S and f, f′, f″.
CurvatureBundle closed_form_table(const WarpedSpec& spec);

struct CrossCheck {
    bool agrees = false;
    Evidence evidence = Evidence::Exact;
    double max_residual = 0;
    std::string mismatch;  // first disagreeing tensor and slot
};

// table against the generic engine
CrossCheck cross_validate(const WarpedSpec& spec);

struct WarpedVerdicts {
    bool K = false, h = false, Ric = false, Sc = false, W = true;
    Expr f1_at_zero;       // f′(0)
    bool ratio_defined = false;
    Expr ratio_at_zero;    // (f′/t)(0) = f″(0) when f′(0) = 0
};

WarpedVerdicts warped_extendibility(const WarpedSpec& spec);

// T = ∫₀ᵗ |s|^{1/2}/f(s) ds by Gauss–Kronrod after s = ±w²
double psi(const WarpedSpec& spec, double t);

struct PsiBranch {
    double max_residual = 0;  // |±ψ′² + t/f²| at samples of the branch
    bool conformal = false;
};

struct PsiConformality {
    PsiBranch lorentz;     // t > 0 against −dT² + g_S
    PsiBranch riemannian;  // t < 0 against +dT² + g_S
    double single_sign_residual = 0;  // t < 0 against −dT² + g_S
};

PsiConformality verify_psi_conformality(const WarpedSpec& spec, std::size_t samples = 10);

struct BaseConformalFlatness {
    bool weyl_zero = false;
    bool base_weyl_and_traceless_ricci_zero = false;
    bool constant_curvature = false;
    Expr curvature_constant;  // C with K^S = (C/2) g_S•g_S when it holds
    bool consistent() const {
        return weyl_zero == base_weyl_and_traceless_ricci_zero && weyl_zero == constant_curvature;
    }
};

BaseConformalFlatness base_conformal_flatness(const WarpedSpec& spec);

struct NormalForm {
    MetricChart chart;  // g = φ (f/f(0))² {Σ(dxⁱ)² + τ (dx^m)²}
    Expr tau;
    Expr factor;        // φ (f/f(0))²
    bool isothermal = false;
    bool factorization = false;
    bool tau_regular = false;  // ∂_t τ ≠ 0 on Σ
};

// conformal_factor = e^{2h} with g_Σ = f(0)² g_S = e^{2h} Σ(dyⁱ)² in the base chart.
// Throws WarpedError when W ≠ 0.
NormalForm warped_normal_form(const WarpedSpec& spec, const Expr& conformal_factor);

}  // namespace rlc
