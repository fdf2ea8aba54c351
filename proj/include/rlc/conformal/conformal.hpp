#pragma once

// Conformal rescaling ḡ = e^{2f} g and the laws relating the forms of g and ḡ.

#include "rlc/degeneracy/forms.hpp"

namespace rlc {

class ConformalUnsupported : public DegeneracyError {
public:
    using DegeneracyError::DegeneracyError;
};

// e^{2f} g on the same chart; Σ and τ unchanged
MetricChart rescale(const MetricChart& M, const Expr& f);

struct LawCheck {
    bool holds = false;
    Evidence evidence = Evidence::Exact;
    double max_residual = 0;  // at samples
};

// II̅_Σ − e^{2f}(II_Σ − (Rf)|Σ g_Σ) for the radical of M
LawCheck verify_II_law(const MetricChart& M, const Expr& f);

struct Gradient {
    Vector field;          // coordinate components, may carry a 1/τ pole
    bool extends = false;  // (E_m f)|Σ = 0
};

// Σ ε_i (E_i f) E_i + τ⁻¹ (E_m f) E_m in the adapted frame
Gradient grad_extended(const MetricChart& M, const Expr& f);

// III̅ − e^{2f}(III − II^R(grad f, R)|Σ g_Σ); throws NotIIFlat unless g and ḡ are II-flat
LawCheck verify_III_law(const MetricChart& M, const Expr& f);

// Factors f with E_m f prescribed, for charts whose radical is ∂ of the τ coordinate on Σ.
// flatten_II returns f = x·(k/ρ)|Σ for II_Σ = k g_Σ and R = ρ ∂_x; flatten_III returns
// f = c·x²/2 for a II-flat g. Both re-check the rescaled metric and throw ConformalUnsupported
// or DegeneracyError when the construction does not apply.
Expr flatten_II(const MetricChart& M);
Expr flatten_III(const MetricChart& M);

struct WeylCheck {
    LawCheck W;    // W̄ − e^{2f} W
    LawCheck Wup;  // 𝒲̄ − 𝒲
    bool identical = false;  // 𝒲̄ and 𝒲 equal as canonical expressions
};

WeylCheck verify_weyl_invariance(const MetricChart& M, const Expr& f);

}  // namespace rlc
