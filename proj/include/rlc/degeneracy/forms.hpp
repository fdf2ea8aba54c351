#pragma once

// Fundamental forms of the degeneracy locus and the quantities built on them.

#include <optional>
#include <string>
#include <vector>

#include "rlc/curvature/curvature.hpp"
#include "rlc/geometry/frame.hpp"

namespace rlc {

class DegeneracyError : public GeometryError {
public:
    using GeometryError::GeometryError;
};

// □_X Y(Z) = X^a (∂_a Y^b) g_bc Z^c + X^a Y^b Γ_{ab,c} Z^c, off Σ
Expr dual_derivative(const MetricChart& M, const Tensor& first, const Vector& X, const Vector& Y, const Vector& Z);

// II^R(X, Y) = □_X Y(R) before restriction
Expr second_form(const MetricChart& M, const Tensor& first, const Vector& R, const Vector& X, const Vector& Y);

// Coordinate indices spanning TΣ: every coordinate except the τ coordinate.
std::vector<std::size_t> tangent_indices(const MetricChart& M);

struct FundamentalForms {
    Vector R;
    ExprMatrix II;        // II^R(∂_a, ∂_b)|Σ for all a, b
    ExprMatrix II_sigma;  // tangent block
    ExprMatrix g_sigma;   // g|Σ on the tangent block
};

FundamentalForms second_fundamental(const MetricChart& M, const Connection& B, const Vector& R);

// T = k·G on Σ, decided by off-diagonal vanishing and equal ratios.
struct Proportionality {
    bool zero = false;
    bool proportional = false;
    Expr k;
    Evidence evidence = Evidence::Exact;
};

Proportionality proportional_to(const MetricChart& M, const ExprMatrix& T, const ExprMatrix& G);

class NotIIFlat : public DegeneracyError {
public:
    using DegeneracyError::DegeneracyError;
};

// III^R(∂_a, ∂_b) = II^R(∇_{∂a}∂_b, R)|Σ on the tangent block; throws NotIIFlat.
ExprMatrix third_fundamental(const MetricChart& M, const Connection& B, const FundamentalForms& F);

// (II^U(U,U)|Σ)^(-1/3) U; throws DegeneracyError for a tangent radical.
Vector canonical_radical(const MetricChart& M, const Tensor& first, const Vector& U);

struct GaussResult {
    bool curvature_matches = false;   // K|TΣ − K^Σ ≡ 0
    bool connection_matches = false;  // Γ^c_ab|Σ = Γ^Σ,c_ab + λ_ab U^c
    Evidence evidence = Evidence::Exact;
    std::string detail;
};

// Requires a transverse radical and II-flatness.
GaussResult gauss_check(const MetricChart& M, const CurvatureBundle& B, const FundamentalForms& F);

// The degeneracy locus as a Riemannian chart of its own.
MetricChart sigma_chart(const MetricChart& M);

struct SigmaGeometry {
    CurvatureBundle bundle;            // of g_Σ
    std::optional<Tensor> cotton;      // ∇_a h_bc − ∇_b h_ac, for m = 4
    double cotton_max = 0;
    double weyl_max = 0;               // max |W^Σ| at samples, for m > 4
};

SigmaGeometry sigma_geometry(const MetricChart& M);

// Both need an adapted frame; the first needs III-flatness, the second II-flatness.
// Values are restricted to Σ; indices run over E_1..E_{m-1}.
ExprMatrix schouten_gap(const MetricChart& M, const CurvatureBundle& B, const Frame& F);
Tensor b_ijk(const MetricChart& M, const CurvatureBundle& B, const Frame& F);

}  // namespace rlc
