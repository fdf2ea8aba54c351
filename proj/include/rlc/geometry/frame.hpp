#pragma once

#include <optional>
#include <string>
#include <vector>

#include "rlc/geometry/chart.hpp"

namespace rlc {

struct TransverseResult {
    bool transverse = false;
    Evidence evidence = Evidence::Exact;
    Expr det;
    Expr unit;               // det = τ · unit
    std::string witness;     // a coordinate direction with d(det)|Σ ≠ 0, or the reason it fails
};

// throws GeometryError when det g is not divisible by τ
TransverseResult is_transverse_type_changing(const MetricChart& M);

// R with g(R,·) ≡ 0 mod τ; throws GeometryError unless the kernel on Σ is one-dimensional.
Vector radical_field(const MetricChart& M);

enum class Transversality { Transverse, Tangent, NonUniform };
const char* to_string(Transversality t);

struct TransversalityResult {
    Transversality kind = Transversality::Transverse;
    Evidence evidence = Evidence::Exact;
};

TransversalityResult radical_transversality(const MetricChart& M, const Vector& R);

// X(τ)|Σ = 0
Verdict tangent_to_sigma(const MetricChart& M, const Vector& X);

struct Frame {
    std::vector<Vector> E;   // E[a] in coordinate components; E.back() is the radical member
    std::vector<int> eps;    // signs of E_1..E_{m-1}
    bool adapted = false;
    bool completely_adapted = false;
};

class FrameUnsupported : public GeometryError {
public:
    using GeometryError::GeometryError;
};

// Gram–Schmidt on ∂_1..∂_{m-1}, E_m = ∂_m / sqrt(g_mm / τ); needs g(∂_i, ∂_m) = 0.
Frame build_adapted_frame(const MetricChart& M);

struct Signature {
    int positive = 0, negative = 0, zero = 0;
};

Signature signature_at(const MetricChart& M, const Valuation& p, double tol = 1e-10);

}  // namespace rlc
