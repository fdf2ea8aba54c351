#pragma once

// A single chart carrying a symmetric metric that degenerates on Σ = {τ = 0}.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "rlc/expr/expr.hpp"
#include "rlc/expr/sigma.hpp"

namespace rlc {

class GeometryError : public ExprError {
public:
    using ExprError::ExprError;
};

using Vector = std::vector<Expr>;             // components in the coordinate basis
using ExprMatrix = std::vector<std::vector<Expr>>;

// Dense component array of a rank-r tensor in dimension m.
class Tensor {
public:
    Tensor() = default;
    Tensor(std::size_t dim, std::size_t rank);

    std::size_t dim() const { return dim_; }
    std::size_t rank() const { return rank_; }

    template <class... I>
    Expr& operator()(I... idx) {
        return c_[offset({static_cast<std::size_t>(idx)...})];
    }
    template <class... I>
    const Expr& operator()(I... idx) const {
        return c_[offset({static_cast<std::size_t>(idx)...})];
    }
    Expr& at(const std::vector<std::size_t>& idx) { return c_[offset(idx)]; }
    const Expr& at(const std::vector<std::size_t>& idx) const { return c_[offset(idx)]; }

    const std::vector<Expr>& components() const { return c_; }
    std::vector<Expr>& components() { return c_; }
    // index tuple of the n-th stored component
    std::vector<std::size_t> index_of(std::size_t n) const;

private:
    std::size_t offset(const std::vector<std::size_t>& idx) const;

    std::size_t dim_ = 0, rank_ = 0;
    std::vector<Expr> c_;
};

enum class Evidence { Exact, Numeric };

const char* to_string(Evidence e);

struct Verdict {
    bool value = false;
    Evidence evidence = Evidence::Exact;
};

inline Evidence weaker(Evidence a, Evidence b) {
    return a == Evidence::Numeric || b == Evidence::Numeric ? Evidence::Numeric : Evidence::Exact;
}

struct ChartOptions {
    std::map<std::string, std::vector<mpq_class>> declared;  // f^(n)(0) values
    std::map<std::string, Expr> function_bodies;             // explicit numeric models, in variable "s"
    std::vector<std::pair<double, double>> box;               // sampling ranges, one per coordinate
    std::uint64_t seed = 1;
    std::string name;
};

class MetricChart {
public:
    // g must be symmetric; τ = tau_unit · coords[tau_index]
    MetricChart(std::vector<std::string> coords, ExprMatrix g, std::size_t tau_index, Expr tau_unit,
                ChartOptions options = {});

    std::size_t dim() const { return coords_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<AtomId>& coords() const { return coords_; }
    AtomId coord(std::size_t a) const { return coords_[a]; }
    const ExprMatrix& g() const { return g_; }
    const Expr& g(std::size_t a, std::size_t b) const { return g_[a][b]; }

    std::size_t tau_index() const { return tau_index_; }
    // coordinate paired with the radical direction in the block split
    std::size_t radical_index() const { return dim() - 1; }
    const Sigma& sigma() const { return sigma_; }
    Expr tau() const { return sigma_.tau(); }
    const ChartOptions& options() const { return options_; }
    std::uint64_t seed() const { return options_.seed; }

    // Valuation of every function symbol used for numeric evidence.
    const std::map<std::string, FunctionValuation>& function_models() const { return models_; }

    // Deterministic quasi-random points in the box, on Σ or off it.
    std::vector<Valuation> sigma_samples(std::size_t n = 20) const;
    std::vector<Valuation> off_sigma_samples(std::size_t n = 20) const;

    // Copy with another metric, same chart data.
    MetricChart with_metric(ExprMatrix g) const;

private:
    std::vector<Valuation> samples(std::size_t n, bool on_sigma, std::uint64_t salt) const;

    std::vector<std::string> names_;
    std::vector<AtomId> coords_;
    ExprMatrix g_;
    std::size_t tau_index_;
    Sigma sigma_;
    ChartOptions options_;
    std::map<std::string, FunctionValuation> models_;
};

// ---------------------------------------------------------------- helpers

Expr apply(const MetricChart& M, const Vector& X, const Expr& f);  // X(f)
Expr inner(const MetricChart& M, const Vector& X, const Vector& Y);
Vector coordinate_field(const MetricChart& M, std::size_t a);

Expr determinant(const ExprMatrix& a);
ExprMatrix inverse(const ExprMatrix& a);

// Numeric/exact decisions with evidence strength.
Verdict vanishes_on_sigma(const MetricChart& M, const Expr& e);
Verdict identically_zero(const MetricChart& M, const Expr& e);
// max |e| over samples (on Σ after restriction, or off Σ)
double max_abs_on_sigma(const MetricChart& M, const Expr& e);
double max_abs_off_sigma(const MetricChart& M, const Expr& e);

}  // namespace rlc
