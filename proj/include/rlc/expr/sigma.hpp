#pragma once

// Restriction to and division by the degeneracy function τ = unit · x_k,
// where x_k is a chart coordinate and unit does not vanish on Σ = {x_k = 0}.
//
// Every atom a that depends on x_k is written a = a0 + x_k·δa with a0 its
// value on Σ. That makes restriction a substitution and division by x_k an
// exact polynomial operation, also for function symbols (Taylor remainders)
// and roots.

#include <map>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlc/expr/expr.hpp"

namespace rlc {

class PoleOnSigma : public ExprError {
public:
    using ExprError::ExprError;
};

class NotDivisible : public ExprError {
public:
    using ExprError::ExprError;
};

class PoleOrderTooHigh : public ExprError {
public:
    using ExprError::ExprError;
};

// e = a0 + a1/τ + a2/τ²; a1 and a2 do not depend on the τ coordinate.
struct LaurentForm {
    Expr a0, a1, a2;
    unsigned order = 0;  // minimal pole order in τ
};

// e = value / x_k^order with value finite and not vanishing on Σ when order > 0
struct PoleSplit {
    Expr value;
    unsigned order = 0;
};

class Sigma {
public:
    // declared[name][n] = f^(n)(0)
    Sigma(AtomId coord, Expr unit, std::map<std::string, std::vector<mpq_class>> declared = {});
    Sigma(const Sigma& o) : Sigma(o.coord_, o.unit_, o.declared_) {}

    AtomId coord() const { return coord_; }
    const Expr& unit() const { return unit_; }
    Expr tau() const { return unit_ * Expr::atom(coord_); }
    const std::map<std::string, std::vector<mpq_class>>& declared() const { return declared_; }

    // Value on Σ; throws PoleOnSigma.
    Expr restrict(const Expr& e) const;
    bool vanishes(const Expr& e) const { return restrict(e).is_zero(); }

    // k with e = k·τ; throws NotDivisible when e does not vanish on Σ exactly.
    Expr divide(const Expr& e) const;

    PoleSplit split_pole(const Expr& e) const;

    // throws PoleOrderTooHigh for poles beyond order 2
    LaurentForm laurent(const Expr& e) const;

    // Value of f^(n)(0): declared rational or an opaque constant.
    Expr function_value(const std::string& name, unsigned n) const;

private:
    const Expr& value0(AtomId a) const;
    const Expr& delta(AtomId a) const;
    Expr restrict_poly(const Poly& p) const;
    // (p - p|Σ)/x_k
    Expr delta_poly(const Poly& p) const;

    AtomId coord_;
    Expr unit_;
    std::map<std::string, std::vector<mpq_class>> declared_;
    mutable std::recursive_mutex mu_;
    mutable std::unordered_map<AtomId, Expr> value0_, delta_;
};

}  // namespace rlc
