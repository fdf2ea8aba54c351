#pragma once

// Exact scalar expressions on a chart.
//
// An Expr is always held in canonical form N/D: N and D are polynomials over
// the rationals in atoms (coordinates, opaque function symbols, n-th roots,
// exponentials), gcd(N, D) = 1 and D is monic in the monomial order. Root
// atoms s = r^(1/n) only ever appear with exponent < n: higher powers are
// reduced with s^n = r. For expressions built from coordinates and rationals
// alone this form is unique, so zero-testing is exact.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rlc/expr/poly.hpp"

namespace rlc {

class ExprError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DivisionByZero : public ExprError {
public:
    DivisionByZero() : ExprError("division by an expression that is identically zero") {}
};

class Expr {
public:
    Expr() : den_(1) {}
    Expr(long c) : num_(mpq_class(c)), den_(1) {}  // NOLINT(google-explicit-constructor)
    Expr(int c) : Expr(static_cast<long>(c)) {}    // NOLINT(google-explicit-constructor)
    explicit Expr(const mpq_class& c) : num_(c), den_(1) {}
    explicit Expr(const Poly& p) : num_(p), den_(1) {}

    static Expr atom(AtomId id);
    static Expr fraction(const Poly& num, const Poly& den);
    static Expr rational(long num, long den) { return Expr(mpq_class(num, den)); }
    // Caller guarantees the canonical invariants already hold.
    static Expr unchecked(Poly num, Poly den);

    const Poly& num() const { return num_; }
    const Poly& den() const { return den_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
    std::optional<mpq_class> as_rational() const;
    bool has_denominator() const { return !den_.is_one(); }

    Expr operator-() const;
    Expr& operator+=(const Expr& o) { return *this = *this + o; }
    Expr& operator-=(const Expr& o) { return *this = *this - o; }
    Expr& operator*=(const Expr& o) { return *this = *this * o; }
    Expr& operator/=(const Expr& o) { return *this = *this / o; }
    friend Expr operator+(const Expr& a, const Expr& b);
    friend Expr operator-(const Expr& a, const Expr& b);
    friend Expr operator*(const Expr& a, const Expr& b);
    friend Expr operator/(const Expr& a, const Expr& b);

    // structural equality of canonical forms
    friend bool operator==(const Expr& a, const Expr& b) { return a.num_ == b.num_ && a.den_ == b.den_; }
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

    Expr pow(int e) const;

    std::vector<AtomId> atoms() const;  // atoms appearing directly in N or D
    std::string str() const;

private:
    Poly num_;
    Poly den_;
};

Expr canonicalize(const Expr& e);

inline std::ostream& operator<<(std::ostream& os, const Expr& e) { return os << e.str(); }

// ---------------------------------------------------------------- atoms

enum class AtomKind {
    Coordinate,
    Function,        // f^(order)(arg), or its Taylor remainder of depth `remainder` at arg = 0
    FunctionAtZero,  // f^(order)(0), an opaque constant
    Root,            // radicand^(1/order)
    Exp,             // exp(payload)
    DiffQuotient,    // (payload - payload0) / arg, smooth across arg = 0
};

struct Atom {
    AtomKind kind = AtomKind::Coordinate;
    std::string name;
    AtomId arg = 0;
    unsigned order = 0;
    unsigned remainder = 0;
    Expr payload;
    Expr payload0;
    std::string key;
};

const Atom& atom_info(AtomId id);
bool is_root_atom(AtomId id);
unsigned root_index(AtomId id);  // 0 for non-root atoms

// Constructors that intern atoms; results are shared process-wide.
Expr coordinate(const std::string& name);
AtomId coordinate_id(const std::string& name);
Expr function(const std::string& name, AtomId arg, unsigned order = 0, unsigned remainder = 0);
Expr function_at_zero(const std::string& name, unsigned order);
Expr root(const Expr& radicand, unsigned n);
Expr sqrt(const Expr& radicand);
Expr exp(const Expr& exponent);
Expr diff_quotient(const Expr& value, const Expr& value_at_zero, AtomId coord);

// True if the atom (transitively) depends on the coordinate.
bool atom_depends_on(AtomId atom, AtomId coord);
bool depends_on(const Expr& e, AtomId coord);
// Function, FunctionAtZero or DiffQuotient atoms anywhere inside e.
bool has_opaque_atoms(const Expr& e);

// ---------------------------------------------------------------- calculus

class UnknownCoordinate : public ExprError {
public:
    using ExprError::ExprError;
};

Expr differentiate(const Expr& e, AtomId coord);

// Replaces atoms by expressions (one pass, no recursion into replacements).
Expr substitute(const Expr& e, const std::map<AtomId, Expr>& values);
Expr substitute(const Poly& p, const std::map<AtomId, Expr>& values);

// ---------------------------------------------------------------- numerics

class EvaluationError : public ExprError {
public:
    using ExprError::ExprError;
};

struct FunctionValuation {
    AtomId var = 0;  // dummy coordinate of the body
    Expr body;
};

// Numeric values for coordinates and function symbols.
struct Valuation {
    std::unordered_map<AtomId, double> coords;
    std::map<std::string, FunctionValuation> functions;

    void set(const std::string& coord_name, double v) { coords[coordinate_id(coord_name)] = v; }
};

double evaluate(const Expr& e, const Valuation& at);

// Numeric zero check over a list of points: |e| <= tol * max(1, scale).
bool probably_zero(const Expr& e, const std::vector<Valuation>& points, double tol = 1e-9);

}  // namespace rlc
