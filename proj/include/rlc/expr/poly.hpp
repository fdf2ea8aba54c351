#pragma once

// Sparse multivariate polynomials with exact rational coefficients.
//
// Variables are atom ids (see atom.hpp). Terms are kept sorted in descending
// graded-lexicographic order, where a smaller atom id is a more significant
// variable. The zero polynomial has no terms.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace rlc {

using AtomId = std::uint32_t;

struct Monomial {
    // sorted by atom id, exponents strictly positive
    std::vector<std::pair<AtomId, std::uint32_t>> factors;

    std::uint32_t degree() const;
    std::uint32_t exponent(AtomId v) const;
    bool is_one() const { return factors.empty(); }
    bool divides(const Monomial& other) const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    // requires divisor.divides(*this)
    Monomial operator/(const Monomial& divisor) const;
    friend bool operator==(const Monomial&, const Monomial&) = default;

    static Monomial gcd(const Monomial& a, const Monomial& b);
    static Monomial variable(AtomId v, std::uint32_t e = 1);
};

// <0, 0, >0 like strcmp; graded lex
int compare(const Monomial& a, const Monomial& b);

struct MonomialLess {
    bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

struct Term {
    Monomial mono;
    mpq_class coef;
};

class Poly {
public:
    Poly() = default;
    explicit Poly(const mpq_class& c);
    explicit Poly(long c) : Poly(mpq_class(c)) {}

    static Poly variable(AtomId v, std::uint32_t e = 1);
    static Poly monomial(Monomial m, const mpq_class& c);
    // terms need not be sorted or merged
    static Poly from_terms(std::vector<Term> terms);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
    bool is_one() const;
    mpq_class constant_value() const;  // requires is_constant()
    mpq_class constant_term() const;
    const Term& leading() const { return terms_.front(); }
    const std::vector<Term>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }

    std::uint32_t degree_in(AtomId v) const;
    std::uint32_t total_degree() const;
    std::vector<AtomId> variables() const;
    bool contains(AtomId v) const;

    Poly operator-() const;
    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    Poly& operator*=(const Poly& o);
    Poly& operator*=(const mpq_class& c);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    friend Poly operator*(const Poly& a, const Poly& b);
    friend Poly operator*(Poly a, const mpq_class& c) { return a *= c; }
    friend bool operator==(const Poly& a, const Poly& b);
    friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }

    Poly pow(unsigned e) const;
    Poly derivative(AtomId v) const;

    // Coefficients in powers of v: result[d] is the coefficient of v^d.
    std::vector<Poly> as_univariate(AtomId v) const;
    static Poly from_univariate(const std::vector<Poly>& coeffs, AtomId v);

    // Largest k with v^k dividing this polynomial (0 for the zero polynomial).
    std::uint32_t min_degree_in(AtomId v) const;

private:
    std::vector<Term> terms_;
};

std::optional<Poly> divide_exact(const Poly& a, const Poly& b);

// Scales p so its coefficients are coprime integers with positive leading coefficient.
Poly primitive_integer(const Poly& p);

// Greatest common divisor, normalized with primitive_integer. gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);

// Exact n-th root if p is a perfect n-th power. The sign is chosen so the
// constant term is positive when present, otherwise the leading coefficient.
std::optional<Poly> nth_root(const Poly& p, unsigned n);

// Exact n-th root of a rational, if it exists (sign preserved for odd n).
std::optional<mpq_class> rational_root(const mpq_class& q, unsigned n);

}  // namespace rlc
