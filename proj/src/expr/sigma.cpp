#include "rlc/expr/sigma.hpp"

namespace rlc {

namespace {

bool only_direct_dependence(const Poly& p, AtomId coord) {
    for (const auto v : p.variables())
        if (v != coord && atom_depends_on(v, coord)) return false;
    return true;
}

mpz_class factorial(unsigned n) {
    mpz_class f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

}  // namespace

Sigma::Sigma(AtomId coord, Expr unit, std::map<std::string, std::vector<mpq_class>> declared)
    : coord_(coord), unit_(std::move(unit)), declared_(std::move(declared)) {
    if (atom_info(coord).kind != AtomKind::Coordinate) throw ExprError("degeneracy coordinate is not a coordinate");
    if (unit_.is_zero()) throw ExprError("degeneracy unit is zero");
}

Expr Sigma::function_value(const std::string& name, unsigned n) const {
    if (auto it = declared_.find(name); it != declared_.end() && n < it->second.size()) return Expr(it->second[n]);
    return function_at_zero(name, n);
}

const Expr& Sigma::value0(AtomId a) const {
    std::lock_guard lock(mu_);
    if (auto it = value0_.find(a); it != value0_.end()) return it->second;
    const Atom& at = atom_info(a);
    Expr v;
    if (!atom_depends_on(a, coord_)) {
        v = Expr::atom(a);
    } else {
        switch (at.kind) {
            case AtomKind::Coordinate:
                break;  // the degeneracy coordinate itself
            case AtomKind::Function:
                v = function_value(at.name, at.order + at.remainder) / Expr(mpq_class(factorial(at.remainder)));
                break;
            case AtomKind::FunctionAtZero:
                v = Expr::atom(a);
                break;
            case AtomKind::Root:
                v = root(restrict(at.payload), at.order);
                break;
            case AtomKind::Exp:
                v = exp(restrict(at.payload));
                break;
            case AtomKind::DiffQuotient:
                if (at.arg == coord_) v = restrict(differentiate(at.payload, coord_));
                else v = diff_quotient(restrict(at.payload), restrict(at.payload0), at.arg);
                break;
        }
    }
    return value0_.emplace(a, v).first->second;
}

const Expr& Sigma::delta(AtomId a) const {
    std::lock_guard lock(mu_);
    if (auto it = delta_.find(a); it != delta_.end()) return it->second;
    const Atom& at = atom_info(a);
    Expr d;
    if (at.kind == AtomKind::Coordinate && a == coord_) {
        d = Expr(1);
    } else if (at.kind == AtomKind::Function && at.arg == coord_) {
        d = function(at.name, at.arg, at.order, at.remainder + 1);
    } else if (at.kind == AtomKind::Root) {
        // s - s0 = (r - r0) / sum_i s^(n-1-i) s0^i
        const Expr s = Expr::atom(a), s0 = value0(a);
        if (s0.is_zero()) throw PoleOnSigma("root of an expression vanishing on the degeneracy locus is not smooth there");
        Expr sum;
        for (unsigned i = 0; i < at.order; ++i)
            sum += s.pow(static_cast<int>(at.order - 1 - i)) * s0.pow(static_cast<int>(i));
        d = divide(at.payload - restrict(at.payload)) * unit_ / sum;
    } else {
        d = diff_quotient(Expr::atom(a), value0(a), coord_);
    }
    return delta_.emplace(a, d).first->second;
}

Expr Sigma::restrict_poly(const Poly& p) const {
    std::map<AtomId, Expr> values;
    for (const auto v : p.variables())
        if (atom_depends_on(v, coord_)) values.emplace(v, value0(v));
    if (values.empty()) return Expr(p);
    return substitute(p, values);
}

Expr Sigma::delta_poly(const Poly& p) const {
    if (p.min_degree_in(coord_) >= 1) return Expr(*divide_exact(p, Poly::variable(coord_)));
    if (only_direct_dependence(p, coord_)) {
        auto coeffs = p.as_univariate(coord_);
        if (coeffs.size() <= 1) return Expr{};
        coeffs.erase(coeffs.begin());
        return Expr(Poly::from_univariate(coeffs, coord_));
    }
    // a -> a0 + X·δa with a formal X, then drop the X^0 part and put X = x_k
    const AtomId formal = coordinate_id("__sigma_formal");
    const Expr X = Expr::atom(formal);
    std::map<AtomId, Expr> values;
    for (const auto v : p.variables())
        if (atom_depends_on(v, coord_)) values.emplace(v, value0(v) + X * delta(v));
    const Expr s = substitute(p, values);
    auto coeffs = s.num().as_univariate(formal);
    if (coeffs.size() <= 1) return Expr{};
    coeffs.erase(coeffs.begin());
    const Poly shifted = Poly::from_univariate(coeffs, formal);
    return substitute(shifted, {{formal, Expr::atom(coord_)}}) / Expr(s.den());
}

PoleSplit Sigma::split_pole(const Expr& e) const {
    Poly n = e.num(), d = e.den();
    Expr num = Expr(n), den = Expr(d);
    unsigned order = 0;
    // strip x_k from the denominator while it vanishes on Σ
    for (int guard = 0; guard < 64; ++guard) {
        if (!restrict_poly(den.num()).is_zero()) break;
        den = delta_poly(den.num()) / Expr(den.den());
        if (restrict_poly(num.num()).is_zero()) num = delta_poly(num.num()) / Expr(num.den());
        else ++order;
    }
    if (restrict_poly(den.num()).is_zero()) throw PoleOnSigma("denominator vanishes to unbounded order on the degeneracy locus");
    // numerator factors of x_k lower the order
    while (order > 0 && restrict_poly(num.num()).is_zero()) {
        num = delta_poly(num.num()) / Expr(num.den());
        --order;
    }
    return {num / den, order};
}

Expr Sigma::restrict(const Expr& e) const {
    if (e.is_constant()) return e;
    if (!depends_on(e, coord_)) return e;
    if (restrict_poly(e.den()).is_zero()) {
        const PoleSplit s = split_pole(e);
        if (s.order > 0) throw PoleOnSigma("expression has a pole on the degeneracy locus: " + e.str());
        return restrict(s.value);
    }
    return restrict_poly(e.num()) / restrict_poly(e.den());
}

Expr Sigma::divide(const Expr& e) const {
    if (e.is_zero()) return e;
    Expr value = e;
    if (restrict_poly(e.den()).is_zero()) {
        const PoleSplit s = split_pole(e);
        if (s.order > 0) throw NotDivisible("expression has a pole on the degeneracy locus");
        value = s.value;
    }
    if (!restrict_poly(value.num()).is_zero()) throw NotDivisible("expression does not vanish on the degeneracy locus: " + e.str());
    return delta_poly(value.num()) / Expr(value.den()) / unit_;
}

LaurentForm Sigma::laurent(const Expr& e) const {
    const PoleSplit s = split_pole(e);
    if (s.order > 2) throw PoleOrderTooHigh("pole of order " + std::to_string(s.order) + " on the degeneracy locus");
    LaurentForm out;
    out.order = s.order;
    if (s.order == 0) {
        out.a0 = e;
        return out;
    }
    const Expr q = s.value * unit_.pow(static_cast<int>(s.order));
    const Expr c0 = restrict(q);
    const Expr q1 = divide(q - c0);
    if (s.order == 1) {
        out.a0 = q1;
        out.a1 = c0;
        return out;
    }
    const Expr c1 = restrict(q1);
    out.a0 = divide(q1 - c1);
    out.a1 = c1;
    out.a2 = c0;
    return out;
}

}  // namespace rlc
