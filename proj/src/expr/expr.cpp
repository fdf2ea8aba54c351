#include "rlc/expr/expr.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <memory>
#include <mutex>

namespace rlc {

// ---------------------------------------------------------------- registry

namespace {

struct AtomRecord {
    Atom atom;
    std::vector<AtomId> coord_deps;  // sorted
    bool opaque = false;
};

// Append-only store. Readers index published slots without locking.
class Registry {
public:
    static Registry& instance() {
        static Registry r;
        return r;
    }

    const AtomRecord& get(AtomId id) const {
        if (id >= count_.load(std::memory_order_acquire)) throw ExprError("unknown atom id");
        return chunks_[id / kChunk].load(std::memory_order_acquire)[id % kChunk];
    }

    AtomId intern(Atom a, std::vector<AtomId> deps, bool opaque) {
        std::lock_guard lock(mu_);
        if (auto it = by_key_.find(a.key); it != by_key_.end()) return it->second;
        const AtomId id = count_.load(std::memory_order_relaxed);
        const std::size_t c = id / kChunk;
        if (c >= kMaxChunks) throw ExprError("atom registry exhausted");
        if (!chunks_[c].load(std::memory_order_relaxed)) {
            owned_.push_back(std::make_unique<AtomRecord[]>(kChunk));
            chunks_[c].store(owned_.back().get(), std::memory_order_release);
        }
        AtomRecord& rec = chunks_[c].load(std::memory_order_relaxed)[id % kChunk];
        std::sort(deps.begin(), deps.end());
        deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
        by_key_.emplace(a.key, id);
        rec.atom = std::move(a);
        rec.coord_deps = std::move(deps);
        rec.opaque = opaque;
        count_.store(id + 1, std::memory_order_release);
        return id;
    }

    std::optional<Expr> cached_derivative(AtomId a, AtomId c) {
        std::lock_guard lock(deriv_mu_);
        if (auto it = derivs_.find({a, c}); it != derivs_.end()) return it->second;
        return std::nullopt;
    }
    void store_derivative(AtomId a, AtomId c, const Expr& d) {
        std::lock_guard lock(deriv_mu_);
        derivs_.emplace(std::make_pair(a, c), d);
    }

private:
    static constexpr std::size_t kChunk = 1024;
    static constexpr std::size_t kMaxChunks = 4096;
    std::array<std::atomic<AtomRecord*>, kMaxChunks> chunks_{};
    std::vector<std::unique_ptr<AtomRecord[]>> owned_;
    std::atomic<AtomId> count_{0};
    std::mutex mu_;
    std::unordered_map<std::string, AtomId> by_key_;
    std::mutex deriv_mu_;
    std::map<std::pair<AtomId, AtomId>, Expr> derivs_;
};

const AtomRecord& record(AtomId id) { return Registry::instance().get(id); }

std::vector<AtomId> collect_deps(const Expr& e, bool& opaque) {
    std::vector<AtomId> deps;
    for (const auto a : e.atoms()) {
        const auto& r = record(a);
        deps.insert(deps.end(), r.coord_deps.begin(), r.coord_deps.end());
        opaque = opaque || r.opaque;
    }
    return deps;
}

std::string primes(unsigned n) { return std::string(n, '\''); }

std::string atom_name(AtomId id) {
    const Atom& a = record(id).atom;
    switch (a.kind) {
        case AtomKind::Coordinate:
            return a.name;
        case AtomKind::Function: {
            std::string s = a.name + primes(a.order);
            if (a.remainder) s += "~" + std::to_string(a.remainder);
            return s + "(" + record(a.arg).atom.name + ")";
        }
        case AtomKind::FunctionAtZero:
            return a.name + primes(a.order) + "(0)";
        case AtomKind::Root:
            if (a.order == 2) return "sqrt(" + a.payload.str() + ")";
            if (a.order == 3) return "cbrt(" + a.payload.str() + ")";
            return "root(" + a.payload.str() + ", " + std::to_string(a.order) + ")";
        case AtomKind::Exp:
            return "exp(" + a.payload.str() + ")";
        case AtomKind::DiffQuotient:
            return "dq_" + record(a.arg).atom.name + "(" + a.payload.str() + ")";
    }
    return "?";
}

bool needs_reduction(const Poly& p) {
    for (const auto& t : p.terms())
        for (const auto& [v, e] : t.mono.factors)
            if (e >= 2 && e >= root_index(v) && is_root_atom(v)) return true;
    return false;
}

// s^e -> r^(e div k) s^(e mod k) for every root atom s = r^(1/k)
Expr reduce_roots(const Poly& p) {
    Expr acc;
    for (const auto& t : p.terms()) {
        Monomial rest;
        Expr extra(1);
        for (const auto& [v, e] : t.mono.factors) {
            const unsigned k = root_index(v);
            if (k >= 2 && e >= k) {
                if (e % k) rest.factors.emplace_back(v, e % k);
                extra *= record(v).atom.payload.pow(static_cast<int>(e / k));
            } else {
                rest.factors.emplace_back(v, e);
            }
        }
        acc += Expr::unchecked(Poly::monomial(rest, t.coef), Poly(1)) * extra;
    }
    return acc;
}

// n, d coprime and free of reducible root powers; fixes the scale only
Expr monic(Poly n, Poly d) {
    if (d.is_zero()) throw DivisionByZero();
    if (n.is_zero()) return Expr{};
    const mpq_class lc = d.leading().coef;
    if (lc != 1) {
        const mpq_class inv = 1 / lc;
        n *= inv;
        d *= inv;
    }
    return Expr::unchecked(std::move(n), std::move(d));
}

Expr make_canonical(const Poly& n, const Poly& d) {
    if (d.is_zero()) throw DivisionByZero();
    if (n.is_zero()) return Expr{};
    if (d.is_constant()) return Expr::unchecked(n * mpq_class(1 / d.constant_value()), Poly(1));
    const Poly g = gcd(n, d);
    if (g.is_constant()) return monic(n, d);
    return monic(*divide_exact(n, g), *divide_exact(d, g));
}

Poly exact_quotient(const Poly& a, const Poly& b) {
    if (b.is_one()) return a;
    auto q = divide_exact(a, b);
    if (!q) throw std::logic_error("inexact polynomial quotient");
    return *q;
}

}  // namespace

const Atom& atom_info(AtomId id) { return record(id).atom; }

bool is_root_atom(AtomId id) { return record(id).atom.kind == AtomKind::Root; }

unsigned root_index(AtomId id) {
    const Atom& a = record(id).atom;
    return a.kind == AtomKind::Root ? a.order : 0;
}

// ---------------------------------------------------------------- Expr

Expr Expr::unchecked(Poly num, Poly den) {
    Expr e;
    e.num_ = std::move(num);
    e.den_ = std::move(den);
    return e;
}

Expr Expr::atom(AtomId id) { return unchecked(Poly::variable(id), Poly(1)); }

Expr Expr::fraction(const Poly& num, const Poly& den) {
    if (den.is_zero()) throw DivisionByZero();
    if (needs_reduction(num) || needs_reduction(den)) return reduce_roots(num) / reduce_roots(den);
    return make_canonical(num, den);
}

Expr canonicalize(const Expr& e) { return Expr::fraction(e.num(), e.den()); }

std::optional<mpq_class> Expr::as_rational() const {
    if (!is_constant()) return std::nullopt;
    return num_.constant_value() / den_.constant_value();
}

Expr Expr::operator-() const { return unchecked(-num_, den_); }

Expr operator+(const Expr& a, const Expr& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.den_ == b.den_) {
        Poly n = a.num_ + b.num_;
        if (a.den_.is_one()) return Expr::unchecked(std::move(n), a.den_);
        return make_canonical(n, a.den_);
    }
    // Henrici: with reduced operands only gcd(n, g) can cancel
    const Poly g = gcd(a.den_, b.den_);
    const Poly ad = exact_quotient(a.den_, g), bd = exact_quotient(b.den_, g);
    Poly n = a.num_ * bd + b.num_ * ad;
    if (needs_reduction(n)) return Expr::fraction(n, a.den_ * bd);
    if (g.is_one()) return monic(std::move(n), a.den_ * b.den_);
    const Poly g2 = gcd(n, g);
    if (g2.is_constant()) return monic(std::move(n), ad * b.den_);
    Poly d = ad * exact_quotient(b.den_, g2);
    if (needs_reduction(d)) return Expr::fraction(n, a.den_ * bd);
    return monic(exact_quotient(n, g2), std::move(d));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
    if (a.is_zero() || b.is_zero()) return Expr{};
    if (a.is_constant() && a.den_.is_one() && a.num_.is_one()) return b;
    if (b.is_constant() && b.den_.is_one() && b.num_.is_one()) return a;
    if (a.den_.is_one() && b.den_.is_one()) {
        Poly n = a.num_ * b.num_;
        if (needs_reduction(n)) return Expr::fraction(n, Poly(1));
        return Expr::unchecked(std::move(n), Poly(1));
    }
    const Poly g1 = gcd(a.num_, b.den_), g2 = gcd(b.num_, a.den_);
    Poly n = exact_quotient(a.num_, g1) * exact_quotient(b.num_, g2);
    Poly d = exact_quotient(a.den_, g2) * exact_quotient(b.den_, g1);
    if (needs_reduction(n) || needs_reduction(d)) return Expr::fraction(n, d);
    return monic(std::move(n), std::move(d));
}

Expr operator/(const Expr& a, const Expr& b) {
    if (b.is_zero()) throw DivisionByZero();
    return a * monic(b.den_, b.num_);
}

Expr Expr::pow(int e) const {
    if (e < 0) return Expr(1) / pow(-e);
    Expr result(1), base = *this;
    auto k = static_cast<unsigned>(e);
    while (k > 0) {
        if (k & 1u) result *= base;
        k >>= 1u;
        if (k) base = base * base;
    }
    return result;
}

std::vector<AtomId> Expr::atoms() const {
    auto a = num_.variables();
    auto b = den_.variables();
    a.insert(a.end(), b.begin(), b.end());
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    return a;
}

namespace {

std::string poly_str(const Poly& p) {
    if (p.is_zero()) return "0";
    std::string s;
    bool first = true;
    for (const auto& t : p.terms()) {
        mpq_class c = t.coef;
        if (first) {
            if (c < 0) s += "-";
        } else {
            s += c < 0 ? " - " : " + ";
        }
        c = abs(c);
        first = false;
        bool need_star = false;
        if (c != 1 || t.mono.is_one()) {
            s += c.get_str();
            need_star = true;
        }
        for (const auto& [v, e] : t.mono.factors) {
            if (need_star) s += "*";
            s += atom_name(v);
            if (e > 1) s += "^" + std::to_string(e);
            need_star = true;
        }
    }
    return s;
}

}  // namespace

std::string Expr::str() const {
    if (den_.is_one()) return poly_str(num_);
    return "(" + poly_str(num_) + ")/(" + poly_str(den_) + ")";
}

// ---------------------------------------------------------------- atom constructors

AtomId coordinate_id(const std::string& name) {
    Atom a;
    a.kind = AtomKind::Coordinate;
    a.name = name;
    a.key = "c:" + name;
    // a coordinate depends on itself; its id is not known before interning
    const AtomId id = Registry::instance().intern(a, {}, false);
    auto& rec = const_cast<AtomRecord&>(record(id));
    if (rec.coord_deps.empty()) rec.coord_deps.push_back(id);
    return id;
}

Expr coordinate(const std::string& name) { return Expr::atom(coordinate_id(name)); }

Expr function(const std::string& name, AtomId arg, unsigned order, unsigned remainder) {
    if (record(arg).atom.kind != AtomKind::Coordinate) throw ExprError("function argument must be a coordinate");
    Atom a;
    a.kind = AtomKind::Function;
    a.name = name;
    a.arg = arg;
    a.order = order;
    a.remainder = remainder;
    a.key = "f:" + name + ":" + std::to_string(arg) + ":" + std::to_string(order) + ":" + std::to_string(remainder);
    return Expr::atom(Registry::instance().intern(a, {arg}, true));
}

Expr function_at_zero(const std::string& name, unsigned order) {
    Atom a;
    a.kind = AtomKind::FunctionAtZero;
    a.name = name;
    a.order = order;
    a.key = "z:" + name + ":" + std::to_string(order);
    return Expr::atom(Registry::instance().intern(a, {}, true));
}

namespace {

// q^(1/n) for rational q, with n-th power factors pulled out of the radicand
Expr rational_root_expr(const mpq_class& q, unsigned n) {
    if (q == 0) return Expr{};
    if (auto r = rational_root(q, n)) return Expr(*r);
    const bool neg = q < 0;
    if (neg && n % 2 == 0) throw ExprError("even root of a negative constant");
    const mpz_class a = abs(q.get_num()), b = q.get_den();
    mpz_class bpow;
    mpz_pow_ui(bpow.get_mpz_t(), b.get_mpz_t(), n - 1);
    mpz_class rad = a * bpow, outside = 1;
    for (unsigned long p = 2; p < 100000; ++p) {
        mpz_class pn;
        mpz_ui_pow_ui(pn.get_mpz_t(), p, n);
        if (pn > rad) break;
        while (mpz_divisible_p(rad.get_mpz_t(), pn.get_mpz_t())) {
            rad /= pn;
            outside *= p;
        }
    }
    mpq_class factor(outside, b);
    factor.canonicalize();
    if (neg) factor = -factor;
    if (rad == 1) return Expr(factor);
    Atom at;
    at.kind = AtomKind::Root;
    at.order = n;
    at.payload = Expr(mpq_class(rad));
    at.key = "r:" + std::to_string(n) + ":" + at.payload.str();
    return Expr(factor) * Expr::atom(Registry::instance().intern(at, {}, false));
}

}  // namespace

Expr root(const Expr& radicand, unsigned n) {
    if (n == 0) throw ExprError("zeroth root");
    if (n == 1 || radicand.is_zero()) return radicand;
    if (auto q = radicand.as_rational()) return rational_root_expr(*q, n);

    // radicand = c * np / dp with np, dp primitive integer polynomials
    Poly np = primitive_integer(radicand.num());
    Poly dp = primitive_integer(radicand.den());
    mpq_class c = radicand.num().leading().coef / np.leading().coef;
    c /= radicand.den().leading().coef / dp.leading().coef;
    if (c < 0 && n % 2 == 0) {
        c = -c;
        np = -np;
    }
    Expr result = rational_root_expr(c, n);
    Poly inner_num(1), inner_den(1);
    if (auto r = nth_root(np, n)) result *= Expr(*r);
    else inner_num = np;
    if (auto r = nth_root(dp, n)) result /= Expr(*r);
    else inner_den = dp;
    if (inner_num.is_one() && inner_den.is_one()) return result;

    Atom at;
    at.kind = AtomKind::Root;
    at.order = n;
    at.payload = Expr::fraction(inner_num, inner_den);
    at.key = "r:" + std::to_string(n) + ":" + at.payload.str();
    bool opaque = false;
    auto deps = collect_deps(at.payload, opaque);
    return result * Expr::atom(Registry::instance().intern(std::move(at), std::move(deps), opaque));
}

Expr sqrt(const Expr& radicand) { return root(radicand, 2); }

Expr exp(const Expr& exponent) {
    if (exponent.is_zero()) return Expr(1);
    Atom at;
    at.kind = AtomKind::Exp;
    at.payload = exponent;
    at.key = "e:" + exponent.str();
    bool opaque = false;
    auto deps = collect_deps(exponent, opaque);
    return Expr::atom(Registry::instance().intern(std::move(at), std::move(deps), opaque));
}

Expr diff_quotient(const Expr& value, const Expr& value_at_zero, AtomId coord) {
    Atom at;
    at.kind = AtomKind::DiffQuotient;
    at.arg = coord;
    at.payload = value;
    at.payload0 = value_at_zero;
    at.key = "q:" + std::to_string(coord) + ":" + value.str() + "|" + value_at_zero.str();
    bool opaque = true;
    auto deps = collect_deps(value, opaque);
    auto deps0 = collect_deps(value_at_zero, opaque);
    deps.insert(deps.end(), deps0.begin(), deps0.end());
    deps.push_back(coord);
    return Expr::atom(Registry::instance().intern(std::move(at), std::move(deps), true));
}

bool atom_depends_on(AtomId atom, AtomId coord) {
    const auto& d = record(atom).coord_deps;
    return std::binary_search(d.begin(), d.end(), coord);
}

bool depends_on(const Expr& e, AtomId coord) {
    for (const auto a : e.atoms())
        if (atom_depends_on(a, coord)) return true;
    return false;
}

bool has_opaque_atoms(const Expr& e) {
    for (const auto a : e.atoms())
        if (record(a).opaque) return true;
    return false;
}

// ---------------------------------------------------------------- calculus

namespace {

Expr atom_derivative(AtomId v, AtomId c) {
    if (!atom_depends_on(v, c)) return Expr{};
    if (auto d = Registry::instance().cached_derivative(v, c)) return *d;
    const Atom& a = record(v).atom;
    Expr d;
    switch (a.kind) {
        case AtomKind::Coordinate:
            d = Expr(v == c ? 1 : 0);
            break;
        case AtomKind::Function:
            if (a.remainder == 0) {
                d = function(a.name, a.arg, a.order + 1, 0);
            } else {
                // R_j = (F - T_j)/x^j  =>  R_j' = (R'_{j-1} - j R_j)/x with R' built on F'
                const Expr x = Expr::atom(a.arg);
                d = (function(a.name, a.arg, a.order + 1, a.remainder - 1) -
                     Expr(static_cast<long>(a.remainder)) * Expr::atom(v)) /
                    x;
            }
            break;
        case AtomKind::FunctionAtZero:
            break;
        case AtomKind::Root: {
            const Expr dr = differentiate(a.payload, c);
            if (!dr.is_zero()) d = dr * Expr::atom(v) / (Expr(static_cast<long>(a.order)) * a.payload);
            break;
        }
        case AtomKind::Exp:
            d = differentiate(a.payload, c) * Expr::atom(v);
            break;
        case AtomKind::DiffQuotient: {
            const Expr x = Expr::atom(a.arg);
            d = (differentiate(a.payload, c) - differentiate(a.payload0, c)) / x;
            if (c == a.arg) d -= Expr::atom(v) / x;
            break;
        }
    }
    Registry::instance().store_derivative(v, c, d);
    return d;
}

Expr poly_derivative(const Poly& p, AtomId c) {
    Expr acc;
    for (const auto v : p.variables()) {
        const Expr dv = atom_derivative(v, c);
        if (dv.is_zero()) continue;
        acc += Expr::unchecked(p.derivative(v), Poly(1)) * dv;
    }
    return acc;
}

}  // namespace

Expr differentiate(const Expr& e, AtomId coord) {
    if (record(coord).atom.kind != AtomKind::Coordinate)
        throw UnknownCoordinate("differentiation variable is not a coordinate");
    if (e.is_constant()) return Expr{};
    const Expr dn = poly_derivative(e.num(), coord);
    if (!e.has_denominator()) return dn;
    const Expr dd = poly_derivative(e.den(), coord);
    if (dd.is_zero()) return dn / Expr::unchecked(e.den(), Poly(1));
    const Expr n = Expr::unchecked(e.num(), Poly(1));
    const Expr d = Expr::unchecked(e.den(), Poly(1));
    return (dn * d - n * dd) / (d * d);
}

Expr substitute(const Poly& p, const std::map<AtomId, Expr>& values) {
    Expr acc;
    for (const auto& t : p.terms()) {
        Monomial kept;
        Expr factor(t.coef);
        for (const auto& [v, e] : t.mono.factors) {
            auto it = values.find(v);
            if (it == values.end()) kept.factors.emplace_back(v, e);
            else factor *= it->second.pow(static_cast<int>(e));
        }
        if (factor.is_zero()) continue;
        acc += Expr::unchecked(Poly::monomial(kept, 1), Poly(1)) * factor;
    }
    return acc;
}

Expr substitute(const Expr& e, const std::map<AtomId, Expr>& values) {
    bool touched = false;
    for (const auto a : e.atoms())
        if (values.count(a)) touched = true;
    if (!touched) return e;
    return substitute(e.num(), values) / substitute(e.den(), values);
}

// ---------------------------------------------------------------- numerics

namespace {

struct EvalContext {
    const Valuation& at;
    std::unordered_map<AtomId, double> cache;
};

double eval_expr(const Expr& e, EvalContext& ctx, double* scale = nullptr);

const Expr& function_derivative(const FunctionValuation& fv, unsigned n) {
    static std::mutex mu;
    static std::map<std::pair<std::string, unsigned>, Expr> cache;
    const std::string key = std::to_string(fv.var) + ":" + fv.body.str();
    std::lock_guard lock(mu);
    auto it = cache.find({key, n});
    if (it != cache.end()) return it->second;
    Expr d = fv.body;
    for (unsigned i = 0; i < n; ++i) d = differentiate(d, fv.var);
    return cache.emplace(std::make_pair(key, n), d).first->second;
}

double eval_function(const FunctionValuation& fv, unsigned n, double x) {
    Valuation v;
    v.coords[fv.var] = x;
    EvalContext c{v, {}};
    return eval_expr(function_derivative(fv, n), c);
}

double factorial(unsigned n) {
    double f = 1;
    for (unsigned i = 2; i <= n; ++i) f *= i;
    return f;
}

double atom_value(AtomId id, EvalContext& ctx) {
    if (auto it = ctx.cache.find(id); it != ctx.cache.end()) return it->second;
    const Atom& a = record(id).atom;
    double val = 0;
    auto find_fn = [&](const std::string& name) -> const FunctionValuation& {
        auto it = ctx.at.functions.find(name);
        if (it == ctx.at.functions.end()) throw EvaluationError("missing valuation for function " + name);
        return it->second;
    };
    switch (a.kind) {
        case AtomKind::Coordinate: {
            auto it = ctx.at.coords.find(id);
            if (it == ctx.at.coords.end()) throw EvaluationError("missing valuation for coordinate " + a.name);
            val = it->second;
            break;
        }
        case AtomKind::Function: {
            const auto& fv = find_fn(a.name);
            const double x = atom_value(a.arg, ctx);
            if (a.remainder == 0) {
                val = eval_function(fv, a.order, x);
            } else if (std::abs(x) > 1e-3) {
                double taylor = 0;
                for (unsigned i = 0; i < a.remainder; ++i)
                    taylor += eval_function(fv, a.order + i, 0.0) * std::pow(x, i) / factorial(i);
                val = (eval_function(fv, a.order, x) - taylor) / std::pow(x, a.remainder);
            } else {
                for (unsigned i = 0; i < 8; ++i)
                    val += eval_function(fv, a.order + a.remainder + i, 0.0) * std::pow(x, i) /
                           factorial(a.remainder + i);
            }
            break;
        }
        case AtomKind::FunctionAtZero:
            val = eval_function(find_fn(a.name), a.order, 0.0);
            break;
        case AtomKind::Root: {
            const double r = eval_expr(a.payload, ctx);
            if (a.order == 2) {
                if (r < 0 && r > -1e-12) val = 0;
                else if (r < 0) throw EvaluationError("negative radicand in square root");
                else val = std::sqrt(r);
            } else if (r < 0) {
                if (a.order % 2 == 0) throw EvaluationError("negative radicand in even root");
                val = -std::pow(-r, 1.0 / a.order);
            } else {
                val = std::pow(r, 1.0 / a.order);
            }
            break;
        }
        case AtomKind::Exp:
            val = std::exp(eval_expr(a.payload, ctx));
            break;
        case AtomKind::DiffQuotient: {
            const double x = atom_value(a.arg, ctx);
            if (std::abs(x) > 1e-4) {
                val = (eval_expr(a.payload, ctx) - eval_expr(a.payload0, ctx)) / x;
            } else {
                const Expr d = differentiate(a.payload, a.arg) - differentiate(a.payload0, a.arg);
                val = eval_expr(d, ctx);
            }
            break;
        }
    }
    ctx.cache.emplace(id, val);
    return val;
}

double eval_poly(const Poly& p, EvalContext& ctx, double* scale) {
    double sum = 0, mag = 0;
    for (const auto& t : p.terms()) {
        double v = t.coef.get_d();
        for (const auto& [a, e] : t.mono.factors) v *= std::pow(atom_value(a, ctx), static_cast<double>(e));
        sum += v;
        mag += std::abs(v);
    }
    if (scale) *scale = mag;
    return sum;
}

double eval_expr(const Expr& e, EvalContext& ctx, double* scale) {
    double ns = 0;
    const double n = eval_poly(e.num(), ctx, &ns);
    const double d = e.has_denominator() ? eval_poly(e.den(), ctx, nullptr) : 1.0;
    if (std::abs(d) < 1e-13) throw EvaluationError("denominator vanishes numerically at evaluation point");
    if (scale) *scale = ns / std::abs(d);
    return n / d;
}

}  // namespace

double evaluate(const Expr& e, const Valuation& at) {
    EvalContext ctx{at, {}};
    return eval_expr(e, ctx);
}

bool probably_zero(const Expr& e, const std::vector<Valuation>& points, double tol) {
    if (e.is_zero()) return true;
    for (const auto& p : points) {
        EvalContext ctx{p, {}};
        double scale = 0;
        const double v = eval_expr(e, ctx, &scale);
        if (std::abs(v) > tol * std::max(1.0, scale)) return false;
    }
    return true;
}

}  // namespace rlc
