#include "rlc/expr/poly.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>

namespace rlc {

// ---------------------------------------------------------------- Monomial

std::uint32_t Monomial::degree() const {
    std::uint32_t d = 0;
    for (const auto& [v, e] : factors) d += e;
    return d;
}

std::uint32_t Monomial::exponent(AtomId v) const {
    for (const auto& [w, e] : factors) {
        if (w == v) return e;
        if (w > v) break;
    }
    return 0;
}

bool Monomial::divides(const Monomial& other) const {
    std::size_t j = 0;
    for (const auto& [v, e] : factors) {
        while (j < other.factors.size() && other.factors[j].first < v) ++j;
        if (j == other.factors.size() || other.factors[j].first != v || other.factors[j].second < e)
            return false;
    }
    return true;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial r;
    r.factors.reserve(a.factors.size() + b.factors.size());
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() || j < b.factors.size()) {
        if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].first < b.factors[j].first)) {
            r.factors.push_back(a.factors[i++]);
        } else if (i == a.factors.size() || b.factors[j].first < a.factors[i].first) {
            r.factors.push_back(b.factors[j++]);
        } else {
            r.factors.emplace_back(a.factors[i].first, a.factors[i].second + b.factors[j].second);
            ++i;
            ++j;
        }
    }
    return r;
}

Monomial Monomial::operator/(const Monomial& d) const {
    Monomial r;
    std::size_t j = 0;
    for (const auto& [v, e] : factors) {
        std::uint32_t de = 0;
        if (j < d.factors.size() && d.factors[j].first == v) de = d.factors[j++].second;
        if (e > de) r.factors.emplace_back(v, e - de);
    }
    return r;
}

Monomial Monomial::gcd(const Monomial& a, const Monomial& b) {
    Monomial r;
    std::size_t j = 0;
    for (const auto& [v, e] : a.factors) {
        while (j < b.factors.size() && b.factors[j].first < v) ++j;
        if (j < b.factors.size() && b.factors[j].first == v) r.factors.emplace_back(v, std::min(e, b.factors[j].second));
    }
    return r;
}

Monomial Monomial::variable(AtomId v, std::uint32_t e) {
    Monomial m;
    if (e > 0) m.factors.emplace_back(v, e);
    return m;
}

int compare(const Monomial& a, const Monomial& b) {
    const auto da = a.degree(), db = b.degree();
    if (da != db) return da < db ? -1 : 1;
    std::size_t i = 0, j = 0;
    while (i < a.factors.size() && j < b.factors.size()) {
        const auto& [va, ea] = a.factors[i];
        const auto& [vb, eb] = b.factors[j];
        if (va == vb) {
            if (ea != eb) return ea < eb ? -1 : 1;
            ++i;
            ++j;
        } else {
            // the one carrying the more significant (smaller id) variable wins
            return va < vb ? 1 : -1;
        }
    }
    if (i < a.factors.size()) return 1;
    if (j < b.factors.size()) return -1;
    return 0;
}

// ---------------------------------------------------------------- Poly

Poly::Poly(const mpq_class& c) {
    if (c != 0) terms_.push_back({Monomial{}, c});
}

Poly Poly::variable(AtomId v, std::uint32_t e) { return monomial(Monomial::variable(v, e), 1); }

Poly Poly::monomial(Monomial m, const mpq_class& c) {
    Poly p;
    if (c != 0) p.terms_.push_back({std::move(m), c});
    return p;
}

Poly Poly::from_terms(std::vector<Term> terms) {
    std::map<Monomial, mpq_class, MonomialLess> acc;
    for (auto& t : terms) acc[std::move(t.mono)] += t.coef;
    Poly p;
    p.terms_.reserve(acc.size());
    for (auto it = acc.rbegin(); it != acc.rend(); ++it)
        if (it->second != 0) p.terms_.push_back({it->first, it->second});
    return p;
}

bool Poly::is_one() const { return terms_.size() == 1 && terms_[0].mono.is_one() && terms_[0].coef == 1; }

mpq_class Poly::constant_value() const {
    if (!is_constant()) throw std::logic_error("Poly::constant_value on non-constant polynomial");
    return terms_.empty() ? mpq_class(0) : terms_[0].coef;
}

mpq_class Poly::constant_term() const {
    if (!terms_.empty() && terms_.back().mono.is_one()) return terms_.back().coef;
    return 0;
}

std::uint32_t Poly::degree_in(AtomId v) const {
    std::uint32_t d = 0;
    for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
    return d;
}

std::uint32_t Poly::min_degree_in(AtomId v) const {
    if (terms_.empty()) return 0;
    std::uint32_t d = UINT32_MAX;
    for (const auto& t : terms_) d = std::min(d, t.mono.exponent(v));
    return d;
}

std::uint32_t Poly::total_degree() const { return terms_.empty() ? 0 : terms_.front().mono.degree(); }

std::vector<AtomId> Poly::variables() const {
    std::vector<AtomId> vs;
    for (const auto& t : terms_)
        for (const auto& [v, e] : t.mono.factors) vs.push_back(v);
    std::sort(vs.begin(), vs.end());
    vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
    return vs;
}

bool Poly::contains(AtomId v) const {
    for (const auto& t : terms_)
        if (t.mono.exponent(v) > 0) return true;
    return false;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& t : r.terms_) t.coef = -t.coef;
    return r;
}

namespace {

template <bool Subtract>
std::vector<Term> merge(const std::vector<Term>& a, const std::vector<Term>& b) {
    std::vector<Term> r;
    r.reserve(a.size() + b.size());
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        int c;
        if (i == a.size()) c = -1;
        else if (j == b.size()) c = 1;
        else c = compare(a[i].mono, b[j].mono);
        if (c > 0) {
            r.push_back(a[i++]);
        } else if (c < 0) {
            r.push_back(b[j++]);
            if constexpr (Subtract) r.back().coef = -r.back().coef;
        } else {
            mpq_class s = Subtract ? mpq_class(a[i].coef - b[j].coef) : mpq_class(a[i].coef + b[j].coef);
            if (s != 0) r.push_back({a[i].mono, s});
            ++i;
            ++j;
        }
    }
    return r;
}

}  // namespace

Poly& Poly::operator+=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    terms_ = merge<false>(terms_, o.terms_);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (o.terms_.empty()) return *this;
    terms_ = merge<true>(terms_, o.terms_);
    return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return Poly{};
    if (a.is_constant()) return b * a.terms_[0].coef;
    if (b.is_constant()) return a * b.terms_[0].coef;
    if (a.size() == 1 || b.size() == 1) {
        // a single-term factor preserves the order of the other operand
        const Poly& s = a.size() == 1 ? a : b;
        const Poly& o = a.size() == 1 ? b : a;
        Poly r;
        r.terms_.reserve(o.size());
        for (const auto& t : o.terms_) r.terms_.push_back({t.mono * s.terms_[0].mono, t.coef * s.terms_[0].coef});
        return r;
    }
    std::map<Monomial, mpq_class, MonomialLess> acc;
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) acc[x.mono * y.mono] += x.coef * y.coef;
    Poly r;
    r.terms_.reserve(acc.size());
    for (auto it = acc.rbegin(); it != acc.rend(); ++it)
        if (it->second != 0) r.terms_.push_back({it->first, it->second});
    return r;
}

Poly& Poly::operator*=(const Poly& o) { return *this = *this * o; }

Poly& Poly::operator*=(const mpq_class& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.coef *= c;
    return *this;
}

bool operator==(const Poly& a, const Poly& b) {
    if (a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i)
        if (a.terms_[i].coef != b.terms_[i].coef || !(a.terms_[i].mono == b.terms_[i].mono)) return false;
    return true;
}

Poly Poly::pow(unsigned e) const {
    Poly result(1), base = *this;
    while (e > 0) {
        if (e & 1u) result *= base;
        e >>= 1u;
        if (e) base = base * base;
    }
    return result;
}

Poly Poly::derivative(AtomId v) const {
    std::vector<Term> out;
    for (const auto& t : terms_) {
        const auto e = t.mono.exponent(v);
        if (e == 0) continue;
        Monomial m = t.mono / Monomial::variable(v, 1);
        out.push_back({std::move(m), t.coef * e});
    }
    // differentiation in one variable preserves relative order except for collisions, which cannot occur
    Poly r;
    r.terms_ = std::move(out);
    std::stable_sort(r.terms_.begin(), r.terms_.end(),
                     [](const Term& x, const Term& y) { return compare(x.mono, y.mono) > 0; });
    return r;
}

std::vector<Poly> Poly::as_univariate(AtomId v) const {
    std::vector<Poly> c(degree_in(v) + 1);
    std::vector<std::vector<Term>> buckets(c.size());
    for (const auto& t : terms_) {
        const auto e = t.mono.exponent(v);
        buckets[e].push_back({e ? t.mono / Monomial::variable(v, e) : t.mono, t.coef});
    }
    for (std::size_t d = 0; d < c.size(); ++d) {
        // removing v keeps the graded order only up to degree shifts, so re-sort
        std::sort(buckets[d].begin(), buckets[d].end(),
                  [](const Term& x, const Term& y) { return compare(x.mono, y.mono) > 0; });
        c[d].terms_ = std::move(buckets[d]);
    }
    return c;
}

Poly Poly::from_univariate(const std::vector<Poly>& coeffs, AtomId v) {
    Poly r;
    for (std::size_t d = 0; d < coeffs.size(); ++d)
        if (!coeffs[d].is_zero()) r += coeffs[d] * Poly::variable(v, static_cast<std::uint32_t>(d));
    return r;
}

// ---------------------------------------------------------------- division

std::optional<Poly> divide_exact(const Poly& a, const Poly& b) {
    if (b.is_zero()) throw std::domain_error("polynomial division by zero");
    if (a.is_zero()) return Poly{};
    if (b.is_constant()) return a * mpq_class(1 / b.constant_value());
    for (const auto v : b.variables())
        if (b.degree_in(v) > a.degree_in(v)) return std::nullopt;
    if (b.total_degree() > a.total_degree()) return std::nullopt;

    std::vector<Term> q;
    Poly rem = a;
    const Term& lb = b.leading();
    while (!rem.is_zero()) {
        const Term& lr = rem.leading();
        if (!lb.mono.divides(lr.mono)) return std::nullopt;
        Term t{lr.mono / lb.mono, lr.coef / lb.coef};
        rem -= b * Poly::monomial(t.mono, t.coef);
        q.push_back(std::move(t));
    }
    Poly r = Poly::from_terms(std::move(q));
    return r;
}

namespace {

mpz_class integer_gcd(const mpz_class& a, const mpz_class& b) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

mpz_class integer_lcm(const mpz_class& a, const mpz_class& b) {
    mpz_class l;
    mpz_lcm(l.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return l;
}

Poly normalized(const Poly& p) { return primitive_integer(p); }

Poly gcd_impl(const Poly& a, const Poly& b);

Poly content_in(const Poly& p, AtomId v) {
    Poly g;
    for (const auto& c : p.as_univariate(v)) {
        if (c.is_zero()) continue;
        g = gcd_impl(g, c);
        if (g.is_constant() && !g.is_zero()) return Poly(1);
    }
    return g;
}

// pseudo-remainder of a by b, univariate in v
Poly prem(Poly a, const Poly& b, AtomId v) {
    const auto db = b.degree_in(v);
    const auto cb = b.as_univariate(v);
    const Poly& lcb = cb.back();
    while (!a.is_zero() && a.degree_in(v) >= db) {
        const auto da = a.degree_in(v);
        Poly lca = a.as_univariate(v).back();
        a = a * lcb - lca * Poly::variable(v, da - db) * b;
        a = primitive_integer(a);
    }
    return a;
}

Poly primitive_part_in(const Poly& p, AtomId v) {
    const Poly c = content_in(p, v);
    if (c.is_constant()) return normalized(p);
    auto q = divide_exact(p, c);
    if (!q) throw std::logic_error("content does not divide polynomial");
    return normalized(*q);
}

// ---- images modulo a word-sized prime, used for gcd degree bounds

constexpr std::uint64_t kPrime = 4294967291ULL;  // largest prime below 2^32

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b) { return a * b % kPrime; }

std::uint64_t powmod(std::uint64_t a, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e) {
        if (e & 1) r = mulmod(r, a);
        a = mulmod(a, a);
        e >>= 1;
    }
    return r;
}

std::uint64_t invmod(std::uint64_t a) { return powmod(a, kPrime - 2); }

std::optional<std::uint64_t> coef_mod(const mpq_class& q) {
    const std::uint64_t d = mpz_fdiv_ui(q.get_den().get_mpz_t(), kPrime);
    if (d == 0) return std::nullopt;
    return mulmod(mpz_fdiv_ui(q.get_num().get_mpz_t(), kPrime), invmod(d));
}

using ModPoly = std::vector<std::uint64_t>;  // dense, index = degree

void trim(ModPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

// image of p with every variable except v replaced by values[w]
std::optional<ModPoly> image(const Poly& p, AtomId v, const std::map<AtomId, std::uint64_t>& values) {
    ModPoly out(p.degree_in(v) + 1, 0);
    for (const auto& t : p.terms()) {
        auto c = coef_mod(t.coef);
        if (!c) return std::nullopt;
        std::uint64_t val = *c;
        std::uint32_t dv = 0;
        for (const auto& [w, e] : t.mono.factors) {
            if (w == v) dv = e;
            else val = mulmod(val, powmod(values.at(w), e));
        }
        out[dv] = (out[dv] + val) % kPrime;
    }
    return out;
}

std::size_t gcd_degree(ModPoly a, ModPoly b) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a <- a mod b
        const std::uint64_t inv = invmod(b.back());
        while (a.size() >= b.size()) {
            const std::uint64_t f = mulmod(a.back(), inv);
            const std::size_t shift = a.size() - b.size();
            for (std::size_t i = 0; i < b.size(); ++i)
                a[i + shift] = (a[i + shift] + kPrime - mulmod(f, b[i])) % kPrime;
            trim(a);
            if (a.empty()) break;
        }
        std::swap(a, b);
    }
    return a.empty() ? 0 : a.size() - 1;
}

// Upper bound for deg_v gcd(a, b), or nullopt when the image is unlucky.
std::optional<std::uint32_t> degree_bound(const Poly& a, const Poly& b, AtomId v, std::mt19937_64& rng) {
    std::map<AtomId, std::uint64_t> values;
    std::uniform_int_distribution<std::uint64_t> pick(2, kPrime - 1);
    for (const auto w : a.variables()) values.emplace(w, pick(rng));
    for (const auto w : b.variables()) values.emplace(w, pick(rng));
    auto ia = image(a, v, values), ib = image(b, v, values);
    if (!ia || !ib) return std::nullopt;
    // a vanishing leading coefficient could hide gcd degree
    if (ia->back() == 0 || ib->back() == 0) return std::nullopt;
    return static_cast<std::uint32_t>(gcd_degree(*ia, *ib));
}

Poly gcd_impl(const Poly& a, const Poly& b) {
    if (a.is_zero()) return normalized(b);
    if (b.is_zero()) return normalized(a);
    if (a.is_constant() || b.is_constant()) return Poly(1);
    if (a.size() == 1 || b.size() == 1) {
        const Poly& s = a.size() == 1 ? a : b;
        const Poly& o = a.size() == 1 ? b : a;
        Monomial g = s.leading().mono;
        for (const auto& t : o.terms()) {
            g = Monomial::gcd(g, t.mono);
            if (g.is_one()) break;
        }
        return Poly::monomial(g, 1);
    }
    if (a == b) return normalized(a);
    if (divide_exact(a, b)) return normalized(b);
    if (divide_exact(b, a)) return normalized(a);

    const auto va = a.variables(), vb = b.variables();
    for (const auto v : va)
        if (!std::binary_search(vb.begin(), vb.end(), v)) return gcd_impl(content_in(a, v), b);
    for (const auto v : vb)
        if (!std::binary_search(va.begin(), va.end(), v)) return gcd_impl(a, content_in(b, v));

    // Modular images bound the gcd degree in each variable. A zero bound
    // removes that variable: the gcd then divides both contents in it.
    std::mt19937_64 rng(a.size() * 1000003ULL + b.size());
    bool all_zero = true;
    for (const auto w : va) {
        std::optional<std::uint32_t> bound;
        for (int attempt = 0; attempt < 3 && !bound; ++attempt) bound = degree_bound(a, b, w, rng);
        if (!bound) {
            all_zero = false;
            continue;
        }
        if (*bound == 0) {
            if (va.size() == 1) return Poly(1);
            return gcd_impl(content_in(a, w), content_in(b, w));
        }
        all_zero = false;
    }
    if (all_zero) return Poly(1);

    // main variable: the one of smallest degree keeps the PRS short
    AtomId v = va.front();
    std::uint32_t best = UINT32_MAX;
    for (const auto w : va) {
        const auto d = std::max(a.degree_in(w), b.degree_in(w));
        if (d < best) {
            best = d;
            v = w;
        }
    }
    const Poly ca = content_in(a, v), cb = content_in(b, v);
    const Poly c = gcd_impl(ca, cb);
    Poly pa = ca.is_constant() ? a : *divide_exact(a, ca);
    Poly pb = cb.is_constant() ? b : *divide_exact(b, cb);
    if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
    while (!pb.is_zero()) {
        Poly r = prem(pa, pb, v);
        pa = std::move(pb);
        if (r.is_zero()) break;
        if (r.degree_in(v) == 0) {
            pa = Poly(1);
            break;
        }
        pb = primitive_part_in(r, v);
    }
    const Poly g = pa.degree_in(v) == 0 ? Poly(1) : primitive_part_in(pa, v);
    return normalized(c * g);
}

}  // namespace

Poly primitive_integer(const Poly& p) {
    if (p.is_zero()) return p;
    mpz_class den = 1, num = 0;
    for (const auto& t : p.terms()) {
        den = integer_lcm(den, t.coef.get_den());
        num = integer_gcd(num, t.coef.get_num());
    }
    mpq_class scale(den, num);
    scale.canonicalize();
    if (p.leading().coef < 0) scale = -scale;
    return p * scale;
}

Poly gcd(const Poly& a, const Poly& b) { return gcd_impl(a, b); }

std::optional<mpq_class> rational_root(const mpq_class& q, unsigned n) {
    if (n == 0) throw std::domain_error("zeroth root");
    if (n == 1) return q;
    const bool neg = q < 0;
    if (neg && n % 2 == 0) return std::nullopt;
    mpz_class num = abs(q.get_num()), den = q.get_den(), rn, rd;
    if (!mpz_root(rn.get_mpz_t(), num.get_mpz_t(), n)) return std::nullopt;
    if (!mpz_root(rd.get_mpz_t(), den.get_mpz_t(), n)) return std::nullopt;
    mpq_class r(rn, rd);
    r.canonicalize();
    return neg ? mpq_class(-r) : r;
}

std::optional<Poly> nth_root(const Poly& p, unsigned n) {
    if (n == 1 || p.is_zero()) return p;
    const Term& lt = p.leading();
    auto lc = rational_root(lt.coef, n);
    if (!lc) return std::nullopt;
    Monomial lm;
    for (const auto& [v, e] : lt.mono.factors) {
        if (e % n) return std::nullopt;
        lm.factors.emplace_back(v, e / n);
    }
    Poly root = Poly::monomial(lm, *lc);
    const Poly denom_base = root.pow(n - 1) * mpq_class(n);
    const Term lead_denom = denom_base.leading();
    // each step fixes the next term of the root
    for (std::size_t guard = 0; guard <= p.size() + 2; ++guard) {
        Poly diff = p - root.pow(n);
        if (diff.is_zero()) {
            // sign convention: positive constant term, else positive leading coefficient
            const mpq_class ct = root.constant_term();
            if (n % 2 == 0 && (ct < 0 || (ct == 0 && root.leading().coef < 0))) root = -root;
            return root;
        }
        const Term& ld = diff.leading();
        if (!lead_denom.mono.divides(ld.mono)) return std::nullopt;
        Monomial m = ld.mono / lead_denom.mono;
        if (compare(m, root.terms().back().mono) >= 0) return std::nullopt;
        root += Poly::monomial(std::move(m), ld.coef / lead_denom.coef);
    }
    return std::nullopt;
}

}  // namespace rlc
