#include "rlc/geometry/chart.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace rlc {

// ---------------------------------------------------------------- Tensor

Tensor::Tensor(std::size_t dim, std::size_t rank) : dim_(dim), rank_(rank) {
    std::size_t n = 1;
    for (std::size_t i = 0; i < rank; ++i) n *= dim;
    c_.resize(n);
}

std::size_t Tensor::offset(const std::vector<std::size_t>& idx) const {
    if (idx.size() != rank_) throw GeometryError("tensor index arity mismatch");
    std::size_t off = 0;
    for (const auto i : idx) {
        if (i >= dim_) throw GeometryError("tensor index out of range");
        off = off * dim_ + i;
    }
    return off;
}

std::vector<std::size_t> Tensor::index_of(std::size_t n) const {
    std::vector<std::size_t> idx(rank_);
    for (std::size_t k = rank_; k-- > 0;) {
        idx[k] = n % dim_;
        n /= dim_;
    }
    return idx;
}

const char* to_string(Evidence e) { return e == Evidence::Exact ? "exact" : "numeric"; }

// ---------------------------------------------------------------- MetricChart

MetricChart::MetricChart(std::vector<std::string> coords, ExprMatrix g, std::size_t tau_index, Expr tau_unit,
                         ChartOptions options)
    : names_(std::move(coords)),
      g_(std::move(g)),
      tau_index_(tau_index),
      sigma_(coordinate_id(names_.at(tau_index)), std::move(tau_unit), options.declared),
      options_(std::move(options)) {
    const std::size_t m = names_.size();
    if (m < 2) throw GeometryError("a chart needs at least two coordinates");
    if (g_.size() != m) throw GeometryError("metric size does not match the number of coordinates");
    for (const auto& row : g_)
        if (row.size() != m) throw GeometryError("metric must be square");
    for (const auto& n : names_) coords_.push_back(coordinate_id(n));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a + 1; b < m; ++b)
            if (g_[a][b] != g_[b][a]) throw GeometryError("metric is not symmetric");
    if (options_.box.empty()) options_.box.assign(m, {-0.5, 0.5});
    if (options_.box.size() != m) throw GeometryError("box must give one range per coordinate");

    const AtomId s = coordinate_id("s");
    for (const auto& [name, body] : options_.function_bodies) models_[name] = {s, body};
    for (const auto& [name, values] : options_.declared) {
        if (models_.count(name)) continue;
        // Taylor polynomial of the declared jet
        Expr body;
        mpz_class fact = 1;
        for (std::size_t n = 0; n < values.size(); ++n) {
            if (n > 0) fact *= static_cast<unsigned long>(n);
            body += Expr(values[n] / mpq_class(fact)) * coordinate("s").pow(static_cast<int>(n));
        }
        models_[name] = {s, body};
    }
}

MetricChart MetricChart::with_metric(ExprMatrix g) const {
    return MetricChart(names_, std::move(g), tau_index_, sigma_.unit(), options_);
}

namespace {

double radical_inverse(std::uint64_t i, unsigned base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= base;
        r += f * static_cast<double>(i % base);
        i /= base;
    }
    return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

}  // namespace

std::vector<Valuation> MetricChart::samples(std::size_t n, bool on_sigma, std::uint64_t salt) const {
    const std::size_t m = dim();
    if (m > std::size(kPrimes)) throw GeometryError("dimension too large for the sampler");
    std::mt19937_64 rng(options_.seed * 0x9E3779B97F4A7C15ULL + salt);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> shift(m);
    for (auto& s : shift) s = unit(rng);

    std::vector<Valuation> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Valuation v;
        v.functions = models_;
        for (std::size_t a = 0; a < m; ++a) {
            const auto [lo, hi] = options_.box[a];
            double u = radical_inverse(i + 1, kPrimes[a]) + shift[a];
            u -= std::floor(u);
            double x = lo + u * (hi - lo);
            if (a == tau_index_) {
                if (on_sigma) {
                    x = 0.0;
                } else {
                    // keep away from Σ, alternating sides
                    const double gap = 0.1 * (hi - lo);
                    if (std::abs(x) < gap) x = (i % 2 ? -1.0 : 1.0) * gap;
                    if (x < lo || x > hi) x = std::clamp(x, lo, hi);
                }
            }
            v.coords[coords_[a]] = x;
        }
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Valuation> MetricChart::sigma_samples(std::size_t n) const { return samples(n, true, 1); }

std::vector<Valuation> MetricChart::off_sigma_samples(std::size_t n) const { return samples(n, false, 2); }

// ---------------------------------------------------------------- helpers

Expr apply(const MetricChart& M, const Vector& X, const Expr& f) {
    Expr acc;
    for (std::size_t a = 0; a < M.dim(); ++a)
        if (!X[a].is_zero()) acc += X[a] * differentiate(f, M.coord(a));
    return acc;
}

Expr inner(const MetricChart& M, const Vector& X, const Vector& Y) {
    Expr acc;
    for (std::size_t a = 0; a < M.dim(); ++a) {
        if (X[a].is_zero()) continue;
        for (std::size_t b = 0; b < M.dim(); ++b)
            if (!Y[b].is_zero() && !M.g(a, b).is_zero()) acc += X[a] * M.g(a, b) * Y[b];
    }
    return acc;
}

Vector coordinate_field(const MetricChart& M, std::size_t a) {
    Vector v(M.dim());
    v[a] = Expr(1);
    return v;
}

namespace {

Expr minor_det(const ExprMatrix& a, std::vector<std::size_t>& cols, std::size_t row,
               std::map<std::vector<std::size_t>, Expr>& memo) {
    if (cols.empty()) return Expr(1);
    if (auto it = memo.find(cols); it != memo.end()) return it->second;
    Expr acc;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const Expr& entry = a[row][cols[k]];
        if (entry.is_zero()) continue;
        std::vector<std::size_t> rest = cols;
        rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(k));
        const Expr sub = minor_det(a, rest, row + 1, memo);
        acc += (k % 2 ? -entry : entry) * sub;
    }
    memo.emplace(cols, acc);
    return acc;
}

}  // namespace

Expr determinant(const ExprMatrix& a) {
    std::vector<std::size_t> cols(a.size());
    for (std::size_t i = 0; i < cols.size(); ++i) cols[i] = i;
    std::map<std::vector<std::size_t>, Expr> memo;
    return minor_det(a, cols, 0, memo);
}

ExprMatrix inverse(const ExprMatrix& a) {
    const std::size_t n = a.size();
    const Expr det = determinant(a);
    if (det.is_zero()) throw GeometryError("matrix is singular");
    ExprMatrix inv(n, std::vector<Expr>(n));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            ExprMatrix sub;
            for (std::size_t r = 0; r < n; ++r) {
                if (r == j) continue;
                std::vector<Expr> row;
                for (std::size_t c = 0; c < n; ++c)
                    if (c != i) row.push_back(a[r][c]);
                sub.push_back(std::move(row));
            }
            const Expr cof = determinant(sub);
            inv[i][j] = ((i + j) % 2 ? -cof : cof) / det;
        }
    return inv;
}

namespace {

constexpr double kZeroTol = 1e-9;

double max_abs(const Expr& e, const std::vector<Valuation>& pts, double* scale_out = nullptr) {
    double m = 0;
    for (const auto& p : pts) m = std::max(m, std::abs(evaluate(e, p)));
    if (scale_out) *scale_out = m;
    return m;
}

Verdict decide_zero(const Expr& e, const std::vector<Valuation>& pts) {
    if (e.is_zero()) return {true, Evidence::Exact};
    const bool rational = !has_opaque_atoms(e);
    bool numerically_zero = true;
    try {
        numerically_zero = probably_zero(e, pts, kZeroTol);
    } catch (const EvaluationError&) {
        numerically_zero = false;
    }
    if (!numerically_zero) return {false, rational ? Evidence::Exact : Evidence::Numeric};
    return {true, Evidence::Numeric};
}

}  // namespace

Verdict vanishes_on_sigma(const MetricChart& M, const Expr& e) {
    return decide_zero(M.sigma().restrict(e), M.sigma_samples());
}

Verdict identically_zero(const MetricChart& M, const Expr& e) { return decide_zero(e, M.off_sigma_samples()); }

double max_abs_on_sigma(const MetricChart& M, const Expr& e) { return max_abs(M.sigma().restrict(e), M.sigma_samples()); }

double max_abs_off_sigma(const MetricChart& M, const Expr& e) { return max_abs(e, M.off_sigma_samples()); }

}  // namespace rlc
