#pragma once

// Chart builders and independent numeric oracles shared by the unit tests.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rlc/expr/parse.hpp"
#include "rlc/geometry/chart.hpp"

namespace testing_support {

using namespace rlc;

inline std::vector<std::string> names(std::size_t m, const std::string& last = "") {
    std::vector<std::string> n;
    for (std::size_t i = 1; i <= m; ++i) n.push_back("x" + std::to_string(i));
    if (!last.empty()) n.back() = last;
    return n;
}

inline ExprMatrix diagonal(const std::vector<Expr>& d) {
    ExprMatrix g(d.size(), std::vector<Expr>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i) g[i][i] = d[i];
    return g;
}

// Σ(dxⁱ)² + x_m (dx_m)²
inline MetricChart model(std::size_t m = 4) {
    std::vector<Expr> d(m, Expr(1));
    d.back() = coordinate("x" + std::to_string(m));
    return MetricChart(names(m), diagonal(d), m - 1, Expr(1));
}

// Σ(dxⁱ)² + x_1 (dx_m)², τ = x_1
inline MetricChart tangent_model(std::size_t m = 4) {
    std::vector<Expr> d(m, Expr(1));
    d.back() = coordinate("x1");
    return MetricChart(names(m), diagonal(d), 0, Expr(1));
}

// stereographic round metric of curvature 1 on the listed coordinates
inline std::vector<Expr> sphere_factor(const std::vector<std::string>& coords) {
    Expr r2;
    for (const auto& c : coords) r2 += coordinate(c).pow(2);
    return std::vector<Expr>(coords.size(), Expr(4) / (Expr(1) + r2).pow(2));
}

// f(t)² g_S − t dt² with g_S diagonal on x1..x_{m-1}; τ = −t
inline MetricChart warped(const Expr& f, const std::vector<Expr>& base, ChartOptions opts = {}) {
    std::vector<Expr> d;
    for (const auto& b : base) d.push_back(f.pow(2) * b);
    d.push_back(-coordinate("t"));
    return MetricChart(names(base.size() + 1, "t"), diagonal(d), base.size(), Expr(-1), std::move(opts));
}

inline Eigen::MatrixXd numeric(const ExprMatrix& g, const Valuation& p) {
    Eigen::MatrixXd G(g.size(), g.size());
    for (std::size_t a = 0; a < g.size(); ++a)
        for (std::size_t b = 0; b < g.size(); ++b)
            G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = evaluate(g[a][b], p);
    return G;
}

// Riemann tensor R_abcd (R_abab is sectional curvature times area²) from
// finite differences of the numeric metric alone.
inline std::vector<double> numeric_riemann(const MetricChart& M, const Valuation& p, double h = 1e-3) {
    const std::size_t m = M.dim();
    auto at = [&](std::vector<double> shift) {
        Valuation q = p;
        for (std::size_t a = 0; a < m; ++a) q.coords[M.coord(a)] += shift[a];
        return numeric(M.g(), q);
    };
    auto e = [&](std::size_t a, double s) {
        std::vector<double> v(m, 0.0);
        v[a] = s;
        return v;
    };
    auto add = [](std::vector<double> a, const std::vector<double>& b) {
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
        return a;
    };
    const Eigen::MatrixXd g0 = at(std::vector<double>(m, 0.0));
    const Eigen::MatrixXd gi = g0.inverse();
    std::vector<Eigen::MatrixXd> dg(m);
    for (std::size_t a = 0; a < m; ++a) dg[a] = (at(e(a, h)) - at(e(a, -h))) / (2 * h);
    std::vector<std::vector<Eigen::MatrixXd>> ddg(m, std::vector<Eigen::MatrixXd>(m));
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
            if (a == b) {
                ddg[a][a] = (at(e(a, h)) - 2 * g0 + at(e(a, -h))) / (h * h);
            } else {
                ddg[a][b] = (at(add(e(a, h), e(b, h))) - at(add(e(a, h), e(b, -h))) - at(add(e(a, -h), e(b, h))) +
                             at(add(e(a, -h), e(b, -h)))) /
                            (4 * h * h);
            }
        }
    auto G1 = [&](std::size_t a, std::size_t b, std::size_t c) {  // Γ_{ab,c}
        return 0.5 * (dg[a](b, c) + dg[b](a, c) - dg[c](a, b));
    };
    auto G2 = [&](std::size_t a, std::size_t b, std::size_t c) {  // Γ^c_{ab}
        double s = 0;
        for (std::size_t d = 0; d < m; ++d) s += gi(c, d) * G1(a, b, d);
        return s;
    };
    std::vector<double> R(m * m * m * m);
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < m; ++d) {
                    double v = 0.5 * (ddg[b][c](a, d) + ddg[a][d](b, c) - ddg[b][d](a, c) - ddg[a][c](b, d));
                    for (std::size_t n = 0; n < m; ++n)
                        for (std::size_t q = 0; q < m; ++q)
                            v += g0(n, q) * (G2(b, c, n) * G2(a, d, q) - G2(b, d, n) * G2(a, c, q));
                    R[((a * m + b) * m + c) * m + d] = v;
                }
    return R;
}

}  // namespace testing_support
