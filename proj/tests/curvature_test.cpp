#include <gtest/gtest.h>

#include "rlc/curvature/curvature.hpp"
#include "support.hpp"

using namespace rlc;
using namespace testing_support;

namespace {

// A metric with off-diagonal terms and no special structure.
MetricChart lumpy() {
    const Expr x1 = coordinate("x1"), x2 = coordinate("x2"), x3 = coordinate("x3"), x4 = coordinate("x4");
    auto g = diagonal({Expr(2) + x2, Expr(1), Expr(3) - x1, x4 * (Expr(1) + x2.pow(2))});
    g[0][1] = g[1][0] = x3 / 3;
    return MetricChart(names(4), g, 3, Expr(1));
}

MetricChart sphere3() {
    const MetricChart M(names(3), diagonal(sphere_factor(names(3))), 0, Expr(1));
    return M;
}

}  // namespace

TEST(DualConnection, ModelMetric) {
    const auto M = model();
    const Tensor G = dual_connection(M);
    for (std::size_t n = 0; n < G.components().size(); ++n) {
        const auto idx = G.index_of(n);
        const bool mmm = idx[0] == 3 && idx[1] == 3 && idx[2] == 3;
        EXPECT_EQ(G.components()[n], mmm ? Expr::rational(1, 2) : Expr(0));
    }
}

TEST(DualConnection, WarpedTimeComponent) {
    const auto M = warped(Expr(1) + coordinate("t"), {1, 1, 1});
    EXPECT_EQ(dual_connection(M)(3, 3, 3), Expr::rational(-1, 2));
}

TEST(DualConnection, MetricCompatibleAndTorsionFree) {
    const auto M = lumpy();
    const Tensor G = dual_connection(M);
    for (std::size_t a = 0; a < 4; ++a)
        for (std::size_t b = 0; b < 4; ++b)
            for (std::size_t c = 0; c < 4; ++c) {
                EXPECT_EQ(G(a, b, c), G(b, a, c));
                EXPECT_TRUE((differentiate(M.g(b, c), M.coord(a)) - G(a, b, c) - G(a, c, b)).is_zero());
            }
}

TEST(Christoffel, ModelMetricPole) {
    const auto M = model();
    const auto B = curvature(M);
    EXPECT_EQ(B.second(3, 3, 3), Expr(1) / (2 * coordinate("x4")));
}

TEST(Christoffel, WarpedCovariantDerivatives) {
    // ∇_U U = (1/2t) U and ∇_U X = (f'/f) X
    const AtomId t = coordinate_id("t");
    const Expr f = function("f", t);
    const auto M = warped(f, {1, 1, 1});
    const auto B = curvature(M);
    EXPECT_EQ(B.second(3, 3, 3), Expr(1) / (2 * coordinate("t")));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(B.second(3, i, i), function("f", t, 1) / f);
}

TEST(Riemann, ModelMetricIsFlat) {
    const auto B = curvature(model());
    for (const auto& c : B.K.components()) EXPECT_TRUE(c.is_zero());
}

TEST(Riemann, WarpedConstantFactorFlatBaseIsFlat) {
    const auto B = curvature(warped(Expr(1), {1, 1, 1}));
    for (const auto& c : B.K.components()) EXPECT_TRUE(c.is_zero());
    for (const auto& c : B.Ric.components()) EXPECT_TRUE(c.is_zero());
    EXPECT_TRUE(B.Sc.is_zero());
}

TEST(Riemann, RoundSphereIsHalfMetricSquared) {
    const auto M = sphere3();
    const auto B = curvature(M);
    const Tensor gg = kulkarni_nomizu(metric_tensor(M.g()), metric_tensor(M.g()));
    for (std::size_t n = 0; n < gg.components().size(); ++n)
        EXPECT_TRUE((B.K.components()[n] - Expr::rational(1, 2) * gg.components()[n]).is_zero());
    EXPECT_EQ(B.Sc, Expr(6));
}

TEST(Riemann, MatchesFiniteDifferenceOracle) {
    const auto M = lumpy();
    const auto B = curvature(M);
    for (const auto& p : M.off_sigma_samples(5)) {
        const auto R = numeric_riemann(M, p);
        for (std::size_t n = 0; n < R.size(); ++n) {
            const double v = evaluate(B.K.components()[n], p);
            EXPECT_NEAR(v, R[n], 2e-5 * std::max(1.0, std::abs(R[n])));
        }
    }
}

TEST(Riemann, SymmetriesHold) {
    const auto M = lumpy();
    const auto B = curvature(M);
    EXPECT_EQ(check_curvature_symmetries(B.K), "");
    EXPECT_EQ(check_curvature_symmetries(B.W), "");
    EXPECT_EQ(check_trace_free(B.W, B.ginv), "");
}

TEST(Riemann, SecondBianchiNumerically) {
    for (const auto& M : {lumpy(), warped(Expr(1) + coordinate("t") + coordinate("t").pow(2), sphere_factor({"x1", "x2", "x3"}))}) {
        const auto B = curvature(M);
        const std::size_t m = M.dim();
        // ∇_e K_abcd = ∂_e K_abcd − Σ_p Γ^p_{e•} K_...p...
        auto nablaK = [&](std::size_t e, std::size_t a, std::size_t b, std::size_t c, std::size_t d, const Valuation& p) {
            double v = evaluate(differentiate(B.K(a, b, c, d), M.coord(e)), p);
            for (std::size_t q = 0; q < m; ++q) {
                v -= evaluate(B.second(e, a, q), p) * evaluate(B.K(q, b, c, d), p);
                v -= evaluate(B.second(e, b, q), p) * evaluate(B.K(a, q, c, d), p);
                v -= evaluate(B.second(e, c, q), p) * evaluate(B.K(a, b, q, d), p);
                v -= evaluate(B.second(e, d, q), p) * evaluate(B.K(a, b, c, q), p);
            }
            return v;
        };
        for (const auto& p : M.off_sigma_samples(10)) {
            for (std::size_t a = 0; a < m; ++a)
                for (std::size_t b = a + 1; b < m; ++b)
                    for (std::size_t c = 0; c < m; ++c)
                        for (std::size_t d = c + 1; d < m; ++d)
                            for (std::size_t e = 0; e < m; ++e) {
                                const double s = nablaK(e, a, b, c, d, p) + nablaK(c, a, b, d, e, p) + nablaK(d, a, b, e, c, p);
                                const double scale = std::abs(nablaK(e, a, b, c, d, p)) + 1.0;
                                EXPECT_LE(std::abs(s), 1e-8 * scale);
                            }
        }
    }
}

TEST(KulkarniNomizu, MetricSquared) {
    const auto M = lumpy();
    const Tensor g = metric_tensor(M.g());
    const Tensor gg = kulkarni_nomizu(g, g);
    for (std::size_t n = 0; n < gg.components().size(); ++n) {
        const auto i = gg.index_of(n);
        const Expr expected = 2 * (M.g(i[0], i[2]) * M.g(i[1], i[3]) - M.g(i[0], i[3]) * M.g(i[1], i[2]));
        EXPECT_EQ(gg.components()[n], expected);
    }
}

TEST(KulkarniNomizu, CommutesAndEuclideanValue) {
    const auto M = lumpy();
    const auto B = curvature(M);
    const Tensor g = metric_tensor(M.g());
    const Tensor a = kulkarni_nomizu(B.Ric, g), b = kulkarni_nomizu(g, B.Ric);
    for (std::size_t n = 0; n < a.components().size(); ++n) EXPECT_TRUE((a.components()[n] - b.components()[n]).is_zero());
    EXPECT_EQ(check_curvature_symmetries(a), "");

    const Tensor d = metric_tensor(diagonal({1, 1, 1, 1}));
    EXPECT_EQ(kulkarni_nomizu(d, d)(0, 1, 0, 1), Expr(2));
}

TEST(KulkarniNomizu, RejectsAsymmetricInput) {
    Tensor a(3, 2);
    a(0, 1) = Expr(1);
    EXPECT_THROW(kulkarni_nomizu(a, a), CurvatureError);
}

TEST(Weyl, ConformallyFlatVanishes) {
    const Expr e = exp(2 * coordinate("x1"));
    const MetricChart M(names(4), diagonal({e, e, e, e}), 3, Expr(1));
    const auto B = curvature(M);
    for (const auto& c : B.W.components()) EXPECT_TRUE(c.is_zero()) << c;
}

TEST(Weyl, ModelMetricVanishes) {
    const auto B = curvature(model());
    for (const auto& c : B.W.components()) EXPECT_TRUE(c.is_zero());
    for (const auto& c : B.Wup.components()) EXPECT_TRUE(c.is_zero());
}

TEST(Frame, ComponentsTransformMultilinearly) {
    const auto M = warped(Expr(1) + coordinate("t").pow(2), sphere_factor({"x1", "x2", "x3"}));
    const auto B = curvature(M);
    const Frame F = build_adapted_frame(M);
    const Tensor KF = in_frame(B.K, F.E);
    for (const auto& p : M.off_sigma_samples(3)) {
        for (std::size_t n = 0; n < KF.components().size(); n += 7) {
            const auto i = KF.index_of(n);
            double direct = 0;
            for (std::size_t a = 0; a < 4; ++a)
                for (std::size_t b = 0; b < 4; ++b)
                    for (std::size_t c = 0; c < 4; ++c)
                        for (std::size_t d = 0; d < 4; ++d)
                            direct += evaluate(F.E[i[0]][a], p) * evaluate(F.E[i[1]][b], p) * evaluate(F.E[i[2]][c], p) *
                                      evaluate(F.E[i[3]][d], p) * evaluate(B.K(a, b, c, d), p);
            EXPECT_NEAR(evaluate(KF.components()[n], p), direct, 1e-10 * std::max(1.0, std::abs(direct)));
        }
    }
}
