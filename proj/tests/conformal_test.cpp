#include <gtest/gtest.h>

#include <random>

#include "rlc/conformal/conformal.hpp"
#include "rlc/degeneracy/classify.hpp"
#include "support.hpp"

using namespace rlc;
using namespace testing_support;

namespace {

// small random polynomial in the chart coordinates
Expr random_poly(const MetricChart& M, std::mt19937& rng, bool with_tau = true) {
    std::uniform_int_distribution<int> coef(-2, 2);
    Expr p;
    for (std::size_t a = 0; a < M.dim(); ++a) {
        if (!with_tau && a == M.tau_index()) continue;
        const Expr x = Expr::atom(M.coord(a));
        p += Expr::rational(coef(rng), 3) * x;
        if (a + 1 < M.dim()) p += Expr::rational(coef(rng), 5) * x * Expr::atom(M.coord(a + 1));
    }
    return p;
}

FundamentalForms forms(const MetricChart& M) { return second_fundamental(M, curvature(M), radical_field(M)); }

// (1 − 2x4) on x1..x3 makes II_Σ = g_Σ for R = ∂_4
MetricChart umbilic() {
    const Expr s = Expr(1) - 2 * coordinate("x4");
    return MetricChart(names(4), diagonal({s, s, s, coordinate("x4")}), 3, Expr(1));
}

}  // namespace

TEST(Rescale, ZeroIsIdentity) {
    const auto M = warped(Expr(1) + coordinate("t"), {1, 1, 1});
    EXPECT_EQ(rescale(M, Expr(0)).g(), M.g());
}

TEST(Rescale, DeterminantScalesAndStaysTransverse) {
    const auto M = model();
    const Expr f = coordinate("x1");
    const auto N = rescale(M, f);
    const auto r = is_transverse_type_changing(N);
    EXPECT_TRUE(r.transverse);
    EXPECT_TRUE((r.det - exp(2 * f).pow(4) * coordinate("x4")).is_zero());
}

TEST(Rescale, ConstantFactorScalesEveryEntry) {
    const auto M = warped(Expr(1) + coordinate("t"), {1, 1, 1});
    const auto N = rescale(M, Expr(3));
    for (std::size_t a = 0; a < 4; ++a) EXPECT_EQ(N.g(a, a), exp(Expr(6)) * M.g(a, a));
}

TEST(SecondFormLaw, Examples) {
    const auto M = model();
    EXPECT_TRUE(verify_II_law(M, Expr(0)).holds);
    EXPECT_TRUE(verify_II_law(M, coordinate("x1")).holds);
    const auto Fb = forms(rescale(M, coordinate("x4")));
    for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(Fb.II_sigma[i][i], Expr(-1));
    EXPECT_TRUE(verify_II_law(M, coordinate("x4")).holds);
}

TEST(SecondFormLaw, NotConformallyInvariant) {
    const auto M = model();
    EXPECT_TRUE(proportional_to(M, forms(M).II_sigma, forms(M).g_sigma).zero);
    const auto N = rescale(M, coordinate("x4"));
    const auto F = forms(N);
    const auto P = proportional_to(N, F.II_sigma, F.g_sigma);
    EXPECT_FALSE(P.zero);
    EXPECT_TRUE(P.proportional);
}

TEST(SecondFormLaw, RandomFactors) {
    std::mt19937 rng(11);
    for (const auto& M : {model(), warped(Expr(1) + coordinate("t"), sphere_factor({"x1", "x2", "x3"}))})
        for (int n = 0; n < 3; ++n) {
            const Expr f = random_poly(M, rng);
            const auto r = verify_II_law(M, f);
            EXPECT_TRUE(r.holds) << f;
            EXPECT_LE(r.max_residual, 1e-9);
        }
}

TEST(Gradient, Examples) {
    const auto M = model();
    const auto a = grad_extended(M, coordinate("x1"));
    EXPECT_TRUE(a.extends);
    EXPECT_EQ(a.field, (Vector{1, 0, 0, 0}));
    EXPECT_FALSE(grad_extended(M, coordinate("x4")).extends);
    const auto c = grad_extended(M, coordinate("x4").pow(2));
    EXPECT_TRUE(c.extends);
    EXPECT_EQ(c.field, (Vector{0, 0, 0, 2}));
}

TEST(Gradient, MatchesInverseMetricOracle) {
    const Expr t = coordinate("t"), x1 = coordinate("x1");
    const auto M = warped(Expr(1) + t.pow(2), sphere_factor({"x1", "x2", "x3"}));
    const Expr f = x1 * t + t.pow(3) + coordinate("x2");
    const auto G = grad_extended(M, f);
    for (const auto& p : M.off_sigma_samples(5)) {
        const Eigen::MatrixXd gi = numeric(M.g(), p).inverse();
        for (std::size_t a = 0; a < 4; ++a) {
            double v = 0;
            for (std::size_t b = 0; b < 4; ++b) v += gi(a, b) * evaluate(differentiate(f, M.coord(b)), p);
            EXPECT_NEAR(evaluate(G.field[a], p), v, 1e-9 * std::max(1.0, std::abs(v)));
        }
    }
}

TEST(ThirdFormLaw, Examples) {
    EXPECT_TRUE(verify_III_law(model(), Expr(0)).holds);
    EXPECT_TRUE(verify_III_law(model(), coordinate("x4").pow(2)).holds);
    const Expr t = coordinate("t");
    const auto W = warped(Expr(1) + t.pow(2), {1, 1, 1});
    EXPECT_TRUE(verify_III_law(W, t.pow(2) * (Expr(1) + coordinate("x1"))).holds);
}

TEST(ThirdFormLaw, RequiresFlatSecondForm) {
    EXPECT_THROW(verify_III_law(model(), coordinate("x4")), NotIIFlat);
}

TEST(Flatten, SecondFormUmbilic) {
    const auto M = umbilic();
    EXPECT_EQ(flatten_II(M), coordinate("x4"));
    const auto N = rescale(M, coordinate("x4"));
    EXPECT_TRUE(proportional_to(N, forms(N).II_sigma, forms(N).g_sigma).zero);
}

TEST(Flatten, AlreadyFlatGivesZero) {
    EXPECT_EQ(flatten_II(model()), Expr(0));
    EXPECT_EQ(flatten_III(model()), Expr(0));
}

TEST(Flatten, LinearWarping) {
    const auto M = warped(Expr(1) + coordinate("t"), sphere_factor({"x1", "x2", "x3"}));
    const Expr f = flatten_II(M);
    EXPECT_FALSE(f.is_zero());
    const auto N = rescale(M, f);
    EXPECT_TRUE(proportional_to(N, forms(N).II_sigma, forms(N).g_sigma).zero);
}

TEST(Flatten, ThirdFormQuadraticWarping) {
    const Expr t = coordinate("t");
    const auto M = warped(Expr(1) + t.pow(2), {1, 1, 1});
    const Expr f = flatten_III(M);
    EXPECT_FALSE(f.is_zero());
    const auto N = rescale(M, f);
    const auto B = curvature(N);
    const auto F = second_fundamental(N, B, radical_field(N));
    EXPECT_TRUE(proportional_to(N, F.II_sigma, F.g_sigma).zero);
    EXPECT_TRUE(proportional_to(N, third_fundamental(N, B, F), F.g_sigma).zero);
}

TEST(Flatten, NotConformallyFlatIsAnError) {
    const MetricChart M(names(4), diagonal({Expr(1) + coordinate("x4"), 1, 1, coordinate("x4")}), 3, Expr(1));
    EXPECT_THROW(flatten_II(M), DegeneracyError);
}

TEST(WeylInvariance, Examples) {
    const Expr t = coordinate("t");
    for (const auto& [M, f] : {std::pair{model(), coordinate("x1") * coordinate("x2")},
                               std::pair{warped(Expr(1) + t, {1, 1, 1}), t}, std::pair{model(), Expr(0)}}) {
        const auto r = verify_weyl_invariance(M, f);
        EXPECT_TRUE(r.W.holds);
        EXPECT_TRUE(r.Wup.holds);
        EXPECT_TRUE(r.identical);
        EXPECT_LE(r.W.max_residual, 1e-9);
    }
}

TEST(WeylInvariance, CurvedExample) {
    const Expr t = coordinate("t");
    const auto M = warped(Expr(1) + t + t.pow(2), {Expr(1) + coordinate("x1").pow(2), 1, 1});
    const auto r = verify_weyl_invariance(M, coordinate("x2") * t + coordinate("x1"));
    EXPECT_TRUE(r.W.holds);
    EXPECT_TRUE(r.Wup.holds);
}

TEST(ConformalInvariance, FlagsSurviveRescaling) {
    std::mt19937 rng(5);
    const Expr t = coordinate("t");
    for (const auto& M : {model(), warped(Expr(1) + t, {1, 1, 1}), umbilic()}) {
        const auto c0 = classify(M);
        for (int n = 0; n < 5; ++n) {
            const Expr f = random_poly(M, rng);
            const auto c = classify(rescale(M, f));
            EXPECT_EQ(c.type_changing.transverse, c0.type_changing.transverse);
            EXPECT_EQ(c.transversality.kind, c0.transversality.kind);
            EXPECT_EQ(c.conf_II_flat.value, c0.conf_II_flat.value) << f;
            EXPECT_EQ(c.conf_III_flat.value, c0.conf_III_flat.value) << f;
            for (std::size_t a = 0; a < M.dim(); ++a)
                EXPECT_TRUE((c.radical[a] * c0.radical[M.tau_index()] - c0.radical[a] * c.radical[M.tau_index()]).is_zero());
        }
    }
}
