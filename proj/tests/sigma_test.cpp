#include <random>

#include <gtest/gtest.h>

#include "rlc/expr/sigma.hpp"

using namespace rlc;

namespace {

Expr x1() { return coordinate("x1"); }
Expr x4() { return coordinate("x4"); }
Expr t() { return coordinate("t"); }

Sigma model() { return Sigma(coordinate_id("x4"), Expr(1)); }

}  // namespace

TEST(Sigma, RestrictSubstitutes) {
    const Sigma s = model();
    EXPECT_EQ(s.restrict(x1() + 3 * x4()), x1());
    EXPECT_EQ(s.restrict(x4() * (Expr(1) / x4())), Expr(1));
}

TEST(Sigma, RestrictFunctionSymbols) {
    const AtomId tid = coordinate_id("t");
    const Sigma opaque(tid, Expr(1));
    const Expr f = function("f", tid), fp = function("f", tid, 1);
    EXPECT_EQ(opaque.restrict(f.pow(2) - t() * fp), function_at_zero("f", 0).pow(2));

    const Sigma declared(tid, Expr(1), {{"f", {mpq_class(1), mpq_class(0), mpq_class(2)}}});
    EXPECT_EQ(declared.restrict(f.pow(2) - t() * fp), Expr(1));
    // f'(t)/t restricts to f''(0) once f'(0) = 0 is declared
    EXPECT_EQ(declared.restrict(fp / t()), Expr(2));
    EXPECT_THROW(opaque.restrict(fp / t()), PoleOnSigma);
}

TEST(Sigma, DivideExact) {
    const Sigma s = model();
    EXPECT_EQ(s.divide(x4().pow(2) + x1() * x4()), x4() + x1());
    EXPECT_TRUE(s.divide(Expr(0)).is_zero());
    EXPECT_THROW(s.divide(x1()), NotDivisible);

    const AtomId tid = coordinate_id("t");
    const Sigma ts(tid, Expr(1));
    EXPECT_EQ(ts.divide(t() * function("f", tid, 1)), function("f", tid, 1));
}

TEST(Sigma, DivideByUnitMultiple) {
    const AtomId tid = coordinate_id("t");
    const Sigma s(tid, Expr(-1));  // τ = -t
    EXPECT_EQ(s.divide(t().pow(2)), -t());
    EXPECT_EQ(s.tau(), -t());
}

TEST(Sigma, DivideThroughRoots) {
    const Sigma s = model();
    const Expr r = sqrt(Expr(1) + x4());
    const Expr k = s.divide(r - 1);
    EXPECT_TRUE((k * x4() - (r - 1)).is_zero()) << k;
}

TEST(Laurent, SimplePole) {
    const Sigma s = model();
    const LaurentForm l = s.laurent(x1() + Expr(5) / x4());
    EXPECT_EQ(l.a0, x1());
    EXPECT_EQ(l.a1, Expr(5));
    EXPECT_TRUE(l.a2.is_zero());
    EXPECT_EQ(l.order, 1u);
}

TEST(Laurent, DoublePoleWithUnit) {
    const AtomId tid = coordinate_id("t");
    const Sigma s(tid, Expr(-1));
    const Expr e = (Expr(3) + x1() * t() + t().pow(3)) / (t().pow(2) * (Expr(1) + t()));
    const LaurentForm l = s.laurent(e);
    EXPECT_EQ(l.order, 2u);
    const Expr tau = s.tau();
    EXPECT_TRUE((l.a0 + l.a1 / tau + l.a2 / tau.pow(2) - e).is_zero());
    EXPECT_FALSE(depends_on(l.a1, tid));
    EXPECT_FALSE(depends_on(l.a2, tid));
}

TEST(Laurent, TripleOrderRejected) {
    EXPECT_THROW(model().laurent(Expr(1) / x4().pow(3)), PoleOrderTooHigh);
}

TEST(Laurent, RemovableSingularityHasOrderZero) {
    const Sigma s = model();
    EXPECT_EQ(s.laurent((x4().pow(2) + x1() * x4()) / x4()).order, 0u);
}

TEST(LaurentProperties, ReassemblyOnRandomExpressions) {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> c(-4, 4);
    const Sigma s(coordinate_id("x4"), Expr(2) + x1());
    const Expr tau = s.tau();
    for (int i = 0; i < 100; ++i) {
        Expr num;
        for (int d = 0; d < 4; ++d) num += Expr(c(rng)) * x4().pow(d) * (Expr(c(rng)) + x1() * c(rng));
        const Expr unit = Expr(1) + x4() * c(rng) + x1().pow(2);
        const int order = i % 3;
        const Expr e = num / (unit * x4().pow(order));
        const LaurentForm l = s.laurent(e);
        EXPECT_LE(l.order, 2u);
        EXPECT_TRUE((l.a0 + l.a1 / tau + l.a2 / tau.pow(2) - e).is_zero()) << e;
        EXPECT_FALSE(depends_on(l.a1, s.coord()));
        EXPECT_FALSE(depends_on(l.a2, s.coord()));
    }
}
