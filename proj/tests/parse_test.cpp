#include <gtest/gtest.h>

#include "rlc/expr/parse.hpp"

using namespace rlc;

namespace {

ParseContext ctx() {
    ParseContext c;
    c.coordinates = {"x1", "x2", "t"};
    c.functions = {"f"};
    return c;
}

}  // namespace

TEST(Parse, Arithmetic) {
    const Expr x1 = coordinate("x1"), x2 = coordinate("x2");
    EXPECT_EQ(parse_expr("3/2*x1^2 - x2", ctx()), Expr::rational(3, 2) * x1.pow(2) - x2);
    EXPECT_EQ(parse_expr("-(x1 + 1)^-2", ctx()), -Expr(1) / (x1 + 1).pow(2));
    EXPECT_EQ(parse_expr("x1^(-1)", ctx()), Expr(1) / x1);
    EXPECT_EQ(parse_expr("2^3/4", ctx()), Expr(2));
}

TEST(Parse, FunctionsAndRoots) {
    const AtomId t = coordinate_id("t");
    EXPECT_EQ(parse_expr("f''(t)", ctx()), function("f", t, 2));
    EXPECT_EQ(parse_expr("f'(0)", ctx()), function_at_zero("f", 1));
    auto declared = ctx();
    declared.declared["f"] = {mpq_class(1), mpq_class(0)};
    EXPECT_EQ(parse_expr("f'(0) + f(0)", declared), Expr(1));
    EXPECT_EQ(parse_expr("sqrt(4*x1^2)", ctx()), 2 * coordinate("x1"));
    EXPECT_EQ(parse_expr("cbrt(x1)^3", ctx()), coordinate("x1"));
    EXPECT_EQ(parse_expr("exp(0)", ctx()), Expr(1));
}

TEST(Parse, Errors) {
    EXPECT_THROW(parse_expr("y + 1", ctx()), ParseError);
    EXPECT_THROW(parse_expr("g(t)", ctx()), ParseError);
    EXPECT_THROW(parse_expr("1.5*x1", ctx()), ParseError);
    EXPECT_THROW(parse_expr("x1 +", ctx()), ParseError);
    EXPECT_THROW(parse_expr("1/(x1 - x1)", ctx()), ParseError);
    EXPECT_THROW(parse_expr("f(x1 + 1)", ctx()), ParseError);
}

TEST(Parse, PrintedFormRoundTrips) {
    const char* samples[] = {
        "3/2*x1^2 - x2/(1 + t)",
        "f(t)^2*f'(t) - t*f''(t)/(x1^2 + 1)",
        "sqrt(1 + x1^2)/(x2 - 3) + cbrt(t + 2)",
        "exp(2*x1)*(1 - t) + root(x2 + 1, 5)",
        "-x1/(2*x2 + 4) + f'(0)",
    };
    for (const char* s : samples) {
        const Expr e = parse_expr(s, ctx());
        EXPECT_EQ(parse_expr(e.str(), ctx()), e) << e.str();
    }
}
