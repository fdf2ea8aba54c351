#pragma once

// Text syntax for expressions:
//   3/2*x1^2 - x2,  (1 + t^2)^-1,  sqrt(1 + x1),  cbrt(x), root(x, 5), exp(2*x1)
//   f(t), f'(t), f''(t)   function symbols applied to a coordinate
//   f(0), f'(0)           values at zero (declared rationals when known)
// Output of Expr::str() parses back to the same expression.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "rlc/expr/expr.hpp"

namespace rlc {

class ParseError : public ExprError {
public:
    using ExprError::ExprError;
};

struct ParseContext {
    std::vector<std::string> coordinates;
    std::set<std::string> functions;
    // declared[name][n] = f^(n)(0)
    std::map<std::string, std::vector<mpq_class>> declared;
};

Expr parse_expr(const std::string& text, const ParseContext& ctx);

}  // namespace rlc
