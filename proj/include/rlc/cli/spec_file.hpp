#pragma once

// Plain-text metric description read by the command-line tool.
//
//   name = model
//   dim = 4
//   coords = x1 x2 x3 x4
//   tau = x4               optional, defaults to the last coordinate
//   tau_unit = 1           optional
//   seed = 7               optional
//
//   [metric]               upper triangle, 1-based, missing entries are zero
//   g(1,1) = 1
//   g(4,4) = x4
//
//   [functions]            f(0), f'(0), f''(0)
//   f = 1, 1/3, -2
//
//   [box]
//   x1 = -0.5 0.5
//
// A warped product replaces [metric] with `kind = warped`, a [warped] section holding
// `f = <expr in the last coordinate>` and a [base] section indexed over the base coordinates.
// Lines starting with '#' are comments.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlc/expr/parse.hpp"
#include "rlc/geometry/chart.hpp"
#include "rlc/warped/warped.hpp"

namespace rlc {

class SpecFileError : public ExprError {
public:
    using ExprError::ExprError;
};

struct MetricSpecFile {
    std::string name;
    std::vector<std::string> coords;
    std::string tau;                 // empty: the last coordinate
    std::optional<Expr> tau_unit;
    bool warped = false;
    ExprMatrix metric;               // full matrix, or the base metric when warped
    std::optional<Expr> warping;     // f(t)
    std::map<std::string, std::vector<mpq_class>> functions;
    std::map<std::string, std::pair<double, double>> box;
    std::optional<std::uint64_t> seed;

    std::size_t dim() const { return coords.size(); }
    friend bool operator==(const MetricSpecFile&, const MetricSpecFile&) = default;
};

MetricSpecFile parse_spec_file(const std::string& text);
MetricSpecFile load_spec_file(const std::string& path);
std::string format_spec_file(const MetricSpecFile& spec);

// coordinates and declared function symbols of the spec
ParseContext parse_context(const MetricSpecFile& spec);

// seed overrides the file's seed when given
ChartOptions chart_options(const MetricSpecFile& spec, std::optional<std::uint64_t> seed = {});
MetricChart to_chart(const MetricSpecFile& spec, std::optional<std::uint64_t> seed = {});
WarpedSpec to_warped(const MetricSpecFile& spec, std::optional<std::uint64_t> seed = {});

}  // namespace rlc
