#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "kato/monoid.hpp"
#include "kato/semialg.hpp"

namespace kato::cli {

/// Optional per-chart defaults from the "options" object.
struct ChartOptions {
  std::optional<std::size_t> degree_bound;
  std::optional<double> tolerance;
  std::optional<std::uint64_t> seed;
};

struct ChartDocument {
  std::string name;
  MonoidSpec spec;
  ChartOptions options;
};

/// Strict parse: unknown or mistyped fields throw ParseError.
ChartDocument parse_chart(const std::string& json_text);
ChartDocument load_chart(const std::string& path);

/// 1-based sorted index list such as "[1,3]" to 0-based generator indices.
std::vector<std::size_t> parse_face(const std::string& json_text, std::size_t generator_count);

/// Array of {radius, turns}. Integers and rational strings ("1/3") give an
/// exact point; any JSON float makes the whole point floating.
KnPoint parse_kn_point(const std::string& json_text);

/// Runs the command line `args` (without the program name). Returns the
/// process exit code: 0 success, 1 falsified property, 2 input error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace kato::cli
