#pragma once

#include <string>

namespace lvg {

/// Shortest decimal string that round-trips to the same double
/// (std::to_chars). Used everywhere a float reaches a report or CSV so
/// identical inputs produce byte-identical output.
std::string format_double(double v);

/// Parses a double, rejecting trailing garbage. Throws std::invalid_argument.
double parse_double(const std::string& s);

/// Parses an integer vertex id / count. Throws std::invalid_argument.
long long parse_int(const std::string& s);

}  // namespace lvg
