#pragma once

#include <string>
#include <string_view>

namespace dimcalc {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_number(double value);

/// True when `name` lexes as a plain (unquoted) identifier.
bool is_plain_identifier(std::string_view name);

/// `name` as written in model source: bare when plain, double-quoted otherwise.
std::string format_identifier(std::string_view name);

}  // namespace dimcalc
