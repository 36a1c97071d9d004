#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace rbds {

// Parses a series from text. Values are separated by commas and/or newlines.
// A first line whose selected field is not a number is taken as a header.
// Two or more rows of equal width form a table and `column` picks the field
// of each row; otherwise every field is a value, in reading order.
std::vector<double> parse_series(std::string_view text, std::size_t column = 0);

} // namespace rbds
