#pragma once

#include <string>
#include <vector>

namespace cwh::csv {

// Minimal RFC-4180-ish row parser: comma separated, double-quote quoting,
// embedded quotes doubled. No multi-line fields.
std::vector<std::string> parse_row(const std::string& line);

// Quotes a field if it contains a comma, quote, or newline.
std::string quote_field(const std::string& field);

std::string join_row(const std::vector<std::string>& fields);

}  // namespace cwh::csv
