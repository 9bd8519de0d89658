#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace sentinel::csv {

/// Shortest representation that parses back to the same double.
std::string number(double value);

/// Quotes a field when it contains a comma, quote or newline.
std::string field(std::string_view text);

std::string join(const std::vector<std::string>& fields);

/// Splits one CSV record, honouring double-quoted fields.
std::vector<std::string> split(std::string_view line);

/// Reads rows until EOF; blank lines are skipped.
std::vector<std::vector<std::string>> read_rows(std::istream& in);

double to_double(std::string_view text);
long long to_int(std::string_view text);

}  // namespace sentinel::csv
