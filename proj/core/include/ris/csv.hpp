#ifndef RIS_CSV_HPP
#define RIS_CSV_HPP

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace ris::csv
{

/// Shortest round-trip-safe decimal (17 significant digits).
std::string number(double value);

/// Splits one line on commas and trims surrounding blanks from each field.
std::vector<std::string> split(std::string_view line);

/// Parses a decimal; throws UsageError naming @p field on malformed input.
double parse_number(const std::string& text, const std::string& field);

/// Writes fields joined by commas and terminated by '\n'.
void write_row(std::ostream& os, const std::vector<std::string>& fields);

}  // namespace ris::csv

#endif  // RIS_CSV_HPP
