#include "ris/csv.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <ostream>

#include "ris/errors.hpp"

namespace ris::csv
{

std::string number(double value)
{
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::vector<std::string> split(std::string_view line)
{
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true)
  {
    const std::size_t comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t'))
    {
      field.remove_prefix(1);
    }
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
    {
      field.remove_suffix(1);
    }
    out.emplace_back(field);
    if (comma == std::string_view::npos)
    {
      break;
    }
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& text, const std::string& field)
{
  if (text.empty())
  {
    throw UsageError(field, "empty numeric field");
  }
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE)
  {
    throw UsageError(field, "not a number: '" + text + "'");
  }
  return value;
}

void write_row(std::ostream& os, const std::vector<std::string>& fields)
{
  for (std::size_t k = 0; k < fields.size(); ++k)
  {
    if (k > 0)
    {
      os << ',';
    }
    os << fields[k];
  }
  os << '\n';
}

}  // namespace ris::csv
