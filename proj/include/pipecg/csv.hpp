#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pipecg {

/// Shortest decimal representation that round-trips to the same double.
std::string format_double(double value);

/// RFC-4180 style field quoting (only when the field needs it).
std::string csv_escape(const std::string& field);

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);

/// Empty string for a missing value ("not computed", as opposed to 0).
std::string format_optional(const std::optional<double>& value);

}  // namespace pipecg
