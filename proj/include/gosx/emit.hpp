#pragma once

// Tabular output: CSV with a header row or JSON with a configuration echo.
// Numbers carry 15 significant digits in both formats.

#include <string>
#include <vector>

#include "json.hpp"

namespace gosx {

enum class Format { csv, json };

Format parse_format(const std::string& text);
std::string to_string(Format format);

/// printf("%.15g"); inf and nan spelled inf, -inf, nan.
std::string format_number(double v);
/// v rounded to 15 significant digits (exactly what format_number prints).
double round15(double v);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    /// Echoed verbatim in JSON; keys are emitted sorted.
    nlohmann::json config = nlohmann::json::object();
    /// Resolved command line; first line of CSV (as a `# ` comment) and a JSON field.
    std::string command;

    void validate() const;
};

/// Throws DomainError for an empty or ragged table.
std::string emit(const Table& table, Format format);

/// Inverse of emit for CSV: skips `#` lines, reads the header and rows.
Table parse_csv(const std::string& text);

/// JSON number with 15 significant digits, or a string for non-finite values.
nlohmann::json json_number(double v);
nlohmann::json json_numbers(const std::vector<double>& values);

}  // namespace gosx
