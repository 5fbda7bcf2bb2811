#include "gosx/emit.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "gosx/distributions.hpp"
#include "gosx/errors.hpp"

namespace gosx {

Format parse_format(const std::string& text) {
    std::string t;
    for (char c : text) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (t == "csv") return Format::csv;
    if (t == "json") return Format::json;
    throw DomainError("unknown format '" + text + "' (expected csv or json)");
}

std::string to_string(Format format) { return format == Format::csv ? "csv" : "json"; }

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0.0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

double round15(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(format_number(v));
}

nlohmann::json json_number(double v) {
    if (!std::isfinite(v)) return format_number(v);
    return round15(v);
}

nlohmann::json json_numbers(const std::vector<double>& values) {
    nlohmann::json out = nlohmann::json::array();
    for (double v : values) out.push_back(json_number(v));
    return out;
}

void Table::validate() const {
    if (columns.empty()) throw DomainError("table has no columns");
    if (rows.empty()) throw DomainError("table has no rows");
    for (const auto& row : rows) {
        if (row.size() != columns.size()) throw DomainError("table row width differs from the header");
    }
}

std::string emit(const Table& table, Format format) {
    table.validate();
    if (format == Format::csv) {
        std::ostringstream os;
        if (!table.command.empty()) os << "# " << table.command << "\n";
        for (std::size_t i = 0; i < table.columns.size(); ++i) os << (i ? "," : "") << table.columns[i];
        os << "\n";
        for (const auto& row : table.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << format_number(row[i]);
            os << "\n";
        }
        return os.str();
    }
    nlohmann::json doc;
    doc["command"] = table.command;
    doc["config"] = table.config;
    doc["columns"] = table.columns;
    nlohmann::json data = nlohmann::json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        std::vector<double> col;
        col.reserve(table.rows.size());
        for (const auto& row : table.rows) col.push_back(row[c]);
        data[table.columns[c]] = json_numbers(col);
    }
    doc["data"] = data;
    return doc.dump(2) + "\n";
}

Table parse_csv(const std::string& text) {
    Table table;
    std::istringstream is(text);
    std::string line;
    bool header = false;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cell;
        std::istringstream cs(s);
        while (std::getline(cs, cell, ',')) out.push_back(cell);
        return out;
    };
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (table.command.empty()) table.command = line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            continue;
        }
        if (!header) {
            table.columns = split(line);
            header = true;
            continue;
        }
        std::vector<double> row;
        for (const auto& cell : split(line)) row.push_back(parse_real(cell));
        table.rows.push_back(std::move(row));
    }
    table.validate();
    return table;
}

}  // namespace gosx
