#include "cbrlab/csv.hpp"

#include <cstdio>
#include <sstream>

#include "cbrlab/errors.hpp"

namespace cbr {

CsvTable::CsvTable(std::vector<std::string> headers) : headers_(std::move(headers)) {
    if (headers_.empty()) throw ValidationError("CsvTable: need at least one column");
}

std::string CsvTable::format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void CsvTable::add_row(const std::vector<double>& row) {
    if (row.size() != headers_.size()) throw ValidationError("CsvTable: row width mismatch");
    std::vector<std::string> cells;
    cells.reserve(row.size());
    for (double v : row) cells.push_back(format_double(v));
    rows_.push_back(std::move(cells));
}

void CsvTable::add_text_row(const std::vector<std::string>& row) {
    if (row.size() != headers_.size()) throw ValidationError("CsvTable: row width mismatch");
    rows_.push_back(row);
}

std::string CsvTable::str() const {
    std::ostringstream out;
    auto escape = [](const std::string& s) {
        if (s.find_first_of(",\"\n") == std::string::npos) return s;
        std::string q = "\"";
        for (char c : s) {
            if (c == '"') q += "\"\"";
            else q += c;
        }
        return q + "\"";
    };
    for (std::size_t i = 0; i < headers_.size(); ++i)
        out << (i ? "," : "") << escape(headers_[i]);
    out << "\n";
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << escape(row[i]);
        out << "\n";
    }
    return out.str();
}

}  // namespace cbr
