#pragma once

#include <string>
#include <vector>

namespace cbr {

// Rectangular CSV table with `name[unit]` headers; floats are printed with
// 17 significant digits so re-runs are byte-identical on the same build.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> headers);

    void add_row(const std::vector<double>& row);
    void add_text_row(const std::vector<std::string>& row);
    std::string str() const;
    std::size_t n_rows() const { return rows_.size(); }

    static std::string format_double(double v);

private:
    std::vector<std::string> headers_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace cbr
