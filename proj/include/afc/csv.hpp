#pragma once

#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace afc::csv {

// Scientific notation, 12 significant digits, '.' separator regardless of locale.
std::string number(double x);

// Accumulates a CSV document in memory; the header row is mandatory.
class Table {
public:
    explicit Table(std::vector<std::string> header);

    void add_row(std::span<const double> values);
    void add_row(std::initializer_list<double> values) { add_row(std::span<const double>(values.begin(), values.size())); }

    std::size_t columns() const { return columns_; }
    std::size_t rows() const { return rows_; }
    const std::string& str() const { return text_; }

private:
    std::size_t columns_ = 0;
    std::size_t rows_ = 0;
    std::string text_;
};

} // namespace afc::csv
