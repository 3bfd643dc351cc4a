#include "afc/csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace afc::csv {

std::string number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 11);
    return std::string(buf, res.ptr);
}

Table::Table(std::vector<std::string> header) : columns_(header.size()) {
    if (header.empty()) throw std::invalid_argument("CSV header must not be empty");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) text_ += ',';
        text_ += header[i];
    }
    text_ += '\n';
}

void Table::add_row(std::span<const double> values) {
    if (values.size() != columns_) throw std::invalid_argument("CSV row width does not match header");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) text_ += ',';
        text_ += number(values[i]);
    }
    text_ += '\n';
    ++rows_;
}

} // namespace afc::csv
