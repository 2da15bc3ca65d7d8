#include "marketgeo/csv.hpp"

#include "marketgeo/errors.hpp"

#include <charconv>

namespace mgeo::csv {

std::vector<std::string_view> split(std::string_view line) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(line.substr(start));
            break;
        }
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return fields;
}

double parse_number(std::string_view field) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw DataError("invalid number '" + std::string(field) + "'");
    return v;
}

std::string format_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

Writer::Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw DataError("cannot open for writing: " + path);
}

void Writer::header(std::string_view line) {
    out_ << line << '\n';
}

void Writer::field(std::string_view s) {
    if (row_open_) out_ << ',';
    out_ << s;
    row_open_ = true;
}

void Writer::field(double v) {
    field(std::string_view(format_number(v)));
}

void Writer::field(std::int64_t v) {
    field(std::string_view(std::to_string(v)));
}

void Writer::end_row() {
    out_ << '\n';
    row_open_ = false;
}

} // namespace mgeo::csv
