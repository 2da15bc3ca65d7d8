#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace mgeo::csv {

/// Splits one CSV line on commas. No quoting support; the documented input
/// formats never quote fields.
std::vector<std::string_view> split(std::string_view line);

/// Parses a decimal number (decimal point, no thousands separators).
/// Throws DataError on junk.
double parse_number(std::string_view field);

/// Shortest round-trip text for a double, locale-independent. All numeric
/// output goes through this so reruns are byte-identical.
std::string format_number(double v);

/// Line-oriented CSV writer with deterministic formatting.
class Writer {
public:
    explicit Writer(const std::string& path);
    void header(std::string_view line);
    void field(std::string_view s);
    void field(double v);
    void field(std::int64_t v);
    void end_row();

private:
    std::ofstream out_;
    bool row_open_ = false;
};

} // namespace mgeo::csv
