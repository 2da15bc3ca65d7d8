#include "marketgeo/panel.hpp"

#include "marketgeo/csv.hpp"
#include "marketgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace mgeo {

Eigen::Index PriceTable::col(Date d) const {
    auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d)
        throw DataError("date " + d.to_string() + " not in the panel calendar");
    return static_cast<Eigen::Index>(it - dates.begin());
}

std::pair<Eigen::Index, Eigen::Index> ReturnPanel::window_cols(const DateRange& range) const {
    auto lo = std::lower_bound(dates.begin(), dates.end(), range.first);
    auto hi = std::upper_bound(dates.begin(), dates.end(), range.last);
    return {static_cast<Eigen::Index>(lo - dates.begin()),
            static_cast<Eigen::Index>(hi - dates.begin())};
}

double IndexSeries::at(Date d) const {
    auto it = std::lower_bound(dates.begin(), dates.end(), d);
    if (it == dates.end() || *it != d)
        throw DataError("index series has no value on " + d.to_string());
    return values[static_cast<std::size_t>(it - dates.begin())];
}

namespace {

struct Cell {
    double price;
    double cap;
};

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path);
    return in;
}

} // namespace

PriceTable load_price_table(const std::string& path) {
    std::ifstream in = open_or_throw(path);

    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line))
        throw DataError("empty panel file: " + path);
    ++lineno;
    if (csv::split(line) != std::vector<std::string_view>{"date", "ticker", "price", "market_cap"})
        throw ParseError("panel header must be 'date,ticker,price,market_cap'", lineno);

    // ticker -> date -> cell
    std::map<std::string, std::map<Date, Cell>, std::less<>> table;
    std::set<Date> calendar;

    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = csv::split(line);
        if (fields.size() != 4)
            throw ParseError("expected 4 fields, got " + std::to_string(fields.size()), lineno);
        Date d;
        double price, cap;
        try {
            d = Date::parse(fields[0]);
            price = csv::parse_number(fields[2]);
            cap = csv::parse_number(fields[3]);
        } catch (const DataError& e) {
            throw ParseError(e.what(), lineno);
        }
        std::string ticker(fields[1]);
        if (ticker.empty()) throw ParseError("empty ticker", lineno);
        if (!(price > 0.0) || !std::isfinite(price))
            throw DataError("non-positive price " + csv::format_number(price) + " for " +
                            ticker + " on " + d.to_string() + " (line " +
                            std::to_string(lineno) + ")");
        if (cap < 0.0 || !std::isfinite(cap))
            throw DataError("negative market cap for " + ticker + " on " + d.to_string() +
                            " (line " + std::to_string(lineno) + ")");
        auto [it, inserted] = table[ticker].emplace(d, Cell{price, cap});
        (void)it;
        if (!inserted)
            throw ParseError("duplicate row for (" + d.to_string() + ", " + ticker + ")", lineno);
        calendar.insert(d);
    }

    if (calendar.empty()) throw DataError("panel file has no data rows: " + path);

    PriceTable out;
    out.dates.assign(calendar.begin(), calendar.end());

    // Completeness rule: an asset must quote on every calendar date or it is
    // dropped and reported.
    std::vector<const std::map<Date, Cell>*> kept;
    for (const auto& [ticker, cells] : table) {
        if (cells.size() == out.dates.size()) {
            out.tickers.push_back(ticker);
            kept.push_back(&cells);
        } else {
            out.dropped.push_back(ticker);
        }
    }
    if (out.tickers.empty())
        throw DataError("no asset covers the full calendar (empty date intersection) in " + path);

    const auto n = static_cast<Eigen::Index>(out.tickers.size());
    const auto t1 = static_cast<Eigen::Index>(out.dates.size());
    out.prices.resize(n, t1);
    out.caps.resize(n, t1);
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index t = 0;
        for (const auto& [d, cell] : *kept[static_cast<std::size_t>(k)]) {
            out.prices(k, t) = cell.price;
            out.caps(k, t) = cell.cap;
            ++t;
        }
    }
    return out;
}

IndexSeries load_index_series(const std::string& path) {
    std::ifstream in = open_or_throw(path);

    std::string line;
    std::size_t lineno = 0;
    if (!std::getline(in, line))
        throw DataError("empty index file: " + path);
    ++lineno;
    if (csv::split(line) != std::vector<std::string_view>{"date", "price"})
        throw ParseError("index header must be 'date,price'", lineno);

    std::map<Date, double> series;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        auto fields = csv::split(line);
        if (fields.size() != 2)
            throw ParseError("expected 2 fields, got " + std::to_string(fields.size()), lineno);
        Date d;
        double price;
        try {
            d = Date::parse(fields[0]);
            price = csv::parse_number(fields[1]);
        } catch (const DataError& e) {
            throw ParseError(e.what(), lineno);
        }
        if (!(price > 0.0) || !std::isfinite(price))
            throw DataError("non-positive index value on " + d.to_string() + " (line " +
                            std::to_string(lineno) + ")");
        if (!series.emplace(d, price).second)
            throw ParseError("duplicate index row for " + d.to_string(), lineno);
    }
    if (series.empty()) throw DataError("index file has no data rows: " + path);

    IndexSeries out;
    out.dates.reserve(series.size());
    out.values.reserve(series.size());
    for (const auto& [d, v] : series) {
        out.dates.push_back(d);
        out.values.push_back(v);
    }
    return out;
}

ReturnPanel compute_log_returns(const PriceTable& table) {
    const Eigen::Index n = table.prices.rows();
    const Eigen::Index t1 = table.prices.cols();
    if (t1 < 2) throw DataError("need at least two dates to compute returns");

    ReturnPanel out;
    out.tickers = table.tickers;
    out.dates.assign(table.dates.begin() + 1, table.dates.end());
    out.returns.resize(n, t1 - 1);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index t = 0; t + 1 < t1; ++t)
            out.returns(k, t) = std::log(table.prices(k, t + 1)) - std::log(table.prices(k, t));
    return out;
}

WindowPlan partition_windows(const std::vector<Date>& dates, int window_months) {
    if (window_months < 1) throw ConfigError("window length must be at least one month");
    if (dates.empty()) throw ConfigError("empty trading calendar");
    for (std::size_t i = 1; i < dates.size(); ++i)
        if (!(dates[i - 1] < dates[i]))
            throw DataError("trading calendar not strictly increasing at " + dates[i].to_string());

    // Block key: month index / window length. Six-month windows land on the
    // civil Jan-Jun / Jul-Dec halves.
    std::vector<std::pair<Date, Date>> blocks;  // (first, last) trading day per block
    long current_key = -1;
    for (const Date& d : dates) {
        long key = d.month_index() / window_months;
        if (blocks.empty() || key != current_key) {
            blocks.emplace_back(d, d);
            current_key = key;
        } else {
            blocks.back().second = d;
        }
    }

    if (blocks.size() < 2)
        throw ConfigError("calendar spans fewer than two " + std::to_string(window_months) +
                          "-month windows");

    WindowPlan plan;
    plan.periods.reserve(blocks.size() - 1);
    for (std::size_t i = 0; i + 1 < blocks.size(); ++i)
        plan.periods.push_back(Period{blocks[i].first, blocks[i].second,
                                      blocks[i + 1].first, blocks[i + 1].second});
    return plan;
}

} // namespace mgeo
