#pragma once

#include "marketgeo/dates.hpp"

#include <Eigen/Core>
#include <string>
#include <vector>

namespace mgeo {

/// Aligned price/capitalization panel. Rows are assets, columns are trading
/// days. Every retained asset has a strictly positive price and a nonnegative
/// market cap on every date; assets with holes are dropped at load time and
/// listed in `dropped`.
struct PriceTable {
    std::vector<std::string> tickers;  // N
    std::vector<Date> dates;           // T+1, strictly increasing
    Eigen::MatrixXd prices;            // N x (T+1)
    Eigen::MatrixXd caps;              // N x (T+1)
    std::vector<std::string> dropped;  // tickers removed by the completeness rule

    Eigen::Index n_assets() const { return prices.rows(); }
    /// Column index of `d`; throws DataError if the date is not in the calendar.
    Eigen::Index col(Date d) const;
};

/// Log-return panel. Column t holds log(p[t+1]) - log(p[t]) and is labeled by
/// the later date, so `dates` starts at the second trading day of the table.
struct ReturnPanel {
    std::vector<std::string> tickers;  // N
    std::vector<Date> dates;           // T
    Eigen::MatrixXd returns;           // N x T

    Eigen::Index n_assets() const { return returns.rows(); }
    /// Column range [begin, end) of returns labeled inside `range`.
    std::pair<Eigen::Index, Eigen::Index> window_cols(const DateRange& range) const;
};

/// Benchmark index series, `date,price` CSV.
struct IndexSeries {
    std::vector<Date> dates;
    std::vector<double> values;

    /// Value on an exact date; throws DataError if absent.
    double at(Date d) const;
};

/// One rolling estimation step: geometry is fit on [past_start, past_end] and
/// the portfolio is held over [future_start, future_end]. All four endpoints
/// are trading days from the panel calendar.
struct Period {
    Date past_start;
    Date past_end;
    Date future_start;
    Date future_end;
};

struct WindowPlan {
    std::vector<Period> periods;
};

PriceTable load_price_table(const std::string& path);
IndexSeries load_index_series(const std::string& path);

ReturnPanel compute_log_returns(const PriceTable& table);

/// Tiles the trading calendar into consecutive civil blocks of
/// `window_months` months, aligned to month boundaries (six months gives the
/// Jan-Jun / Jul-Dec halves), then pairs consecutive blocks as (past, future).
/// Throws ConfigError when the calendar spans fewer than two blocks.
WindowPlan partition_windows(const std::vector<Date>& dates, int window_months = 6);

} // namespace mgeo
