#pragma once

#include "marketgeo/panel.hpp"
#include "marketgeo/portfolio.hpp"

#include <string>
#include <vector>

namespace mgeo {

struct ScenarioSpec {
    std::string label;
    SubspaceSpec subspace;
};

/// One completed past/future step.
struct PeriodRecord {
    int index = 0;          // 0-based period number
    Date formation;          // first trading day of the future window
    Date last_day;           // last trading day of the future window
    double capital_in = 0.0;
    double value_out = 0.0;  // mark at last_day
    double ratio = 0.0;      // D = value_out / index(last_day)
    int n_constituents = 0;  // 0 means the period was held as cash
};

struct CompositionRow {
    int window_id = 0;
    std::string ticker;
    double f = 0.0;
    double weight = 0.0;
    double shares = 0.0;
};

struct BacktestResult {
    std::string label;
    SubspaceSpec spec;
    std::vector<Date> dates;             // all future-window trading days
    std::vector<double> portfolio_value; // aligned with dates
    std::vector<double> index_value;     // aligned with dates
    std::vector<PeriodRecord> periods;
    std::vector<CompositionRow> composition;
    double initial_capital = 0.0;
    double gain_factor_pct = 0.0;        // 100 * final value / initial capital
    std::vector<std::string> warnings;
};

/// D = portfolio value / index value; both must be positive.
double performance_ratio(double portfolio_value, double index_value);

/// Rolling protocol over the window plan: geometry on each past window (caps
/// from its last trading day), formation at the first trading day of the
/// future window at that day's closing prices, daily marks through the
/// window, D recorded on its last day. The first period starts with the
/// index value at formation; afterwards holdings are liquidated at the next
/// formation day's closes and the proceeds fund the new portfolio, so the
/// value series is self-financing and continuous. Empty selections hold
/// cash for the period and record a warning.
BacktestResult run_backtest(const PriceTable& table, const ReturnPanel& panel,
                            const IndexSeries& index, const ScenarioSpec& scenario,
                            const WindowPlan& plan);

/// One BacktestResult per scenario, in the given order.
std::vector<BacktestResult> scenario_suite(const PriceTable& table, const ReturnPanel& panel,
                                           const IndexSeries& index,
                                           const std::vector<ScenarioSpec>& scenarios,
                                           const WindowPlan& plan, int jobs = 1);

/// The eleven scenarios behind the standard figure set: single directions
/// 1..6 at their published thresholds plus the four mixed subspaces.
std::vector<ScenarioSpec> default_scenarios();

} // namespace mgeo
