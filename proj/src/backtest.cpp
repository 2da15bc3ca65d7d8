#include "marketgeo/backtest.hpp"

#include "marketgeo/errors.hpp"

#include <cmath>
#include <cstdio>
#include <thread>

namespace mgeo {

double performance_ratio(double portfolio_value, double index_value) {
    if (!(portfolio_value > 0.0) || !(index_value > 0.0))
        throw DataError("performance ratio needs positive portfolio and index values");
    return portfolio_value / index_value;
}

namespace {

std::string format_threshold(double t) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", t);
    return buf;
}

} // namespace

BacktestResult run_backtest(const PriceTable& table, const ReturnPanel& panel,
                            const IndexSeries& index, const ScenarioSpec& scenario,
                            const WindowPlan& plan) {
    if (plan.periods.empty()) throw ConfigError("window plan has no periods");
    if (table.n_assets() != panel.n_assets())
        throw DataError("price table and return panel disagree on asset count");

    BacktestResult result;
    result.label = scenario.label;
    result.spec = scenario.subspace;

    SubspacePortfolio holdings;     // valid when n_constituents > 0
    bool holding_cash = false;
    double capital = 0.0;

    for (std::size_t p = 0; p < plan.periods.size(); ++p) {
        const Period& period = plan.periods[p];

        // Geometry from the past window; masses dated at its last trading day.
        Eigen::VectorXd caps = table.caps.col(table.col(period.past_end));
        MarketGeometry geometry =
            market_geometry(panel, DateRange{period.past_start, period.past_end}, caps);
        auto selection = select_constituents(geometry, scenario.subspace, table.tickers);

        const Eigen::Index f0 = table.col(period.future_start);
        const Eigen::Index fl = table.col(period.future_end);

        // Liquidate at the formation day's closes: the previous holdings fund
        // the new portfolio at the same prices, so no value is created or lost.
        if (p == 0) {
            capital = index.at(period.future_start);
        } else if (!holding_cash) {
            capital = portfolio_value(holdings, table.prices.col(f0));
        }

        PeriodRecord record;
        record.index = static_cast<int>(p);
        record.formation = period.future_start;
        record.last_day = period.future_end;
        record.capital_in = capital;
        record.n_constituents = static_cast<int>(selection.size());

        if (selection.empty()) {
            holding_cash = true;
            result.warnings.push_back("period " + std::to_string(p) + " (" +
                                      period.future_start.to_string() + ".." +
                                      period.future_end.to_string() +
                                      "): empty selection, holding cash");
        } else {
            holding_cash = false;
            holdings = build_portfolio(selection, table.prices.col(f0), capital,
                                       period.future_start, scenario.subspace);
            for (const auto& h : holdings.holdings)
                result.composition.push_back(
                    CompositionRow{static_cast<int>(p), h.ticker, h.f, h.weight, h.shares});
        }

        if (p == 0) result.initial_capital = capital;

        // Daily marks. The formation-day mark equals the purchase cost.
        for (Eigen::Index t = f0; t <= fl; ++t) {
            double value;
            if (holding_cash)
                value = capital;
            else if (t == f0)
                value = capital;
            else
                value = portfolio_value(holdings, table.prices.col(t));
            result.dates.push_back(table.dates[static_cast<std::size_t>(t)]);
            result.portfolio_value.push_back(value);
            result.index_value.push_back(index.at(table.dates[static_cast<std::size_t>(t)]));
        }

        record.value_out = result.portfolio_value.back();
        record.ratio = performance_ratio(record.value_out, result.index_value.back());
        result.periods.push_back(record);
        capital = record.value_out;  // carried into the next formation if cash
    }

    result.gain_factor_pct = 100.0 * result.portfolio_value.back() / result.initial_capital;
    return result;
}

std::vector<BacktestResult> scenario_suite(const PriceTable& table, const ReturnPanel& panel,
                                           const IndexSeries& index,
                                           const std::vector<ScenarioSpec>& scenarios,
                                           const WindowPlan& plan, int jobs) {
    if (scenarios.empty()) throw ConfigError("scenario list is empty");

    std::vector<BacktestResult> results(scenarios.size());
    auto run_one = [&](std::size_t i) {
        results[i] = run_backtest(table, panel, index, scenarios[i], plan);
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || scenarios.size() == 1) {
        for (std::size_t i = 0; i < scenarios.size(); ++i) run_one(i);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> failures(scenarios.size());
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                for (std::size_t i = static_cast<std::size_t>(w); i < scenarios.size();
                     i += static_cast<std::size_t>(jobs)) {
                    try {
                        run_one(i);
                    } catch (...) {
                        failures[i] = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : workers) th.join();
        for (auto& f : failures)
            if (f) std::rethrow_exception(f);
    }
    return results;
}

std::vector<ScenarioSpec> default_scenarios() {
    auto single = [](int rank, double threshold) {
        return ScenarioSpec{"dir" + std::to_string(rank) + "_t" + format_threshold(threshold),
                            SubspaceSpec{{rank}, threshold}};
    };
    auto multi = [](std::vector<int> ranks, double threshold) {
        std::string label = "sub";
        for (std::size_t i = 0; i < ranks.size(); ++i)
            label += (i ? "-" : "") + std::to_string(ranks[i]);
        label += "_t" + format_threshold(threshold);
        return ScenarioSpec{label, SubspaceSpec{std::move(ranks), threshold}};
    };
    return {
        single(1, 0.4),
        single(1, 0.5),
        single(2, 0.4),
        single(3, 0.4),
        single(4, 0.4),
        single(5, 0.35),
        single(6, 0.3),
        multi({1, 2, 3}, 0.5),
        multi({1, 2, 3, 4}, 0.5),
        multi({2, 4, 5}, 0.5),
        multi({2, 4, 5, 6}, 0.5),
    };
}

} // namespace mgeo
