#pragma once

#include "marketgeo/backtest.hpp"
#include "marketgeo/panel.hpp"

#include <Eigen/Core>
#include <string>
#include <vector>

namespace mgeo {

struct AssetMoments {
    Eigen::VectorXd mean;  // per-asset mean daily log return over the span
    Eigen::MatrixXd cov;   // sample covariance (T-1 divisor)
    std::vector<std::string> notes;
};

/// Daily-return moments over the span. Zero-variance assets raise DataError;
/// singular or under-determined covariances are flagged in `notes`.
AssetMoments asset_moments(const ReturnPanel& panel, const DateRange& span);

struct FrontierPoint {
    double target_mu = 0.0;
    double sigma = 0.0;
    double mu = 0.0;
    Eigen::VectorXd weights;  // nonnegative, sum 1
};

struct FrontierCurve {
    std::vector<FrontierPoint> points;  // ordered by target return
    bool ridged = false;                // diagonal regularization was applied
    std::vector<std::string> notes;
};

/// Minimum-variance long-only portfolio (budget constraint only).
FrontierPoint min_variance_point(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov);

/// Long-only minimum variance at one target mean. Targets outside the
/// achievable [min asset mean, max asset mean] raise DataError; solver
/// failure raises NumericError naming the target. Every returned point has
/// passed a first-order optimality check with residuals below 1e-6.
FrontierPoint solve_frontier_point(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                   double target);

/// The efficient branch: n_points targets spaced from the minimum-variance
/// portfolio's mean to the largest asset mean. Coincident targets are
/// deduplicated (a single asset yields a single point). Singular covariances
/// get an epsilon ridge, reported via `ridged` and `notes`.
FrontierCurve efficient_frontier(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                 int n_points);

struct PlanePlacement {
    std::string label;
    double sigma = 0.0;
    double mu = 0.0;
};

/// Per-period mean/standard deviation of daily portfolio log returns,
/// averaged across periods. Periods with fewer than 3 daily values are
/// skipped with a warning.
std::vector<PlanePlacement> place_portfolios(const std::vector<BacktestResult>& results,
                                             std::vector<std::string>* warnings = nullptr);

} // namespace mgeo
