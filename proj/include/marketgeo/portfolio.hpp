#pragma once

#include "marketgeo/dates.hpp"
#include "marketgeo/geometry.hpp"

#include <Eigen/Core>
#include <string>
#include <vector>

namespace mgeo {

/// A direction subset. Ranks are 1-based, 1 = largest eigenvalue.
struct SubspaceSpec {
    std::vector<int> directions;
    double threshold = 0.4;
};

/// Throws ConfigError unless directions are nonempty, unique, within
/// 1..n_axes, and the threshold lies in (0, 1).
void validate_subspace(const SubspaceSpec& spec, Eigen::Index n_axes);

struct Constituent {
    std::string ticker;
    Eigen::Index asset = 0;  // row in the geometry / panel
    double f = 0.0;
};

struct Holding {
    std::string ticker;
    Eigen::Index asset = 0;
    double f = 0.0;
    double weight = 0.0;
    double shares = 0.0;
};

struct SubspacePortfolio {
    SubspaceSpec spec;
    std::vector<Holding> holdings;
    Date formed_on;
    double initial_value = 0.0;
};

/// f(i, Omega): the asset's coordinate norm inside the subspace over its
/// full-space norm, both in the inertia eigenbasis. Always in [0, 1].
/// A zero-norm centered coordinate vector raises DataError.
double projection_fraction(const MarketGeometry& geometry, Eigen::Index asset,
                           const SubspaceSpec& spec);

/// Assets with f strictly above the threshold, ordered by descending f with
/// ties broken by ticker. An empty result is valid.
std::vector<Constituent> select_constituents(const MarketGeometry& geometry,
                                             const SubspaceSpec& spec,
                                             const std::vector<std::string>& tickers);

/// f-proportional weights, fractional shares at formation prices, initial
/// value equal to `capital` exactly.
SubspacePortfolio build_portfolio(const std::vector<Constituent>& selection,
                                  const Eigen::VectorXd& prices_at_formation,
                                  double capital, Date formed_on,
                                  const SubspaceSpec& spec);

/// Marked-to-market value at the given price column.
double portfolio_value(const SubspacePortfolio& portfolio, const Eigen::VectorXd& prices);

} // namespace mgeo
