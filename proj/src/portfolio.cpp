#include "marketgeo/portfolio.hpp"

#include "marketgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace mgeo {

void validate_subspace(const SubspaceSpec& spec, Eigen::Index n_axes) {
    if (spec.directions.empty()) throw ConfigError("subspace has no directions");
    std::set<int> seen;
    for (int rank : spec.directions) {
        if (rank < 1 || rank > n_axes)
            throw ConfigError("direction rank " + std::to_string(rank) +
                              " outside 1.." + std::to_string(n_axes));
        if (!seen.insert(rank).second)
            throw ConfigError("duplicate direction rank " + std::to_string(rank));
    }
    if (!(spec.threshold > 0.0 && spec.threshold < 1.0))
        throw ConfigError("threshold must lie in (0, 1)");
}

double projection_fraction(const MarketGeometry& geometry, Eigen::Index asset,
                           const SubspaceSpec& spec) {
    validate_subspace(spec, geometry.n_axes());
    if (asset < 0 || asset >= geometry.n_assets())
        throw DataError("asset index out of range");

    const auto& ec = geometry.eigen_coords;
    double full_sq = ec.row(asset).squaredNorm();
    if (full_sq <= 0.0)
        throw DataError("asset " + std::to_string(asset) +
                        " has a zero-norm centered coordinate vector");
    double sub_sq = 0.0;
    for (int rank : spec.directions) sub_sq += ec(asset, rank - 1) * ec(asset, rank - 1);
    return std::min(std::sqrt(sub_sq / full_sq), 1.0);
}

std::vector<Constituent> select_constituents(const MarketGeometry& geometry,
                                             const SubspaceSpec& spec,
                                             const std::vector<std::string>& tickers) {
    validate_subspace(spec, geometry.n_axes());
    if (static_cast<Eigen::Index>(tickers.size()) != geometry.n_assets())
        throw DataError("ticker list does not match geometry");

    std::vector<Constituent> out;
    for (Eigen::Index i = 0; i < geometry.n_assets(); ++i) {
        double f = projection_fraction(geometry, i, spec);
        if (f > spec.threshold)
            out.push_back(Constituent{tickers[static_cast<std::size_t>(i)], i, f});
    }
    std::sort(out.begin(), out.end(), [](const Constituent& a, const Constituent& b) {
        if (a.f != b.f) return a.f > b.f;
        return a.ticker < b.ticker;
    });
    return out;
}

SubspacePortfolio build_portfolio(const std::vector<Constituent>& selection,
                                  const Eigen::VectorXd& prices_at_formation,
                                  double capital, Date formed_on,
                                  const SubspaceSpec& spec) {
    if (selection.empty()) throw DataError("cannot build a portfolio from an empty selection");
    if (!(capital > 0.0)) throw DataError("capital must be positive");

    double f_sum = 0.0;
    for (const auto& c : selection) {
        if (!(c.f > 0.0)) throw DataError("constituent " + c.ticker + " has nonpositive f");
        f_sum += c.f;
    }

    SubspacePortfolio p;
    p.spec = spec;
    p.formed_on = formed_on;
    p.initial_value = capital;
    p.holdings.reserve(selection.size());
    for (const auto& c : selection) {
        double price = prices_at_formation(c.asset);
        if (!(price > 0.0))
            throw DataError("nonpositive formation price for " + c.ticker);
        Holding h;
        h.ticker = c.ticker;
        h.asset = c.asset;
        h.f = c.f;
        h.weight = c.f / f_sum;
        h.shares = h.weight * capital / price;
        p.holdings.push_back(h);
    }
    return p;
}

double portfolio_value(const SubspacePortfolio& portfolio, const Eigen::VectorXd& prices) {
    double v = 0.0;
    for (const auto& h : portfolio.holdings) v += h.shares * prices(h.asset);
    return v;
}

} // namespace mgeo
