#include "marketgeo/dimension.hpp"

#include "marketgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace mgeo {

SurrogateMethod surrogate_method_from_string(const std::string& name) {
    if (name == "iid_gaussian") return SurrogateMethod::iid_gaussian;
    if (name == "time_permute") return SurrogateMethod::time_permute;
    throw ConfigError("unknown surrogate method '" + name +
                      "' (expected iid_gaussian or time_permute)");
}

std::string to_string(SurrogateMethod m) {
    return m == SurrogateMethod::iid_gaussian ? "iid_gaussian" : "time_permute";
}

Eigen::MatrixXd surrogate_returns(const Eigen::MatrixXd& window_returns,
                                  SurrogateMethod method, Rng& rng) {
    const Eigen::Index n = window_returns.rows();
    const Eigen::Index t = window_returns.cols();
    Eigen::MatrixXd out(n, t);
    if (method == SurrogateMethod::time_permute) {
        Eigen::RowVectorXd row(t);  // contiguous scratch; matrix rows are strided
        for (Eigen::Index k = 0; k < n; ++k) {
            row = window_returns.row(k);
            rng.shuffle(row.data(), row.data() + t);
            out.row(k) = row;
        }
    } else {
        for (Eigen::Index k = 0; k < n; ++k) {
            const double mean = window_returns.row(k).mean();
            const double sd = std::sqrt(
                (window_returns.row(k).array() - mean).square().sum() / double(t));
            for (Eigen::Index j = 0; j < t; ++j)
                out(k, j) = mean + sd * rng.normal();
        }
    }
    return out;
}

namespace {

/// Nearest-rank-from-above sample quantile: smallest order statistic whose
/// cumulative share is >= q.
double quantile_upper(std::vector<double>& values, double q) {
    std::sort(values.begin(), values.end());
    const auto r = static_cast<std::ptrdiff_t>(values.size());
    auto idx = static_cast<std::ptrdiff_t>(std::ceil(q * double(r))) - 1;
    idx = std::clamp<std::ptrdiff_t>(idx, 0, r - 1);
    return values[static_cast<std::size_t>(idx)];
}

} // namespace

SpectrumBand surrogate_spectrum(const ReturnPanel& panel, const DateRange& window,
                                const Eigen::VectorXd& caps, SurrogateMethod method,
                                int replicas, double quantile, std::uint64_t seed,
                                int jobs) {
    if (replicas < 1) throw ConfigError("surrogate replicas must be at least 1");
    if (!(quantile > 0.0 && quantile <= 1.0))
        throw ConfigError("envelope quantile must be in (0, 1]");

    auto [lo, hi] = panel.window_cols(window);
    const Eigen::Index tw = hi - lo;
    if (tw < 3)
        throw DataError("window " + window.first.to_string() + ".." + window.last.to_string() +
                        " has fewer than 3 return observations");
    const Eigen::MatrixXd window_returns = panel.returns.middleCols(lo, tw);
    const Eigen::Index n = panel.n_assets();
    if (n < 2) throw DataError("surrogate spectrum needs at least 2 assets");

    // One spectrum per replica, row-indexed by replica so the merge order is
    // fixed regardless of thread scheduling.
    Eigen::MatrixXd spectra(replicas, n - 1);
    auto run_replica = [&](int r) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
        Eigen::MatrixXd draw = surrogate_returns(window_returns, method, rng);
        spectra.row(r) = inertia_spectrum(draw, caps).transpose();
    };

    jobs = std::max(1, jobs);
    if (jobs == 1 || replicas == 1) {
        for (int r = 0; r < replicas; ++r) run_replica(r);
    } else {
        std::vector<std::thread> workers;
        std::vector<std::exception_ptr> failures(static_cast<std::size_t>(jobs));
        for (int w = 0; w < jobs; ++w) {
            workers.emplace_back([&, w] {
                try {
                    for (int r = w; r < replicas; r += jobs) run_replica(r);
                } catch (...) {
                    failures[static_cast<std::size_t>(w)] = std::current_exception();
                }
            });
        }
        for (auto& th : workers) th.join();
        for (auto& f : failures)
            if (f) std::rethrow_exception(f);
    }

    SpectrumBand band;
    band.replicas = replicas;
    band.method = method;
    band.quantile = quantile;
    band.seed = seed;
    band.upper.resize(n - 1);
    std::vector<double> column(static_cast<std::size_t>(replicas));
    for (Eigen::Index rank = 0; rank < n - 1; ++rank) {
        for (int r = 0; r < replicas; ++r)
            column[static_cast<std::size_t>(r)] = spectra(r, rank);
        band.upper(rank) = quantile_upper(column, quantile);
    }
    return band;
}

int effective_dimension(const Eigen::VectorXd& market_eigenvalues, const SpectrumBand& band,
                        int cap) {
    if (market_eigenvalues.size() != band.upper.size())
        throw DataError("market spectrum and surrogate band have different lengths (" +
                        std::to_string(market_eigenvalues.size()) + " vs " +
                        std::to_string(band.upper.size()) + ")");
    if (cap < 0) throw ConfigError("dimension cap must be nonnegative");
    int d = 0;
    for (Eigen::Index i = 0; i < market_eigenvalues.size() && d < cap; ++i) {
        if (market_eigenvalues(i) > band.upper(i))
            ++d;
        else
            break;
    }
    return d;
}

} // namespace mgeo
