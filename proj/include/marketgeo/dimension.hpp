#pragma once

#include "marketgeo/geometry.hpp"
#include "marketgeo/panel.hpp"
#include "marketgeo/rng.hpp"

#include <Eigen/Core>
#include <cstdint>
#include <string>

namespace mgeo {

enum class SurrogateMethod {
    iid_gaussian,  // independent normals matching each asset's window mean/variance
    time_permute,  // each asset's window returns independently permuted in time
};

SurrogateMethod surrogate_method_from_string(const std::string& name);
std::string to_string(SurrogateMethod m);

/// Per-rank upper envelope of surrogate inertia spectra.
struct SpectrumBand {
    Eigen::VectorXd upper;   // length N-1, nonincreasing in rank
    int replicas = 0;
    SurrogateMethod method = SurrogateMethod::time_permute;
    double quantile = 0.95;
    std::uint64_t seed = 0;
};

/// One surrogate draw of the window's returns (same shape as the window).
/// Exposed so tests can check the permutation multiset property directly.
Eigen::MatrixXd surrogate_returns(const Eigen::MatrixXd& window_returns,
                                  SurrogateMethod method, Rng& rng);

/// Runs `replicas` surrogate draws through the geometry pipeline and records
/// each spectrum; the envelope is the per-rank `quantile` across replicas.
/// Replica r uses a generator derived from (seed, r), so `jobs` worker
/// threads cannot change the result.
SpectrumBand surrogate_spectrum(const ReturnPanel& panel, const DateRange& window,
                                const Eigen::VectorXd& caps, SurrogateMethod method,
                                int replicas, double quantile, std::uint64_t seed,
                                int jobs = 1);

/// Number of leading market eigenvalues strictly above the envelope at the
/// same rank, truncated at `cap`.
int effective_dimension(const Eigen::VectorXd& market_eigenvalues, const SpectrumBand& band,
                        int cap = 6);

} // namespace mgeo
