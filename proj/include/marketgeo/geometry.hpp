#pragma once

#include "marketgeo/panel.hpp"

#include <Eigen/Core>
#include <string>
#include <utility>
#include <vector>

namespace mgeo {

/// Embedded market for one estimation window.
///
/// `coords` are the metric-scaling coordinates (one row per asset), `center`
/// the cap-weighted center of mass, `centered` the center-of-mass coordinates
/// y(k) = x(k) - R. The inertia tensor T = sum_k y(k) y(k)^T is
/// eigendecomposed into descending `eigenvalues` and orthonormal
/// `eigenvectors` (columns); `eigen_coords` holds each y(k) expressed in that
/// basis. `tied_ranks` lists adjacent 1-based ranks whose eigenvalues are
/// numerically tied, where the eigenbasis is arbitrary within the block.
struct MarketGeometry {
    Eigen::MatrixXd coords;        // N x m
    Eigen::VectorXd center;        // m
    Eigen::MatrixXd centered;      // N x m
    Eigen::VectorXd eigenvalues;   // m, descending, nonnegative
    Eigen::MatrixXd eigenvectors;  // m x m, columns e_1..e_m
    Eigen::MatrixXd eigen_coords;  // N x m
    std::vector<std::pair<int, int>> tied_ranks;

    Eigen::Index n_assets() const { return coords.rows(); }
    Eigen::Index n_axes() const { return coords.cols(); }
};

/// Pearson correlation matrix of the window's return columns, using window
/// means and variances. Requires at least 3 observations and a nonzero
/// variance per asset (degenerate series raise DataError naming the ticker).
Eigen::MatrixXd correlation_matrix(const ReturnPanel& panel, const DateRange& window);

/// d = sqrt(2 (1 - C)) elementwise; a metric with entries in [0, 2].
Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& corr);

/// Classical metric scaling: double-centers the squared distances,
/// eigendecomposes, and scales eigenvectors by the square roots of the
/// nonnegative eigenvalues. Returns N x (N-1) coordinates whose pairwise
/// distances reproduce the input whenever the centered matrix is PSD, which
/// holds exactly for correlation distances. Negative eigenvalues beyond
/// -1e-8 * lambda_max raise NumericError; smaller ones are clamped to zero.
Eigen::MatrixXd embed(const Eigen::MatrixXd& dist);

/// Center of mass with masses proportional to `caps`, centered cloud, and the
/// (unweighted) inertia-tensor eigensystem. Accepts any N x m coordinate
/// block. All caps zero raises DataError.
MarketGeometry center_and_tensor(const Eigen::MatrixXd& coords, const Eigen::VectorXd& caps);

/// Full per-window pipeline: correlation -> distances -> embedding -> tensor.
MarketGeometry market_geometry(const ReturnPanel& panel, const DateRange& window,
                               const Eigen::VectorXd& caps);

/// Inertia-tensor spectrum (descending, length N-1) computed without forming
/// coordinates: the centered Gram matrix of the embedding is the
/// double-centered correlation matrix, so the tensor eigenvalues are the top
/// N-1 eigenvalues of (I - 1 w^T) B (I - w 1^T) with w the cap weights.
/// Algebraically identical to market_geometry(...).eigenvalues; used where
/// only the spectrum is needed (surrogate replicas).
Eigen::VectorXd inertia_spectrum(const Eigen::MatrixXd& window_returns,
                                 const Eigen::VectorXd& caps);

namespace detail {
/// Rows standardized to zero mean / unit norm over the window; the Gram
/// matrix of the result is the correlation matrix. Throws DataError for
/// zero-variance rows (ticker names resolved by the caller when available).
Eigen::MatrixXd standardized_rows(const Eigen::MatrixXd& window_returns,
                                  const std::vector<std::string>* tickers);
} // namespace detail

} // namespace mgeo
