#include "marketgeo/geometry.hpp"

#include "marketgeo/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace mgeo {

namespace detail {

Eigen::MatrixXd standardized_rows(const Eigen::MatrixXd& window_returns,
                                  const std::vector<std::string>* tickers) {
    const Eigen::Index n = window_returns.rows();
    const Eigen::Index t = window_returns.cols();
    if (t < 3) throw DataError("estimation window has fewer than 3 observations");

    Eigen::MatrixXd z(n, t);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double mean = window_returns.row(k).mean();
        Eigen::RowVectorXd c = window_returns.row(k).array() - mean;
        const double norm = c.norm();
        // A constant series leaves only rounding residue after centering.
        const double scale = window_returns.row(k).cwiseAbs().maxCoeff();
        if (norm <= 1e-14 * std::max(scale, 1e-300) * std::sqrt(double(t))) {
            std::string name = tickers ? (*tickers)[static_cast<std::size_t>(k)]
                                       : ("#" + std::to_string(k));
            throw DataError("zero-variance return series for " + name + " in window");
        }
        z.row(k) = c / norm;
    }
    return z;
}

namespace {

/// Descending eigenvalues/eigenvectors of a symmetric matrix.
void eig_descending(const Eigen::MatrixXd& sym, Eigen::VectorXd& values,
                    Eigen::MatrixXd* vectors) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    if (vectors) {
        solver.compute(sym);
        *vectors = solver.eigenvectors().rowwise().reverse();
    } else {
        solver.compute(sym, Eigen::EigenvaluesOnly);
    }
    if (solver.info() != Eigen::Success)
        throw NumericError("symmetric eigendecomposition failed");
    values = solver.eigenvalues().reverse();
}

} // namespace
} // namespace detail

Eigen::MatrixXd correlation_matrix(const ReturnPanel& panel, const DateRange& window) {
    auto [lo, hi] = panel.window_cols(window);
    if (hi - lo < 3)
        throw DataError("window " + window.first.to_string() + ".." + window.last.to_string() +
                        " has fewer than 3 return observations");
    Eigen::MatrixXd z = detail::standardized_rows(panel.returns.middleCols(lo, hi - lo),
                                                  &panel.tickers);
    const Eigen::Index n = z.rows();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    c.selfadjointView<Eigen::Lower>().rankUpdate(z);
    c = c.selfadjointView<Eigen::Lower>();
    c = c.cwiseMax(-1.0).cwiseMin(1.0);
    c.diagonal().setOnes();
    return c;
}

Eigen::MatrixXd distance_matrix(const Eigen::MatrixXd& corr) {
    Eigen::MatrixXd d = (2.0 * (1.0 - corr.array())).cwiseMax(0.0).sqrt();
    d.diagonal().setZero();
    return d;
}

Eigen::MatrixXd embed(const Eigen::MatrixXd& dist) {
    const Eigen::Index n = dist.rows();
    if (n != dist.cols()) throw DataError("distance matrix must be square");
    if (n == 0) throw DataError("empty distance matrix");

    // B = -1/2 J D^2 J with J = I - 11^T/n, via row/column mean subtraction.
    Eigen::MatrixXd b = -0.5 * dist.array().square().matrix();
    Eigen::VectorXd row_mean = b.rowwise().mean();
    double grand_mean = row_mean.mean();
    b.colwise() -= row_mean;
    b.rowwise() -= row_mean.transpose();
    b.array() += grand_mean;
    b = 0.5 * (b + b.transpose()).eval();

    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
    detail::eig_descending(b, values, &vectors);

    const double lambda_max = std::max(values(0), 0.0);
    const double floor = -1e-8 * std::max(lambda_max, 1e-300);
    const Eigen::Index m = n - 1;
    Eigen::MatrixXd coords(n, m);
    for (Eigen::Index i = 0; i < m; ++i) {
        double lambda = values(i);
        if (lambda < floor)
            throw NumericError("embedding fidelity: centered matrix eigenvalue " +
                               std::to_string(lambda) + " below tolerance");
        coords.col(i) = vectors.col(i) * std::sqrt(std::max(lambda, 0.0));
    }
    return coords;
}

MarketGeometry center_and_tensor(const Eigen::MatrixXd& coords, const Eigen::VectorXd& caps) {
    const Eigen::Index n = coords.rows();
    const Eigen::Index m = coords.cols();
    if (caps.size() != n) throw DataError("cap vector length does not match asset count");
    if (caps.minCoeff() < 0.0) throw DataError("negative market cap");
    const double total = caps.sum();
    if (!(total > 0.0)) throw DataError("all market caps are zero");

    MarketGeometry g;
    g.coords = coords;
    g.center = coords.transpose() * (caps / total);
    g.centered = coords.rowwise() - g.center.transpose();

    // Eq-style inertia tensor: masses enter the center only, the sum is
    // unweighted.
    Eigen::MatrixXd tensor = Eigen::MatrixXd::Zero(m, m);
    tensor.selfadjointView<Eigen::Lower>().rankUpdate(g.centered.transpose());
    tensor = tensor.selfadjointView<Eigen::Lower>();

    if (m > 0) {
        detail::eig_descending(tensor, g.eigenvalues, &g.eigenvectors);
        g.eigenvalues = g.eigenvalues.cwiseMax(0.0);
        // Sign convention: largest-magnitude component positive.
        for (Eigen::Index i = 0; i < m; ++i) {
            Eigen::Index arg = 0;
            g.eigenvectors.col(i).cwiseAbs().maxCoeff(&arg);
            if (g.eigenvectors(arg, i) < 0.0) g.eigenvectors.col(i) = -g.eigenvectors.col(i);
        }
        g.eigen_coords = g.centered * g.eigenvectors;

        const double tie_tol = 1e-10 * std::max(g.eigenvalues(0), 1e-300);
        for (Eigen::Index i = 0; i + 1 < m; ++i)
            if (g.eigenvalues(i) - g.eigenvalues(i + 1) <= tie_tol)
                g.tied_ranks.emplace_back(int(i) + 1, int(i) + 2);
    } else {
        g.eigenvalues.resize(0);
        g.eigenvectors.resize(0, 0);
        g.eigen_coords.resize(n, 0);
    }
    return g;
}

MarketGeometry market_geometry(const ReturnPanel& panel, const DateRange& window,
                               const Eigen::VectorXd& caps) {
    Eigen::MatrixXd corr = correlation_matrix(panel, window);
    Eigen::MatrixXd dist = distance_matrix(corr);
    return center_and_tensor(embed(dist), caps);
}

Eigen::VectorXd inertia_spectrum(const Eigen::MatrixXd& window_returns,
                                 const Eigen::VectorXd& caps) {
    const Eigen::Index n = window_returns.rows();
    if (caps.size() != n) throw DataError("cap vector length does not match asset count");
    const double total = caps.sum();
    if (!(total > 0.0)) throw DataError("all market caps are zero");

    Eigen::MatrixXd z = detail::standardized_rows(window_returns, nullptr);
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
    c.selfadjointView<Eigen::Lower>().rankUpdate(z);
    c = c.selfadjointView<Eigen::Lower>();

    // Double-center (MDS Gram matrix), then re-center at the cap-weighted
    // mean: G = (I - 1 w^T) J C J (I - w 1^T).
    Eigen::VectorXd row_mean = c.rowwise().mean();
    double grand_mean = row_mean.mean();
    c.colwise() -= row_mean;
    c.rowwise() -= row_mean.transpose();
    c.array() += grand_mean;

    Eigen::VectorXd w = caps / total;
    Eigen::VectorXd gw = c * w;
    double www = w.dot(gw);
    c -= gw * Eigen::RowVectorXd::Ones(n);
    c -= Eigen::VectorXd::Ones(n) * gw.transpose();
    c.array() += www;
    c = 0.5 * (c + c.transpose()).eval();

    Eigen::VectorXd values;
    detail::eig_descending(c, values, nullptr);
    return values.head(n - 1).cwiseMax(0.0);
}

} // namespace mgeo
