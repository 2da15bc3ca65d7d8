#include "marketgeo/frontier.hpp"

#include "marketgeo/csv.hpp"
#include "marketgeo/errors.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace mgeo {

AssetMoments asset_moments(const ReturnPanel& panel, const DateRange& span) {
    auto [lo, hi] = panel.window_cols(span);
    const Eigen::Index t = hi - lo;
    const Eigen::Index n = panel.n_assets();
    if (t < 2) throw DataError("moment span has fewer than 2 observations");

    AssetMoments m;
    Eigen::MatrixXd window = panel.returns.middleCols(lo, t);
    m.mean = window.rowwise().mean();
    Eigen::MatrixXd centered = window.colwise() - m.mean;
    m.cov = (centered * centered.transpose()) / double(t - 1);
    m.cov = 0.5 * (m.cov + m.cov.transpose()).eval();

    for (Eigen::Index k = 0; k < n; ++k) {
        const double scale = window.row(k).cwiseAbs().maxCoeff();
        if (m.cov(k, k) <= 1e-28 * std::max(scale * scale, 1e-300))
            throw DataError("zero-variance return series for " +
                            panel.tickers[static_cast<std::size_t>(k)] + " in moment span");
    }

    if (t < n + 1)
        m.notes.push_back("span provides " + std::to_string(t) + " observations for " +
                          std::to_string(n) + " assets; sample covariance is singular");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.cov, Eigen::EigenvaluesOnly);
    const double lambda_min = eig.eigenvalues().minCoeff();
    const double lambda_max = eig.eigenvalues().maxCoeff();
    if (lambda_min <= 1e-14 * std::max(lambda_max, 1e-300))
        m.notes.push_back("sample covariance is singular to working precision");
    return m;
}

namespace {

constexpr double kRidge = 1e-10;

struct QpProblem {
    Eigen::MatrixXd q;  // symmetric PSD (possibly ridged)
    Eigen::MatrixXd a;  // equality rows
    Eigen::VectorXd b;
};

struct QpSolution {
    Eigen::VectorXd w;
    Eigen::VectorXd lambda;
    int iterations = 0;
};

/// Primal active-set method for min 1/2 w^T Q w s.t. A w = b, w >= 0,
/// starting from a feasible point. Free-set equality QPs are solved through
/// a complete orthogonal decomposition of the KKT system, which stays exact
/// on rank-deficient constraint rows (the current iterate always witnesses
/// consistency).
QpSolution active_set_qp(const QpProblem& prob, Eigen::VectorXd w0) {
    const Eigen::Index n = prob.q.rows();
    const Eigen::Index k = prob.a.rows();
    const double bound_tol = 1e-13;
    const double mult_tol = 1e-12 * std::max(1.0, prob.q.cwiseAbs().maxCoeff());

    std::vector<bool> free_var(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i)
        free_var[static_cast<std::size_t>(i)] = w0(i) > bound_tol;

    Eigen::VectorXd w = w0.cwiseMax(0.0);
    QpSolution sol;
    const int max_iter = 50 + 10 * static_cast<int>(n);

    for (sol.iterations = 0; sol.iterations < max_iter; ++sol.iterations) {
        std::vector<Eigen::Index> free_idx;
        for (Eigen::Index i = 0; i < n; ++i)
            if (free_var[static_cast<std::size_t>(i)]) free_idx.push_back(i);
        const auto nf = static_cast<Eigen::Index>(free_idx.size());

        // KKT system on the free block.
        Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(nf + k, nf + k);
        for (Eigen::Index r = 0; r < nf; ++r)
            for (Eigen::Index c = 0; c < nf; ++c) kkt(r, c) = prob.q(free_idx[r], free_idx[c]);
        for (Eigen::Index r = 0; r < k; ++r)
            for (Eigen::Index c = 0; c < nf; ++c) {
                kkt(nf + r, c) = prob.a(r, free_idx[c]);
                kkt(c, nf + r) = prob.a(r, free_idx[c]);
            }
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nf + k);
        rhs.tail(k) = prob.b;

        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(kkt);
        Eigen::VectorXd xl = cod.solve(rhs);
        Eigen::VectorXd w_free = xl.head(nf);
        sol.lambda = -xl.tail(k);

        double min_free = nf > 0 ? w_free.minCoeff() : 0.0;
        if (min_free >= -bound_tol) {
            // EQP solution feasible for the bounds: adopt it and check the
            // multipliers on the active bounds.
            w.setZero();
            for (Eigen::Index j = 0; j < nf; ++j) w(free_idx[j]) = std::max(w_free(j), 0.0);

            Eigen::VectorXd gradient = prob.q * w;
            Eigen::VectorXd reduced = gradient - prob.a.transpose() * sol.lambda;
            Eigen::Index release = -1;
            double most_negative = -mult_tol;
            for (Eigen::Index i = 0; i < n; ++i) {
                if (free_var[static_cast<std::size_t>(i)]) continue;
                if (reduced(i) < most_negative) {
                    most_negative = reduced(i);
                    release = i;
                }
            }
            if (release < 0) {
                sol.w = w;
                return sol;
            }
            free_var[static_cast<std::size_t>(release)] = true;
        } else {
            // Step toward the EQP solution until the first bound blocks.
            double alpha = 1.0;
            for (Eigen::Index j = 0; j < nf; ++j) {
                double target = w_free(j);
                double current = w(free_idx[j]);
                if (target < current)
                    alpha = std::min(alpha, current / (current - target));
            }
            alpha = std::max(alpha, 0.0);
            for (Eigen::Index j = 0; j < nf; ++j) {
                double next = w(free_idx[j]) + alpha * (w_free(j) - w(free_idx[j]));
                w(free_idx[j]) = std::max(next, 0.0);
                if (w(free_idx[j]) <= bound_tol && w_free(j) < 0.0) {
                    w(free_idx[j]) = 0.0;
                    free_var[static_cast<std::size_t>(free_idx[j])] = false;
                }
            }
        }
    }
    sol.w = w;
    return sol;  // caller verifies optimality and rejects a stale iterate
}

/// First-order optimality residual, normalized by the gradient scale.
double kkt_residual(const QpProblem& prob, const Eigen::VectorXd& w) {
    Eigen::VectorXd gradient = prob.q * w;
    const double scale = std::max(1.0, gradient.cwiseAbs().maxCoeff());

    double feas = (prob.a * w - prob.b).cwiseAbs().maxCoeff();
    feas = std::max(feas, std::max(0.0, -w.minCoeff()));

    // Multipliers from the free rows, least squares.
    std::vector<Eigen::Index> free_idx;
    for (Eigen::Index i = 0; i < w.size(); ++i)
        if (w(i) > 1e-10) free_idx.push_back(i);
    const auto nf = static_cast<Eigen::Index>(free_idx.size());
    Eigen::MatrixXd at(nf, prob.a.rows());
    Eigen::VectorXd gf(nf);
    for (Eigen::Index j = 0; j < nf; ++j) {
        at.row(j) = prob.a.col(free_idx[j]).transpose();
        gf(j) = gradient(free_idx[j]);
    }
    Eigen::VectorXd lambda =
        at.completeOrthogonalDecomposition().solve(gf);

    double stationarity = 0.0;
    Eigen::VectorXd reduced = gradient - prob.a.transpose() * lambda;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w(i) > 1e-10)
            stationarity = std::max(stationarity, std::abs(reduced(i)));
        else
            stationarity = std::max(stationarity, std::max(0.0, -reduced(i)));
    }
    return std::max(feas, stationarity / scale);
}

Eigen::MatrixXd validate_and_ridge(const Eigen::MatrixXd& cov, bool* ridged,
                                   std::vector<std::string>* notes) {
    if (cov.rows() != cov.cols()) throw DataError("covariance matrix must be square");
    const double asym = (cov - cov.transpose()).cwiseAbs().maxCoeff();
    const double scale = std::max(cov.cwiseAbs().maxCoeff(), 1e-300);
    if (asym > 1e-10 * scale) throw DataError("covariance matrix is not symmetric");

    Eigen::MatrixXd q = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(q, Eigen::EigenvaluesOnly);
    const double lambda_min = eig.eigenvalues().minCoeff();
    const double lambda_max = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    if (lambda_min < -1e-10 * std::max(lambda_max, 1e-300))
        throw DataError("covariance matrix is not positive semidefinite");
    if (lambda_min <= 1e-14 * std::max(lambda_max, 1e-300)) {
        q.diagonal().array() += kRidge;
        if (ridged) *ridged = true;
        if (notes)
            notes->push_back("covariance singular; ridge " + csv::format_number(kRidge) +
                             " applied to the diagonal");
    }
    return q;
}

FrontierPoint finish_point(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                           const QpProblem& prob, const Eigen::VectorXd& w, double target) {
    const double residual = kkt_residual(prob, w);
    if (!(residual <= 1e-6))
        throw NumericError("frontier solver failed first-order optimality at target " +
                           csv::format_number(target) + " (residual " +
                           csv::format_number(residual) + ")");
    FrontierPoint p;
    p.target_mu = target;
    p.weights = w;
    p.mu = mean.dot(w);
    p.sigma = std::sqrt(std::max(0.0, w.dot(cov * w)));
    return p;
}

Eigen::VectorXd feasible_start(const Eigen::VectorXd& mean, double target) {
    const Eigen::Index n = mean.size();
    Eigen::Index imin = 0, imax = 0;
    mean.minCoeff(&imin);
    mean.maxCoeff(&imax);
    const double lo = mean(imin), hi = mean(imax);
    const double span = hi - lo;
    const double tol = 1e-12 * std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
    if (target < lo - tol || target > hi + tol)
        throw DataError("target return " + csv::format_number(target) +
                        " outside achievable range [" + csv::format_number(lo) + ", " +
                        csv::format_number(hi) + "]");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    if (span <= tol) {
        w.setConstant(1.0 / double(n));
        return w;
    }
    double theta = std::clamp((target - lo) / span, 0.0, 1.0);
    w(imin) = 1.0 - theta;
    w(imax) += theta;
    return w;
}

} // namespace

FrontierPoint min_variance_point(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov) {
    if (mean.size() != cov.rows()) throw DataError("mean and covariance sizes disagree");
    if (mean.size() == 0) throw DataError("empty asset universe");
    QpProblem prob;
    prob.q = validate_and_ridge(cov, nullptr, nullptr);
    prob.a = Eigen::MatrixXd::Ones(1, mean.size());
    prob.b = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd w0 = Eigen::VectorXd::Constant(mean.size(), 1.0 / double(mean.size()));
    QpSolution sol = active_set_qp(prob, w0);
    return finish_point(mean, cov, prob, sol.w, mean.dot(sol.w));
}

FrontierPoint solve_frontier_point(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                   double target) {
    if (mean.size() != cov.rows()) throw DataError("mean and covariance sizes disagree");
    if (mean.size() == 0) throw DataError("empty asset universe");
    QpProblem prob;
    prob.q = validate_and_ridge(cov, nullptr, nullptr);
    prob.a = Eigen::MatrixXd(2, mean.size());
    prob.a.row(0).setOnes();
    prob.a.row(1) = mean.transpose();
    prob.b = Eigen::Vector2d(1.0, target);
    QpSolution sol = active_set_qp(prob, feasible_start(mean, target));
    return finish_point(mean, cov, prob, sol.w, target);
}

FrontierCurve efficient_frontier(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cov,
                                 int n_points) {
    if (n_points < 2) throw ConfigError("frontier needs at least 2 points");
    if (mean.size() != cov.rows()) throw DataError("mean and covariance sizes disagree");
    if (mean.size() == 0) throw DataError("empty asset universe");

    FrontierCurve curve;
    Eigen::MatrixXd q = validate_and_ridge(cov, &curve.ridged, &curve.notes);

    // Lower end of the efficient branch: the minimum-variance portfolio.
    QpProblem budget;
    budget.q = q;
    budget.a = Eigen::MatrixXd::Ones(1, mean.size());
    budget.b = Eigen::VectorXd::Ones(1);
    Eigen::VectorXd w0 = Eigen::VectorXd::Constant(mean.size(), 1.0 / double(mean.size()));
    QpSolution mvp = active_set_qp(budget, w0);
    FrontierPoint mvp_point = finish_point(mean, cov, budget, mvp.w, mean.dot(mvp.w));

    const double lo = mvp_point.mu;
    const double hi = mean.maxCoeff();
    const double tol = 1e-12 * std::max(1.0, std::abs(hi));

    if (hi - lo <= tol) {
        curve.points.push_back(mvp_point);
        if (mean.size() > 1)
            curve.notes.push_back("degenerate frontier: single achievable efficient return");
        return curve;
    }

    QpProblem prob;
    prob.q = q;
    prob.a = Eigen::MatrixXd(2, mean.size());
    prob.a.row(0).setOnes();
    prob.a.row(1) = mean.transpose();
    prob.b = Eigen::Vector2d(1.0, 0.0);

    for (int i = 0; i < n_points; ++i) {
        const double target = lo + (hi - lo) * double(i) / double(n_points - 1);
        if (i == 0) {
            FrontierPoint p = mvp_point;
            p.target_mu = target;
            curve.points.push_back(std::move(p));
            continue;
        }
        prob.b(1) = target;
        QpSolution sol = active_set_qp(prob, feasible_start(mean, target));
        curve.points.push_back(finish_point(mean, cov, prob, sol.w, target));
    }
    return curve;
}

std::vector<PlanePlacement> place_portfolios(const std::vector<BacktestResult>& results,
                                             std::vector<std::string>* warnings) {
    std::vector<PlanePlacement> placements;
    placements.reserve(results.size());
    for (const auto& result : results) {
        if (result.periods.empty())
            throw DataError("backtest result '" + result.label + "' has no completed periods");

        double sigma_sum = 0.0, mu_sum = 0.0;
        int used = 0;
        std::size_t cursor = 0;
        for (const auto& period : result.periods) {
            // Contiguous slice of the value series belonging to this period.
            std::size_t begin = cursor;
            while (begin < result.dates.size() && result.dates[begin] < period.formation)
                ++begin;
            std::size_t end = begin;
            while (end < result.dates.size() && result.dates[end] <= period.last_day) ++end;
            cursor = end;

            const std::size_t count = end - begin;
            if (count < 3) {
                if (warnings)
                    warnings->push_back(result.label + " period " +
                                        std::to_string(period.index) + ": only " +
                                        std::to_string(count) + " daily values, skipped");
                continue;
            }
            double mean = 0.0;
            for (std::size_t i = begin; i + 1 < end; ++i)
                mean += std::log(result.portfolio_value[i + 1] / result.portfolio_value[i]);
            const double n_rets = double(count - 1);
            mean /= n_rets;
            double ss = 0.0;
            for (std::size_t i = begin; i + 1 < end; ++i) {
                double r = std::log(result.portfolio_value[i + 1] / result.portfolio_value[i]);
                ss += (r - mean) * (r - mean);
            }
            sigma_sum += std::sqrt(ss / (n_rets - 1.0));
            mu_sum += mean;
            ++used;
        }
        if (used == 0)
            throw DataError("backtest result '" + result.label +
                            "' has no period with enough daily values");
        placements.push_back(
            PlanePlacement{result.label, sigma_sum / double(used), mu_sum / double(used)});
    }
    return placements;
}

} // namespace mgeo
