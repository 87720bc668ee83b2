#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "wlf/errors.hpp"
#include "wlf/learn/dataset.hpp"

namespace wlf::learn {

struct FitMetrics {
    double objective = 0.0;
    bool converged = true;
    int iterations = 0;
};

struct FitResult {
    std::vector<double> weights;
    double bias = 0.0;
    FitMetrics metrics;
};

namespace detail {

inline double dot(const std::vector<double> &a, const std::vector<double> &b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

inline double mean(const std::vector<double> &v) {
    if (v.empty())
        return 0.0;
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

// Cholesky solve of the SPD system A x = b, A row-major n x n.
inline std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b) {
    std::size_t n = b.size();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * n + j];
            for (std::size_t k = 0; k < j; ++k)
                sum -= a[i * n + k] * a[j * n + k];
            if (i == j) {
                if (sum <= 0.0)
                    throw ValidationError("matrix is not positive definite");
                a[i * n + i] = std::sqrt(sum);
            } else {
                a[i * n + j] = sum / a[j * n + j];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i) { // forward: L z = b
        double sum = b[i];
        for (std::size_t k = 0; k < i; ++k)
            sum -= a[i * n + k] * b[k];
        b[i] = sum / a[i * n + i];
    }
    for (std::size_t i = n; i-- > 0;) { // backward: L^T x = z
        double sum = b[i];
        for (std::size_t k = i + 1; k < n; ++k)
            sum -= a[k * n + i] * b[k];
        b[i] = sum / a[i * n + i];
    }
    return b;
}

inline double soft_threshold(double x, double threshold) {
    if (x > threshold)
        return x - threshold;
    if (x < -threshold)
        return x + threshold;
    return 0.0;
}

} // namespace detail

// Lasso by cyclic coordinate descent on
//   (1/2n) ||Xw + b - y||^2 + alpha ||w||_1.
// Deterministic: w starts at zero, coordinates sweep in index order,
// converged flag false when the sweep budget runs out.
inline FitResult fit_lasso(const RegressionSet &data, double alpha, int max_sweeps = 1000,
                           double tol = 1e-10, std::vector<double> *objective_log = nullptr) {
    if (alpha <= 0.0)
        throw ValidationError("lasso alpha must be positive");
    if (data.rows() == 0)
        throw ValidationError("lasso requires a non-empty design matrix");
    std::size_t n = data.rows();
    std::size_t p = data.cols();

    FitResult result;
    result.weights.assign(p, 0.0);
    result.bias = detail::mean(data.y);

    std::vector<double> residual(n);
    for (std::size_t i = 0; i < n; ++i)
        residual[i] = data.y[i] - result.bias;

    std::vector<double> col_scale(p, 0.0); // (1/n) sum x_ij^2
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            col_scale[j] += data.x[i][j] * data.x[i][j];
    for (double &z : col_scale)
        z /= static_cast<double>(n);

    auto objective = [&]() {
        double sse = 0.0;
        for (double r : residual)
            sse += r * r;
        double l1 = 0.0;
        for (double w : result.weights)
            l1 += std::abs(w);
        return sse / (2.0 * static_cast<double>(n)) + alpha * l1;
    };

    if (objective_log)
        objective_log->push_back(objective());

    result.metrics.converged = false;
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            if (col_scale[j] == 0.0) {
                result.weights[j] = 0.0;
                continue;
            }
            double rho = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                rho += data.x[i][j] * residual[i];
            rho = rho / static_cast<double>(n) + col_scale[j] * result.weights[j];
            double updated = detail::soft_threshold(rho, alpha) / col_scale[j];
            double change = updated - result.weights[j];
            if (change != 0.0) {
                for (std::size_t i = 0; i < n; ++i)
                    residual[i] -= data.x[i][j] * change;
                result.weights[j] = updated;
                max_change = std::max(max_change, std::abs(change));
            }
        }
        double bias_shift = detail::mean(residual);
        result.bias += bias_shift;
        for (double &r : residual)
            r -= bias_shift;
        max_change = std::max(max_change, std::abs(bias_shift));

        if (objective_log)
            objective_log->push_back(objective());
        result.metrics.iterations = sweep;
        if (max_change < tol) {
            result.metrics.converged = true;
            break;
        }
    }
    result.metrics.objective = objective();
    return result;
}

// Posterior mean of linear-kernel GPR with observation noise, the
// ridge-equivalent closed form: centre the columns and targets, solve
// (Xc^T Xc + noise I) w = Xc^T (y - ybar), recover the intercept.
inline FitResult fit_gpr(const RegressionSet &data, double noise) {
    if (noise <= 0.0)
        throw ValidationError("gpr noise must be positive");
    if (data.rows() == 0)
        throw ValidationError("gpr requires a non-empty design matrix");
    std::size_t n = data.rows();
    std::size_t p = data.cols();

    std::vector<double> col_mean(p, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < p; ++j)
            col_mean[j] += data.x[i][j];
    for (double &m : col_mean)
        m /= static_cast<double>(n);
    double y_mean = detail::mean(data.y);

    std::vector<double> gram(p * p, 0.0);
    std::vector<double> rhs(p, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            double xc_j = data.x[i][j] - col_mean[j];
            rhs[j] += xc_j * (data.y[i] - y_mean);
            for (std::size_t k = 0; k <= j; ++k)
                gram[j * p + k] += xc_j * (data.x[i][k] - col_mean[k]);
        }
    }
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = j + 1; k < p; ++k)
            gram[j * p + k] = gram[k * p + j];
        gram[j * p + j] += noise;
    }

    FitResult result;
    result.weights = p ? detail::cholesky_solve(gram, rhs) : std::vector<double>{};
    result.bias = y_mean - detail::dot(result.weights, col_mean);

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = detail::dot(result.weights, data.x[i]) + result.bias - data.y[i];
        sse += r * r;
    }
    result.metrics.objective =
        0.5 * sse + 0.5 * noise * detail::dot(result.weights, result.weights);
    result.metrics.iterations = 1;
    return result;
}

namespace detail {

// Deterministic subgradient descent along the normalised direction with
// eta_t = eta0 / sqrt(t) and best-iterate tracking; the initial
// all-zero iterate is a candidate. Normalising keeps the step scale
// independent of the penalty constant and the training set size.
template <typename Objective, typename Subgradient>
FitResult subgradient_descent(std::size_t dims, int epochs, Objective &&objective,
                              Subgradient &&subgradient, bool with_bias) {
    FitResult result;
    result.weights.assign(dims, 0.0);
    result.bias = 0.0;

    std::vector<double> w(dims, 0.0);
    double b = 0.0;
    double best = objective(w, b);
    result.metrics.objective = best;

    std::vector<double> grad_w(dims, 0.0);
    for (int t = 1; t <= epochs; ++t) {
        double grad_b = 0.0;
        std::fill(grad_w.begin(), grad_w.end(), 0.0);
        subgradient(w, b, grad_w, grad_b);
        if (!with_bias)
            grad_b = 0.0;
        double norm = std::sqrt(dot(grad_w, grad_w) + grad_b * grad_b);
        if (norm == 0.0)
            break; // subgradient vanished: w is a minimiser
        double eta = 1.0 / (norm * std::sqrt(static_cast<double>(t)));
        for (std::size_t j = 0; j < dims; ++j)
            w[j] -= eta * grad_w[j];
        b -= eta * grad_b;
        double value = objective(w, b);
        if (value < best) {
            best = value;
            result.weights = w;
            result.bias = b;
            result.metrics.objective = best;
        }
    }
    result.metrics.iterations = epochs;
    return result;
}

} // namespace detail

// Linear epsilon-insensitive SVR:
//   0.5 ||w||^2 + C sum max(0, |x_i.w + b - y_i| - eps).
inline FitResult fit_svr(const RegressionSet &data, double c, double epsilon,
                         int epochs = 2000) {
    if (c < 0.0 || epsilon < 0.0)
        throw ValidationError("svr requires C >= 0 and epsilon >= 0");
    std::size_t p = data.cols();
    auto objective = [&](const std::vector<double> &w, double b) {
        double value = 0.5 * detail::dot(w, w);
        for (std::size_t i = 0; i < data.rows(); ++i) {
            double r = std::abs(detail::dot(w, data.x[i]) + b - data.y[i]) - epsilon;
            if (r > 0.0)
                value += c * r;
        }
        return value;
    };
    auto subgradient = [&](const std::vector<double> &w, double b, std::vector<double> &gw,
                           double &gb) {
        gw = w;
        for (std::size_t i = 0; i < data.rows(); ++i) {
            double r = detail::dot(w, data.x[i]) + b - data.y[i];
            if (std::abs(r) <= epsilon)
                continue;
            double sign = r > 0.0 ? 1.0 : -1.0;
            for (std::size_t j = 0; j < p; ++j)
                gw[j] += c * sign * data.x[i][j];
            gb += c * sign;
        }
    };
    return detail::subgradient_descent(p, epochs, objective, subgradient, true);
}

// Ranking SVM without bias (pair differences cancel it):
//   0.5 ||w||^2 + C sum max(0, 1 - (w.x_worse - w.x_better)).
inline FitResult fit_rank_svm(const RankingSet &data, double c, int epochs = 2000) {
    if (c < 0.0)
        throw ValidationError("rank svm requires C >= 0");
    std::size_t p = data.cols();
    auto margin = [&](const std::vector<double> &w, std::size_t pair) {
        auto [better, worse] = data.pairs[pair];
        return detail::dot(w, data.rows[worse]) - detail::dot(w, data.rows[better]);
    };
    auto objective = [&](const std::vector<double> &w, double) {
        double value = 0.5 * detail::dot(w, w);
        for (std::size_t pr = 0; pr < data.pairs.size(); ++pr) {
            double hinge = 1.0 - margin(w, pr);
            if (hinge > 0.0)
                value += c * hinge;
        }
        return value;
    };
    auto subgradient = [&](const std::vector<double> &w, double, std::vector<double> &gw,
                           double &) {
        gw = w;
        for (std::size_t pr = 0; pr < data.pairs.size(); ++pr) {
            if (margin(w, pr) >= 1.0)
                continue;
            auto [better, worse] = data.pairs[pr];
            for (std::size_t j = 0; j < p; ++j)
                gw[j] -= c * (data.rows[worse][j] - data.rows[better][j]);
        }
    };
    return detail::subgradient_descent(p, epochs, objective, subgradient, false);
}

// LP ranking formulation, solved on the equivalent hinge + L1 form:
//   sum_p max(0, 1 - w.(x_worse - x_better)) + lambda ||w||_1.
inline FitResult fit_rank_lp(const RankingSet &data, double lambda, int epochs = 2000) {
    if (lambda < 0.0)
        throw ValidationError("rank lp requires lambda >= 0");
    std::size_t p = data.cols();
    auto objective = [&](const std::vector<double> &w, double) {
        double value = 0.0;
        for (const auto &[better, worse] : data.pairs) {
            double hinge = 1.0 - (detail::dot(w, data.rows[worse]) -
                                  detail::dot(w, data.rows[better]));
            if (hinge > 0.0)
                value += hinge;
        }
        for (double x : w)
            value += lambda * std::abs(x);
        return value;
    };
    auto subgradient = [&](const std::vector<double> &w, double, std::vector<double> &gw,
                           double &) {
        for (std::size_t j = 0; j < p; ++j)
            gw[j] = lambda * (w[j] > 0.0 ? 1.0 : (w[j] < 0.0 ? -1.0 : 0.0));
        for (const auto &[better, worse] : data.pairs) {
            double margin =
                detail::dot(w, data.rows[worse]) - detail::dot(w, data.rows[better]);
            if (margin >= 1.0)
                continue;
            for (std::size_t j = 0; j < p; ++j)
                gw[j] -= data.rows[worse][j] - data.rows[better][j];
        }
    };
    return detail::subgradient_descent(p, epochs, objective, subgradient, false);
}

} // namespace wlf::learn
