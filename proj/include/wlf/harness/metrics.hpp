#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "wlf/errors.hpp"
#include "wlf/harness/record.hpp"

namespace wlf::harness {

// Solved-problem count per configuration.
inline std::map<std::string, int> coverage(const std::vector<RunRecord> &records) {
    std::map<std::string, int> result;
    for (const auto &r : records) {
        result.try_emplace(r.config_id, 0);
        if (r.solved)
            ++result[r.config_id];
    }
    return result;
}

// IPC agile score of one run: 1 below a second, 0 when unsolved,
// 1 - ln(t)/ln(T) in between.
inline double agile_score_single(bool solved, double seconds, double timeout) {
    if (timeout <= 1.0)
        throw ValidationError("agile timeout must exceed one second");
    if (!solved)
        return 0.0;
    if (seconds <= 1.0)
        return 1.0;
    if (seconds >= timeout)
        return 0.0;
    return 1.0 - std::log(seconds) / std::log(timeout);
}

inline std::map<std::string, double> agile_scores(const std::vector<RunRecord> &records,
                                                  double timeout = 60.0) {
    std::map<std::string, double> result;
    for (const auto &r : records) {
        result.try_emplace(r.config_id, 0.0);
        result[r.config_id] += agile_score_single(r.solved, r.wall_seconds, timeout);
    }
    return result;
}

namespace detail {

// Regularised incomplete beta by Lentz's continued fraction.
inline double beta_continued_fraction(double a, double b, double x) {
    const double tiny = 1e-300;
    const double eps = 1e-15;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny)
        d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
        int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny)
            d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny)
            c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps)
            break;
    }
    return h;
}

inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0)
        return 0.0;
    if (x >= 1.0)
        return 1.0;
    double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                       a * std::log(x) + b * std::log(1.0 - x);
    double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0))
        return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

// Two-sided p of Student's t with df degrees of freedom.
inline double student_t_two_sided(double t, double df) {
    double x = df / (df + t * t);
    return incomplete_beta(df / 2.0, 0.5, x);
}

} // namespace detail

struct PearsonResult {
    double r = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double p_value = 1.0;
    bool significant = false; // p < 0.05
};

// Sample Pearson correlation with a Fisher-transform 95% interval and a
// t-statistic p-value.
inline PearsonResult pearson(const std::vector<double> &x, const std::vector<double> &y) {
    if (x.size() != y.size())
        throw ValidationError("pearson inputs must have equal length");
    std::size_t n = x.size();
    if (n < 4)
        throw ValidationError("pearson requires at least 4 samples");

    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0)
        throw ValidationError("pearson r is undefined for constant input");

    PearsonResult result;
    result.r = sxy / std::sqrt(sxx * syy);
    if (result.r > 1.0)
        result.r = 1.0;
    if (result.r < -1.0)
        result.r = -1.0;

    double df = static_cast<double>(n) - 2.0;
    if (1.0 - result.r * result.r < 1e-14) {
        result.ci_low = result.ci_high = result.r;
        result.p_value = 0.0;
        result.significant = true;
        return result;
    }
    double z = std::atanh(result.r);
    double half_width = 1.96 / std::sqrt(static_cast<double>(n) - 3.0);
    result.ci_low = std::tanh(z - half_width);
    result.ci_high = std::tanh(z + half_width);
    double t = result.r * std::sqrt(df) / std::sqrt(1.0 - result.r * result.r);
    result.p_value = detail::student_t_two_sided(t, df);
    result.significant = result.p_value < 0.05;
    return result;
}

} // namespace wlf::harness
