#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

namespace semicross::testing {

// Two-sided Kolmogorov-Smirnov statistic of a sample against a continuous cdf.
inline double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max(d, std::max(f - i / n, (i + 1) / n - f));
    }
    return d;
}

// Asymptotic KS critical value at significance 1e-3: sqrt(-ln(0.0005)/2)/sqrt(n).
inline double ks_critical_1e3(std::size_t n) {
    return std::sqrt(-std::log(0.0005) / 2.0) / std::sqrt(static_cast<double>(n));
}

// Regularized upper incomplete gamma Q(d, x) for integer d via the Poisson
// sum P(Pois(x) <= d-1), summed in log space.
inline double erlang_tail(int d, double x) {
    double log_term = -x;
    double total = std::exp(log_term);
    for (int k = 1; k < d; ++k) {
        log_term += std::log(x) - std::log(static_cast<double>(k));
        total += std::exp(log_term);
    }
    return total;
}

// Mean and batch-means standard error for a correlated series.
struct SeriesSummary {
    double mean = 0.0;
    double std_error = 0.0;
};

inline SeriesSummary batch_means(const std::vector<double>& series, std::size_t batches = 50) {
    const std::size_t len = series.size() / batches;
    std::vector<double> means(batches, 0.0);
    for (std::size_t b = 0; b < batches; ++b) {
        for (std::size_t j = 0; j < len; ++j) means[b] += series[b * len + j];
        means[b] /= static_cast<double>(len);
    }
    SeriesSummary out;
    for (double m : means) out.mean += m;
    out.mean /= static_cast<double>(batches);
    double ss = 0.0;
    for (double m : means) ss += (m - out.mean) * (m - out.mean);
    out.std_error = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
    return out;
}

}  // namespace semicross::testing
