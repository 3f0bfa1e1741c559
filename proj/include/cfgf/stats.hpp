#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "cfgf/errors.hpp"

namespace cfgf {

// Pairwise (tree) summation with a fixed reduction order.  Used everywhere a
// Monte Carlo estimate is merged from batches, so that results do not depend
// on how batches were distributed across threads.
inline double pairwise_sum(const double* x, std::size_t n) {
    if (n == 0) return 0.0;
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_sum(x, half) + pairwise_sum(x + half, n - half);
}

inline double pairwise_sum(const std::vector<double>& x) {
    return pairwise_sum(x.data(), x.size());
}

inline double mean_of(const std::vector<double>& x) {
    if (x.empty()) throw ParamError("mean_of: empty sample");
    return pairwise_sum(x) / static_cast<double>(x.size());
}

inline double variance_of(const std::vector<double>& x) {
    if (x.size() < 2) throw ParamError("variance_of: need at least 2 samples");
    const double m = mean_of(x);
    std::vector<double> dev2(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - m;
        dev2[i] = d * d;
    }
    return pairwise_sum(dev2) / static_cast<double>(x.size() - 1);
}

inline double std_error_of(const std::vector<double>& x) {
    return std::sqrt(variance_of(x) / static_cast<double>(x.size()));
}

// Coefficient of variation: sample std / |mean|.
inline double cov_of(const std::vector<double>& x) {
    const double m = mean_of(x);
    if (m == 0.0) throw ParamError("cov_of: zero mean");
    return std::sqrt(variance_of(x)) / std::abs(m);
}

// Batch-level first and second moments, merged with pairwise summation over
// a batch list whose order is fixed by batch index (not by completion order).
struct BatchedMoments {
    std::vector<double> sums;
    std::vector<double> sq_sums;
    std::uint64_t count = 0;

    void add_batch(double sum, double sq_sum, std::uint64_t n) {
        sums.push_back(sum);
        sq_sums.push_back(sq_sum);
        count += n;
    }

    double mean() const {
        if (count == 0) throw ParamError("BatchedMoments: no samples");
        return pairwise_sum(sums) / static_cast<double>(count);
    }

    // Population-style variance of the underlying samples (n-1 denominator).
    double variance() const {
        if (count < 2) throw ParamError("BatchedMoments: need at least 2 samples");
        const double n = static_cast<double>(count);
        const double s1 = pairwise_sum(sums);
        const double s2 = pairwise_sum(sq_sums);
        const double v = (s2 - s1 * s1 / n) / (n - 1.0);
        return v > 0.0 ? v : 0.0;
    }

    double std_error() const {
        return std::sqrt(variance() / static_cast<double>(count));
    }
};

}  // namespace cfgf
