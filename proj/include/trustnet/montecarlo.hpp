#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "trustnet/error.hpp"
#include "trustnet/rng.hpp"
#include "trustnet/uncertainty.hpp"

namespace trustnet {

struct MonteCarloConfig {
    int trials = 10'000;          // bootstrap resamples
    std::uint64_t rng_seed = 0;
    double dispersion_cap = 1.0;  // dispersion at (or above) which certainty saturates to 0

    void validate() const {
        if (trials < 100)
            throw input_error("monte carlo trials must be >= 100");
        if (!(dispersion_cap > 0.0) || !std::isfinite(dispersion_cap))
            throw input_error("dispersion cap must be a positive finite real");
    }

    bool operator==(const MonteCarloConfig&) const = default;
};

struct DispersionEstimate {
    double point_estimate = 0.0; // bootstrap mean of the dispersion statistic, >= 0
    double resample_mean = 0.0;
    double resample_std = 0.0;
};

namespace detail {

// Dispersion of one resample: |std/mean| (coefficient of variation) when the
// mean is meaningfully nonzero, plain std otherwise. `scale` is the largest
// input magnitude; the switch threshold is relative to it.
inline double dispersion_statistic(double sum, double sum_sq, std::size_t n, double scale) {
    double mean = sum / static_cast<double>(n);
    double var = (sum_sq - sum * mean) / static_cast<double>(n - 1);
    double std_dev = var > 0.0 ? std::sqrt(var) : 0.0;
    if (std::abs(mean) > 1e-9 * scale) return std::abs(std_dev / mean);
    return std_dev;
}

} // namespace detail

// Bootstrap estimate of the dispersion carried by a set of measurements.
// Samples are order-normalized (sorted) before resampling so permuted
// inputs give bit-identical results under the same seed.
inline DispersionEstimate monte_carlo_estimate(const QuantSamples& samples,
                                               const MonteCarloConfig& config) {
    config.validate();
    const std::size_t n = samples.values.size();
    if (n < 2)
        throw insufficient_data_error("dispersion estimation needs at least 2 samples");

    std::vector<double> sorted = samples.values;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back())
        return {0.0, 0.0, 0.0}; // identical samples carry no dispersion

    double scale = std::max(std::abs(sorted.front()), std::abs(sorted.back()));

    Rng rng(config.rng_seed);
    double stat_sum = 0.0, stat_sum_sq = 0.0;
    for (int t = 0; t < config.trials; ++t) {
        double sum = 0.0, sum_sq = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double x = sorted[rng.next_index(n)];
            sum += x;
            sum_sq += x * x;
        }
        double stat = detail::dispersion_statistic(sum, sum_sq, n, scale);
        stat_sum += stat;
        stat_sum_sq += stat * stat;
    }
    double mean = stat_sum / config.trials;
    double var = (stat_sum_sq - stat_sum * mean) / (config.trials - 1);
    return {std::max(mean, 0.0), mean, var > 0.0 ? std::sqrt(var) : 0.0};
}

// Affine map from dispersion to certainty: 0 dispersion -> 1, anything at or
// beyond the cap -> 0.
inline double dispersion_to_certainty(const DispersionEstimate& estimate,
                                      const MonteCarloConfig& config) {
    return 1.0 - std::min(estimate.point_estimate, config.dispersion_cap) / config.dispersion_cap;
}

struct AleatoricResult {
    double certainty = 0.5;
    bool fallback = false; // true when there was too little data and 0.5 was substituted
};

// Composition of the two steps above; mirrors the fuzzy pipeline's neutral
// 0.5 fallback when the observation cannot support an estimate.
inline AleatoricResult quantify_aleatoric(const Observation& observation,
                                          const MonteCarloConfig& config) {
    if (!observation.is_quantitative())
        throw contract_error("quantify_aleatoric needs a quantitative observation");
    try {
        return {dispersion_to_certainty(monte_carlo_estimate(observation.samples(), config), config),
                false};
    } catch (const insufficient_data_error&) {
        return {0.5, true};
    }
}

} // namespace trustnet
