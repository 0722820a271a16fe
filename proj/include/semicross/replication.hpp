#pragma once

#include "semicross/rng.hpp"

#include <cstdint>
#include <functional>

namespace semicross {

/// Welford mean and sum of squared deviations; merge() is Chan's update.
struct RunningStats {
    std::uint64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept;
    void merge(const RunningStats& other) noexcept;
    /// Unbiased sample variance (0 for fewer than two values).
    double variance() const noexcept;
    double std_error_of_mean() const noexcept;
};

/// Replications per accumulation block. Blocks are merged in index order, so
/// the result is bit-identical for every worker count.
inline constexpr std::uint64_t kReplicationBlock = 4096;

/// SEMICROSS_WORKERS if set to a positive integer, else 1.
unsigned default_workers();

/// Runs fn on m replications, replication k drawing from stream k of seed.
RunningStats replicate(std::uint64_t m, std::uint64_t seed, unsigned workers,
                       const std::function<double(Philox4x32&)>& fn);

}  // namespace semicross
