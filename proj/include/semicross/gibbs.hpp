#pragma once

#include "semicross/model.hpp"
#include "semicross/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace semicross {

/// Stationary law of the chain.
///
/// ZeroVariance: f(x) 1{S(x) > gamma}.
/// Residual:     f(x) 1{S(x) > gamma, max_j x_j < gamma, x_d = max_j x_j},
///               the tilted measure behind the dominant-term decomposition
///               (FixedSum only).
enum class ChainTarget { ZeroVariance, Residual };

/// Post-burn-in states, one per sweep. Compound states are ragged
/// (y_1, ..., y_r); fixed-sum states all have length d.
struct ChainSample {
    std::vector<double> values;
    std::vector<std::size_t> offsets{0};
    std::size_t burn_in = 0;
    std::uint64_t seed = 0;
    ChainTarget target = ChainTarget::ZeroVariance;

    std::size_t size() const noexcept { return offsets.size() - 1; }
    bool empty() const noexcept { return size() == 0; }
    std::span<const double> state(std::size_t k) const {
        return {values.data() + offsets[k], offsets[k + 1] - offsets[k]};
    }
    void push_back(std::span<const double> state);
};

/// max(100, n / 10).
std::size_t default_burn_in(std::size_t n) noexcept;

/// Number of i.i.d. proposals tried before the deterministic fallback.
inline constexpr int kInitialAttempts = 1000;

std::vector<double> initial_state(const RareEventModel& model, ChainTarget target, Philox4x32& rng);

/// (gamma - sum_{j != i} x_j)^+: the coordinate-i full conditional under
/// the zero-variance target is the jump law truncated above this value.
double conditional_threshold(const RareEventModel& model, std::span<const double> state, std::size_t i);

/// One systematic scan; each coordinate is redrawn from its full conditional.
/// The compound variant then redraws the number of jumps. Zero-variance
/// targets end with a uniform permutation of the coordinates.
void gibbs_sweep(const RareEventModel& model, ChainTarget target, std::vector<double>& state, Philox4x32& rng);

/// Deterministic in (model, n, burn_in, seed, target).
ChainSample run_chain(const RareEventModel& model, std::size_t n, std::size_t burn_in, std::uint64_t seed,
                      ChainTarget target = ChainTarget::ZeroVariance);

/// True when the state lies in the support of the target.
bool state_is_valid(const RareEventModel& model, ChainTarget target, std::span<const double> state);

/// min{r : y_1 + ... + y_r > gamma}; size()+1 when the full sum does not exceed gamma.
std::size_t first_passage_index(std::span<const double> jumps, double gamma) noexcept;

}  // namespace semicross
