#pragma once

#include "semicross/marginal_mixture.hpp"
#include "semicross/report.hpp"

#include <cstdint>
#include <vector>

namespace semicross {

/// P(S_R > gamma) = F̄/(F̄ + rho F) + rho (1 - rho) F^2/(F̄ + rho F) * P̃(S_R > gamma)
/// with F = F(gamma); P̃ is the residual measure of the compound model.
double compound_dominant_term(const RareEventModel& model);
double compound_residual_coefficient(const RareEventModel& model);

/// Importance density over (r, y_1..y_r) for the residual probability:
///   q(r) = mixture over chain states of Geom(p) truncated to r - 1 > r*(Y_k) - 2,
///   h_i  = mixture of full conditionals of jump i over states with r_k > i
///          (the truncated prior where no state reaches index i),
///   last jump from its exact conditional given the others.
class CompoundIsDensity {
public:
    static CompoundIsDensity build(const RareEventModel& model, const ChainSample& chain);

    const RareEventModel& model() const noexcept { return model_; }
    /// Mixture for R - 1.
    const MarginalMixture& count_mixture() const noexcept { return count_; }
    /// Number of jump indices with their own mixture.
    std::size_t indexed_jumps() const noexcept { return jumps_.size(); }
    /// Mixture used for jump i (0-based) when it is not the last jump.
    const MarginalMixture& jump_mixture(std::size_t i) const noexcept {
        return i < jumps_.size() ? jumps_[i] : prior_;
    }

    /// Fills y (its length is r) and returns ln q(r, y).
    double sample(Philox4x32& rng, std::vector<double>& y) const;
    double log_density(std::span<const double> y) const;
    /// ln of f̃(r, y) / q(r, y) with the last jump integrated out; draws r and
    /// the first r - 1 jumps only.
    double sample_log_ratio(Philox4x32& rng, std::vector<double>& prefix) const;

private:
    CompoundIsDensity(RareEventModel model, MarginalMixture count, MarginalMixture prior)
        : model_(model), count_(std::move(count)), prior_(std::move(prior)) {}

    double draw_prefix(Philox4x32& rng, std::vector<double>& prefix, double& log_q) const;

    RareEventModel model_;
    MarginalMixture count_;
    MarginalMixture prior_;
    std::vector<MarginalMixture> jumps_;
};

/// dominant + coefficient * residual IS mean, with the chain and density
/// built inside and timed.
EstimateReport compound_estimate(const RareEventModel& model, std::uint64_t n, std::uint64_t burn_in,
                                 std::uint64_t m, std::uint64_t seed, unsigned workers = 1);

}  // namespace semicross
