#pragma once

#include "semicross/gibbs.hpp"

#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

namespace semicross {

/// Equally weighted mixture (1/n) sum_k f(y) 1{lo_k < y < hi_k} / P(lo_k < X < hi_k)
/// of the jump law restricted to intervals.
///
/// With hi_k = inf every component is the law truncated above c_k = lo_k and
/// the density is a step function of the sorted thresholds: segment k carries
/// ln sum_{j <= k} 1 / F̄(c_(j)). Finite upper ends (the residual chain) give a
/// step function over the merged endpoints. Either way a lookup is one binary
/// search.
///
/// Continuous laws include the left endpoint (y >= c_k); discrete laws use
/// y > c_k, matching sample_truncated_above.
class MarginalMixture {
public:
    static MarginalMixture from_thresholds(JumpLaw law, std::vector<double> thresholds);
    static MarginalMixture from_intervals(JumpLaw law, std::vector<double> lower, std::vector<double> upper);

    const JumpLaw& law() const noexcept { return law_; }
    std::size_t size() const noexcept;
    /// Bounds of component k (sorted order for threshold mixtures).
    double component_lower(std::size_t k) const { return bounded_above_ ? lower_[k] : breakpoints_[k]; }
    double component_upper(std::size_t k) const {
        return bounded_above_ ? upper_[k] : std::numeric_limits<double>::infinity();
    }
    bool bounded_above() const noexcept { return bounded_above_; }

    /// Sorted breakpoints of the step function; for threshold mixtures these
    /// are the sorted thresholds c_(1) <= ... <= c_(n).
    std::span<const double> breakpoints() const noexcept { return breakpoints_; }
    /// ln of the summed component weights on [breakpoints[k], breakpoints[k+1]).
    std::span<const double> log_segment_weights() const noexcept { return log_weights_; }

    /// ln of (1/n) sum_k 1{y in component k} / mass_k; -inf outside every component.
    double log_weight(double y) const;
    double log_density(double y) const;
    /// O(n) evaluation straight from the component list.
    double naive_log_density(double y) const;

    double sample(Philox4x32& rng) const;

    /// Component list as CSV: lower,upper,log_mass.
    void write_csv(std::ostream& out) const;

private:
    MarginalMixture(JumpLaw law) : law_(law) {}
    void build_steps();

    JumpLaw law_;
    // Interval components only; threshold mixtures live in breakpoints_.
    std::vector<double> lower_;
    std::vector<double> upper_;
    std::vector<double> log_mass_;
    bool bounded_above_ = false;
    std::vector<double> breakpoints_;
    std::vector<double> log_weights_;
    double log_n_ = 0.0;
};

/// h_i from the chain: one component per state, the full conditional of
/// coordinate `coord` (0-based) given the rest of that state. Under the
/// residual target the components are the truncated intervals of the
/// residual kernel.
MarginalMixture build_marginal(const ChainSample& chain, std::size_t coord, const RareEventModel& model);

/// A draw of the last coordinate together with its conditional log density.
struct LastDraw {
    double value;
    double log_density;
};

/// y_d from the law truncated above c = (gamma - sum(prefix))^+;
/// log_density = ln f(y_d) - ln F̄(c).
LastDraw exact_last_conditional(const RareEventModel& model, std::span<const double> prefix, Philox4x32& rng);

/// g(y) = h_1(y_1) ... h_{d-1}(y_{d-1}) pi(y_d | y_1..y_{d-1}) for a fixed-sum
/// model. Under the residual target the last factor is the law on
/// (max(gamma - sum, max prefix), gamma).
class ProductIsDensity {
public:
    static ProductIsDensity build(const RareEventModel& model, const ChainSample& chain);

    const RareEventModel& model() const noexcept { return model_; }
    ChainTarget target() const noexcept { return target_; }
    std::span<const MarginalMixture> marginals() const noexcept { return marginals_; }

    /// Bounds (lo, hi) of the last coordinate's conditional given the prefix.
    std::pair<double, double> last_interval(std::span<const double> prefix) const;

    /// Fills y (length d) and returns ln g(y).
    double sample(Philox4x32& rng, std::vector<double>& y) const;
    double log_density(std::span<const double> y) const;

    /// ln of f(y) / g(y) with the last coordinate integrated out:
    /// sum_i [ln n - ln W_i(y_i)] + ln P(last interval), which equals
    /// ln f(y)/g(y) for any y_d drawn from the last conditional. Draws only
    /// the prefix.
    double sample_log_ratio(Philox4x32& rng, std::vector<double>& prefix) const;

private:
    ProductIsDensity(RareEventModel model, ChainTarget target) : model_(model), target_(target) {}

    RareEventModel model_;
    ChainTarget target_;
    std::vector<MarginalMixture> marginals_;
};

}  // namespace semicross
