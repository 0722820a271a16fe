#pragma once

#include "semicross/marginal_mixture.hpp"
#include "semicross/report.hpp"

#include <cstdint>
#include <vector>

namespace semicross {

/// Mean of 1{S(X) > gamma} over m i.i.d. draws from f; binomial std error.
EstimateReport crude_mc(const RareEventModel& model, std::uint64_t m, std::uint64_t seed, unsigned workers = 1);

/// d F̄(max(gamma - X_1 - ... - X_{d-1}, max_{j<d} X_j)) averaged over m draws.
/// For the compound model d is a fresh Geom(rho) count in every replication.
EstimateReport ak_estimate(const RareEventModel& model, std::uint64_t m, std::uint64_t seed, unsigned workers = 1);

/// Exponential means tilted to the chain's coordinate means. Weibull alpha = 1 only.
std::vector<double> ce_tilted_means(const RareEventModel& model, const ChainSample& chain);
EstimateReport parametric_ce_estimate(const RareEventModel& model, const ChainSample& chain, std::uint64_t m,
                                      std::uint64_t seed, unsigned workers = 1);

/// Mean of 1{S > gamma} f / g over m draws from g (zero-variance target).
EstimateReport semiparam_is_estimate(const RareEventModel& model, const ProductIsDensity& g, std::uint64_t m,
                                     std::uint64_t seed, unsigned workers = 1);

/// 1 - F(gamma)^d, the probability that some jump alone exceeds gamma.
double dominant_term(const RareEventModel& model);

/// dominant_term + mean of d f / g on {S > gamma, max < gamma, last = max},
/// with g built from a residual-target chain. The std error covers the
/// residual only.
EstimateReport dominant_term_estimate(const RareEventModel& model, const ProductIsDensity& g, std::uint64_t m,
                                      std::uint64_t seed, unsigned workers = 1);

/// Full pipelines: chain, importance density and replications, timed end to end.
struct PipelineOptions {
    std::uint64_t n = 1000;
    /// Defaults to default_burn_in(n) when unset.
    std::optional<std::uint64_t> burn_in;
    std::uint64_t m = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
};

EstimateReport run_method(Method method, const RareEventModel& model, const PipelineOptions& opt);

}  // namespace semicross
