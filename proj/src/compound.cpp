#include "semicross/compound.hpp"
#include "semicross/replication.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semicross {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_compound(const RareEventModel& model) {
    if (!model.is_compound()) {
        throw std::invalid_argument("compound estimator needs the compound model");
    }
}

// ln(F̄ + rho F) at gamma.
double log_normalizer(const RareEventModel& model) {
    const double lt = model.base_law().log_tail(model.gamma());
    return log_add_exp(lt, std::log(model.rho()) + log1mexp(lt));
}

}  // namespace

double compound_dominant_term(const RareEventModel& model) {
    require_compound(model);
    const double lt = model.base_law().log_tail(model.gamma());
    if (model.rho() == 1.0) return std::exp(lt);
    return std::exp(lt - log_normalizer(model));
}

double compound_residual_coefficient(const RareEventModel& model) {
    require_compound(model);
    const double rho = model.rho();
    if (rho == 1.0) return 0.0;
    const double log_cdf = model.base_law().log_cdf(model.gamma());
    return std::exp(std::log(rho) + std::log1p(-rho) + 2.0 * log_cdf - log_normalizer(model));
}

CompoundIsDensity CompoundIsDensity::build(const RareEventModel& model, const ChainSample& chain) {
    require_compound(model);
    if (chain.empty()) {
        throw std::domain_error("compound density: empty chain");
    }
    const double gamma = model.gamma();
    std::vector<double> count_thresholds(chain.size());
    std::size_t longest = 0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto y = chain.state(k);
        // R - 1 >= r* - 1, i.e. R - 1 > r* - 2.
        count_thresholds[k] = static_cast<double>(first_passage_index(y, gamma)) - 2.0;
        longest = std::max(longest, y.size());
    }
    CompoundIsDensity g(model, MarginalMixture::from_thresholds(model.count_law(), std::move(count_thresholds)),
                        MarginalMixture::from_thresholds(model.jump_law(), {0.0}));

    std::vector<std::vector<double>> thresholds(longest > 0 ? longest - 1 : 0);
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto y = chain.state(k);
        const double total = sum_of(y);
        for (std::size_t i = 0; i + 1 < y.size(); ++i) {
            thresholds[i].push_back(std::max(0.0, gamma - (total - y[i])));
        }
    }
    g.jumps_.reserve(thresholds.size());
    for (auto& t : thresholds) {
        g.jumps_.push_back(MarginalMixture::from_thresholds(model.jump_law(), std::move(t)));
        std::vector<double>().swap(t);
    }
    return g;
}

double CompoundIsDensity::draw_prefix(Philox4x32& rng, std::vector<double>& prefix, double& log_q) const {
    const double g = count_.sample(rng);
    const auto r = static_cast<std::size_t>(g) + 1;
    double log_ratio = -count_.log_weight(g);
    log_q = count_.log_density(g);
    prefix.resize(r - 1);
    for (std::size_t i = 0; i + 1 < r; ++i) {
        const MarginalMixture& h = jump_mixture(i);
        prefix[i] = h.sample(rng);
        const double lw = h.log_weight(prefix[i]);
        log_ratio -= lw;
        log_q += model_.jump_law().log_density(prefix[i]) + lw;
    }
    return log_ratio;
}

double CompoundIsDensity::sample(Philox4x32& rng, std::vector<double>& y) const {
    double log_q = 0.0;
    draw_prefix(rng, y, log_q);
    const JumpLaw& law = model_.jump_law();
    const double c = std::max(0.0, model_.gamma() - sum_of(y));
    const double last = law.sample_truncated_above(c, uniform_open(rng));
    y.push_back(last);
    return log_q + law.log_density(last) - law.log_tail(c);
}

double CompoundIsDensity::log_density(std::span<const double> y) const {
    if (y.size() < 2) return -kInf;
    const std::size_t r = y.size();
    double lq = count_.log_density(static_cast<double>(r - 1));
    for (std::size_t i = 0; i + 1 < r && lq > -kInf; ++i) lq += jump_mixture(i).log_density(y[i]);
    if (lq == -kInf) return -kInf;
    const JumpLaw& law = model_.jump_law();
    const double c = std::max(0.0, model_.gamma() - sum_of(y.first(r - 1)));
    if (c > 0.0 && !(y[r - 1] > c)) return -kInf;
    return lq + law.log_density(y[r - 1]) - law.log_tail(c);
}

double CompoundIsDensity::sample_log_ratio(Philox4x32& rng, std::vector<double>& prefix) const {
    double log_q = 0.0;
    const double log_ratio = draw_prefix(rng, prefix, log_q);
    const double c = std::max(0.0, model_.gamma() - sum_of(prefix));
    return log_ratio + model_.jump_law().log_tail(c);
}

EstimateReport compound_estimate(const RareEventModel& model, std::uint64_t n, std::uint64_t burn_in,
                                 std::uint64_t m, std::uint64_t seed, unsigned workers) {
    require_compound(model);
    if (n < 2 || m < 2) {
        throw std::invalid_argument("compound_estimate needs n, m >= 2");
    }
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(); };
    const double head = compound_dominant_term(model);
    const double coefficient = compound_residual_coefficient(model);
    if (coefficient == 0.0) {
        return make_report(Method::Compound, head, 0.0, m, n, elapsed(), seed);
    }
    const ChainSample chain = run_chain(model, n, burn_in, seed);
    const CompoundIsDensity g = CompoundIsDensity::build(model, chain);
    const auto stats = replicate(m, seed, workers, [&](Philox4x32& rng) {
        thread_local std::vector<double> prefix;
        return std::exp(g.sample_log_ratio(rng, prefix));
    });
    return make_report(Method::Compound, head + coefficient * stats.mean, coefficient * stats.std_error_of_mean(), m,
                       n, elapsed(), seed);
}

}  // namespace semicross
