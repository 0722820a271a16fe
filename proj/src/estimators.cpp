#include "semicross/estimators.hpp"
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

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

void require_fixed_sum(const RareEventModel& model, const char* who) {
    if (model.is_compound()) {
        throw std::invalid_argument(std::string(who) + ": fixed-sum models only");
    }
}

void require_replications(std::uint64_t m) {
    if (m < 2) {
        throw std::invalid_argument("at least two replications are required");
    }
}

}  // namespace

EstimateReport crude_mc(const RareEventModel& model, std::uint64_t m, std::uint64_t seed, unsigned workers) {
    require_replications(m);
    const auto start = Clock::now();
    RunningStats stats;
    if (model.is_compound()) {
        // The original compound sum: R ~ Geom(rho) on {1, 2, ...}, Weibull jumps.
        const JumpLaw count = JumpLaw::geometric(model.rho());
        const JumpLaw& jump = model.base_law();
        const double gamma = model.gamma();
        stats = replicate(m, seed, workers, [&](Philox4x32& rng) {
            const auto r = static_cast<std::uint64_t>(count.quantile(uniform_open(rng)));
            double s = 0.0;
            for (std::uint64_t j = 0; j < r; ++j) {
                s += jump.quantile(uniform_open(rng));
                if (s > gamma) return 1.0;
            }
            return 0.0;
        });
    } else {
        const JumpLaw& law = model.jump_law();
        const int d = model.d();
        const double gamma = model.gamma();
        stats = replicate(m, seed, workers, [&](Philox4x32& rng) {
            double s = 0.0;
            for (int j = 0; j < d; ++j) s += law.quantile(uniform_open(rng));
            return s > gamma ? 1.0 : 0.0;
        });
    }
    const double p = stats.mean;
    const double se = std::sqrt(p * (1.0 - p) / static_cast<double>(m));
    return make_report(Method::Crude, p, se, m, 0, seconds_since(start), seed);
}

EstimateReport ak_estimate(const RareEventModel& model, std::uint64_t m, std::uint64_t seed, unsigned workers) {
    require_replications(m);
    const auto start = Clock::now();
    const bool compound = model.is_compound();
    // Compound sums draw R ~ Geom(rho) per replication and use R in place of d.
    const JumpLaw& law = compound ? model.base_law() : model.jump_law();
    const JumpLaw count = JumpLaw::geometric(compound ? model.rho() : 0.5);
    const double gamma = model.gamma();
    const auto stats = replicate(m, seed, workers, [&](Philox4x32& rng) {
        const double d = compound ? count.quantile(uniform_open(rng)) : static_cast<double>(model.d());
        double s = 0.0;
        double mx = -kInf;
        for (double j = 1.0; j < d; j += 1.0) {
            const double x = law.quantile(uniform_open(rng));
            s += x;
            mx = std::max(mx, x);
        }
        return d * std::exp(law.log_tail(std::max(gamma - s, mx)));
    });
    return make_report(Method::AK, stats.mean, stats.std_error_of_mean(), m, 0, seconds_since(start), seed);
}

std::vector<double> ce_tilted_means(const RareEventModel& model, const ChainSample& chain) {
    require_fixed_sum(model, "parametric CE");
    const JumpLaw& law = model.jump_law();
    if (law.family() != Family::Weibull || law.alpha() != 1.0) {
        throw std::domain_error("parametric CE is available for the exponential law (Weibull alpha = 1) only");
    }
    const auto d = static_cast<std::size_t>(model.d());
    if (!(model.gamma() > 0.0)) {
        // The event is certain, so f itself is optimal.
        return std::vector<double>(d, 1.0);
    }
    if (chain.empty()) {
        throw std::domain_error("parametric CE needs a nonempty chain");
    }
    std::vector<double> v(d, 0.0);
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto x = chain.state(k);
        for (std::size_t i = 0; i < d; ++i) v[i] += x[i];
    }
    for (auto& vi : v) vi /= static_cast<double>(chain.size());
    return v;
}

EstimateReport parametric_ce_estimate(const RareEventModel& model, const ChainSample& chain, std::uint64_t m,
                                      std::uint64_t seed, unsigned workers) {
    require_replications(m);
    const auto start = Clock::now();
    const std::vector<double> v = ce_tilted_means(model, chain);
    const double gamma = model.gamma();
    const auto stats = replicate(m, seed, workers, [&](Philox4x32& rng) {
        double s = 0.0;
        double log_ratio = 0.0;
        for (double vi : v) {
            const double y = -vi * std::log1p(-uniform_open(rng));
            s += y;
            // f(y; 1) / f(y; v) = v exp(-y (1 - 1/v))
            log_ratio += std::log(vi) - y * (1.0 - 1.0 / vi);
        }
        return s > gamma ? std::exp(log_ratio) : 0.0;
    });
    return make_report(Method::CE, stats.mean, stats.std_error_of_mean(), m, chain.size(), seconds_since(start),
                       seed);
}

EstimateReport semiparam_is_estimate(const RareEventModel& model, const ProductIsDensity& g, std::uint64_t m,
                                     std::uint64_t seed, unsigned workers) {
    require_fixed_sum(model, "semiparam_is_estimate");
    require_replications(m);
    if (g.target() != ChainTarget::ZeroVariance) {
        throw std::invalid_argument("semiparam_is_estimate needs g built from a zero-variance chain");
    }
    const auto start = Clock::now();
    const auto stats = replicate(m, seed, workers, [&](Philox4x32& rng) {
        thread_local std::vector<double> prefix;
        // The exact last conditional makes S > gamma hold for every draw.
        return std::exp(g.sample_log_ratio(rng, prefix));
    });
    return make_report(Method::Semiparam, stats.mean, stats.std_error_of_mean(), m, 0, seconds_since(start), seed);
}

double dominant_term(const RareEventModel& model) {
    require_fixed_sum(model, "dominant_term");
    const double log_cdf = model.jump_law().log_cdf(model.gamma());
    return -std::expm1(model.d() * log_cdf);
}

EstimateReport dominant_term_estimate(const RareEventModel& model, const ProductIsDensity& g, std::uint64_t m,
                                      std::uint64_t seed, unsigned workers) {
    require_fixed_sum(model, "dominant_term_estimate");
    require_replications(m);
    const auto start = Clock::now();
    const double head = dominant_term(model);
    if (head == 1.0 || model.d() == 1) {
        return make_report(Method::SemiparamDominant, head, 0.0, m, 0, seconds_since(start), seed);
    }
    if (g.target() != ChainTarget::Residual) {
        throw std::invalid_argument("dominant_term_estimate needs g built from a residual chain");
    }
    const double d = model.d();
    const auto stats = replicate(m, seed, workers, [&](Philox4x32& rng) {
        thread_local std::vector<double> prefix;
        return d * std::exp(g.sample_log_ratio(rng, prefix));
    });
    return make_report(Method::SemiparamDominant, head + stats.mean, stats.std_error_of_mean(), m, 0,
                       seconds_since(start), seed);
}

EstimateReport run_method(Method method, const RareEventModel& model, const PipelineOptions& opt) {
    const std::uint64_t burn_in = opt.burn_in.value_or(default_burn_in(opt.n));
    const auto start = Clock::now();
    EstimateReport r;
    switch (method) {
        case Method::Crude: return crude_mc(model, opt.m, opt.seed, opt.workers);
        case Method::AK: return ak_estimate(model, opt.m, opt.seed, opt.workers);
        case Method::Compound:
            if (!model.is_compound()) throw std::invalid_argument("method compound needs the compound model");
            return compound_estimate(model, opt.n, burn_in, opt.m, opt.seed, opt.workers);
        case Method::CE: {
            // Validate the family before spending time on the chain.
            if (model.is_compound() || model.jump_law().family() != Family::Weibull ||
                model.jump_law().alpha() != 1.0) {
                throw std::domain_error(
                    "parametric CE is available for the exponential law (Weibull alpha = 1) only");
            }
            const ChainSample chain = model.gamma() > 0.0 ? run_chain(model, opt.n, burn_in, opt.seed) : ChainSample{};
            r = parametric_ce_estimate(model, chain, opt.m, opt.seed, opt.workers);
            break;
        }
        case Method::Semiparam: {
            require_fixed_sum(model, "semiparam");
            if (model.d() == 1) {
                const double t = std::exp(model.jump_law().log_tail(model.gamma()));
                r = make_report(Method::Semiparam, t, 0.0, opt.m, 0, 0.0, opt.seed);
                break;
            }
            const ChainSample chain = run_chain(model, opt.n, burn_in, opt.seed);
            r = semiparam_is_estimate(model, ProductIsDensity::build(model, chain), opt.m, opt.seed, opt.workers);
            break;
        }
        case Method::SemiparamDominant: {
            require_fixed_sum(model, "semiparam-dominant");
            if (model.d() == 1 || dominant_term(model) == 1.0) {
                r = make_report(Method::SemiparamDominant, dominant_term(model), 0.0, opt.m, 0, 0.0, opt.seed);
                break;
            }
            const ChainSample chain = run_chain(model, opt.n, burn_in, opt.seed, ChainTarget::Residual);
            r = dominant_term_estimate(model, ProductIsDensity::build(model, chain), opt.m, opt.seed, opt.workers);
            break;
        }
    }
    r.n = opt.n;
    r.wall_seconds = seconds_since(start);
    return r;
}

}  // namespace semicross
