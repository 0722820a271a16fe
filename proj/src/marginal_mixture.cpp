#include "semicross/marginal_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace semicross {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> v) {
    if (v.empty()) return -kInf;
    const double m = *std::max_element(v.begin(), v.end());
    if (m == -kInf) return -kInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

// ln(e^a - e^b) for b <= a.
double log_sub_exp(double a, double b) {
    if (b == -kInf) return a;
    if (!(b < a)) return -kInf;
    return a + log1mexp(b - a);
}

}  // namespace

MarginalMixture MarginalMixture::from_thresholds(JumpLaw law, std::vector<double> thresholds) {
    MarginalMixture mix(law);
    std::erase_if(thresholds, [&](double c) { return std::isnan(c) || !(law.log_tail(c) > -kInf); });
    mix.breakpoints_ = std::move(thresholds);
    mix.build_steps();
    return mix;
}

MarginalMixture MarginalMixture::from_intervals(JumpLaw law, std::vector<double> lower, std::vector<double> upper) {
    if (lower.size() != upper.size()) {
        throw std::invalid_argument("from_intervals: bound arrays differ in length");
    }
    if (law.is_discrete()) {
        throw std::invalid_argument("from_intervals: continuous laws only");
    }
    MarginalMixture mix(law);
    mix.bounded_above_ = true;
    for (std::size_t k = 0; k < lower.size(); ++k) {
        const double lm = law.log_interval_mass(lower[k], upper[k]);
        if (!(lm > -kInf)) continue;
        mix.lower_.push_back(lower[k]);
        mix.upper_.push_back(upper[k]);
        mix.log_mass_.push_back(lm);
    }
    mix.build_steps();
    return mix;
}

std::size_t MarginalMixture::size() const noexcept { return bounded_above_ ? lower_.size() : breakpoints_.size(); }

void MarginalMixture::build_steps() {
    const std::size_t n = size();
    if (n == 0) {
        throw std::domain_error("marginal mixture has no component with positive mass");
    }
    log_n_ = std::log(static_cast<double>(n));

    if (!bounded_above_) {
        // Threshold components are kept only as the sorted breakpoints.
        std::sort(breakpoints_.begin(), breakpoints_.end());
        log_weights_.resize(n);
        double acc = -kInf;
        for (std::size_t j = 0; j < n; ++j) {
            acc = log_add_exp(acc, -law_.log_tail(breakpoints_[j]));
            log_weights_[j] = acc;
        }
        return;
    }

    // Sweep over merged endpoints: +w_k at lower_k, -w_k at upper_k.
    struct Event {
        double at;
        std::size_t component;
        bool opens;
    };
    std::vector<Event> events;
    events.reserve(2 * n);
    for (std::size_t k = 0; k < n; ++k) {
        events.push_back({lower_[k], k, true});
        if (upper_[k] < kInf) events.push_back({upper_[k], k, false});
    }
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.at < b.at; });

    std::vector<double> active;                      // log weights of open components
    std::vector<std::size_t> slot(n, 0);             // position of component in `active`
    std::vector<std::size_t> owner;                  // component at each position
    double acc = -kInf;
    double peak = -kInf;
    auto recompute = [&] {
        acc = log_sum_exp(active);
        peak = acc;
    };

    breakpoints_.resize(events.size());
    log_weights_.resize(events.size());
    std::size_t j = 0;
    while (j < events.size()) {
        std::size_t group_end = j;
        while (group_end < events.size() && events[group_end].at == events[j].at) ++group_end;
        bool unstable = false;
        for (std::size_t e = j; e < group_end; ++e) {
            const Event& ev = events[e];
            const double w = -log_mass_[ev.component];
            if (ev.opens) {
                slot[ev.component] = active.size();
                active.push_back(w);
                owner.push_back(ev.component);
                acc = log_add_exp(acc, w);
                peak = std::max(peak, acc);
            } else {
                const std::size_t pos = slot[ev.component];
                active[pos] = active.back();
                owner[pos] = owner.back();
                slot[owner[pos]] = pos;
                active.pop_back();
                owner.pop_back();
                acc = log_sub_exp(acc, w);
                // Cancellation costs relative precision once the running sum
                // falls well below the values it was built from.
                if (!(acc > peak - std::log(2.0))) unstable = true;
            }
        }
        if (unstable) recompute();
        for (std::size_t e = j; e < group_end; ++e) {
            breakpoints_[e] = events[e].at;
            log_weights_[e] = acc;
        }
        j = group_end;
    }
}

double MarginalMixture::log_weight(double y) const {
    const auto it = law_.is_discrete() ? std::lower_bound(breakpoints_.begin(), breakpoints_.end(), y)
                                       : std::upper_bound(breakpoints_.begin(), breakpoints_.end(), y);
    if (it == breakpoints_.begin()) return -kInf;
    return log_weights_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1] - log_n_;
}

double MarginalMixture::log_density(double y) const {
    const double lf = law_.log_density(y);
    if (lf == -kInf) return -kInf;
    return lf + log_weight(y);
}

double MarginalMixture::naive_log_density(double y) const {
    const double lf = law_.log_density(y);
    if (lf == -kInf) return -kInf;
    std::vector<double> terms;
    for (std::size_t k = 0; k < size(); ++k) {
        const double lo = component_lower(k);
        const double hi = component_upper(k);
        const bool above = law_.is_discrete() ? y > lo : y >= lo;
        if (above && y < hi) terms.push_back(-law_.log_interval_mass(lo, hi));
    }
    return lf + log_sum_exp(terms) - log_n_;
}

double MarginalMixture::sample(Philox4x32& rng) const {
    const double n = static_cast<double>(size());
    const auto k = std::min(size() - 1, static_cast<std::size_t>(uniform_open(rng) * n));
    const double u = uniform_open(rng);
    if (!bounded_above_) return law_.sample_truncated_above(breakpoints_[k], u);
    return law_.sample_truncated_interval(lower_[k], upper_[k], u);
}

void MarginalMixture::write_csv(std::ostream& out) const {
    out << "lower,upper,log_mass\n";
    out.precision(17);
    for (std::size_t k = 0; k < size(); ++k) {
        const double lo = component_lower(k);
        const double hi = component_upper(k);
        out << lo << ',' << hi << ',' << law_.log_interval_mass(lo, hi) << '\n';
    }
}

MarginalMixture build_marginal(const ChainSample& chain, std::size_t coord, const RareEventModel& model) {
    if (chain.empty()) {
        throw std::domain_error("build_marginal: empty chain");
    }
    if (model.is_compound()) {
        throw std::invalid_argument("build_marginal: fixed-sum models only");
    }
    const auto d = static_cast<std::size_t>(model.d());
    if (coord >= d) {
        throw std::domain_error("build_marginal: coordinate out of range");
    }
    const double gamma = model.gamma();
    std::vector<double> lower(chain.size());
    std::vector<double> upper;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        lower[k] = conditional_threshold(model, chain.state(k), coord);
    }
    if (chain.target == ChainTarget::ZeroVariance) {
        return MarginalMixture::from_thresholds(model.jump_law(), std::move(lower));
    }
    upper.resize(chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto x = chain.state(k);
        if (coord + 1 < d) {
            upper[k] = std::min(gamma, x[d - 1]);
        } else {
            lower[k] = std::max(lower[k], *std::max_element(x.begin(), x.end() - 1));
            upper[k] = gamma;
        }
    }
    return MarginalMixture::from_intervals(model.jump_law(), std::move(lower), std::move(upper));
}

LastDraw exact_last_conditional(const RareEventModel& model, std::span<const double> prefix, Philox4x32& rng) {
    const double c = std::max(0.0, model.gamma() - sum_of(prefix));
    const JumpLaw& law = model.jump_law();
    const double y = law.sample_truncated_above(c, uniform_open(rng));
    return {y, law.log_density(y) - law.log_tail(c)};
}

ProductIsDensity ProductIsDensity::build(const RareEventModel& model, const ChainSample& chain) {
    if (model.is_compound()) {
        throw std::invalid_argument("ProductIsDensity: fixed-sum models only");
    }
    ProductIsDensity g(model, chain.target);
    const auto d = static_cast<std::size_t>(model.d());
    if (d > 1 && chain.empty()) {
        throw std::domain_error("ProductIsDensity: empty chain");
    }
    g.marginals_.reserve(d - 1);
    for (std::size_t i = 0; i + 1 < d; ++i) g.marginals_.push_back(build_marginal(chain, i, model));
    return g;
}

std::pair<double, double> ProductIsDensity::last_interval(std::span<const double> prefix) const {
    const double c = std::max(0.0, model_.gamma() - sum_of(prefix));
    if (target_ == ChainTarget::ZeroVariance) return {c, kInf};
    double m = c;
    for (double v : prefix) m = std::max(m, v);
    return {m, model_.gamma()};
}

double ProductIsDensity::sample(Philox4x32& rng, std::vector<double>& y) const {
    const JumpLaw& law = model_.jump_law();
    const std::size_t d = marginals_.size() + 1;
    y.resize(d);
    double lg = 0.0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        y[i] = marginals_[i].sample(rng);
        lg += marginals_[i].log_density(y[i]);
    }
    const auto [lo, hi] = last_interval(std::span<const double>(y).first(d - 1));
    const double u = uniform_open(rng);
    y[d - 1] = hi == kInf ? law.sample_truncated_above(lo, u) : law.sample_truncated_interval(lo, hi, u);
    return lg + law.log_density(y[d - 1]) - law.log_interval_mass(lo, hi);
}

double ProductIsDensity::log_density(std::span<const double> y) const {
    const std::size_t d = marginals_.size() + 1;
    if (y.size() != d) {
        throw std::domain_error("ProductIsDensity: dimension mismatch");
    }
    const JumpLaw& law = model_.jump_law();
    double lg = 0.0;
    for (std::size_t i = 0; i + 1 < d; ++i) lg += marginals_[i].log_density(y[i]);
    if (lg == -kInf) return -kInf;
    const auto [lo, hi] = last_interval(y.first(d - 1));
    const double last = y[d - 1];
    if (!(last >= lo && last < hi)) return -kInf;
    return lg + law.log_density(last) - law.log_interval_mass(lo, hi);
}

double ProductIsDensity::sample_log_ratio(Philox4x32& rng, std::vector<double>& prefix) const {
    const std::size_t d = marginals_.size() + 1;
    prefix.resize(d - 1);
    double lr = 0.0;
    for (std::size_t i = 0; i + 1 < d; ++i) {
        prefix[i] = marginals_[i].sample(rng);
        lr -= marginals_[i].log_weight(prefix[i]);
    }
    const auto [lo, hi] = last_interval(prefix);
    return lr + model_.jump_law().log_interval_mass(lo, hi);
}

}  // namespace semicross
