#include "semicross/gibbs.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace semicross {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sum_except(std::span<const double> x, std::size_t skip) noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j != skip) s += x[j];
    }
    return s;
}

double max_of_prefix(std::span<const double> x, std::size_t count) noexcept {
    double m = -kInf;
    for (std::size_t j = 0; j < count; ++j) m = std::max(m, x[j]);
    return m;
}

// The conditional draw guarantees x_i > gamma - rest in exact arithmetic;
// nudge upward (staying below hi) if the rounded sum disagrees.
void restore_event(std::vector<double>& x, std::size_t i, double gamma, double hi) {
    while (!(sum_of(x) > gamma)) {
        const double next = std::nextafter(x[i], kInf);
        if (!(next < hi)) break;
        x[i] = next;
    }
}

// Draw from the law on (lo, hi); keep the current value if the interval is
// numerically massless.
double redraw_interval(const JumpLaw& law, double lo, double hi, double current, Philox4x32& rng) {
    const double u = uniform_open(rng);
    try {
        return law.sample_truncated_interval(lo, hi, u);
    } catch (const std::domain_error&) {
        return current;
    }
}

// Uniform permutation: both zero-variance targets are exchangeable, and
// without this move a jump near gamma never leaves its index, so the
// per-index mixtures miss the states where that index is small.
void shuffle(std::vector<double>& x, Philox4x32& rng) {
    for (std::size_t j = x.size(); j-- > 1;) {
        const auto k = static_cast<std::size_t>(uniform_open(rng) * static_cast<double>(j + 1));
        std::swap(x[j], x[std::min(k, j)]);
    }
}

void sweep_fixed_zero_variance(const RareEventModel& model, std::vector<double>& x, Philox4x32& rng) {
    const JumpLaw& law = model.jump_law();
    const double gamma = model.gamma();
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = law.sample_truncated_above(conditional_threshold(model, x, i), uniform_open(rng));
        restore_event(x, i, gamma, kInf);
    }
    shuffle(x, rng);
}

void sweep_fixed_residual(const RareEventModel& model, std::vector<double>& x, Philox4x32& rng) {
    const JumpLaw& law = model.jump_law();
    const double gamma = model.gamma();
    const std::size_t last = x.size() - 1;
    for (std::size_t i = 0; i < last; ++i) {
        const double c = gamma - sum_except(x, i);
        const double hi = std::min(gamma, x[last]);
        x[i] = redraw_interval(law, c, hi, x[i], rng);
        restore_event(x, i, gamma, hi);
    }
    const double c = gamma - sum_except(x, last);
    const double lo = std::max(c, max_of_prefix(x, last));
    x[last] = redraw_interval(law, lo, gamma, x[last], rng);
    restore_event(x, last, gamma, gamma);
}

void sweep_compound(const RareEventModel& model, std::vector<double>& y, Philox4x32& rng) {
    const JumpLaw& law = model.jump_law();
    const double gamma = model.gamma();
    // States can hold thousands of jumps, so the rest-sum is assembled from
    // a running prefix and a precomputed suffix instead of a fresh sum.
    const std::size_t r = y.size();
    std::vector<double> suffix(r + 1, 0.0);
    for (std::size_t j = r; j-- > 0;) suffix[j] = suffix[j + 1] + y[j];
    double prefix = 0.0;
    for (std::size_t j = 0; j < r; ++j) {
        const double c = gamma - (prefix + suffix[j + 1]);
        y[j] = redraw_interval(law, c, gamma, y[j], rng);
        prefix += y[j];
    }
    restore_event(y, r - 1, gamma, gamma);
    // pi(r | Y) ∝ f_R(r) 1{r >= r*(Y)}; by memorylessness r = r* - 1 + G, G >= 1.
    const std::size_t r_star = first_passage_index(y, gamma);
    const double g = std::min<double>(model.count_law().quantile(uniform_open(rng)), model.max_excess());
    const auto r_new = r_star - 1 + static_cast<std::size_t>(g);
    const std::size_t r_old = y.size();
    y.resize(r_new);
    for (std::size_t j = r_old; j < r_new; ++j) {
        y[j] = law.quantile(uniform_open(rng));
    }
    shuffle(y, rng);
}

std::vector<double> initial_fixed_zero_variance(const RareEventModel& model, Philox4x32& rng) {
    const JumpLaw& law = model.jump_law();
    std::vector<double> x(static_cast<std::size_t>(model.d()));
    for (int attempt = 0; attempt < kInitialAttempts; ++attempt) {
        for (auto& v : x) v = law.quantile(uniform_open(rng));
        if (model.in_event(x)) return x;
    }
    const std::size_t last = x.size() - 1;
    x[last] = law.sample_truncated_above(model.gamma() - sum_except(x, last), uniform_open(rng));
    restore_event(x, last, model.gamma(), kInf);
    return x;
}

std::vector<double> initial_fixed_residual(const RareEventModel& model, Philox4x32& rng) {
    const JumpLaw& law = model.jump_law();
    const double gamma = model.gamma();
    const int d = model.d();
    if (d < 2) {
        throw std::domain_error("residual target needs d >= 2");
    }
    if (!(law.cdf(gamma) > 0.0)) {
        throw std::domain_error("residual target is empty: F(gamma) = 0");
    }
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int attempt = 0; attempt < kInitialAttempts; ++attempt) {
        for (auto& v : x) v = law.sample_truncated_interval(-kInf, gamma, uniform_open(rng));
        std::iter_swap(std::max_element(x.begin(), x.end()), x.end() - 1);
        if (model.in_event(x)) return x;
    }
    // Equal coordinates slightly above gamma / d: the sum exceeds gamma and
    // every coordinate stays below gamma.
    const double dd = static_cast<double>(d);
    double v = gamma * (dd + 1.0) / (dd * dd);
    v = std::max(v, std::nextafter(law.support_lower(), kInf));
    std::fill(x.begin(), x.end(), v);
    restore_event(x, x.size() - 1, gamma, gamma);
    return x;
}

std::vector<double> initial_compound(const RareEventModel& model, Philox4x32& rng) {
    const JumpLaw& law = model.jump_law();
    const double gamma = model.gamma();
    std::vector<double> y;
    for (int attempt = 0; attempt < kInitialAttempts; ++attempt) {
        const double g = model.count_law().quantile(uniform_open(rng));
        const auto r = static_cast<std::size_t>(1.0 + std::min<double>(g, model.max_excess()));
        y.resize(r);
        for (auto& v : y) v = law.quantile(uniform_open(rng));
        if (model.in_event(y)) return y;
    }
    const std::size_t last = y.size() - 1;
    y[last] = law.sample_truncated_interval(gamma - sum_except(y, last), gamma, uniform_open(rng));
    restore_event(y, last, gamma, gamma);
    return y;
}

}  // namespace

double conditional_threshold(const RareEventModel& model, std::span<const double> state, std::size_t i) {
    return std::max(0.0, model.gamma() - sum_except(state, i));
}

void ChainSample::push_back(std::span<const double> state) {
    values.insert(values.end(), state.begin(), state.end());
    offsets.push_back(values.size());
}

std::size_t default_burn_in(std::size_t n) noexcept { return std::max<std::size_t>(100, n / 10); }

std::size_t first_passage_index(std::span<const double> jumps, double gamma) noexcept {
    double s = 0.0;
    for (std::size_t j = 0; j < jumps.size(); ++j) {
        s += jumps[j];
        if (s > gamma) return j + 1;
    }
    return jumps.size() + 1;
}

bool state_is_valid(const RareEventModel& model, ChainTarget target, std::span<const double> x) {
    if (!model.in_event(x)) return false;
    const JumpLaw& law = model.jump_law();
    for (double v : x) {
        if (!(law.log_density(v) > -kInf)) return false;
    }
    if (model.is_compound()) {
        return x.size() >= 2 &&
               x.size() + 1 - first_passage_index(x, model.gamma()) <= static_cast<std::size_t>(model.max_excess());
    }
    if (x.size() != static_cast<std::size_t>(model.d())) return false;
    if (target == ChainTarget::Residual) {
        const double last = x.back();
        if (!(last < model.gamma())) return false;
        for (double v : x.first(x.size() - 1)) {
            if (v > last) return false;
        }
    }
    return true;
}

std::vector<double> initial_state(const RareEventModel& model, ChainTarget target, Philox4x32& rng) {
    if (model.is_compound()) return initial_compound(model, rng);
    return target == ChainTarget::Residual ? initial_fixed_residual(model, rng)
                                           : initial_fixed_zero_variance(model, rng);
}

void gibbs_sweep(const RareEventModel& model, ChainTarget target, std::vector<double>& state, Philox4x32& rng) {
    if (model.is_compound()) {
        sweep_compound(model, state, rng);
    } else if (target == ChainTarget::Residual) {
        sweep_fixed_residual(model, state, rng);
    } else {
        sweep_fixed_zero_variance(model, state, rng);
    }
    assert(state_is_valid(model, target, state));
}

ChainSample run_chain(const RareEventModel& model, std::size_t n, std::size_t burn_in, std::uint64_t seed,
                      ChainTarget target) {
    if (n < 1) {
        throw std::invalid_argument("run_chain: n must be positive");
    }
    const std::uint64_t stream = target == ChainTarget::Residual ? streams::kResidualChain : streams::kChain;
    Philox4x32 rng(seed, stream);
    ChainSample chain;
    chain.burn_in = burn_in;
    chain.seed = seed;
    chain.target = target;
    chain.offsets.reserve(n + 1);
    std::vector<double> state = initial_state(model, target, rng);
    for (std::size_t t = 0; t < burn_in; ++t) gibbs_sweep(model, target, state, rng);
    for (std::size_t t = 0; t < n; ++t) {
        gibbs_sweep(model, target, state, rng);
        chain.push_back(state);
    }
    return chain;
}

}  // namespace semicross
