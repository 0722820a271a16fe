#include "doctest.h"

#include "semicross/gibbs.hpp"
#include "semicross/quadrature.hpp"
#include "test_support.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

using namespace semicross;
using semicross::testing::batch_means;
using semicross::testing::ks_critical_1e3;
using semicross::testing::ks_statistic;

namespace {

void check_all_states(const RareEventModel& model, const ChainSample& chain) {
    std::size_t bad = 0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        if (!state_is_valid(model, chain.target, chain.state(k))) ++bad;
    }
    CHECK(bad == 0);
}

}  // namespace

TEST_CASE("initial state lands in the event") {
    Philox4x32 rng(3, 0);
    const auto one = RareEventModel::fixed_sum(JumpLaw::weibull(1.0), 1, 5.0);
    const auto x = initial_state(one, ChainTarget::ZeroVariance, rng);
    REQUIRE(x.size() == 1);
    CHECK(x[0] > 5.0);

    const auto easy = RareEventModel::fixed_sum(JumpLaw::weibull(1.0), 2, 0.1);
    CHECK(state_is_valid(easy, ChainTarget::ZeroVariance, initial_state(easy, ChainTarget::ZeroVariance, rng)));

    // Far in the tail the rejection phase always fails and the fallback is used.
    const auto hard = RareEventModel::fixed_sum(JumpLaw::weibull(0.1), 10, 1e15);
    CHECK(state_is_valid(hard, ChainTarget::ZeroVariance, initial_state(hard, ChainTarget::ZeroVariance, rng)));
    CHECK(state_is_valid(hard, ChainTarget::Residual, initial_state(hard, ChainTarget::Residual, rng)));
    const auto pareto = RareEventModel::fixed_sum(JumpLaw::pareto(10.0), 10, 1510.0);
    CHECK(state_is_valid(pareto, ChainTarget::Residual, initial_state(pareto, ChainTarget::Residual, rng)));

    const auto compound = RareEventModel::compound(1.0, 0.5, 3.0);
    std::size_t bad = 0;
    for (std::uint64_t s = 0; s < 10000; ++s) {
        Philox4x32 r(s, 7);
        const auto y = initial_state(compound, ChainTarget::ZeroVariance, r);
        bool ok = y.size() >= 2 && sum_of(y) > 3.0;
        for (double v : y) ok = ok && v > 0.0 && v < 3.0;
        if (!ok) ++bad;
    }
    CHECK(bad == 0);
    const auto rare_compound = RareEventModel::compound(0.95, 0.01, 3000.0);
    CHECK(state_is_valid(rare_compound, ChainTarget::ZeroVariance,
                         initial_state(rare_compound, ChainTarget::ZeroVariance, rng)));
}

TEST_CASE("full conditionals are the law truncated above (gamma - rest)^+") {
    const auto law = JumpLaw::weibull(1.0);
    const auto m2 = RareEventModel::fixed_sum(law, 2, 10.0);
    const std::vector<double> s2{6.0, 6.0};
    CHECK(conditional_threshold(m2, s2, 0) == 4.0);

    const auto m3 = RareEventModel::fixed_sum(law, 3, 10.0);
    const std::vector<double> s3{8.0, 7.0, 1.0};
    CHECK(conditional_threshold(m3, s3, 2) == 0.0);

    // The first coordinate of a sweep consumes the first uniform of the stream;
    // the closing shuffle may move it to the other index.
    Philox4x32 rng(11, 0);
    Philox4x32 shadow = rng;
    std::vector<double> x = s2;
    gibbs_sweep(m2, ChainTarget::ZeroVariance, x, rng);
    const double first = law.sample_truncated_above(4.0, uniform_open(shadow));
    CHECK(first > 4.0);
    CHECK(std::find(x.begin(), x.end(), first) != x.end());
}

TEST_CASE("run_chain bookkeeping and reproducibility") {
    const auto model = RareEventModel::fixed_sum(JumpLaw::weibull(0.5), 3, 20.0);
    const ChainSample a = run_chain(model, 1000, 100, 42);
    CHECK(a.size() == 1000);
    CHECK(a.burn_in == 100);
    CHECK(a.seed == 42);

    // Replay: initial state plus 100 + 1000 sweeps on the same stream.
    Philox4x32 rng(42, streams::kChain);
    auto x = initial_state(model, ChainTarget::ZeroVariance, rng);
    for (int t = 0; t < 1100; ++t) gibbs_sweep(model, ChainTarget::ZeroVariance, x, rng);
    const auto last = a.state(999);
    CHECK(std::equal(x.begin(), x.end(), last.begin(), last.end()));

    const ChainSample b = run_chain(model, 1000, 100, 42);
    CHECK(a.values == b.values);
    const ChainSample c = run_chain(model, 1000, 100, 43);
    CHECK(a.values != c.values);
    CHECK(default_burn_in(1000) == 100);
    CHECK(default_burn_in(10000) == 1000);
    CHECK(default_burn_in(10) == 100);
}

TEST_CASE("event invariance over every stored state") {
    const std::vector<RareEventModel> models{
        RareEventModel::fixed_sum(JumpLaw::weibull(0.1), 10, 1e10),
        RareEventModel::fixed_sum(JumpLaw::weibull(0.9), 10, 50.0),
        RareEventModel::fixed_sum(JumpLaw::weibull(1.5), 5, 16.0),
        RareEventModel::fixed_sum(JumpLaw::pareto(1.0), 10, 1e4 + 10),
        RareEventModel::fixed_sum(JumpLaw::pareto(10.0), 10, 15.0),
    };
    for (const auto& model : models) {
        CAPTURE(model.gamma());
        check_all_states(model, run_chain(model, 2000, 200, 5));
        check_all_states(model, run_chain(model, 2000, 200, 5, ChainTarget::Residual));
    }
    for (const auto& model : {RareEventModel::compound(0.75, 0.15, 63.361), RareEventModel::compound(0.2, 0.2, 1e6),
                              RareEventModel::compound(0.95, 0.02, 1500.0)}) {
        const ChainSample chain = run_chain(model, 2000, 200, 9);
        check_all_states(model, chain);
        std::size_t bad = 0;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            const auto y = chain.state(k);
            if (first_passage_index(y, model.gamma()) > y.size()) ++bad;
            for (double v : y) bad += !(v > 0.0 && v < model.gamma());
        }
        CHECK(bad == 0);
    }
}

TEST_CASE("d = 1 draws exactly from the law truncated above gamma") {
    for (const auto& law : {JumpLaw::weibull(0.5), JumpLaw::pareto(2.0)}) {
        const auto model = RareEventModel::fixed_sum(law, 1, 5.0);
        const ChainSample chain = run_chain(model, 100000, 0, 17);
        std::vector<double> xs(chain.values.begin(), chain.values.end());
        const double ks = ks_statistic(xs, [&](double x) { return 1.0 - law.tail(x) / law.tail(5.0); });
        CHECK(ks < ks_critical_1e3(xs.size()));
    }
}

TEST_CASE("chain mean of S matches the Gamma(2,1) conditional mean") {
    const double gamma = 10.0;
    // E[S | S > gamma] for S ~ Gamma(2, 1), by quadrature of s^2 e^{-s} and s e^{-s}.
    quad::Options opt;
    opt.rel_tol = 1e-12;
    const double num = quad::integrate_to_infinity([](double s) { return s * s * std::exp(-s); }, gamma, opt).value;
    const double den = quad::integrate_to_infinity([](double s) { return s * std::exp(-s); }, gamma, opt).value;
    const double oracle = num / den;
    CHECK(oracle == doctest::Approx(122.0 / 11.0).epsilon(1e-9));

    const auto model = RareEventModel::fixed_sum(JumpLaw::weibull(1.0), 2, gamma);
    const ChainSample chain = run_chain(model, 200000, 1000, 23);
    std::vector<double> sums(chain.size());
    for (std::size_t k = 0; k < chain.size(); ++k) sums[k] = sum_of(chain.state(k));
    const auto summary = batch_means(sums);
    CHECK(std::abs(summary.mean - oracle) < 4.0 * summary.std_error);
}

TEST_CASE("residual chain: marginal of the maximum for d = 2") {
    // Target ∝ e^{-x1-x2} on {x1 <= x2 < gamma, x1 + x2 > gamma}; the marginal of
    // x2 on (gamma/2, gamma) has density ∝ e^{-gamma} - e^{-2 x2}.
    const double gamma = 10.0;
    auto unnormalized_cdf = [&](double t) {
        const double a = gamma / 2.0;
        return std::exp(-gamma) * (t - a) + 0.5 * (std::exp(-2.0 * t) - std::exp(-2.0 * a));
    };
    const double total = unnormalized_cdf(gamma);
    const auto model = RareEventModel::fixed_sum(JumpLaw::weibull(1.0), 2, gamma);
    const ChainSample chain = run_chain(model, 100000, 1000, 31, ChainTarget::Residual);
    check_all_states(model, chain);
    std::vector<double> maxima;
    for (std::size_t k = 0; k < chain.size(); k += 10) maxima.push_back(chain.state(k)[1]);
    const double ks = ks_statistic(maxima, [&](double t) { return unnormalized_cdf(t) / total; });
    CHECK(ks < ks_critical_1e3(maxima.size()));
}

TEST_CASE("compound chain: number of jumps follows its conditional law") {
    // For the state (y, r), r - r*(y) + 1 is Geom(p) regardless of y.
    const auto model = RareEventModel::compound(1.0, 0.5, 3.0);
    const ChainSample chain = run_chain(model, 50000, 500, 13);
    std::vector<double> excess;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto y = chain.state(k);
        excess.push_back(static_cast<double>(y.size()) -
                         static_cast<double>(first_passage_index(y, model.gamma())) + 1.0);
    }
    const auto summary = batch_means(excess);
    const double expected = 1.0 / model.tilted_geometric_param();
    CHECK(std::abs(summary.mean - expected) < 4.0 * summary.std_error + 1e-12);
}

TEST_CASE("first passage index") {
    const std::vector<double> y{1.0, 2.0, 3.0};
    CHECK(first_passage_index(y, 0.5) == 1);
    CHECK(first_passage_index(y, 3.0) == 3);
    CHECK(first_passage_index(y, 5.9) == 3);
    CHECK(first_passage_index(y, 6.0) == 4);
}
