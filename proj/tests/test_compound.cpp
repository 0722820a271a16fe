#include "doctest.h"

#include "semicross/compound.hpp"
#include "semicross/estimators.hpp"

#include <cmath>
#include <vector>

using namespace semicross;

namespace {

// Direct sum over chain states, independent of the mixture tables.
double naive_log_density(const RareEventModel& model, const ChainSample& chain, const std::vector<double>& y) {
    const double gamma = model.gamma();
    const JumpLaw count = model.count_law();
    const JumpLaw& law = model.jump_law();
    const std::size_t r = y.size();
    const double g = static_cast<double>(r - 1);

    double q = 0.0;
    for (std::size_t k = 0; k < chain.size(); ++k) {
        const auto s = chain.state(k);
        const double t = static_cast<double>(first_passage_index(s, gamma)) - 2.0;
        if (g > t) q += std::exp(count.log_density(g) - count.log_tail(t));
    }
    double lq = std::log(q / static_cast<double>(chain.size()));

    for (std::size_t i = 0; i + 1 < r; ++i) {
        double h = 0.0;
        std::size_t used = 0;
        for (std::size_t k = 0; k < chain.size(); ++k) {
            const auto s = chain.state(k);
            if (s.size() <= i + 1) continue;
            ++used;
            const double t = std::max(0.0, gamma - (sum_of(s) - s[i]));
            if (y[i] > t) h += std::exp(law.log_density(y[i]) - law.log_tail(t));
        }
        lq += used > 0 ? std::log(h / static_cast<double>(used)) : law.log_density(y[i]);
    }
    double prefix = 0.0;
    for (std::size_t i = 0; i + 1 < r; ++i) prefix += y[i];
    const double c = std::max(0.0, gamma - prefix);
    return lq + law.log_density(y[r - 1]) - law.log_tail(c);
}

}  // namespace

TEST_CASE("dominant term and residual coefficient") {
    const auto half = RareEventModel::compound(1.0, 0.5, std::log(4.0));
    CHECK(compound_residual_coefficient(half) == doctest::Approx(0.225).epsilon(1e-13));
    CHECK(compound_dominant_term(half) == doctest::Approx(0.25 / 0.625).epsilon(1e-13));

    const auto single = RareEventModel::compound(0.75, 1.0, 10.0);
    CHECK(compound_dominant_term(single) == doctest::Approx(std::exp(-std::pow(10.0, 0.75))).epsilon(1e-14));
    CHECK(compound_residual_coefficient(single) == 0.0);
    const auto r = compound_estimate(single, 100, 10, 100, 1);
    CHECK(r.estimate == compound_dominant_term(single));
    CHECK(r.std_error == 0.0);

    const auto tiny = RareEventModel::compound(0.75, 0.3, 1e-9);
    CHECK(compound_dominant_term(tiny) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(compound_residual_coefficient(tiny) < 1e-12);
}

TEST_CASE("importance density bookkeeping") {
    const auto model = RareEventModel::compound(0.5, 0.3, 12.0);
    const ChainSample chain = run_chain(model, 60, 20, 3);
    const auto g = CompoundIsDensity::build(model, chain);
    Philox4x32 rng(5, 0);
    std::vector<double> y;
    for (int k = 0; k < 300; ++k) {
        const double lq = g.sample(rng, y);
        CHECK(y.size() >= 2);
        CHECK(sum_of(y) > model.gamma());
        for (double v : y) CHECK((v > 0.0 && v < model.gamma()));
        CHECK(std::abs(lq - g.log_density(y)) <= 1e-10);
        CHECK(std::abs(lq - naive_log_density(model, chain, y)) <= 1e-10);
    }
    CHECK(g.indexed_jumps() > 0);
    CHECK(g.log_density(std::vector<double>{13.0}) == -HUGE_VAL);
}

TEST_CASE("agrees with crude Monte Carlo across 20 seeds") {
    const auto model = RareEventModel::compound(0.75, 0.15, 25.0);
    int failures = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto ours = compound_estimate(model, 1000, 100, 10000, seed);
        const auto crude = crude_mc(model, 200000, 1000 + seed);
        CHECK(crude.estimate >= 1e-4);
        CHECK(ours.estimate >= compound_dominant_term(model));
        const double sigma = std::hypot(ours.std_error, crude.std_error);
        if (std::abs(ours.estimate - crude.estimate) > 3.0 * sigma) {
            ++failures;
            MESSAGE("seed " << seed << ": " << ours.estimate << " vs crude " << crude.estimate);
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("states holding a large jump at any index") {
    // A jump close to gamma used to stay at its starting index; the
    // per-index mixtures then under-covered the other positions.
    const auto model = RareEventModel::compound(0.5, 1.0 / 3.0, 500.0);
    const auto ours = compound_estimate(model, 10000, 1000, 10000, 1);
    const auto ak = ak_estimate(model, 200000, 2);
    CHECK(std::abs(ours.estimate - ak.estimate) <= 4.0 * std::hypot(ours.std_error, ak.std_error));

    const auto table = RareEventModel::compound(0.5, 0.1, 500.0);
    const auto t = compound_estimate(table, 10000, 1000, 10000, 1);
    CHECK(std::abs(t.estimate - 1.17e-8) <= 4.0 * t.std_error);
}
