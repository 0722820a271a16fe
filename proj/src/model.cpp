#include "semicross/model.hpp"

#include <cmath>
#include <stdexcept>

namespace semicross {

double sum_of(std::span<const double> x) noexcept {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

RareEventModel RareEventModel::fixed_sum(JumpLaw law, int d, double gamma) {
    if (d < 1) {
        throw std::invalid_argument("fixed-sum model needs d >= 1");
    }
    if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("gamma must be finite and nonnegative");
    }
    if (law.family() == Family::Geometric) {
        throw std::invalid_argument("fixed-sum jumps must be continuous");
    }
    return RareEventModel(Variant::FixedSum, law, law, d, gamma, 1.0);
}

RareEventModel RareEventModel::compound(double alpha, double rho, double gamma) {
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("compound rho must lie in (0,1]");
    }
    if (!(gamma > 0.0) || !std::isfinite(gamma)) {
        throw std::invalid_argument("compound gamma must be positive and finite");
    }
    const JumpLaw base = JumpLaw::weibull(alpha);
    RareEventModel model(Variant::CompoundGeometric, JumpLaw::truncated_weibull(alpha, gamma), base, 0, gamma, rho);
    // p = F̄(gamma) + rho F(gamma)
    model.tilted_p_ = std::min(1.0, base.tail(gamma) + rho * base.cdf(gamma));
    model.max_excess_ = static_cast<int>(JumpLaw::geometric(model.tilted_p_).quantile(1.0 - 1e-12));
    return model;
}

bool RareEventModel::in_event(std::span<const double> x) const { return sum_of(x) > gamma_; }

}  // namespace semicross
