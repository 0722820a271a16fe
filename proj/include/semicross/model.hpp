#pragma once

#include "semicross/distributions.hpp"

#include <span>

namespace semicross {

enum class Variant { FixedSum, CompoundGeometric };

/// P(X_1 + ... + X_d > gamma) for i.i.d. jumps (FixedSum), or the residual
/// problem of a geometric compound sum (CompoundGeometric).
///
/// In the compound variant jumps follow the jump law truncated to (0, gamma)
/// and the number of jumps R satisfies R - 1 ~ Geom(p) with
/// p = F̄(gamma) + rho F(gamma), so R >= 2.
class RareEventModel {
public:
    static RareEventModel fixed_sum(JumpLaw law, int d, double gamma);
    static RareEventModel compound(double alpha, double rho, double gamma);

    Variant variant() const noexcept { return variant_; }
    bool is_compound() const noexcept { return variant_ == Variant::CompoundGeometric; }

    /// Law of a single jump as sampled by the chain (truncated for compound).
    const JumpLaw& jump_law() const noexcept { return jump_law_; }
    /// Untruncated jump law (equals jump_law() for FixedSum).
    const JumpLaw& base_law() const noexcept { return base_law_; }
    int d() const noexcept { return d_; }
    double gamma() const noexcept { return gamma_; }
    double rho() const noexcept { return rho_; }

    /// Success probability p of R - 1 ~ Geom(p) (compound only).
    double tilted_geometric_param() const noexcept { return tilted_p_; }
    /// Law of R - 1 (compound only).
    JumpLaw count_law() const { return JumpLaw::geometric(tilted_p_); }
    /// Cap on r - r*(y) + 1 in the chain's jump-count update: the
    /// (1 - 1e-12)-quantile of Geom(p). Bounds state size without bounding r
    /// itself, which under the event can far exceed prior quantiles.
    int max_excess() const noexcept { return max_excess_; }

    bool in_event(std::span<const double> x) const;

private:
    RareEventModel(Variant variant, JumpLaw jump_law, JumpLaw base_law, int d, double gamma, double rho)
        : variant_(variant), jump_law_(jump_law), base_law_(base_law), d_(d), gamma_(gamma), rho_(rho) {}

    Variant variant_;
    JumpLaw jump_law_;
    JumpLaw base_law_;
    int d_ = 0;
    double gamma_ = 0.0;
    double rho_ = 1.0;
    double tilted_p_ = 1.0;
    int max_excess_ = 1;
};

/// Left-to-right sum; every event check in the library uses this order.
double sum_of(std::span<const double> x) noexcept;

}  // namespace semicross
