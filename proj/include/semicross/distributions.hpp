#pragma once

#include <limits>
#include <map>
#include <string>

namespace semicross {

enum class Family { Weibull, Pareto, TruncatedWeibull, Geometric };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

/// Univariate jump distribution.
///
/// Weibull:          F̄(x) = exp(-x^alpha), x > 0.
/// Pareto:           F̄(x) = x^-alpha, x >= 1.
/// TruncatedWeibull: Weibull(alpha) conditioned on X < upper.
/// Geometric:        P(R = r) = rho (1-rho)^(r-1), r = 1, 2, ...
///
/// Values are immutable; every member function is pure and thread-safe.
class JumpLaw {
public:
    static JumpLaw weibull(double alpha);
    static JumpLaw pareto(double alpha);
    static JumpLaw truncated_weibull(double alpha, double upper);
    static JumpLaw geometric(double rho);

    /// Parses the flat key=value form, e.g. {family=weibull, alpha=0.5}.
    static JumpLaw from_key_values(const std::map<std::string, std::string>& kv);
    std::map<std::string, std::string> to_key_values() const;

    Family family() const noexcept { return family_; }
    double alpha() const noexcept { return alpha_; }
    double rho() const noexcept { return rho_; }
    double upper() const noexcept { return upper_; }
    bool is_discrete() const noexcept { return family_ == Family::Geometric; }

    /// Infimum of the support; truncation points below it clamp to it.
    double support_lower() const noexcept;
    double support_upper() const noexcept;

    double density(double x) const;
    double log_density(double x) const;
    double cdf(double x) const;
    double tail(double x) const;
    /// ln P(X > x), computed without forming P(X > x).
    double log_tail(double x) const;
    /// ln P(X <= x).
    double log_cdf(double x) const;
    /// ln P(lo < X <= hi); -inf for an empty interval.
    double log_interval_mass(double lo, double hi) const;

    /// Smallest x with F(x) >= u. Throws std::domain_error unless 0 < u < 1.
    double quantile(double u) const;

    /// Draw from the law conditioned on X > max(c, support_lower()).
    double sample_truncated_above(double c, double u) const;
    /// Draw from the law conditioned on lo < X < hi. Throws std::domain_error
    /// when the interval carries no mass.
    double sample_truncated_interval(double lo, double hi, double u) const;

    bool operator==(const JumpLaw&) const = default;

private:
    JumpLaw(Family family, double alpha, double rho, double upper)
        : family_(family), alpha_(alpha), rho_(rho), upper_(upper) {}

    // Generalized inverse of log_tail for the untruncated family: smallest x
    // with log_tail(x) <= target.
    double inverse_log_tail(double target) const;

    Family family_;
    double alpha_;
    double rho_;
    double upper_ = std::numeric_limits<double>::infinity();
};

/// ln(1 - exp(x)) for x <= 0, accurate across the whole range.
double log1mexp(double x);
/// ln(exp(a) + exp(b)).
double log_add_exp(double a, double b);

}  // namespace semicross
