#include "semicross/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace semicross {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("law key '" + key + "': not a number: " + text);
    }
    if (used != text.size()) {
        throw std::invalid_argument("law key '" + key + "': trailing characters in: " + text);
    }
    return value;
}

std::string format_double(double value) {
    std::ostringstream out;
    out.precision(17);
    out << value;
    return out.str();
}

// Pushes a continuous draw back inside the open interval (lo, hi) when
// rounding in the inversion landed it on or past an endpoint.
double clamp_open(double x, double lo, double hi) {
    if (!(x > lo)) {
        x = std::nextafter(lo, kInf);
    }
    if (!(x < hi)) {
        x = std::nextafter(hi, -kInf);
    }
    return x;
}

}  // namespace

double log1mexp(double x) {
    if (x > 0.0) {
        throw std::domain_error("log1mexp: argument must be <= 0");
    }
    if (x == 0.0) {
        return -kInf;
    }
    return x > -M_LN2 ? std::log(-std::expm1(x)) : std::log1p(-std::exp(x));
}

double log_add_exp(double a, double b) {
    if (a < b) {
        std::swap(a, b);
    }
    if (b == -kInf) {
        return a;
    }
    return a + std::log1p(std::exp(b - a));
}

std::string to_string(Family family) {
    switch (family) {
        case Family::Weibull: return "weibull";
        case Family::Pareto: return "pareto";
        case Family::TruncatedWeibull: return "truncated-weibull";
        case Family::Geometric: return "geometric";
    }
    return "unknown";
}

Family family_from_string(const std::string& name) {
    if (name == "weibull") return Family::Weibull;
    if (name == "pareto") return Family::Pareto;
    if (name == "truncated-weibull" || name == "truncated_weibull") return Family::TruncatedWeibull;
    if (name == "geometric") return Family::Geometric;
    throw std::invalid_argument("unknown family: " + name);
}

JumpLaw JumpLaw::weibull(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("Weibull alpha must be positive and finite");
    }
    return JumpLaw(Family::Weibull, alpha, 1.0, kInf);
}

JumpLaw JumpLaw::pareto(double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("Pareto alpha must be positive and finite");
    }
    return JumpLaw(Family::Pareto, alpha, 1.0, kInf);
}

JumpLaw JumpLaw::truncated_weibull(double alpha, double upper) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) {
        throw std::invalid_argument("truncated Weibull alpha must be positive and finite");
    }
    if (!(upper > 0.0)) {
        throw std::invalid_argument("truncated Weibull upper cutoff must be positive");
    }
    return JumpLaw(Family::TruncatedWeibull, alpha, 1.0, upper);
}

JumpLaw JumpLaw::geometric(double rho) {
    if (!(rho > 0.0 && rho <= 1.0)) {
        throw std::invalid_argument("geometric rho must lie in (0,1]");
    }
    return JumpLaw(Family::Geometric, 1.0, rho, kInf);
}

JumpLaw JumpLaw::from_key_values(const std::map<std::string, std::string>& kv) {
    auto get = [&](const std::string& key) -> const std::string& {
        auto it = kv.find(key);
        if (it == kv.end()) {
            throw std::invalid_argument("law is missing key '" + key + "'");
        }
        return it->second;
    };
    switch (family_from_string(get("family"))) {
        case Family::Weibull: return weibull(parse_double("alpha", get("alpha")));
        case Family::Pareto: return pareto(parse_double("alpha", get("alpha")));
        case Family::TruncatedWeibull:
            return truncated_weibull(parse_double("alpha", get("alpha")), parse_double("upper", get("upper")));
        case Family::Geometric: return geometric(parse_double("rho", get("rho")));
    }
    throw std::invalid_argument("unreachable family");
}

std::map<std::string, std::string> JumpLaw::to_key_values() const {
    std::map<std::string, std::string> kv{{"family", to_string(family_)}};
    switch (family_) {
        case Family::Weibull:
        case Family::Pareto: kv["alpha"] = format_double(alpha_); break;
        case Family::TruncatedWeibull:
            kv["alpha"] = format_double(alpha_);
            kv["upper"] = format_double(upper_);
            break;
        case Family::Geometric: kv["rho"] = format_double(rho_); break;
    }
    return kv;
}

double JumpLaw::support_lower() const noexcept {
    switch (family_) {
        case Family::Pareto: return 1.0;
        case Family::Geometric: return 1.0;
        default: return 0.0;
    }
}

double JumpLaw::support_upper() const noexcept {
    return family_ == Family::TruncatedWeibull ? upper_ : kInf;
}

double JumpLaw::log_density(double x) const {
    switch (family_) {
        case Family::Weibull:
            if (!(x > 0.0) || x == kInf) return -kInf;
            return std::log(alpha_) + (alpha_ - 1.0) * std::log(x) - std::pow(x, alpha_);
        case Family::Pareto:
            if (!(x >= 1.0) || x == kInf) return -kInf;
            return std::log(alpha_) - (alpha_ + 1.0) * std::log(x);
        case Family::TruncatedWeibull:
            if (!(x > 0.0) || !(x < upper_)) return -kInf;
            return std::log(alpha_) + (alpha_ - 1.0) * std::log(x) - std::pow(x, alpha_) -
                   log1mexp(-std::pow(upper_, alpha_));
        case Family::Geometric: {
            if (!(x >= 1.0) || x != std::floor(x) || x == kInf) return -kInf;
            if (rho_ == 1.0) return x == 1.0 ? 0.0 : -kInf;
            return std::log(rho_) + (x - 1.0) * std::log1p(-rho_);
        }
    }
    return -kInf;
}

double JumpLaw::density(double x) const { return std::exp(log_density(x)); }

double JumpLaw::log_tail(double x) const {
    switch (family_) {
        case Family::Weibull: return x > 0.0 ? -std::pow(x, alpha_) : 0.0;
        case Family::Pareto: return x > 1.0 ? -alpha_ * std::log(x) : 0.0;
        case Family::TruncatedWeibull: {
            if (!(x > 0.0)) return 0.0;
            if (x >= upper_) return -kInf;
            const double xa = std::pow(x, alpha_);
            const double ua = std::pow(upper_, alpha_);
            return -xa + log1mexp(xa - ua) - log1mexp(-ua);
        }
        case Family::Geometric: {
            if (x < 1.0) return 0.0;
            if (rho_ == 1.0) return -kInf;
            return std::floor(x) * std::log1p(-rho_);
        }
    }
    return 0.0;
}

double JumpLaw::tail(double x) const { return std::exp(log_tail(x)); }

double JumpLaw::log_cdf(double x) const {
    if (family_ == Family::TruncatedWeibull) {
        if (!(x > 0.0)) return -kInf;
        if (x >= upper_) return 0.0;
        return log1mexp(-std::pow(x, alpha_)) - log1mexp(-std::pow(upper_, alpha_));
    }
    return log1mexp(log_tail(x));
}

double JumpLaw::cdf(double x) const { return std::exp(log_cdf(x)); }

double JumpLaw::log_interval_mass(double lo, double hi) const {
    if (!(hi > lo)) return -kInf;
    const double lt_lo = log_tail(lo);
    const double lt_hi = log_tail(hi);
    if (!(lt_hi < lt_lo)) return -kInf;
    return lt_lo + log1mexp(lt_hi - lt_lo);
}

double JumpLaw::inverse_log_tail(double target) const {
    switch (family_) {
        case Family::Weibull:
        case Family::TruncatedWeibull: return std::pow(-target, 1.0 / alpha_);
        case Family::Pareto: return std::exp(-target / alpha_);
        case Family::Geometric: {
            if (target >= 0.0) return 0.0;
            if (target == -kInf) return kInf;
            if (rho_ == 1.0) return 1.0;
            const double step = std::log1p(-rho_);
            double r = std::max(0.0, std::ceil(target / step));
            while (r > 0.0 && (r - 1.0) * step <= target) r -= 1.0;
            while (r * step > target) r += 1.0;
            return r;
        }
    }
    return 0.0;
}

double JumpLaw::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0)) {
        throw std::domain_error("quantile: u must lie in (0,1)");
    }
    switch (family_) {
        case Family::Weibull: return std::pow(-std::log1p(-u), 1.0 / alpha_);
        case Family::Pareto: return std::exp(-std::log1p(-u) / alpha_);
        case Family::TruncatedWeibull: {
            const double mass = -std::expm1(-std::pow(upper_, alpha_));
            return clamp_open(std::pow(-std::log1p(-u * mass), 1.0 / alpha_), 0.0, upper_);
        }
        case Family::Geometric: return std::max(1.0, inverse_log_tail(std::log1p(-u)));
    }
    return 0.0;
}

double JumpLaw::sample_truncated_above(double c, double u) const {
    switch (family_) {
        case Family::Weibull: {
            const double base = c > 0.0 ? std::pow(c, alpha_) : 0.0;
            const double x = std::pow(base - std::log1p(-u), 1.0 / alpha_);
            return c > 0.0 ? clamp_open(x, c, kInf) : x;
        }
        case Family::Pareto: {
            const double lo = std::max(c, 1.0);
            return clamp_open(lo * std::exp(-std::log1p(-u) / alpha_), lo, kInf);
        }
        case Family::Geometric: {
            const double shift = c > 0.0 ? std::floor(c) : 0.0;
            return shift + quantile(u);
        }
        case Family::TruncatedWeibull: return sample_truncated_interval(c, upper_, u);
    }
    return 0.0;
}

double JumpLaw::sample_truncated_interval(double lo, double hi, double u) const {
    const double a = std::max(lo, family_ == Family::Geometric ? 0.0 : support_lower());
    const double b = std::min(hi, support_upper());
    if (!(b > a)) {
        throw std::domain_error("sample_truncated_interval: empty interval");
    }
    if (family_ == Family::Geometric) {
        // Integer support: lo < R < hi means first <= R <= last.
        const double first = std::max(1.0, std::floor(a) + 1.0);
        const double last = std::ceil(b) - 1.0;
        if (last < first) {
            throw std::domain_error("sample_truncated_interval: no integer in interval");
        }
        const double lt_lo = log_tail(first - 1.0);
        const double lt_hi = log_tail(last);
        const double target = lt_lo + std::log1p(u * std::expm1(lt_hi - lt_lo));
        return std::clamp(std::max(1.0, inverse_log_tail(target)), first, last);
    }
    // A truncated Weibull restricted to (a, b) is the plain Weibull on (a, b).
    const JumpLaw base = family_ == Family::TruncatedWeibull ? weibull(alpha_) : *this;
    const double lt_lo = base.log_tail(a);
    const double lt_hi = b == kInf ? -kInf : base.log_tail(b);
    if (!(lt_hi < lt_lo)) {
        throw std::domain_error("sample_truncated_interval: interval carries no mass");
    }
    const double target = lt_lo + std::log1p(u * std::expm1(lt_hi - lt_lo));
    return clamp_open(base.inverse_log_tail(target), a, b);
}

}  // namespace semicross
