#include "semicross/efficiency_lab.hpp"

#include "semicross/estimators.hpp"
#include "semicross/quadrature.hpp"
#include "semicross/replication.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace semicross::lab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_erlang(const JumpLaw& law) { return law.family() == Family::Weibull && law.alpha() == 1.0; }

// P(Pois(x) <= d - 1).
double erlang_tail(int d, double x) {
    if (x <= 0.0) return 1.0;
    double acc = -kInf;
    const double lx = std::log(x);
    for (int k = 0; k < d; ++k) acc = log_add_exp(acc, -x + k * lx - std::lgamma(k + 1.0));
    return std::min(1.0, std::exp(acc));
}

struct Quad {
    double value = 0.0;
    double error = 0.0;
    bool converged = true;
};

// int_a^b f(y) G(x - y) dy. Near the bottom of the support the density may
// blow up, so that part runs in u = F(y); the rest in y with breakpoints that
// crowd towards b, where G(x - y) approaches its value at the origin.
template <class G>
Quad convolve(const JumpLaw& law, G&& tail_rest, double x, double a, double b, double rel_tol) {
    Quad out;
    if (!(b > a)) return out;
    quad::Options opt;
    opt.rel_tol = rel_tol;
    const double median = law.quantile(0.5);
    const double m = std::min(b, std::max(a, median));
    if (m > a) {
        const double ua = law.cdf(a);
        const double um = law.cdf(m);
        auto in_u = [&](double u) { return tail_rest(x - law.quantile(std::clamp(u, 1e-300, 1.0 - 1e-16))); };
        const auto r = quad::integrate(in_u, ua, um, opt);
        out.value += r.value;
        out.error += r.error;
        out.converged = out.converged && r.converged;
    }
    if (b > m) {
        std::vector<double> points{m};
        const double mid = 0.5 * (m + b);
        for (double p = std::max(2.0 * m, 1.0); p < mid; p *= 2.0) points.push_back(p);
        points.push_back(mid);
        for (int k = 1; k <= 12; ++k) points.push_back(b - (b - mid) * std::ldexp(1.0, -k));
        points.push_back(b);
        std::sort(points.begin(), points.end());
        auto in_y = [&](double y) { return law.density(y) * tail_rest(x - y); };
        const auto r = quad::integrate_pieces(in_y, points, opt);
        out.value += r.value;
        out.error += r.error;
        out.converged = out.converged && r.converged;
    }
    return out;
}

Quad tail2(const JumpLaw& law, double x, double rel_tol) {
    const double lo = law.support_lower();
    if (x <= 2.0 * lo) return {1.0, 0.0, true};
    const double half = 0.5 * x;
    Quad q = convolve(law, [&](double z) { return law.tail(z); }, x, lo, half, rel_tol);
    const double th = law.tail(half);
    return {2.0 * q.value + th * th, 2.0 * q.error, q.converged};
}

Quad tail3(const JumpLaw& law, double x, double rel_tol) {
    const double lo = law.support_lower();
    if (x <= 3.0 * lo) return {1.0, 0.0, true};
    const double b = x - 2.0 * lo;
    bool inner_ok = true;
    double inner_err = 0.0;
    auto rest = [&](double z) {
        const Quad t = tail2(law, z, rel_tol);
        inner_ok = inner_ok && t.converged;
        inner_err = std::max(inner_err, t.error);
        return t.value;
    };
    Quad q = convolve(law, rest, x, lo, b, rel_tol);
    return {q.value + law.tail(b), q.error + inner_err, q.converged && inner_ok};
}

TailValue monte_carlo_tail(const JumpLaw& law, int d, double x, const ConvolutionOptions& opt) {
    // d F̄(max(x - S_{d-1}, M_{d-1})): the last jump is the maximum.
    const auto stats = replicate(opt.mc_samples, opt.seed, 1, [&](Philox4x32& rng) {
        double s = 0.0;
        double mx = -kInf;
        for (int i = 0; i + 1 < d; ++i) {
            const double v = law.quantile(uniform_open(rng));
            s += v;
            mx = std::max(mx, v);
        }
        return d * law.tail(std::max(x - s, mx));
    });
    return {std::clamp(stats.mean, 0.0, 1.0), 3.0 * stats.std_error_of_mean(), ConvolutionMethod::MonteCarlo};
}

double tail_or_throw(const JumpLaw& law, int d, double x) {
    if (d == 0) return x < 0.0 ? 1.0 : 0.0;
    const TailValue t = convolution_tail(law, d, x);
    if (t.method == ConvolutionMethod::MonteCarlo) {
        throw std::domain_error("second_moment_ratio: convolution tail needs Monte Carlo");
    }
    return t.value;
}

}  // namespace

const char* to_string(ConvolutionMethod method) {
    switch (method) {
        case ConvolutionMethod::ClosedFormGamma: return "closed-form-gamma";
        case ConvolutionMethod::NumericConvolution: return "numeric-convolution";
        case ConvolutionMethod::MonteCarlo: return "monte-carlo";
    }
    return "";
}

TailValue convolution_tail(const JumpLaw& law, int d, double x, const ConvolutionOptions& opt) {
    if (d < 1) {
        throw std::domain_error("convolution_tail: d must be positive");
    }
    if (law.is_discrete()) {
        throw std::invalid_argument("convolution_tail: continuous laws only");
    }
    if (is_erlang(law)) return {erlang_tail(d, x), 0.0, ConvolutionMethod::ClosedFormGamma};
    if (d == 1) return {law.tail(x), 0.0, ConvolutionMethod::NumericConvolution};
    if (d <= 3) {
        const Quad q = d == 2 ? tail2(law, x, opt.rel_tol) : tail3(law, x, opt.rel_tol);
        if (q.converged && std::isfinite(q.value)) {
            return {std::clamp(q.value, law.tail(x), 1.0), q.error, ConvolutionMethod::NumericConvolution};
        }
    }
    return monte_carlo_tail(law, d, x, opt);
}

ConvolutionTail convolution_tail_curve(const JumpLaw& law, int d, std::vector<double> grid,
                                       const ConvolutionOptions& opt) {
    if (!std::is_sorted(grid.begin(), grid.end()) ||
        std::adjacent_find(grid.begin(), grid.end()) != grid.end()) {
        throw std::invalid_argument("convolution_tail_curve: grid must be strictly increasing");
    }
    ConvolutionTail curve{law, d, std::move(grid), {}, {}, ConvolutionMethod::ClosedFormGamma};
    for (double x : curve.grid) {
        // One seed for the whole grid keeps Monte Carlo values monotone.
        const TailValue t = convolution_tail(law, d, x, opt);
        curve.tail_values.push_back(t.value);
        curve.errors.push_back(t.error);
        curve.method = std::max(curve.method, t.method);
    }
    for (std::size_t k = 1; k < curve.tail_values.size(); ++k) {
        curve.tail_values[k] = std::min(curve.tail_values[k], curve.tail_values[k - 1]);
    }
    return curve;
}

RatioEstimate second_moment_ratio(const RareEventModel& model, std::uint64_t m, std::uint64_t seed) {
    if (model.is_compound()) {
        throw std::invalid_argument("second_moment_ratio: fixed-sum models only");
    }
    const int d = model.d();
    if (d == 1) return {1.0, 0.0};
    const JumpLaw& law = model.jump_law();
    if (!is_erlang(law) && d > 3) {
        throw std::domain_error("second_moment_ratio: d <= 3 outside the Erlang case");
    }
    const double gamma = model.gamma();
    const double ell = tail_or_throw(law, d, gamma);
    // ell^(d-2) E_f[1{S > gamma} prod_i 1 / F̄*(d-1)(gamma - X_i)], with X_d drawn
    // from f restricted to the event and weighted by its probability.
    const double scale = std::pow(ell, d - 2);
    const auto stats = replicate(m, seed, 1, [&](Philox4x32& rng) {
        double s = 0.0;
        double w = 1.0;
        for (int i = 0; i + 1 < d; ++i) {
            const double v = law.quantile(uniform_open(rng));
            s += v;
            w /= tail_or_throw(law, d - 1, gamma - v);
        }
        const double c = std::max(0.0, gamma - s);
        const double last = law.sample_truncated_above(c, uniform_open(rng));
        w *= law.tail(c) / tail_or_throw(law, d - 1, gamma - last);
        return scale * w;
    });
    return {stats.mean, stats.std_error_of_mean()};
}

double phi(const std::vector<double>& u, double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("phi: alpha must lie in (0,1)");
    }
    double total = 0.0;
    double value = static_cast<double>(u.size()) - 2.0;
    for (double v : u) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::domain_error("phi: coordinates must lie in [0,1]");
        }
        total += v;
        value += std::pow(v, alpha) - std::pow(1.0 - v, alpha);
    }
    if (!(total >= 1.0)) {
        throw std::domain_error("phi: coordinates must sum to at least 1");
    }
    return value;
}

double phi_star(int d, double alpha) {
    if (d < 2) {
        throw std::domain_error("phi_star: d must be at least 2");
    }
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("phi_star: alpha must lie in (0,1)");
    }
    const double a = std::pow(static_cast<double>(d), 1.0 - alpha);
    return d - 2.0 + a - a * std::pow(d - 1.0, alpha);
}

double L(double y, double alpha) {
    if (!(y > 0.0 && y <= 1.0)) {
        throw std::domain_error("L: y must lie in (0,1]");
    }
    if (y == 1.0) return 0.0;
    return std::exp(alpha * std::log1p(-y) - (alpha + 1.0) * std::log(y));
}

namespace {

// int_a^1 L = int_0^S s^alpha / (1 + s) ds with s = (1 - y) / y.
double I_1(double a, double alpha, const quad::Options& opt) {
    if (!(a < 1.0)) return 0.0;
    const double S = (1.0 - a) / a;
    // s = w^(1/(alpha+1)) on [0, min(S,1)], s = e^t beyond.
    const double w1 = std::pow(std::min(S, 1.0), alpha + 1.0);
    const double e = 1.0 / (alpha + 1.0);
    double value =
        e * quad::integrate([&](double w) { return 1.0 / (1.0 + std::pow(w, e)); }, 0.0, w1, opt).value;
    if (S > 1.0) {
        auto f = [&](double t) { return std::exp(alpha * t) / (1.0 + std::exp(-t)); };
        value += quad::integrate(f, 0.0, std::log(S), opt).value;
    }
    return value;
}

double I_rec(double gamma, double zeta, int n, double alpha, const quad::Options& opt) {
    const double g = 1.0 / gamma;
    if (n == 1) return I_1(std::max(zeta, g), alpha, opt);
    const double lo = g;
    const double hi = zeta - (n - 2) * g;
    if (!(hi > lo)) return 0.0;
    std::vector<double> points{std::log(lo), std::log(hi)};
    for (int k = 1; k < n; ++k) {
        const double y = zeta - k * g;
        if (y > lo && y < hi) points.push_back(std::log(y));
    }
    std::sort(points.begin(), points.end());
    auto f = [&](double t) {
        const double y = std::min(std::exp(t), 1.0);
        if (y >= 1.0) return 0.0;
        const double ly = std::exp(alpha * std::log1p(-y) - alpha * t);  // L(y) y
        return ly * I_rec(gamma, zeta - y, n - 1, alpha, opt);
    };
    return quad::integrate_pieces(f, points, opt).value;
}

void check_in_args(double gamma, double zeta, int n, double alpha) {
    if (n < 1 || n > 4) {
        throw std::domain_error("I_n: supported for 1 <= n <= 4");
    }
    if (!(gamma > 1.0) || !(alpha > 0.0)) {
        throw std::domain_error("I_n: gamma > 1 and alpha > 0 required");
    }
    if (!(zeta <= 1.0) || !(zeta >= n / gamma)) {
        throw std::domain_error("I_n: zeta must lie in [n/gamma, 1]");
    }
}

}  // namespace

double I_n(double gamma, double zeta, int n, double alpha, const InOptions& opt) {
    check_in_args(gamma, zeta, n, alpha);
    quad::Options q;
    q.rel_tol = opt.rel_tol;
    q.abs_tol = opt.abs_tol;
    return I_rec(gamma, zeta, n, alpha, q);
}

double H_n(double gamma, int n, double alpha, const InOptions& opt) {
    return std::pow(alpha, n) * std::pow(gamma, -n * alpha) * I_n(gamma, 1.0, n, alpha, opt);
}

double check_derivative_identity(double gamma, double zeta, int n, double alpha) {
    if (n != 2 && n != 3) {
        throw std::domain_error("check_derivative_identity: n must be 2 or 3");
    }
    const double h = gamma * 1e-5;
    check_in_args(gamma - h, zeta, n, alpha);
    InOptions opt;
    opt.rel_tol = 1e-13;
    const double fd = (I_n(gamma + h, zeta, n, alpha, opt) - I_n(gamma - h, zeta, n, alpha, opt)) / (2.0 * h);
    const double g = 1.0 / gamma;
    const double rhs = n * L(g, alpha) * I_n(gamma, zeta - g, n - 1, alpha, opt) * g * g;
    return std::abs(fd - rhs) / std::abs(rhs);
}

TrendCurve pareto_log_efficiency_trend(double alpha, int n, const std::vector<double>& gamma_grid) {
    if (n != 2 && n != 3) {
        throw std::domain_error("pareto_log_efficiency_trend: n must be 2 or 3");
    }
    TrendCurve curve;
    curve.gamma = gamma_grid;
    for (double gamma : gamma_grid) {
        curve.value.push_back(I_n(gamma, 1.0, n, alpha) / (std::pow(gamma, alpha * (n - 2)) * std::log(gamma)));
    }
    const auto& v = curve.value;
    const std::size_t k = v.size();
    curve.trend_holds = k >= 3 && v[k - 2] < v[k - 3] && v[k - 1] < v[k - 2];
    return curve;
}

LightTailTrend lighttail_relative_error_trend(double alpha, int d, const std::vector<double>& gamma_grid,
                                              std::uint64_t n, std::uint64_t m, std::uint64_t seed,
                                              unsigned workers) {
    if (!(alpha >= 1.0)) {
        throw std::domain_error("lighttail_relative_error_trend: alpha >= 1 required");
    }
    LightTailTrend trend;
    PipelineOptions opt;
    opt.n = n;
    opt.m = m;
    opt.seed = seed;
    opt.workers = workers;
    for (double gamma : gamma_grid) {
        const auto model = RareEventModel::fixed_sum(JumpLaw::weibull(alpha), d, gamma);
        const EstimateReport r = run_method(Method::Semiparam, model, opt);
        const double ratio = r.std_error == 0.0 ? 0.0 : r.rel_error * std::pow(r.estimate, 0.25);
        trend.points.push_back({gamma, r.estimate, r.std_error == 0.0 ? 0.0 : r.rel_error, ratio});
    }
    const auto& p = trend.points;
    const std::size_t k = p.size();
    trend.trend_holds =
        k >= 3 && p[k - 2].trend_ratio <= p[k - 3].trend_ratio && p[k - 1].trend_ratio <= p[k - 2].trend_ratio;
    return trend;
}

Grid3 toy_discrete_pi() {
    return {{{0.20, 0.05, 0.05}, {0.05, 0.20, 0.05}, {0.05, 0.05, 0.30}}};
}

namespace {

double kl(const Grid3& pi, const std::array<double, 3>& p, const std::array<double, 3>& q) {
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (pi[i][j] > 0.0) total += pi[i][j] * std::log(pi[i][j] / (p[i] * q[j]));
        }
    }
    return total;
}

std::array<double, 3> dirichlet3(Philox4x32& rng) {
    std::array<double, 3> e{};
    double s = 0.0;
    for (double& v : e) s += (v = -std::log(uniform_open(rng)));
    for (double& v : e) v /= s;
    return e;
}

}  // namespace

OptimalityResult ce_optimality_check(const Grid3& pi, int trials, std::uint64_t seed) {
    std::array<double, 3> row{};
    std::array<double, 3> col{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (!(pi[i][j] >= 0.0)) {
                throw std::domain_error("ce_optimality_check: negative probability");
            }
            row[i] += pi[i][j];
            col[j] += pi[i][j];
        }
    }
    OptimalityResult out;
    out.kl_product_of_marginals = kl(pi, row, col);
    out.kl_best_random = kInf;
    Philox4x32 rng(seed, streams::kAuxiliary);
    for (int t = 0; t < trials; ++t) {
        const auto p = dirichlet3(rng);
        const auto q = dirichlet3(rng);
        out.kl_best_random = std::min(out.kl_best_random, kl(pi, p, q));
    }
    out.marginals_optimal = out.kl_product_of_marginals <= out.kl_best_random + 1e-12;
    return out;
}

}  // namespace semicross::lab
