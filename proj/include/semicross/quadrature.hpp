#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace semicross::quad {

struct Options {
    double rel_tol = 1e-10;
    double abs_tol = 1e-300;
    int max_subintervals = 4000;
};

struct Result {
    double value = 0.0;
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

inline constexpr double kNodes[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0};
inline constexpr double kKronrod[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980775955, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
// Gauss weights for the odd-indexed Kronrod nodes.
inline constexpr double kGauss[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
    double a, b, value, error;
};

// 21-point Kronrod rule with the embedded 10-point Gauss rule; error
// estimate follows the QUADPACK qk21 heuristic.
template <class F>
Panel gk21(F& f, double a, double b) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fv1[10];
    double fv2[10];
    const double fc = f(center);
    double resk = kKronrod[10] * fc;
    double resg = 0.0;
    double resabs = std::abs(resk);
    for (int j = 0; j < 10; ++j) {
        const double dx = half * kNodes[j];
        fv1[j] = f(center - dx);
        fv2[j] = f(center + dx);
        const double sum = fv1[j] + fv2[j];
        resk += kKronrod[j] * sum;
        resabs += kKronrod[j] * (std::abs(fv1[j]) + std::abs(fv2[j]));
        if (j % 2 == 1) {
            resg += kGauss[j / 2] * sum;
        }
    }
    const double mean = 0.5 * resk;
    double resasc = kKronrod[10] * std::abs(fc - mean);
    for (int j = 0; j < 10; ++j) {
        resasc += kKronrod[j] * (std::abs(fv1[j] - mean) + std::abs(fv2[j] - mean));
    }
    const double value = resk * half;
    resabs *= std::abs(half);
    resasc *= std::abs(half);
    double error = std::abs((resk - resg) * half);
    if (resasc != 0.0 && error != 0.0) {
        error = resasc * std::min(1.0, std::pow(200.0 * error / resasc, 1.5));
    }
    if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
        error = std::max(50.0 * eps * resabs, error);
    }
    if (!std::isfinite(value)) {
        error = std::numeric_limits<double>::infinity();
    }
    return {a, b, value, error};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration of f over the finite [a, b]:
/// the panel with the largest error estimate is bisected until the summed
/// error is below max(abs_tol, rel_tol * |value|).
template <class F>
Result integrate(F&& f, double a, double b, const Options& opt = {}) {
    Result out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    const double sign = a < b ? 1.0 : -1.0;
    if (a > b) std::swap(a, b);

    std::vector<detail::Panel> heap;
    heap.reserve(64);
    auto worse = [](const detail::Panel& x, const detail::Panel& y) { return x.error < y.error; };
    heap.push_back(detail::gk21(f, a, b));
    out.evaluations = 21;
    double value = heap.front().value;
    double error = heap.front().error;
    while (true) {
        if (error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value))) {
            out.converged = true;
            break;
        }
        if (static_cast<int>(heap.size()) >= opt.max_subintervals) break;
        std::pop_heap(heap.begin(), heap.end(), worse);
        const detail::Panel worst = heap.back();
        heap.pop_back();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) {
            heap.push_back(worst);
            std::push_heap(heap.begin(), heap.end(), worse);
            break;
        }
        heap.push_back(detail::gk21(f, worst.a, mid));
        std::push_heap(heap.begin(), heap.end(), worse);
        heap.push_back(detail::gk21(f, mid, worst.b));
        std::push_heap(heap.begin(), heap.end(), worse);
        out.evaluations += 42;
        value = 0.0;
        error = 0.0;
        for (const auto& p : heap) {
            value += p.value;
            error += p.error;
        }
    }
    out.value = sign * value;
    out.error = error;
    return out;
}

/// Integrates over consecutive pieces [points[k], points[k+1]]; breakpoints
/// mark kinks or singularities of the integrand.
template <class F>
Result integrate_pieces(F&& f, const std::vector<double>& points, const Options& opt = {}) {
    Result total;
    total.converged = true;
    for (std::size_t k = 0; k + 1 < points.size(); ++k) {
        if (!(points[k + 1] > points[k])) continue;
        const Result r = integrate(f, points[k], points[k + 1], opt);
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        total.converged = total.converged && r.converged;
    }
    return total;
}

/// Integral over [a, inf) via x = a + t / (1 - t).
template <class F>
Result integrate_to_infinity(F&& f, double a, const Options& opt = {}) {
    auto g = [&](double t) {
        const double s = 1.0 - t;
        const double x = a + t / s;
        const double v = f(x);
        return v == 0.0 ? 0.0 : v / (s * s);
    };
    return integrate(g, 0.0, 1.0, opt);
}

}  // namespace semicross::quad
