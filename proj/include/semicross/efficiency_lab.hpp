#pragma once

#include "semicross/model.hpp"

#include <array>
#include <cstdint>
#include <vector>

namespace semicross::lab {

// ---- convolution tails ------------------------------------------------------

enum class ConvolutionMethod { ClosedFormGamma, NumericConvolution, MonteCarlo };

const char* to_string(ConvolutionMethod method);

struct ConvolutionOptions {
    double rel_tol = 1e-10;
    /// Replications of the conditional Monte Carlo fallback (d >= 4).
    std::uint64_t mc_samples = 1'000'000;
    std::uint64_t seed = 1;
};

struct TailValue {
    double value = 0.0;
    /// Quadrature error estimate, or three standard errors for Monte Carlo.
    double error = 0.0;
    ConvolutionMethod method = ConvolutionMethod::NumericConvolution;
};

/// P(X_1 + ... + X_d > x): the Erlang tail for Weibull alpha = 1, nested
/// quadrature for d <= 3, conditional Monte Carlo otherwise.
TailValue convolution_tail(const JumpLaw& law, int d, double x, const ConvolutionOptions& opt = {});

struct ConvolutionTail {
    JumpLaw law;
    int d = 1;
    std::vector<double> grid;
    std::vector<double> tail_values;
    std::vector<double> errors;
    ConvolutionMethod method = ConvolutionMethod::NumericConvolution;
};

ConvolutionTail convolution_tail_curve(const JumpLaw& law, int d, std::vector<double> grid,
                                       const ConvolutionOptions& opt = {});

// ---- second moment of the idealized single-run estimator -------------------

struct RatioEstimate {
    double ratio = 0.0;
    double std_error = 0.0;
};

/// E Z^2 / ell^2 for the importance density made of the exact marginals of
/// the zero-variance density. Monte Carlo over f with the last jump drawn
/// conditionally on the event. Needs convolution tails of order d and d - 1
/// (d <= 3 outside the Erlang case).
RatioEstimate second_moment_ratio(const RareEventModel& model, std::uint64_t m, std::uint64_t seed);

// ---- Laplace exponent -------------------------------------------------------

/// d - 2 + sum_i (u_i^alpha - (1 - u_i)^alpha) on {0 <= u_i <= 1, sum u_i >= 1}.
double phi(const std::vector<double>& u, double alpha);
/// phi at u* = (1/d, ..., 1/d): d - 2 + d^(1-alpha) - d^(1-alpha) (d-1)^alpha.
double phi_star(int d, double alpha);

// ---- Pareto recursion -------------------------------------------------------

/// (1 - y)^alpha y^-(alpha+1) on (0, 1].
double L(double y, double alpha);

struct InOptions {
    double rel_tol = 1e-8;
    double abs_tol = 1e-300;
};

/// I_1(gamma, zeta) = int_{zeta v 1/gamma}^1 L;
/// I_n(gamma, zeta) = int_{1/gamma}^{zeta-(n-2)/gamma} L(y) I_{n-1}(gamma, zeta - y) dy.
/// Supported for n <= 4.
double I_n(double gamma, double zeta, int n, double alpha, const InOptions& opt = {});
/// alpha^n gamma^(-n alpha) I_n(gamma, 1).
double H_n(double gamma, int n, double alpha, const InOptions& opt = {});

/// |central difference of I_n in gamma (step gamma * 1e-5) - n L(1/gamma) I_{n-1}(gamma, zeta - 1/gamma) / gamma^2|
/// relative to the right-hand side. n in {2, 3}.
double check_derivative_identity(double gamma, double zeta, int n, double alpha);

struct TrendCurve {
    std::vector<double> gamma;
    std::vector<double> value;
    /// Strictly decreasing (or nonincreasing, for error trends) over the last three points.
    bool trend_holds = false;
};

/// I_n(gamma, 1) / (gamma^(alpha(n-2)) ln gamma) on the grid.
TrendCurve pareto_log_efficiency_trend(double alpha, int n, const std::vector<double>& gamma_grid);

struct LightTailPoint {
    double gamma = 0.0;
    double estimate = 0.0;
    double rel_error = 0.0;
    /// rel_error / estimate^-0.25.
    double trend_ratio = 0.0;
};

struct LightTailTrend {
    std::vector<LightTailPoint> points;
    bool trend_holds = false;
};

/// Semiparametric estimates along the grid for Weibull alpha >= 1;
/// trend_holds when rel_error / ell^-0.25 is nonincreasing on the last three points.
LightTailTrend lighttail_relative_error_trend(double alpha, int d, const std::vector<double>& gamma_grid,
                                              std::uint64_t n, std::uint64_t m, std::uint64_t seed,
                                              unsigned workers = 1);

// ---- product-form optimality on a toy --------------------------------------

using Grid3 = std::array<std::array<double, 3>, 3>;

/// Dependent 3x3 joint law used as the default fixture.
Grid3 toy_discrete_pi();

struct OptimalityResult {
    double kl_product_of_marginals = 0.0;
    double kl_best_random = 0.0;
    bool marginals_optimal = false;
};

/// KL(pi || p x q) for the product of pi's marginals against `trials`
/// random product laws; optimal when no trial beats it by more than 1e-12.
OptimalityResult ce_optimality_check(const Grid3& pi, int trials = 10000, std::uint64_t seed = 1);

}  // namespace semicross::lab
