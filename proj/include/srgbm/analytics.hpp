#pragma once

#include <cstdint>

#include "srgbm/params.hpp"

namespace srgbm {

/// Closed-form results for GBM under Poissonian resetting: moments at all
/// times, transient and stationary densities, growth-rate statistics, the
/// critical self-averaging time, and the optimal resetting rate.

/// Divergence threshold of the m-th moment: r_m = m*mu + m*(m-1)*sigma2/2.
/// The m-th moment diverges exponentially for r < r_m, linearly at r = r_m,
/// and converges to r/(r - r_m) (in units of x0^m) for r > r_m.
double threshold_rate(const ModelParams& params, int m);

/// Exact m-th moment <x^m(t)> = x0^m * [r_m e^{(r_m - r) t} - r] / (r_m - r),
/// with the continuous limit x0^m * (1 + r t) at the degenerate point r = r_m.
double moment(const ModelParams& params, int m, double t);

/// log(<x^m(t)> / x0^m), overflow-safe for divergent regimes at large t.
double log_moment_scaled(const ModelParams& params, int m, double t);

/// Tail exponent of the stationary density: the positive root of
/// (sigma2/2) a^2 + (mu - sigma2/2) a - r = 0. Requires sigma2 > 0, r > 0.
double alpha_exponent(const ModelParams& params);

/// Exponent of the x <= x0 branch of the stationary density,
/// beta = [sqrt((mu - sigma2/2)^2 + 2 r sigma2) + (mu - sigma2/2)] / sigma2.
double beta_exponent(const ModelParams& params);

/// Log-normal density of reset-free GBM at time t. Returns 0 for x <= 0.
double gbm_propagator(const ModelParams& params, double x, double t);

/// Time-dependent density under resetting:
/// e^{-rt} P0(x,t|x0) + r * Integral_0^t e^{-ru} P0(x,u|x0) du,
/// evaluated by adaptive quadrature (relative error <= 1e-6, else throws
/// NumericError). Reduces to gbm_propagator for r = 0.
double transient_pdf(const ModelParams& params, double x, double t);

/// Two-branch power-law steady state: density proportional to
/// (x/x0)^{left_exponent} for x <= x0 and (x/x0)^{-alpha-1} for x > x0, with
/// left_exponent = beta - 1. `norm` is fixed numerically so the density
/// integrates to one.
struct StationaryLaw {
    double alpha = 0.0;
    double left_exponent = 0.0;
    double norm = 0.0;  ///< density prefactor [1/position]
    double x0 = 1.0;

    double beta() const { return left_exponent + 1.0; }
    double pdf(double x) const;
    double cdf(double x) const;
    /// Probability mass of the x <= x0 branch.
    double left_weight() const { return norm * x0 / beta(); }
};

/// Requires r > 0 and sigma2 > 0 (no stationary state otherwise).
StationaryLaw stationary_law(const ModelParams& params);

/// Stationary density at x; convenience wrapper over stationary_law().
double stationary_pdf(const ModelParams& params, double x);

/// Mean and variance of the last reset time t_l in [0, t] under Poissonian
/// resetting: <t_l> = t - (1 - e^{-rt})/r, Var[t_l] = (1 - e^{-2rt})/r^2
/// - 2 t e^{-rt}/r. Both are 0 for r = 0.
struct LastResetMoments {
    double mean = 0.0;
    double variance = 0.0;
};
LastResetMoments last_reset_moments(double r, double t);

/// Mean of the single-trajectory growth-rate estimator (1/t) log(x(t)/x0):
/// (mu - sigma2/2) * (1 - <t_l>/t).
double growth_estimator_mean(const ModelParams& params, double t);

/// Variance of the single-trajectory growth-rate estimator:
/// (mu - sigma2/2)^2 Var[t_l]/t^2 + (sigma2/t)(1 - <t_l>/t).
double growth_estimator_variance(const ModelParams& params, double t);

/// Relative variance of an N-sample average,
/// R_N(t) = (1/N) * (<x^2> - <x>^2) / <x>^2, from the exact moments.
double analytic_relative_variance(const ModelParams& params, std::int64_t n_samples,
                                  double t);

enum class TcMethod { exact_root, frozen_approx, unstable_approx, never };

/// Self-averaging time: R_N(t_c) = 1. t_c is +infinity with method `never`
/// when the moment ratio stays below N+1 for all t.
struct CriticalTime {
    double t_c = 0.0;
    TcMethod method = TcMethod::exact_root;

    bool finite() const { return method != TcMethod::never; }
};

/// Solves <x^2(t_c)> / <x(t_c)>^2 = N + 1 by bracketing plus bisection on
/// log t (relative accuracy 1e-8). Returns the never marker when the
/// long-time moment ratio cannot reach N + 1. Throws NumericError if a
/// bracket cannot be established.
CriticalTime critical_time(const ModelParams& params, std::int64_t n_samples);

/// Closed approximation in the frozen regime (requires r < mu):
/// t_c ~ 1/(r + sigma2) * log[(N+1) mu^2 (2mu + sigma2 - r) /
///                            ((mu - r)^2 (2mu + sigma2))].
double critical_time_frozen_approx(const ModelParams& params, std::int64_t n_samples);

/// Closed approximation in the unstable annealed regime
/// (requires mu < r < 2mu + sigma2):
/// t_c ~ 1/(2mu + sigma2 - r) * log[(N+1) r^2 (2mu + sigma2 - r) /
///                                  ((r - mu)^2 (2mu + sigma2))].
double critical_time_unstable_approx(const ModelParams& params, std::int64_t n_samples);

/// Smallest sample size that keeps R_N(t) < 1 for all t: the least integer
/// strictly greater than (mu^2 + r sigma2) / ((r - 2mu - sigma2) r).
/// Requires the stable regime r > 2mu + sigma2.
std::int64_t min_self_averaging_sample(const ModelParams& params);

/// Resetting rate minimizing the self-averaging time over (0, 2mu + sigma2),
/// by golden-section search seeded from a coarse grid. The rate stored in
/// `params` is ignored. Requires n_samples >= 2.
double optimal_reset_rate(const ModelParams& params, std::int64_t n_samples);

enum class RegimeTag { frozen, unstable_annealed, stable_annealed };

/// Long-time classification of the sample average with the moment
/// thresholds r_1 = mu and r_2 = 2mu + sigma2. Boundary rates (r == r_1 or
/// r == r_2) carry the adjacent-lower tag plus the boundary flag.
struct Regime {
    RegimeTag tag = RegimeTag::frozen;
    double r_1 = 0.0;
    double r_2 = 0.0;
    bool on_boundary = false;
};

Regime classify_regime(const ModelParams& params);

const char* to_string(RegimeTag tag);
const char* to_string(TcMethod method);

}  // namespace srgbm
