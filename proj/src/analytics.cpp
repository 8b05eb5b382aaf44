#include "srgbm/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "srgbm/errors.hpp"

namespace srgbm {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_moment_order(int m) {
    if (m < 1) throw ConfigError("moment order m must be >= 1");
}

void require_time(double t) {
    if (!std::isfinite(t) || t < 0.0) throw ConfigError("t must be finite and >= 0");
}

// sqrt((mu - sigma2/2)^2 + 2 r sigma2), the discriminant shared by the two
// stationary exponents.
double exponent_discriminant(const ModelParams& p) {
    const double a = p.mu - 0.5 * p.sigma2;
    return std::sqrt(a * a + 2.0 * p.r * p.sigma2);
}

}  // namespace

double threshold_rate(const ModelParams& params, int m) {
    validate(params);
    require_moment_order(m);
    const double md = static_cast<double>(m);
    return md * params.mu + 0.5 * md * (md - 1.0) * params.sigma2;
}

double log_moment_scaled(const ModelParams& params, int m, double t) {
    require_time(t);
    const double r_m = threshold_rate(params, m);
    const double delta = r_m - params.r;
    const double tol = 1e-9 * std::max(1.0, std::abs(r_m));
    if (std::abs(delta) < tol) {
        return std::log1p(params.r * t);  // linear-in-t limit at r = r_m
    }
    if (delta > 0.0 && delta * t > 36.0) {
        // e^{-delta t} is below double precision relative to r_m here.
        return delta * t + std::log((r_m - params.r * std::exp(-delta * t)) / delta);
    }
    return std::log1p(r_m * std::expm1(delta * t) / delta);
}

double moment(const ModelParams& params, int m, double t) {
    return std::pow(params.x0, m) * std::exp(log_moment_scaled(params, m, t));
}

double alpha_exponent(const ModelParams& params) {
    validate(params);
    if (params.sigma2 == 0.0) {
        throw ConfigError("alpha exponent is undefined for sigma2 = 0");
    }
    if (params.r <= 0.0) throw ConfigError("alpha exponent requires r > 0");
    const double a = params.mu - 0.5 * params.sigma2;
    const double d = exponent_discriminant(params);
    // Rationalized form when a > 0 to avoid cancellation in d - a.
    return a > 0.0 ? 2.0 * params.r / (a + d) : (d - a) / params.sigma2;
}

double beta_exponent(const ModelParams& params) {
    validate(params);
    if (params.sigma2 == 0.0) {
        throw ConfigError("beta exponent is undefined for sigma2 = 0");
    }
    if (params.r <= 0.0) throw ConfigError("beta exponent requires r > 0");
    const double a = params.mu - 0.5 * params.sigma2;
    const double d = exponent_discriminant(params);
    return a < 0.0 ? 2.0 * params.r / (d - a) : (d + a) / params.sigma2;
}

double gbm_propagator(const ModelParams& params, double x, double t) {
    validate(params);
    if (params.sigma2 == 0.0) {
        throw ConfigError("gbm_propagator requires sigma2 > 0");
    }
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("t must be finite and > 0");
    if (x <= 0.0) return 0.0;
    const double s2t = params.sigma2 * t;
    const double z = std::log(x / params.x0) - (params.mu - 0.5 * params.sigma2) * t;
    return std::exp(-z * z / (2.0 * s2t)) / (x * std::sqrt(2.0 * kPi * s2t));
}

double transient_pdf(const ModelParams& params, double x, double t) {
    validate(params);
    if (params.sigma2 == 0.0) {
        throw ConfigError("transient_pdf requires sigma2 > 0");
    }
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("t must be finite and > 0");
    if (!(x > 0.0)) throw ConfigError("x must be > 0");

    const double survival_term = std::exp(-params.r * t) * gbm_propagator(params, x, t);
    if (params.r == 0.0) return survival_term;

    boost::math::quadrature::tanh_sinh<double> integrator;
    double error = 0.0;
    double l1 = 0.0;
    const auto integrand = [&](double u) {
        return std::exp(-params.r * u) * gbm_propagator(params, x, u);
    };
    const double integral = integrator.integrate(integrand, 0.0, t, 1e-9, &error, &l1);
    if (!(error <= 1e-6 * std::max(std::abs(integral), 1e-12))) {
        throw NumericError("transient_pdf quadrature did not converge at x = " +
                           std::to_string(x) + ", t = " + std::to_string(t));
    }
    return survival_term + params.r * integral;
}

double StationaryLaw::pdf(double x) const {
    if (x <= 0.0) return 0.0;
    const double rel = x / x0;
    return x <= x0 ? norm * std::pow(rel, left_exponent)
                   : norm * std::pow(rel, -alpha - 1.0);
}

double StationaryLaw::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    const double rel = x / x0;
    if (x <= x0) return (norm * x0 / beta()) * std::pow(rel, beta());
    return 1.0 - (norm * x0 / alpha) * std::pow(rel, -alpha);
}

StationaryLaw stationary_law(const ModelParams& params) {
    validate(params);
    if (params.r == 0.0) {
        throw ConfigError("no stationary state exists for r = 0");
    }
    if (params.sigma2 == 0.0) {
        throw ConfigError("stationary law requires sigma2 > 0");
    }
    StationaryLaw law;
    law.alpha = alpha_exponent(params);
    law.left_exponent = beta_exponent(params) - 1.0;
    law.x0 = params.x0;

    // Normalize numerically. Both branch integrals are mapped onto (0, 1):
    // left with y = x/x0, right with y = x0/x; the endpoint singularities
    // (for exponents below one) are integrable.
    boost::math::quadrature::tanh_sinh<double> integrator;
    double err_l = 0.0, err_r = 0.0;
    const double beta = law.beta();
    const double alpha = law.alpha;
    const double left =
        integrator.integrate([&](double y) { return std::pow(y, beta - 1.0); }, 0.0, 1.0,
                             1e-10, &err_l);
    const double right =
        integrator.integrate([&](double y) { return std::pow(y, alpha - 1.0); }, 0.0, 1.0,
                             1e-10, &err_r);
    const double total = params.x0 * (left + right);
    if (!(err_l + err_r <= 1e-8 * total) || !(total > 0.0) || !std::isfinite(total)) {
        throw NumericError("stationary normalization quadrature did not converge");
    }
    law.norm = 1.0 / total;
    return law;
}

double stationary_pdf(const ModelParams& params, double x) {
    return stationary_law(params).pdf(x);
}

LastResetMoments last_reset_moments(double r, double t) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("r must be finite and >= 0");
    require_time(t);
    if (r == 0.0 || t == 0.0) return {0.0, 0.0};

    const double x = r * t;
    LastResetMoments out;
    if (x < 0.01) {
        // Series in x = r t; the closed forms lose all digits to cancellation
        // here. Relative truncation error is O(x^4).
        out.mean = 0.5 * r * t * t * (1.0 - x / 3.0 + x * x / 12.0 - x * x * x / 60.0);
        const double x3 = x * x * x;
        out.variance =
            (x3 / 3.0 - x3 * x / 3.0 + 11.0 * x3 * x * x / 60.0 - 13.0 * x3 * x3 / 180.0) /
            (r * r);
    } else {
        out.mean = t + std::expm1(-x) / r;
        out.variance = -std::expm1(-2.0 * x) / (r * r) - 2.0 * t * std::exp(-x) / r;
    }
    return out;
}

double growth_estimator_mean(const ModelParams& params, double t) {
    validate(params);
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("t must be finite and > 0");
    const LastResetMoments tl = last_reset_moments(params.r, t);
    return (params.mu - 0.5 * params.sigma2) * (1.0 - tl.mean / t);
}

double growth_estimator_variance(const ModelParams& params, double t) {
    validate(params);
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("t must be finite and > 0");
    const LastResetMoments tl = last_reset_moments(params.r, t);
    const double a = params.mu - 0.5 * params.sigma2;
    return a * a * tl.variance / (t * t) + params.sigma2 / t * (1.0 - tl.mean / t);
}

double analytic_relative_variance(const ModelParams& params, std::int64_t n_samples,
                                  double t) {
    if (n_samples < 1) throw ConfigError("sample size must be >= 1");
    require_time(t);
    const double log_ratio =
        log_moment_scaled(params, 2, t) - 2.0 * log_moment_scaled(params, 1, t);
    return std::expm1(log_ratio) / static_cast<double>(n_samples);
}

CriticalTime critical_time(const ModelParams& params, std::int64_t n_samples) {
    validate(params);
    if (n_samples < 1) throw ConfigError("sample size must be >= 1");

    if (params.sigma2 == 0.0 && params.r == 0.0) {
        return {kInf, TcMethod::never};  // deterministic dynamics, R_N = 0
    }
    const double r_2 = threshold_rate(params, 2);
    const double target = std::log(static_cast<double>(n_samples) + 1.0);
    if (params.r > r_2) {
        // Both moments converge; the ratio saturates at a finite value.
        const double d1 = params.r - threshold_rate(params, 1);
        const double limit_ratio = d1 * d1 / (params.r * (params.r - r_2));
        if (std::log(limit_ratio) <= target) return {kInf, TcMethod::never};
    }

    const auto gap = [&](double t) {
        return log_moment_scaled(params, 2, t) - 2.0 * log_moment_scaled(params, 1, t) -
               target;
    };

    double lo = 1e-6;
    if (gap(lo) >= 0.0) {
        lo = 1e-12;
        if (gap(lo) >= 0.0) return {lo, TcMethod::exact_root};
    }
    double hi = 1.0;
    while (gap(hi) < 0.0) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e18) {
            throw NumericError("critical_time: failed to bracket the root below t = 1e18");
        }
    }
    // Bisection on log t to relative accuracy 1e-8.
    while (hi - lo > 1e-8 * lo) {
        const double mid = std::sqrt(lo * hi);
        (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    return {0.5 * (lo + hi), TcMethod::exact_root};
}

double critical_time_frozen_approx(const ModelParams& params, std::int64_t n_samples) {
    validate(params);
    if (n_samples < 1) throw ConfigError("sample size must be >= 1");
    if (!(params.r < params.mu)) {
        throw ConfigError("frozen approximation requires r < mu");
    }
    const double r2 = 2.0 * params.mu + params.sigma2;
    const double rate = params.r + params.sigma2;
    if (rate <= 0.0) throw ConfigError("frozen approximation requires r + sigma2 > 0");
    const double mu_gap = params.mu - params.r;
    const double n1 = static_cast<double>(n_samples) + 1.0;
    return std::log(n1 * params.mu * params.mu * (r2 - params.r) / (mu_gap * mu_gap * r2)) /
           rate;
}

double critical_time_unstable_approx(const ModelParams& params, std::int64_t n_samples) {
    validate(params);
    if (n_samples < 1) throw ConfigError("sample size must be >= 1");
    const double r2 = 2.0 * params.mu + params.sigma2;
    if (!(params.r > params.mu) || !(params.r < r2)) {
        throw ConfigError("unstable approximation requires mu < r < 2 mu + sigma2");
    }
    const double rate = r2 - params.r;
    const double r_gap = params.r - params.mu;
    const double n1 = static_cast<double>(n_samples) + 1.0;
    return std::log(n1 * params.r * params.r * rate / (r_gap * r_gap * r2)) / rate;
}

std::int64_t min_self_averaging_sample(const ModelParams& params) {
    validate(params);
    const double r2 = 2.0 * params.mu + params.sigma2;
    if (!(params.r > r2)) {
        throw ConfigError("minimum self-averaging sample requires r > 2 mu + sigma2");
    }
    const double threshold =
        (params.mu * params.mu + params.r * params.sigma2) / ((params.r - r2) * params.r);
    if (!std::isfinite(threshold)) {
        throw NumericError("no finite self-averaging sample size exists");
    }
    return static_cast<std::int64_t>(std::floor(threshold)) + 1;
}

double optimal_reset_rate(const ModelParams& params, std::int64_t n_samples) {
    validate(params);
    if (n_samples < 2) throw ConfigError("optimal_reset_rate requires n_samples >= 2");
    const double r2 = 2.0 * params.mu + params.sigma2;
    if (!(r2 > 0.0)) {
        throw ConfigError("optimal_reset_rate requires 2 mu + sigma2 > 0");
    }

    const auto tc_at = [&](double r) {
        ModelParams p = params;
        p.r = r;
        const CriticalTime tc = critical_time(p, n_samples);
        if (!tc.finite()) {
            throw NumericError("t_c is not finite inside (0, 2 mu + sigma2)");
        }
        return tc.t_c;
    };

    // Coarse grid seed, then golden-section on the bracketing neighbors.
    constexpr int kGridPoints = 64;
    int best = 1;
    double best_tc = kInf;
    for (int i = 1; i <= kGridPoints; ++i) {
        const double r = r2 * static_cast<double>(i) / (kGridPoints + 1.0);
        const double tc = tc_at(r);
        if (tc < best_tc) {
            best_tc = tc;
            best = i;
        }
    }
    double lo = r2 * static_cast<double>(best - 1) / (kGridPoints + 1.0);
    double hi = r2 * static_cast<double>(best + 1) / (kGridPoints + 1.0);
    lo = std::max(lo, r2 * 1e-9);
    hi = std::min(hi, r2 * (1.0 - 1e-9));

    constexpr double kGolden = 0.6180339887498949;
    double x1 = hi - kGolden * (hi - lo);
    double x2 = lo + kGolden * (hi - lo);
    double f1 = tc_at(x1);
    double f2 = tc_at(x2);
    while (hi - lo > 1e-7 * r2) {
        if (f1 < f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - kGolden * (hi - lo);
            f1 = tc_at(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + kGolden * (hi - lo);
            f2 = tc_at(x2);
        }
    }
    return 0.5 * (lo + hi);
}

Regime classify_regime(const ModelParams& params) {
    validate(params);
    Regime regime;
    regime.r_1 = threshold_rate(params, 1);
    regime.r_2 = threshold_rate(params, 2);
    if (params.r <= regime.r_1) {
        regime.tag = RegimeTag::frozen;
        regime.on_boundary = params.r == regime.r_1;
    } else if (params.r <= regime.r_2) {
        regime.tag = RegimeTag::unstable_annealed;
        regime.on_boundary = params.r == regime.r_2;
    } else {
        regime.tag = RegimeTag::stable_annealed;
    }
    return regime;
}

const char* to_string(RegimeTag tag) {
    switch (tag) {
        case RegimeTag::frozen: return "frozen";
        case RegimeTag::unstable_annealed: return "unstable_annealed";
        case RegimeTag::stable_annealed: return "stable_annealed";
    }
    return "unknown";
}

const char* to_string(TcMethod method) {
    switch (method) {
        case TcMethod::exact_root: return "exact_root";
        case TcMethod::frozen_approx: return "frozen_approx";
        case TcMethod::unstable_approx: return "unstable_approx";
        case TcMethod::never: return "never";
    }
    return "unknown";
}

}  // namespace srgbm
