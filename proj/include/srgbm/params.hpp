#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include "srgbm/errors.hpp"

namespace srgbm {

/// Parameters of geometric Brownian motion with Poissonian resetting:
/// dx = (1-Z) x (mu dt + sigma dW) + Z (x0 - x), with reset indicator Z
/// firing at rate r and returning the process to x0.
struct ModelParams {
    double mu = 0.0;      ///< drift rate [1/time]
    double sigma2 = 0.0;  ///< noise variance sigma^2 [1/time]
    double r = 0.0;       ///< resetting rate [1/time]
    double x0 = 1.0;      ///< initial (and reset) position, > 0

    double sigma() const { return std::sqrt(sigma2); }
};

/// Uniform time discretization for the Euler scheme.
struct SimGrid {
    double dt = 0.01;
    std::int64_t n_steps = 1;

    double horizon() const { return dt * static_cast<double>(n_steps); }
};

inline void validate(const ModelParams& p) {
    if (!std::isfinite(p.mu) || !std::isfinite(p.sigma2) || !std::isfinite(p.r) ||
        !std::isfinite(p.x0)) {
        throw ConfigError("model parameters must be finite");
    }
    if (p.sigma2 < 0.0) throw ConfigError("sigma2 must be >= 0");
    if (p.r < 0.0) throw ConfigError("resetting rate r must be >= 0");
    if (p.x0 <= 0.0) throw ConfigError("x0 must be > 0");
}

inline void validate(const SimGrid& g) {
    if (!std::isfinite(g.dt) || g.dt <= 0.0) throw ConfigError("dt must be finite and > 0");
    if (g.n_steps < 1) throw ConfigError("n_steps must be >= 1");
}

/// The per-step reset probability r*dt must be a valid probability.
inline void validate(const ModelParams& p, const SimGrid& g) {
    validate(p);
    validate(g);
    if (p.r * g.dt >= 1.0) {
        throw ConfigError("r*dt = " + std::to_string(p.r * g.dt) +
                          " is not a valid per-step reset probability (must be < 1)");
    }
}

}  // namespace srgbm
