#include "srgbm/sde.hpp"

#include <cmath>
#include <string>

#include "srgbm/errors.hpp"
#include "srgbm/parallel.hpp"

namespace srgbm {

namespace {

// Shared Euler stepping core. Record is called as record(step, x) at step 0,
// every stride-th step, and the final step; on_step sees every step.
template <typename Record, typename OnStep>
void euler_core(const ModelParams& p, const SimGrid& g, RngStream& stream,
                std::int64_t stride, Record&& record, OnStep&& on_step) {
    validate(p, g);
    if (stride < 1) throw ConfigError("record_stride must be >= 1");

    const double dt = g.dt;
    const double p_reset = p.r * dt;
    const double drift = p.mu * dt;
    const double noise = p.sigma() * std::sqrt(dt);

    double x = p.x0;
    record(0, x);
    for (std::int64_t step = 1; step <= g.n_steps; ++step) {
        if (stream.bernoulli(p_reset)) {
            x = p.x0;
            on_step(step, true, 0.0);
        } else {
            const double eta = stream.normal();
            const double multiplier = 1.0 + drift + noise * eta;
            if (multiplier <= 0.0) {
                throw NumericError(
                    "Euler step multiplier <= 0 at step " + std::to_string(step) +
                    "; dt is too coarse for these parameters");
            }
            x *= multiplier;
            on_step(step, false, eta);
        }
        if (step % stride == 0 || step == g.n_steps) record(step, x);
    }
}

}  // namespace

Trajectory simulate_euler(const ModelParams& params, const SimGrid& grid, RngStream& stream,
                          std::int64_t record_stride) {
    Trajectory traj;
    traj.record_stride = record_stride;
    const std::int64_t n_rec = grid.n_steps / record_stride + 2;
    traj.times.reserve(n_rec);
    traj.positions.reserve(n_rec);
    euler_core(
        params, grid, stream, record_stride,
        [&](std::int64_t step, double x) {
            traj.times.push_back(static_cast<double>(step) * grid.dt);
            traj.positions.push_back(x);
        },
        [&](std::int64_t step, bool reset, double) {
            if (reset) traj.reset_steps.push_back(step);
        });
    return traj;
}

PathPair simulate_with_overlay(const ModelParams& params, const SimGrid& grid,
                               RngStream& stream) {
    PathPair path;
    path.times.reserve(grid.n_steps + 1);
    path.euler.reserve(grid.n_steps + 1);
    path.renewal.reserve(grid.n_steps + 1);

    const double sigma = params.sigma();
    const double sqrt_dt = std::sqrt(grid.dt);
    double tau = 0.0;   // time since last reset
    double wsum = 0.0;  // W(t) - W(t_l) accumulated from the same increments
    path.renewal.push_back(params.x0);

    euler_core(
        params, grid, stream, 1,
        [&](std::int64_t step, double x) {
            path.times.push_back(static_cast<double>(step) * grid.dt);
            path.euler.push_back(x);
        },
        [&](std::int64_t step, bool reset, double eta) {
            if (reset) {
                tau = 0.0;
                wsum = 0.0;
                path.reset_steps.push_back(step);
            } else {
                tau += grid.dt;
                wsum += sqrt_dt * eta;
            }
            path.renewal.push_back(
                params.x0 *
                std::exp((params.mu - 0.5 * params.sigma2) * tau + sigma * wsum));
        });
    return path;
}

double sample_last_reset_time(double t, double r, RngStream& stream) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t must be finite and >= 0");
    if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("r must be finite and >= 0");
    if (r == 0.0) return 0.0;
    const double gap = stream.exponential(r);
    return gap >= t ? 0.0 : t - gap;
}

double sample_position_exact(const ModelParams& params, double t, RngStream& stream) {
    validate(params);
    if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("t must be finite and >= 0");
    const double t_l = sample_last_reset_time(t, params.r, stream);
    const double tau = t - t_l;
    const double z = stream.normal();
    return params.x0 *
           std::exp((params.mu - 0.5 * params.sigma2) * tau +
                    params.sigma() * std::sqrt(tau) * z);
}

std::vector<Trajectory> generate_ensemble(const ModelParams& params, const SimGrid& grid,
                                          std::int64_t n_traj, std::uint64_t master_seed,
                                          std::int64_t record_stride,
                                          std::uint64_t stream_base) {
    if (n_traj < 1) throw ConfigError("n_traj must be >= 1");
    validate(params, grid);
    std::vector<Trajectory> ensemble(n_traj);
    parallel_for(n_traj, [&](std::int64_t i) {
        RngStream stream(master_seed, stream_base + static_cast<std::uint64_t>(i));
        ensemble[i] = simulate_euler(params, grid, stream, record_stride);
    });
    return ensemble;
}

std::vector<double> ensemble_finals_euler(const ModelParams& params, const SimGrid& grid,
                                          std::int64_t n_traj, std::uint64_t master_seed,
                                          std::uint64_t stream_base) {
    if (n_traj < 1) throw ConfigError("n_traj must be >= 1");
    validate(params, grid);
    std::vector<double> finals(n_traj);
    parallel_for(n_traj, [&](std::int64_t i) {
        RngStream stream(master_seed, stream_base + static_cast<std::uint64_t>(i));
        double x = params.x0;
        euler_core(params, grid, stream, grid.n_steps,
                   [&](std::int64_t, double v) { x = v; }, [](std::int64_t, bool, double) {});
        finals[i] = x;
    });
    return finals;
}

std::vector<double> ensemble_finals_exact(const ModelParams& params, double t,
                                          std::int64_t n_traj, std::uint64_t master_seed,
                                          std::uint64_t stream_base) {
    if (n_traj < 1) throw ConfigError("n_traj must be >= 1");
    std::vector<double> finals(n_traj);
    parallel_for(n_traj, [&](std::int64_t i) {
        RngStream stream(master_seed, stream_base + static_cast<std::uint64_t>(i));
        finals[i] = sample_position_exact(params, t, stream);
    });
    return finals;
}

}  // namespace srgbm
