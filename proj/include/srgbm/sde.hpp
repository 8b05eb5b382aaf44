#pragma once

#include <cstdint>
#include <vector>

#include "srgbm/params.hpp"
#include "srgbm/rng.hpp"

namespace srgbm {

/// A discretized sample path. `times`/`positions` hold the recorded grid
/// points (every `record_stride`-th step plus the final one); `reset_steps`
/// lists the simulation step indices at which the position was reset to x0,
/// regardless of stride.
struct Trajectory {
    std::vector<double> times;
    std::vector<double> positions;
    std::vector<std::int64_t> reset_steps;
    std::int64_t record_stride = 1;

    double final_position() const { return positions.back(); }
};

/// Euler path plus the exact renewal solution evaluated on the same noise:
/// x_renewal = x0 * exp((mu - sigma^2/2) * (t - t_l) + sigma * (W(t) - W(t_l))).
struct PathPair {
    std::vector<double> times;
    std::vector<double> euler;
    std::vector<double> renewal;
    std::vector<std::int64_t> reset_steps;
};

/// One Euler step per grid point: with probability r*dt the position is set
/// to x0 (no diffusive increment that step), otherwise
/// x <- x * (1 + mu*dt + sigma*sqrt(dt)*eta) with eta standard normal.
/// Throws NumericError if a step's multiplier would drive x below zero,
/// which signals a too-coarse dt.
Trajectory simulate_euler(const ModelParams& params, const SimGrid& grid, RngStream& stream,
                          std::int64_t record_stride = 1);

/// Same stepping and draw sequence as simulate_euler, additionally tracking
/// the exact renewal solution on the shared Wiener increments.
PathPair simulate_with_overlay(const ModelParams& params, const SimGrid& grid,
                               RngStream& stream);

/// Time of the last reset in [0, t] for Poissonian resetting at rate r.
/// Draws E ~ Exp(r); returns 0 if E >= t (the no-reset atom, weight e^{-rt}),
/// else t - E. Always 0 for r = 0.
double sample_last_reset_time(double t, double r, RngStream& stream);

/// Exact draw of the position at time t (no discretization error):
/// x = x0 * exp((mu - sigma^2/2) * tau + sigma * sqrt(tau) * Z) with
/// tau = t - t_l and Z standard normal.
double sample_position_exact(const ModelParams& params, double t, RngStream& stream);

/// n_traj Euler trajectories; trajectory i is driven by
/// RngStream(master_seed, stream_base + i). The result is bit-identical for a
/// fixed seed regardless of execution order or parallelism.
std::vector<Trajectory> generate_ensemble(const ModelParams& params, const SimGrid& grid,
                                          std::int64_t n_traj, std::uint64_t master_seed,
                                          std::int64_t record_stride = 1,
                                          std::uint64_t stream_base = 0);

/// Final positions only (memory-bounded ensemble generation).
std::vector<double> ensemble_finals_euler(const ModelParams& params, const SimGrid& grid,
                                          std::int64_t n_traj, std::uint64_t master_seed,
                                          std::uint64_t stream_base = 0);

/// n draws of the exact position law at time t, stream i = stream_base + i.
std::vector<double> ensemble_finals_exact(const ModelParams& params, double t,
                                          std::int64_t n_traj, std::uint64_t master_seed,
                                          std::uint64_t stream_base = 0);

}  // namespace srgbm
