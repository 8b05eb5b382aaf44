#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srgbm/harness/config.hpp"
#include "srgbm/harness/table.hpp"

namespace srgbm::harness {

/// One Euler path with the exact renewal solution evaluated on the same
/// noise. Columns: t, x_euler, x_renewal, is_reset.
ResultTable run_single_path(const ExperimentConfig& config);

/// Median sample average at the horizon for every (r, N) cell. Columns:
/// r, N, median_sample_avg, analytic_mean, time_avg_reference, below_tc.
/// below_tc flags cells whose horizon is shorter than the analytic
/// self-averaging time (the sample average is still in its ensemble-like
/// phase there); the count of flagged cells is reported via warning_count.
ResultTable run_ergodicity_sweep(const ExperimentConfig& config,
                                 std::int64_t* warning_count = nullptr);

/// Exact self-averaging time, the closed regime approximations where they
/// apply, and the optimal rate per sample size. Columns:
/// r, N, t_c_exact, method, t_c_frozen, t_c_unstable, regime, r_star.
ResultTable run_self_averaging(const ExperimentConfig& config);

/// Top-share statistics: P1% versus time for one representative rate per
/// regime (series p1_vs_t) and long-time P1% versus r with percentile bands
/// (series p1_vs_r). Columns:
/// series, x, r, regime, p_top_median, p_top_q05, p_top_q95.
ResultTable run_regimes_timeseries(const ExperimentConfig& config);

/// Moment behavior per (r, m in {1,2}): exponential / linear / convergent,
/// the analytic rate or limit, and a Monte Carlo check at the horizon.
/// Columns: r, m, behavior, rate_or_limit, analytic_at_t, mc_estimate, mc_se.
ResultTable run_analytics_table(const ExperimentConfig& config);

struct RunArtifacts {
    std::string csv_path;
    std::string meta_path;
    std::vector<std::string> plot_paths;
    std::int64_t warning_count = 0;
};

/// Runs config.experiment and writes <experiment>.csv, meta.txt and the
/// optional SVG plots into config.output_dir.
RunArtifacts run_experiment(const ExperimentConfig& config);

}  // namespace srgbm::harness
