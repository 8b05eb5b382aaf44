#include "srgbm/harness/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <string>

#include "srgbm/analytics.hpp"
#include "srgbm/ensemble_stats.hpp"
#include "srgbm/errors.hpp"
#include "srgbm/harness/svg.hpp"
#include "srgbm/parallel.hpp"
#include "srgbm/sde.hpp"
#include "srgbm/version.hpp"

namespace srgbm::harness {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Cell stream layout: 16 bits r index, 8 bits section/N index, 16 bits
// realization, 24 bits trajectory (added by the ensemble generators).
std::uint64_t stream_base(std::size_t r_idx, std::size_t n_idx, std::int64_t realization) {
    return (static_cast<std::uint64_t>(r_idx) << 48) |
           (static_cast<std::uint64_t>(n_idx) << 40) |
           (static_cast<std::uint64_t>(realization) << 24);
}

std::vector<double> sampler_finals(const ExperimentConfig& config, const ModelParams& params,
                                   std::int64_t n, std::uint64_t base) {
    if (config.sampler == SamplerKind::euler) {
        return ensemble_finals_euler(params, config.grid, n, config.master_seed, base);
    }
    return ensemble_finals_exact(params, config.grid.horizon(), n, config.master_seed, base);
}

// Median of the position law at the horizon: the stationary quantile for
// r > 0, the log-normal median of reset-free GBM otherwise. Serves as the
// "time-average behavior" reference line (order x0).
double time_average_reference(const ModelParams& params, double t) {
    if (params.r > 0.0 && params.sigma2 > 0.0) {
        const StationaryLaw law = stationary_law(params);
        const double w_left = law.left_weight();
        if (w_left >= 0.5) {
            return params.x0 * std::pow(0.5 / w_left, 1.0 / law.beta());
        }
        const double w_right = 1.0 - w_left;
        return params.x0 * std::pow((1.0 - 0.5) / w_right, -1.0 / law.alpha);
    }
    return params.x0 * std::exp((params.mu - 0.5 * params.sigma2) * t);
}

std::string regime_label(const ModelParams& params) {
    const Regime regime = classify_regime(params);
    std::string label = to_string(regime.tag);
    if (regime.on_boundary) label += "(boundary)";
    return label;
}

ResultTable::Cell finite_or_na(double v, bool valid) {
    if (!valid) return std::string("na");
    return v;
}

struct SeriesKey {
    std::string label;
    std::vector<double> x, y;
};

}  // namespace

ResultTable run_single_path(const ExperimentConfig& config) {
    RngStream stream(config.master_seed, 0);
    const PathPair path = simulate_with_overlay(config.params, config.grid, stream);

    std::vector<char> is_reset(path.times.size(), 0);
    for (const std::int64_t step : path.reset_steps) is_reset[step] = 1;

    ResultTable table({"t", "x_euler", "x_renewal", "is_reset"});
    for (std::size_t k = 0; k < path.times.size(); ++k) {
        table.add_row({path.times[k], path.euler[k], path.renewal[k],
                       static_cast<std::int64_t>(is_reset[k])});
    }
    return table;
}

ResultTable run_ergodicity_sweep(const ExperimentConfig& config,
                                 std::int64_t* warning_count) {
    struct Cell {
        double median = 0.0;
        double analytic = 0.0;
        double reference = 0.0;
        bool below_tc = false;
    };
    const std::size_t n_r = config.r_list.size();
    const std::size_t n_n = config.n_list.size();
    const double horizon = config.grid.horizon();
    std::vector<Cell> cells(n_r * n_n);

    parallel_for(static_cast<std::int64_t>(cells.size()), [&](std::int64_t flat) {
        const std::size_t r_idx = static_cast<std::size_t>(flat) / n_n;
        const std::size_t n_idx = static_cast<std::size_t>(flat) % n_n;
        ModelParams params = config.params;
        params.r = config.r_list[r_idx];
        const std::int64_t n = config.n_list[n_idx];

        std::vector<double> averages(config.realizations);
        for (std::int64_t j = 0; j < config.realizations; ++j) {
            const auto finals =
                sampler_finals(config, params, n, stream_base(r_idx, n_idx, j));
            averages[j] = sample_average({horizon, finals});
        }
        Cell& cell = cells[flat];
        cell.median = median_over_realizations(averages);
        cell.analytic = moment(params, 1, horizon);
        cell.reference = time_average_reference(params, horizon);
        const CriticalTime tc = critical_time(params, n);
        cell.below_tc = tc.finite() && horizon < tc.t_c;
    });

    ResultTable table(
        {"r", "N", "median_sample_avg", "analytic_mean", "time_avg_reference", "below_tc"});
    std::int64_t warnings = 0;
    for (std::size_t r_idx = 0; r_idx < n_r; ++r_idx) {
        for (std::size_t n_idx = 0; n_idx < n_n; ++n_idx) {
            const Cell& cell = cells[r_idx * n_n + n_idx];
            warnings += cell.below_tc ? 1 : 0;
            table.add_row({config.r_list[r_idx], config.n_list[n_idx], cell.median,
                           cell.analytic, cell.reference,
                           static_cast<std::int64_t>(cell.below_tc ? 1 : 0)});
        }
    }
    if (warning_count) *warning_count = warnings;
    return table;
}

ResultTable run_self_averaging(const ExperimentConfig& config) {
    const std::size_t n_r = config.r_list.size();
    const std::size_t n_n = config.n_list.size();

    std::vector<double> r_star(n_n, std::nan(""));
    std::vector<char> r_star_valid(n_n, 0);
    for (std::size_t n_idx = 0; n_idx < n_n; ++n_idx) {
        if (config.n_list[n_idx] >= 2) {
            r_star[n_idx] = optimal_reset_rate(config.params, config.n_list[n_idx]);
            r_star_valid[n_idx] = 1;
        }
    }

    ResultTable table({"r", "N", "t_c_exact", "method", "t_c_frozen", "t_c_unstable",
                       "regime", "r_star"});
    for (std::size_t n_idx = 0; n_idx < n_n; ++n_idx) {
        for (std::size_t r_idx = 0; r_idx < n_r; ++r_idx) {
            ModelParams params = config.params;
            params.r = config.r_list[r_idx];
            const std::int64_t n = config.n_list[n_idx];
            const CriticalTime tc = critical_time(params, n);
            const double r2 = threshold_rate(params, 2);

            const bool frozen_ok =
                params.r < params.mu && params.r + params.sigma2 > 0.0;
            const bool unstable_ok = params.r > params.mu && params.r < r2;
            table.add_row(
                {params.r, n, tc.finite() ? tc.t_c : kInf, std::string(to_string(tc.method)),
                 finite_or_na(frozen_ok ? critical_time_frozen_approx(params, n) : 0.0,
                              frozen_ok),
                 finite_or_na(unstable_ok ? critical_time_unstable_approx(params, n) : 0.0,
                              unstable_ok),
                 regime_label(params), finite_or_na(r_star[n_idx], r_star_valid[n_idx])});
        }
    }
    return table;
}

ResultTable run_regimes_timeseries(const ExperimentConfig& config) {
    constexpr std::size_t kTimeSeriesSection = 250;
    constexpr std::size_t kLongTimeSection = 251;
    const double horizon = config.grid.horizon();

    ResultTable table(
        {"series", "x", "r", "regime", "p_top_median", "p_top_q05", "p_top_q95"});

    // Representative rate per regime; at the default parameters these are
    // 0.5*mu, (mu + r2)/2 and 1.6*r2.
    const double r2 = threshold_rate(config.params, 2);
    std::vector<double> reps;
    if (config.params.mu > 0.0) reps.push_back(0.5 * config.params.mu);
    if (r2 > config.params.mu) reps.push_back(0.5 * (config.params.mu + r2));
    if (r2 > 0.0) reps.push_back(1.6 * r2);

    for (std::size_t rep_idx = 0; rep_idx < reps.size(); ++rep_idx) {
        ModelParams params = config.params;
        params.r = reps[rep_idx];
        validate(params, config.grid);

        // p1[j][k]: realization j, recorded time k.
        std::vector<std::vector<double>> p1(config.timeseries_realizations);
        std::vector<double> rec_times;
        parallel_for(config.timeseries_realizations, [&](std::int64_t j) {
            const auto ensemble = generate_ensemble(
                params, config.grid, config.timeseries_n, config.master_seed,
                config.record_stride, stream_base(rep_idx, kTimeSeriesSection, j));
            const std::size_t n_rec = ensemble.front().times.size();
            std::vector<double> series(n_rec);
            EnsembleSnapshot snapshot;
            snapshot.positions.resize(ensemble.size());
            for (std::size_t k = 0; k < n_rec; ++k) {
                snapshot.t = ensemble.front().times[k];
                for (std::size_t i = 0; i < ensemble.size(); ++i) {
                    snapshot.positions[i] = ensemble[i].positions[k];
                }
                series[k] = top_share(snapshot, config.top_fraction).p_top;
            }
            if (j == 0) rec_times = ensemble.front().times;
            p1[j] = std::move(series);
        });

        const std::string regime = regime_label(params);
        std::vector<double> at_k(p1.size());
        for (std::size_t k = 0; k < rec_times.size(); ++k) {
            for (std::size_t j = 0; j < p1.size(); ++j) at_k[j] = p1[j][k];
            table.add_row({std::string("p1_vs_t"), rec_times[k], params.r, regime,
                           median_over_realizations(at_k), quantile(at_k, 0.05),
                           quantile(at_k, 0.95)});
        }
    }

    // Long-time P1% versus r, percentile bands over realizations.
    const std::int64_t n_top =
        *std::max_element(config.n_list.begin(), config.n_list.end());
    const std::size_t n_r = config.r_list.size();
    std::vector<std::array<double, 3>> long_rows(n_r);
    parallel_for(static_cast<std::int64_t>(n_r), [&](std::int64_t r_idx) {
        ModelParams params = config.params;
        params.r = config.r_list[r_idx];
        std::vector<double> shares(config.realizations);
        for (std::int64_t j = 0; j < config.realizations; ++j) {
            const auto finals = sampler_finals(
                config, params, n_top, stream_base(r_idx, kLongTimeSection, j));
            shares[j] = top_share({horizon, finals}, config.top_fraction).p_top;
        }
        long_rows[r_idx] = {median_over_realizations(shares), quantile(shares, 0.05),
                            quantile(shares, 0.95)};
    });
    for (std::size_t r_idx = 0; r_idx < n_r; ++r_idx) {
        ModelParams params = config.params;
        params.r = config.r_list[r_idx];
        table.add_row({std::string("p1_vs_r"), params.r, params.r, regime_label(params),
                       long_rows[r_idx][0], long_rows[r_idx][1], long_rows[r_idx][2]});
    }
    return table;
}

ResultTable run_analytics_table(const ExperimentConfig& config) {
    const double horizon = config.grid.horizon();
    const std::int64_t n_draws =
        *std::max_element(config.n_list.begin(), config.n_list.end());

    ResultTable table(
        {"r", "m", "behavior", "rate_or_limit", "analytic_at_t", "mc_estimate", "mc_se"});
    for (std::size_t r_idx = 0; r_idx < config.r_list.size(); ++r_idx) {
        ModelParams params = config.params;
        params.r = config.r_list[r_idx];
        const auto finals = sampler_finals(config, params, n_draws, stream_base(r_idx, 0, 0));

        for (int m = 1; m <= 2; ++m) {
            const double r_m = threshold_rate(params, m);
            std::string behavior;
            double rate_or_limit = 0.0;
            if (std::abs(params.r - r_m) < 1e-9 * std::max(1.0, r_m)) {
                behavior = "linear";
                rate_or_limit = params.r;  // <x^m> ~ x0^m (1 + r t)
            } else if (params.r < r_m) {
                behavior = "exponential";
                rate_or_limit = r_m - params.r;
            } else {
                behavior = "convergent";
                rate_or_limit = params.r / (params.r - r_m);
            }

            double mean = 0.0;
            for (const double x : finals) mean += std::pow(x, m);
            mean /= static_cast<double>(n_draws);
            double ss = 0.0;
            for (const double x : finals) {
                const double d = std::pow(x, m) - mean;
                ss += d * d;
            }
            const double se = n_draws > 1 ? std::sqrt(ss / (static_cast<double>(n_draws) - 1.0) /
                                                      static_cast<double>(n_draws))
                                          : 0.0;
            table.add_row({params.r, static_cast<std::int64_t>(m), behavior, rate_or_limit,
                           moment(params, m, horizon), mean, se});
        }
    }
    return table;
}

namespace {

ResultTable run_kind(const ExperimentConfig& config, std::int64_t* warnings) {
    switch (config.experiment) {
        case ExperimentKind::single_path: return run_single_path(config);
        case ExperimentKind::ergodicity_sweep:
            return run_ergodicity_sweep(config, warnings);
        case ExperimentKind::self_averaging: return run_self_averaging(config);
        case ExperimentKind::regimes_timeseries: return run_regimes_timeseries(config);
        case ExperimentKind::analytics_table: return run_analytics_table(config);
    }
    throw ConfigError("unknown experiment kind");
}

double column_as_double(const ResultTable::Cell& cell) {
    if (const auto* d = std::get_if<double>(&cell)) return *d;
    if (const auto* i = std::get_if<std::int64_t>(&cell)) return static_cast<double>(*i);
    return std::nan("");
}

// One series per distinct value of the group column, x/y taken from the
// named columns.
std::vector<Series> group_series(const ResultTable& table, const std::string& group_col,
                                 const std::string& x_col, const std::string& y_col,
                                 const std::string& label_prefix) {
    const auto& cols = table.columns();
    const auto idx_of = [&](const std::string& name) {
        return static_cast<std::size_t>(
            std::find(cols.begin(), cols.end(), name) - cols.begin());
    };
    const std::size_t gi = idx_of(group_col), xi = idx_of(x_col), yi = idx_of(y_col);
    std::map<std::string, Series> groups;
    std::vector<std::string> order;
    for (const auto& row : table.rows()) {
        const std::string key = format_cell(row[gi]);
        if (!groups.count(key)) {
            groups[key].label = label_prefix + key;
            order.push_back(key);
        }
        groups[key].x.push_back(column_as_double(row[xi]));
        groups[key].y.push_back(column_as_double(row[yi]));
    }
    std::vector<Series> out;
    for (const auto& key : order) out.push_back(std::move(groups[key]));
    return out;
}

std::vector<std::pair<std::string, std::string>> build_plots(
    const ExperimentConfig& config, const ResultTable& table) {
    std::vector<std::pair<std::string, std::string>> plots;
    const std::string stem = to_string(config.experiment);
    const double r1 = config.params.mu;
    const double r2 = 2.0 * config.params.mu + config.params.sigma2;
    ChartSpec spec;
    switch (config.experiment) {
        case ExperimentKind::single_path: {
            spec.title = "srGBM sample path";
            spec.x_label = "t";
            spec.y_label = "x(t)";
            spec.series = {Series{"euler", {}, {}}, Series{"renewal", {}, {}}};
            for (const auto& row : table.rows()) {
                spec.series[0].x.push_back(column_as_double(row[0]));
                spec.series[0].y.push_back(column_as_double(row[1]));
                spec.series[1].x.push_back(column_as_double(row[0]));
                spec.series[1].y.push_back(column_as_double(row[2]));
            }
            break;
        }
        case ExperimentKind::ergodicity_sweep: {
            spec.title = "long-time sample average vs resetting rate";
            spec.x_label = "r";
            spec.y_label = "median sample average";
            spec.log_y = true;
            spec.series = group_series(table, "N", "r", "median_sample_avg", "N=");
            spec.vertical_markers = {r1};
            break;
        }
        case ExperimentKind::self_averaging: {
            spec.title = "self-averaging time vs resetting rate";
            spec.x_label = "r";
            spec.y_label = "t_c";
            spec.log_y = true;
            spec.series = group_series(table, "N", "r", "t_c_exact", "N=");
            spec.vertical_markers = {r1, r2};
            break;
        }
        case ExperimentKind::regimes_timeseries: {
            ChartSpec ts;
            ts.title = "top-share P1% over time";
            ts.x_label = "t";
            ts.y_label = "P1%";
            ResultTable vs_t(table.columns());
            ResultTable vs_r(table.columns());
            for (const auto& row : table.rows()) {
                (std::get<std::string>(row[0]) == "p1_vs_t" ? vs_t : vs_r).add_row(row);
            }
            ts.series = group_series(vs_t, "r", "x", "p_top_median", "r=");
            plots.emplace_back(stem + ".svg", render_line_chart(ts));

            ChartSpec lt;
            lt.title = "long-time top-share P1% vs resetting rate";
            lt.x_label = "r";
            lt.y_label = "P1%";
            lt.series = group_series(vs_r, "series", "x", "p_top_median", "");
            lt.series.push_back(group_series(vs_r, "series", "x", "p_top_q05", "q05 ")[0]);
            lt.series.push_back(group_series(vs_r, "series", "x", "p_top_q95", "q95 ")[0]);
            lt.vertical_markers = {r1, r2};
            plots.emplace_back(stem + "_long_time.svg", render_line_chart(lt));
            return plots;
        }
        case ExperimentKind::analytics_table: {
            spec.title = "moment at horizon vs resetting rate";
            spec.x_label = "r";
            spec.y_label = "analytic moment";
            spec.log_y = true;
            spec.series = group_series(table, "m", "r", "analytic_at_t", "m=");
            spec.vertical_markers = {r1, r2};
            break;
        }
    }
    plots.emplace_back(stem + ".svg", render_line_chart(spec));
    return plots;
}

}  // namespace

RunArtifacts run_experiment(const ExperimentConfig& config) {
    validate(config);
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    if (ec) {
        throw IoError("cannot create output directory '" + config.output_dir +
                      "': " + ec.message());
    }

    RunArtifacts artifacts;
    ResultTable table = run_kind(config, &artifacts.warning_count);

    const fs::path dir(config.output_dir);
    const std::string stem = to_string(config.experiment);
    artifacts.csv_path = (dir / (stem + ".csv")).string();
    write_text_file(artifacts.csv_path, table.to_csv());

    std::string meta;
    meta += "tool = srgbm " + std::string(kVersion) + "\n";
    meta += "experiment = " + stem + "\n";
    meta += "master_seed = " + std::to_string(config.master_seed) + "\n";
    meta += "config_hash = " + config.hash() + "\n";
    artifacts.meta_path = (dir / "meta.txt").string();
    write_text_file(artifacts.meta_path, meta);

    if (config.emit_plots) {
        for (const auto& [name, svg] : build_plots(config, table)) {
            const std::string path = (dir / name).string();
            write_text_file(path, svg);
            artifacts.plot_paths.push_back(path);
        }
    }
    return artifacts;
}

}  // namespace srgbm::harness
