#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "srgbm/params.hpp"

namespace srgbm::harness {

enum class ExperimentKind {
    single_path,
    ergodicity_sweep,
    self_averaging,
    regimes_timeseries,
    analytics_table,
};

enum class SamplerKind { exact, euler };

/// Flat key=value experiment configuration. parse_config() overlays a file
/// onto these defaults; default_config_text() prints the embedded default.
struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::single_path;
    ModelParams params{0.02, 0.01, 0.05, 1.0};
    SimGrid grid{0.01, 100000};
    std::vector<double> r_list;
    std::vector<std::int64_t> n_list;
    std::int64_t realizations = 100;
    std::int64_t timeseries_realizations = 10;
    std::int64_t timeseries_n = 1000;
    std::uint64_t master_seed = 20260809;
    std::string output_dir = "out";
    bool emit_plots = false;
    SamplerKind sampler = SamplerKind::exact;
    std::int64_t record_stride = 100;
    double top_fraction = 0.01;

    ExperimentConfig();

    /// Canonical serialization (stable key order, 17 significant digits).
    std::string serialize() const;
    /// FNV-1a hash of serialize(), for the reproducibility metadata.
    std::string hash() const;
};

/// Throws ConfigError on invariant violations (empty lists, bad ranges,
/// stream-id packing limits).
void validate(const ExperimentConfig& config);

/// Parses config text over the defaults. Lines are `key = value`; `#` starts
/// a comment; list values are comma-separated, and `a:b:step` expands to an
/// inclusive range. Unknown keys are errors.
ExperimentConfig parse_config(const std::string& text);

ExperimentConfig load_config_file(const std::string& path);

std::string default_config_text();

const char* to_string(ExperimentKind kind);
const char* to_string(SamplerKind kind);
ExperimentKind experiment_from_string(const std::string& name);

}  // namespace srgbm::harness
