#include "srgbm/harness/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "srgbm/errors.hpp"

namespace srgbm::harness {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

// Shortest representation that round-trips exactly.
std::string format_double(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': cannot parse number '" + value + "'");
    }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("config key '" + key + "': cannot parse integer '" + value + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size()) {
        throw ConfigError("config key '" + key + "': cannot parse seed '" + value + "'");
    }
    return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key '" + key + "': expected true/false, got '" + value + "'");
}

// Comma-separated scalars; a token a:b:step expands to the inclusive range.
std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (token.empty()) continue;
        const auto c1 = token.find(':');
        if (c1 == std::string::npos) {
            out.push_back(parse_double(key, token));
            continue;
        }
        const auto c2 = token.find(':', c1 + 1);
        if (c2 == std::string::npos) {
            throw ConfigError("config key '" + key + "': range needs start:stop:step");
        }
        const double start = parse_double(key, token.substr(0, c1));
        const double stop = parse_double(key, token.substr(c1 + 1, c2 - c1 - 1));
        const double step = parse_double(key, token.substr(c2 + 1));
        if (!(step > 0.0) || stop < start) {
            throw ConfigError("config key '" + key + "': bad range '" + token + "'");
        }
        const auto count = static_cast<std::int64_t>(std::floor((stop - start) / step + 1e-9));
        for (std::int64_t i = 0; i <= count; ++i) {
            out.push_back(start + step * static_cast<double>(i));
        }
    }
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<std::int64_t> out;
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) {
        token = trim(token);
        if (!token.empty()) out.push_back(parse_int(key, token));
    }
    return out;
}

SamplerKind sampler_from_string(const std::string& name) {
    if (name == "exact") return SamplerKind::exact;
    if (name == "euler") return SamplerKind::euler;
    throw ConfigError("unknown sampler '" + name + "' (expected exact or euler)");
}

}  // namespace

ExperimentConfig::ExperimentConfig() {
    for (int i = 0; i <= 50; ++i) r_list.push_back(0.002 * i);
    n_list = {1, 100, 1000, 10000};
}

const char* to_string(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::single_path: return "single-path";
        case ExperimentKind::ergodicity_sweep: return "ergodicity-sweep";
        case ExperimentKind::self_averaging: return "self-averaging";
        case ExperimentKind::regimes_timeseries: return "regimes-timeseries";
        case ExperimentKind::analytics_table: return "analytics-table";
    }
    return "unknown";
}

const char* to_string(SamplerKind kind) {
    return kind == SamplerKind::exact ? "exact" : "euler";
}

ExperimentKind experiment_from_string(const std::string& name) {
    if (name == "single-path") return ExperimentKind::single_path;
    if (name == "ergodicity-sweep") return ExperimentKind::ergodicity_sweep;
    if (name == "self-averaging") return ExperimentKind::self_averaging;
    if (name == "regimes-timeseries") return ExperimentKind::regimes_timeseries;
    if (name == "analytics-table") return ExperimentKind::analytics_table;
    throw ConfigError("unknown experiment '" + name + "'");
}

std::string ExperimentConfig::serialize() const {
    std::ostringstream out;
    out << "experiment = " << to_string(experiment) << '\n';
    out << "mu = " << format_double(params.mu) << '\n';
    out << "sigma2 = " << format_double(params.sigma2) << '\n';
    out << "r = " << format_double(params.r) << '\n';
    out << "x0 = " << format_double(params.x0) << '\n';
    out << "dt = " << format_double(grid.dt) << '\n';
    out << "n_steps = " << grid.n_steps << '\n';
    out << "r_list = ";
    for (std::size_t i = 0; i < r_list.size(); ++i) {
        out << (i ? "," : "") << format_double(r_list[i]);
    }
    out << '\n';
    out << "N_list = ";
    for (std::size_t i = 0; i < n_list.size(); ++i) out << (i ? "," : "") << n_list[i];
    out << '\n';
    out << "realizations = " << realizations << '\n';
    out << "timeseries_realizations = " << timeseries_realizations << '\n';
    out << "timeseries_N = " << timeseries_n << '\n';
    out << "master_seed = " << master_seed << '\n';
    out << "output_dir = " << output_dir << '\n';
    out << "emit_plots = " << (emit_plots ? "true" : "false") << '\n';
    out << "sampler = " << to_string(sampler) << '\n';
    out << "record_stride = " << record_stride << '\n';
    out << "top_fraction = " << format_double(top_fraction) << '\n';
    return out.str();
}

std::string ExperimentConfig::hash() const {
    // Hash only what determines the table contents; output_dir and
    // emit_plots do not.
    std::string text = serialize();
    std::istringstream in(text);
    std::string line, kept;
    while (std::getline(in, line)) {
        if (line.rfind("output_dir", 0) == 0 || line.rfind("emit_plots", 0) == 0) continue;
        kept += line;
        kept += '\n';
    }
    text = std::move(kept);
    std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
    for (const unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void validate(const ExperimentConfig& config) {
    srgbm::validate(config.params, config.grid);
    if (config.r_list.empty()) throw ConfigError("r_list must not be empty");
    if (config.n_list.empty()) throw ConfigError("N_list must not be empty");
    for (const double r : config.r_list) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw ConfigError("r_list entries must be >= 0");
    }
    for (const std::int64_t n : config.n_list) {
        if (n < 1) throw ConfigError("N_list entries must be >= 1");
    }
    if (config.realizations < 1) throw ConfigError("realizations must be >= 1");
    if (config.timeseries_realizations < 1) {
        throw ConfigError("timeseries_realizations must be >= 1");
    }
    if (config.record_stride < 1) throw ConfigError("record_stride must be >= 1");
    if (!(config.top_fraction > 0.0) || config.top_fraction > 1.0) {
        throw ConfigError("top_fraction must be in (0, 1]");
    }
    // Stream ids pack (r index, N index, realization, trajectory) into 64
    // bits: 16 + 8 + 16 + 24.
    if (config.r_list.size() > 65535) throw ConfigError("r_list is limited to 65535 entries");
    if (config.n_list.size() > 255) throw ConfigError("N_list is limited to 255 entries");
    if (config.realizations > 65535) throw ConfigError("realizations is limited to 65535");
    const std::int64_t max_n =
        std::max(*std::max_element(config.n_list.begin(), config.n_list.end()),
                 config.timeseries_n);
    if (max_n > (std::int64_t{1} << 24)) {
        throw ConfigError("sample sizes are limited to 2^24 trajectories");
    }
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig config;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (const auto hash_pos = line.find('#'); hash_pos != std::string::npos) {
            line.erase(hash_pos);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("config line is not key = value: '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "experiment") config.experiment = experiment_from_string(value);
        else if (key == "mu") config.params.mu = parse_double(key, value);
        else if (key == "sigma2") config.params.sigma2 = parse_double(key, value);
        else if (key == "r") config.params.r = parse_double(key, value);
        else if (key == "x0") config.params.x0 = parse_double(key, value);
        else if (key == "dt") config.grid.dt = parse_double(key, value);
        else if (key == "n_steps") config.grid.n_steps = parse_int(key, value);
        else if (key == "r_list") config.r_list = parse_double_list(key, value);
        else if (key == "N_list") config.n_list = parse_int_list(key, value);
        else if (key == "realizations") config.realizations = parse_int(key, value);
        else if (key == "timeseries_realizations")
            config.timeseries_realizations = parse_int(key, value);
        else if (key == "timeseries_N") config.timeseries_n = parse_int(key, value);
        else if (key == "master_seed") config.master_seed = parse_u64(key, value);
        else if (key == "output_dir") config.output_dir = value;
        else if (key == "emit_plots") config.emit_plots = parse_bool(key, value);
        else if (key == "sampler") config.sampler = sampler_from_string(value);
        else if (key == "record_stride") config.record_stride = parse_int(key, value);
        else if (key == "top_fraction") config.top_fraction = parse_double(key, value);
        else throw ConfigError("unknown config key '" + key + "'");
    }
    validate(config);
    return config;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

std::string default_config_text() {
    const ExperimentConfig defaults;
    std::ostringstream out;
    out << "# srgbm experiment configuration\n"
        << "#\n"
        << "# experiment: single-path | ergodicity-sweep | self-averaging |\n"
        << "#             regimes-timeseries | analytics-table\n"
        << "# The `simulate` subcommand runs single-path or regimes-timeseries;\n"
        << "# sweep, tc and table force their own experiment kind.\n"
        << "experiment = " << to_string(defaults.experiment) << "\n"
        << "\n"
        << "# model: dx = x (mu dt + sigma dW) between resets; resets to x0 at rate r\n"
        << "mu = " << format_double(defaults.params.mu) << "\n"
        << "sigma2 = " << format_double(defaults.params.sigma2) << "\n"
        << "r = " << format_double(defaults.params.r) << "\n"
        << "x0 = " << format_double(defaults.params.x0) << "\n"
        << "\n"
        << "# grid: horizon = dt * n_steps. Desk-scale default horizon is 1e3;\n"
        << "# published figures of this kind often use 1e5, which is hours of CPU.\n"
        << "dt = " << format_double(defaults.grid.dt) << "\n"
        << "n_steps = " << defaults.grid.n_steps << "\n"
        << "\n"
        << "# lists: comma-separated; start:stop:step expands to an inclusive range\n"
        << "r_list = 0:0.1:0.002\n"
        << "N_list = 1,100,1000,10000\n"
        << "\n"
        << "# realizations per cell for sweeps and percentile bands (desk scale;\n"
        << "# increase to 1e4 to match publication-quality medians)\n"
        << "realizations = " << defaults.realizations << "\n"
        << "# the P1% time-series section integrates Euler paths, so it uses its\n"
        << "# own, smaller realization count and sample size\n"
        << "timeseries_realizations = " << defaults.timeseries_realizations << "\n"
        << "timeseries_N = " << defaults.timeseries_n << "\n"
        << "\n"
        << "master_seed = " << defaults.master_seed << "\n"
        << "output_dir = " << defaults.output_dir << "\n"
        << "emit_plots = " << (defaults.emit_plots ? "true" : "false") << "\n"
        << "\n"
        << "# endpoint sampler for sweep / analytics-table / long-time sections:\n"
        << "#   exact - draw the renewal solution directly (no discretization error)\n"
        << "#   euler - integrate the Langevin dynamics on the grid\n"
        << "sampler = " << to_string(defaults.sampler) << "\n"
        << "# recording stride (in steps) for time-series experiments\n"
        << "record_stride = " << defaults.record_stride << "\n"
        << "top_fraction = " << format_double(defaults.top_fraction) << "\n";
    return out.str();
}

}  // namespace srgbm::harness
