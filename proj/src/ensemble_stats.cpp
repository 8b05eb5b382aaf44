#include "srgbm/ensemble_stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "srgbm/errors.hpp"

namespace srgbm {

namespace {

void require_nonempty(const EnsembleSnapshot& snapshot) {
    if (snapshot.positions.empty()) throw ConfigError("snapshot must hold >= 1 position");
}

}  // namespace

double sample_average(const EnsembleSnapshot& snapshot) {
    require_nonempty(snapshot);
    const double sum =
        std::accumulate(snapshot.positions.begin(), snapshot.positions.end(), 0.0);
    return sum / static_cast<double>(snapshot.size());
}

double growth_rate_estimate(const EnsembleSnapshot& snapshot, double x0) {
    if (!(snapshot.t > 0.0)) throw ConfigError("growth rate estimate requires t > 0");
    if (!(x0 > 0.0)) throw ConfigError("x0 must be > 0");
    return std::log(sample_average(snapshot) / x0) / snapshot.t;
}

double empirical_relative_variance(std::span<const double> realizations) {
    if (realizations.size() < 2) {
        throw ConfigError("relative variance needs >= 2 realizations");
    }
    const double n = static_cast<double>(realizations.size());
    const double mean = std::accumulate(realizations.begin(), realizations.end(), 0.0) / n;
    if (mean == 0.0) throw ConfigError("relative variance undefined for zero mean");
    double ss = 0.0;
    for (const double v : realizations) ss += (v - mean) * (v - mean);
    return ss / (n - 1.0) / (mean * mean);
}

ShareReport top_share(const EnsembleSnapshot& snapshot, double fraction) {
    require_nonempty(snapshot);
    if (!(fraction > 0.0) || fraction > 1.0) {
        throw ConfigError("top_share fraction must be in (0, 1]");
    }
    const std::int64_t n = snapshot.size();
    ShareReport report;
    report.cohort_size = std::max<std::int64_t>(
        1, static_cast<std::int64_t>(std::floor(static_cast<double>(n) * fraction)));

    std::vector<double> sorted = snapshot.positions;
    std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
    const double total = std::accumulate(sorted.begin(), sorted.end(), 0.0);
    const double top =
        std::accumulate(sorted.begin(), sorted.begin() + report.cohort_size, 0.0);
    report.p_top = top / total;
    return report;
}

double quantile(std::span<const double> values, double q) {
    if (values.empty()) throw ConfigError("quantile of empty sample");
    if (!(q >= 0.0) || !(q <= 1.0)) throw ConfigError("quantile q must be in [0, 1]");
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

double median_over_realizations(std::span<const double> values) {
    return quantile(values, 0.5);
}

}  // namespace srgbm
