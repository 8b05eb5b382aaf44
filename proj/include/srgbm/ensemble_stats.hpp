#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace srgbm {

/// Positions of an N-trajectory ensemble observed at a common time.
struct EnsembleSnapshot {
    double t = 0.0;
    std::vector<double> positions;

    std::int64_t size() const { return static_cast<std::int64_t>(positions.size()); }
};

/// Fraction of the ensemble total held by the top cohort.
struct ShareReport {
    double p_top = 0.0;
    std::int64_t cohort_size = 0;
};

/// Arithmetic mean of the snapshot positions.
double sample_average(const EnsembleSnapshot& snapshot);

/// Growth-rate estimator (1/t) * log(sample_average / x0). Rejects t = 0.
double growth_rate_estimate(const EnsembleSnapshot& snapshot, double x0);

/// Variance of the realized sample averages divided by their squared mean.
/// Needs at least two realizations and a nonzero mean.
double empirical_relative_variance(std::span<const double> realizations);

/// Share of the total held by the largest floor(N * fraction) positions
/// (at least one). Ties are broken by the stable order of the snapshot.
ShareReport top_share(const EnsembleSnapshot& snapshot, double fraction);

/// Standard median; mean of the two middle values for even counts.
double median_over_realizations(std::span<const double> values);

/// Linear-interpolated quantile, q in [0, 1].
double quantile(std::span<const double> values, double q);

}  // namespace srgbm
