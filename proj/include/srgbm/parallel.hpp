#pragma once

#include <cstdint>
#include <functional>

namespace srgbm {

/// Worker count: SRGBM_THREADS if set (clamped to >= 1), otherwise all
/// available hardware threads.
int worker_count();

/// Runs fn(i) for i in [0, n) across worker_count() threads. Work items must
/// write to disjoint slots; iteration order is unspecified, so results must
/// not depend on it.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace srgbm
