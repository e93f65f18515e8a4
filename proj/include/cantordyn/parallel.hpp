#pragma once

#include <cstddef>
#include <functional>

namespace cantordyn {

/// Worker count for exhaustive scans: CANTORDYN_THREADS if set to a positive
/// integer, otherwise the hardware concurrency (at least 1).
std::size_t scan_threads();

/// Evaluates `pred` on 0..count-1, possibly in parallel, and returns the
/// least index where it is false (count when it holds everywhere). `pred`
/// must be safe to call concurrently.
std::size_t parallel_first_failure(std::size_t count, const std::function<bool(std::size_t)>& pred);

}  // namespace cantordyn
