#pragma once

#include <cstdint>
#include <functional>

namespace tflow::detail {

// Worker budget: TFLOW_THREADS when set (>=1), otherwise the hardware
// concurrency. Re-read on every call so tests can toggle the variable.
int worker_count();

// Runs fn(block) for every block in [0, n_blocks). Blocks are claimed by an
// atomic counter, so scheduling is nondeterministic — callers must write
// only to per-block slots and reduce in block order afterwards. Nested calls
// degrade to serial execution instead of oversubscribing.
void parallel_for_blocks(std::int64_t n_blocks,
                         const std::function<void(std::int64_t)>& fn);

}  // namespace tflow::detail
