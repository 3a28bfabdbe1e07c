#pragma once

#include <cstddef>
#include <functional>

namespace rlab {

// 0 means: the process default if set, else RESIDUE_LAB_WORKERS, else the hardware concurrency.
int resolve_workers(int requested);
// process-wide default for requests of 0 (0 clears it)
void set_default_workers(int workers);

// Calls fn(i) for i in [0, count). Every index is handled exactly once; callers write
// results into per-index slots so the outcome does not depend on the worker count.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace rlab
