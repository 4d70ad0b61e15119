#pragma once

#include <cstddef>
#include <functional>

namespace periwave {

// Number of workers actually used for a requested count (0 = hardware).
int resolve_thread_count(int requested);

// Runs fn(task, worker) for task = 0..n_tasks-1 on a static block-cyclic
// partition: worker w handles tasks w, w+T, w+2T, ... in increasing order.
// The partition depends only on (n_tasks, threads), never on scheduling, so
// per-worker accumulation followed by a merge in worker order is reproducible
// for a fixed thread count. Exceptions from tasks are captured and the first
// one (lowest task index) is rethrown after all workers join.
void parallel_for_static(std::size_t n_tasks, int threads,
                         const std::function<void(std::size_t task, int worker)>& fn);

}  // namespace periwave
