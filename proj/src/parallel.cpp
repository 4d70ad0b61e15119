#include "periwave/parallel.hpp"

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace periwave {

int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(hc) : 1;
}

void parallel_for_static(std::size_t n_tasks, int threads,
                         const std::function<void(std::size_t, int)>& fn) {
  int T = std::max(1, resolve_thread_count(threads));
  if (n_tasks == 0) return;
  T = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(T), n_tasks));

  if (T == 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) fn(i, 0);
    return;
  }

  std::mutex err_mutex;
  std::exception_ptr first_error;
  std::size_t first_error_task = n_tasks;

  auto worker = [&](int w) {
    for (std::size_t i = static_cast<std::size_t>(w); i < n_tasks;
         i += static_cast<std::size_t>(T)) {
      try {
        fn(i, w);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (i < first_error_task) {
          first_error_task = i;
          first_error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(T - 1));
  for (int w = 1; w < T; ++w) pool.emplace_back(worker, w);
  worker(0);
  for (auto& t : pool) t.join();

  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace periwave
