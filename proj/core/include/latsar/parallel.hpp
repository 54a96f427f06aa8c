#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace latsar {

/// Job count resolution: an explicit positive request wins, otherwise the
/// LATTICE_SAR_JOBS environment variable, otherwise 1.
inline int resolve_jobs(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LATTICE_SAR_JOBS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

/// Runs fn(i) for i in [0, count) on up to `jobs` threads. Indices are handed
/// out through an atomic counter; the first exception is rethrown in the
/// caller after all workers join. Callers needing deterministic output must
/// write results into per-index slots and reduce afterwards.
template <typename Fn>
void parallel_for(long count, int jobs, Fn&& fn) {
  if (count <= 0) return;
  jobs = static_cast<int>(std::min<long>(std::max(1, jobs), count));
  if (jobs <= 1) {
    for (long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const long i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(jobs);
  for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace latsar
