#ifndef GCV_PARALLEL_HPP
#define GCV_PARALLEL_HPP

#include <atomic>
#include <exception>
#include <thread>
#include <vector>

namespace gcv {

/// Run fn(i) for i in [0, n) on up to `threads` workers. Results must be
/// written to pre-sized slots indexed by i so the output is independent of
/// scheduling. The first exception is rethrown after all workers join.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (n <= 0) return;
  if (threads <= 1 || n == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
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
  const int workers = std::min(threads, n);
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace gcv

#endif  // GCV_PARALLEL_HPP
