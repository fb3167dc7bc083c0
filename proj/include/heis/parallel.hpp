#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace heis {

inline int default_workers() {
  unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : int(hc);
}

/// Static partition of [0, n) across `workers` threads.
/// `fn(begin, end)` must write only to per-index slots so that results
/// are identical for any worker count. The first worker exception is
/// rethrown in the caller.
template <class Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  if (n == 0) return;
  if (workers <= 1 || n < 2) {
    fn(std::size_t(0), n);
    return;
  }
  std::size_t w = std::min<std::size_t>(workers, n);
  std::vector<std::thread> pool;
  pool.reserve(w);
  std::vector<std::exception_ptr> errors(w);
  std::size_t chunk = (n + w - 1) / w;
  for (std::size_t k = 0; k < w; ++k) {
    std::size_t b = k * chunk, e = std::min(n, b + chunk);
    if (b >= e) break;
    pool.emplace_back([&fn, &errors, k, b, e] {
      try {
        fn(b, e);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

/// Sum of `v` over fixed 4096-element blocks combined in block order;
/// bit-identical for any worker count.
inline double block_sum(const std::vector<double>& v) {
  const std::size_t B = 4096;
  double total = 0.0;
  for (std::size_t b = 0; b < v.size(); b += B) {
    double part = 0.0;
    std::size_t e = std::min(v.size(), b + B);
    for (std::size_t i = b; i < e; ++i) part += v[i];
    total += part;
  }
  return total;
}

}  // namespace heis
