#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace fla {

namespace detail {
inline std::atomic<unsigned>& thread_setting() {
  static std::atomic<unsigned> value{0};
  return value;
}
}  // namespace detail

/// Number of worker threads used by internally parallel operations. Zero means
/// hardware concurrency. Results never depend on this value.
inline void set_threads(unsigned n) { detail::thread_setting().store(n); }

inline unsigned threads() {
  const unsigned n = detail::thread_setting().load();
  if (n != 0) return n;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Fixed work partition. Block boundaries depend only on `count` and
/// `block_size`, so per-block partial results reduced in block order give the
/// same floating-point answer for any thread count.
inline constexpr std::size_t kBlockSize = 4096;

inline std::size_t block_count(std::size_t count, std::size_t block_size = kBlockSize) {
  return (count + block_size - 1) / block_size;
}

/// Calls fn(block_index, begin, end) for every block, spread over threads().
template <typename Fn>
void for_each_block(std::size_t count, Fn&& fn, std::size_t block_size = kBlockSize) {
  const std::size_t blocks = block_count(count, block_size);
  const auto workers = static_cast<std::size_t>(std::min<std::size_t>(threads(), blocks));
  auto run = [&](std::size_t b) {
    const std::size_t begin = b * block_size;
    fn(b, begin, std::min(count, begin + block_size));
  };
  if (workers <= 1) {
    for (std::size_t b = 0; b < blocks; ++b) run(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < blocks; b = next++) {
        try {
          run(b);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Per-block map followed by an in-order fold.
template <typename T, typename Map, typename Fold>
T map_reduce_blocks(std::size_t count, T init, Map&& map, Fold&& fold,
                    std::size_t block_size = kBlockSize) {
  std::vector<T> partial(block_count(count, block_size), init);
  for_each_block(
      count, [&](std::size_t b, std::size_t begin, std::size_t end) { partial[b] = map(begin, end); },
      block_size);
  T acc = init;
  for (auto& p : partial) acc = fold(std::move(acc), std::move(p));
  return acc;
}

}  // namespace fla
