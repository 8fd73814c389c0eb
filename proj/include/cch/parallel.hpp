#pragma once

// Thread-count-independent parallel reduction: the index range is cut into a
// fixed number of blocks, block results are computed (possibly concurrently)
// and merged strictly in block order. Running with 1 or 64 threads yields
// bit-identical results.

#include <cstddef>
#include <thread>
#include <vector>

namespace cch {

inline int effective_threads(int requested) {
  if (requested <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : int(hw);
  }
  return requested;
}

// map(block_begin, block_end) -> R computed per block; merge(acc, R) folds in
// fixed block order. R must be default-constructible.
template <typename R, typename Map, typename Merge>
R parallel_block_reduce(std::size_t n, int threads, R init, Map map, Merge merge,
                        std::size_t blocks_hint = 64) {
  if (n == 0) return init;
  threads = effective_threads(threads);
  std::size_t nblocks = blocks_hint;
  if (nblocks > n) nblocks = n;
  if (nblocks == 0) nblocks = 1;
  std::vector<R> partial(nblocks);
  std::size_t per = n / nblocks, extra = n % nblocks;

  auto block_range = [&](std::size_t b) {
    std::size_t lo = b * per + (b < extra ? b : extra);
    std::size_t len = per + (b < extra ? 1 : 0);
    return std::pair<std::size_t, std::size_t>(lo, lo + len);
  };

  if (threads <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) {
      auto [lo, hi] = block_range(b);
      partial[b] = map(lo, hi);
    }
  } else {
    std::vector<std::thread> pool;
    std::size_t stride = std::size_t(threads);
    for (std::size_t t = 0; t < stride && t < nblocks; ++t) {
      pool.emplace_back([&, t]() {
        for (std::size_t b = t; b < nblocks; b += stride) {
          auto [lo, hi] = block_range(b);
          partial[b] = map(lo, hi);
        }
      });
    }
    for (auto& th : pool) th.join();
  }

  R acc = init;
  for (std::size_t b = 0; b < nblocks; ++b) acc = merge(acc, partial[b]);
  return acc;
}

}  // namespace cch
