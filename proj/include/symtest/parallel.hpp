// Copyright 2026 The symtest authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SYMTEST_PARALLEL_HPP
#define SYMTEST_PARALLEL_HPP

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace symtest {

/// Worker count: min(hardware, SYMTEST_THREADS) with a floor of 1.
int worker_thread_count();

/// Deterministic blocked map-reduce over [0, total).
///
/// The index range is split into `blocks` contiguous ranges; each block is
/// accumulated sequentially into its own accumulator, and the block partials
/// are merged by a fixed pairwise tree keyed on block id. Results are
/// bit-identical for any thread count because neither the block boundaries
/// nor the merge topology depend on scheduling.
template <typename Acc>
Acc blocked_reduce(std::uint64_t total, int blocks,
                   const std::function<Acc()>& make_acc,
                   const std::function<void(Acc&, std::uint64_t)>& body,
                   const std::function<void(Acc&, Acc&)>& merge_into) {
  if (blocks < 1) blocks = 1;
  if (static_cast<std::uint64_t>(blocks) > total && total > 0)
    blocks = static_cast<int>(total);
  if (total == 0) return make_acc();

  std::vector<Acc> partials;
  partials.reserve(blocks);
  for (int b = 0; b < blocks; ++b) partials.push_back(make_acc());

  auto run_block = [&](int b) {
    const std::uint64_t lo = total * static_cast<std::uint64_t>(b) / blocks;
    const std::uint64_t hi = total * static_cast<std::uint64_t>(b + 1) / blocks;
    for (std::uint64_t i = lo; i < hi; ++i) body(partials[b], i);
  };

  const int workers = std::min(worker_thread_count(), blocks);
  if (workers <= 1) {
    for (int b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) {
      pool.emplace_back([&] {
        for (int b = next.fetch_add(1); b < blocks; b = next.fetch_add(1)) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Fixed-topology pairwise tree: merge stride-2^k neighbours.
  for (int stride = 1; stride < blocks; stride *= 2) {
    for (int b = 0; b + stride < blocks; b += 2 * stride) {
      merge_into(partials[b], partials[b + stride]);
    }
  }
  return std::move(partials[0]);
}

/// Block count that keeps per-block accumulator memory bounded. Depends only
/// on the accumulator size, never on the thread count.
int accumulator_block_count(std::size_t bytes_per_accumulator);

}  // namespace symtest

#endif  // SYMTEST_PARALLEL_HPP
