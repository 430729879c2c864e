#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace plab {

/// Worker count: PROGRESSION_LAB_THREADS if set and positive, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_count();

/// Overrides worker_count() for the current process (0 restores the default).
void set_worker_count(std::size_t n);

struct Chunk {
  std::uint64_t lo;  // inclusive
  std::uint64_t hi;  // exclusive
};

/// Splits [lo, hi) into chunks of at most `chunk_size` integers. The plan
/// depends only on the range and chunk size, never on the worker count.
std::vector<Chunk> partition_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t chunk_size);

/// Runs `work(i)` for i in [0, count) over worker_count() threads.
/// Exceptions thrown by workers are rethrown (first one wins).
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& work);

/// Maps every chunk of the fixed partition plan to a partial result, then
/// folds the partials in chunk order. Output is independent of the number of
/// workers.
template <typename Partial, typename Map, typename Reduce>
Partial parallel_map_reduce(std::uint64_t lo, std::uint64_t hi, std::uint64_t chunk_size,
                            Partial init, Map map, Reduce reduce) {
  const auto chunks = partition_range(lo, hi, chunk_size);
  std::vector<Partial> partials(chunks.size(), init);
  parallel_for(chunks.size(), [&](std::size_t i) { partials[i] = map(chunks[i]); });
  Partial acc = std::move(init);
  for (auto& p : partials) acc = reduce(std::move(acc), std::move(p));
  return acc;
}

}  // namespace plab
