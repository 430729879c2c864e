#include "plab/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace plab {

namespace {
std::atomic<std::size_t> g_override{0};
}

std::size_t worker_count() {
  if (auto o = g_override.load(); o > 0) return o;
  if (const char* env = std::getenv("PROGRESSION_LAB_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
      // fall through to the hardware default
    }
  }
  return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void set_worker_count(std::size_t n) { g_override.store(n); }

std::vector<Chunk> partition_range(std::uint64_t lo, std::uint64_t hi, std::uint64_t chunk_size) {
  std::vector<Chunk> out;
  if (hi <= lo) return out;
  chunk_size = std::max<std::uint64_t>(1, chunk_size);
  for (std::uint64_t a = lo; a < hi;) {
    const std::uint64_t b = (hi - a > chunk_size) ? a + chunk_size : hi;
    out.push_back({a, b});
    a = b;
  }
  return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& work) {
  const std::size_t workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          work(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace plab
