#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

#include "alt/geometry.hpp"

namespace alt {

// splitmix64 finalizer; decorrelates (seed, index) pairs.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index);

// Uniform source of points in a box. Sample i always draws from the stream
// seeded by (seed, i), so results do not depend on evaluation order.
class Sampler {
 public:
  Sampler(BoxDomain region, std::uint64_t seed) : region_(std::move(region)), seed_(seed) {}

  const BoxDomain& region() const { return region_; }
  std::uint64_t seed() const { return seed_; }

  std::mt19937_64 stream(std::uint64_t index) const { return std::mt19937_64(mix_seed(seed_, index)); }
  Point draw(std::mt19937_64& rng) const { return region_.uniform(rng); }

 private:
  BoxDomain region_;
  std::uint64_t seed_;
};

unsigned default_workers();

// Runs body(i) for i in [0, n) on up to `workers` threads. The first exception
// thrown by any worker is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t count = std::min<std::size_t>(workers, n);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += count) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace alt
