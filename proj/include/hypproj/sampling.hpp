#pragma once

// Seeding scheme, random points in the ball, and the plane-sweep thread pool.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "hypproj/hypgeo.hpp"

namespace hypproj {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// Per-task seed: splitmix64(master ^ splitmix64(index)). Depends only on the
/// master seed and the index, never on scheduling.
inline std::uint64_t task_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index));
}

/// Uniform in the Euclidean ball of radius max_radius in R^n (any n >= 1).
template <typename Scalar = double, typename Rng>
VectorX<Scalar> random_ball_coords(int n, Scalar max_radius, Rng& rng) {
  using std::pow;
  std::normal_distribution<Scalar> normal(0, 1);
  std::uniform_real_distribution<Scalar> unit(0, 1);
  VectorX<Scalar> v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
  } while (v.norm() == Scalar(0));
  const Scalar r = max_radius * pow(unit(rng), Scalar(1) / Scalar(n));
  return (r / v.norm()) * v;
}

template <typename Scalar = double, typename Rng>
Point<Scalar> random_ball_point(int n, Scalar max_radius, Rng& rng) {
  return Point<Scalar>(random_ball_coords<Scalar>(n, max_radius, rng));
}

/// Thread count from HYPPROJ_THREADS, else the hardware concurrency.
inline int thread_count_from_env() {
  if (const char* env = std::getenv("HYPPROJ_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any task is rethrown after all workers join.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  threads = std::clamp(threads, 1, std::max(count, 1));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace hypproj
