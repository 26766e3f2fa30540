#pragma once

// Data-parallel building blocks. Every kernel has a serial path that is the
// reference implementation; the OpenMP path must return identical results
// regardless of the thread count, which the tests and the benchmark compare.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <omp.h>

#include "tracelab/rng.hpp"

namespace tracelab::kernels {

enum class Exec { Serial, Parallel };

void set_thread_count(int threads);
int thread_count();

/// values[i] = f(i) for 0 <= i < count.
template <class Fn>
std::vector<double> tabulate(std::size_t count, Fn&& f, Exec exec) {
  std::vector<double> values(count);
  if (exec == Exec::Serial) {
    for (std::size_t i = 0; i < count; ++i) values[i] = f(i);
    return values;
  }
  const auto n = static_cast<std::int64_t>(count);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
  return values;
}

/// Position of the largest entry, first one on ties. NaN entries never win.
std::size_t argmax(std::span<const double> values) noexcept;

/// Monte-Carlo counter accumulation. Trial t runs
/// fn(derive_seed(seed, t), acc) and adds integer counts into `acc` (length
/// `width`). Integer sums make the result independent of the schedule.
template <class Fn>
std::vector<std::uint64_t> accumulate_trials(std::uint64_t trials, std::uint64_t seed,
                                             std::size_t width, Fn&& fn, Exec exec) {
  std::vector<std::uint64_t> total(width, 0);
  if (exec == Exec::Serial) {
    for (std::uint64_t t = 0; t < trials; ++t) fn(derive_seed(seed, t), std::span<std::uint64_t>(total));
    return total;
  }
  const auto n = static_cast<std::int64_t>(trials);
#pragma omp parallel
  {
    std::vector<std::uint64_t> local(width, 0);
#pragma omp for schedule(static)
    for (std::int64_t t = 0; t < n; ++t)
      fn(derive_seed(seed, static_cast<std::uint64_t>(t)), std::span<std::uint64_t>(local));
#pragma omp critical(tracelab_accumulate)
    for (std::size_t i = 0; i < width; ++i) total[i] += local[i];
  }
  return total;
}

}  // namespace tracelab::kernels
