#include "tracelab/kernels.hpp"

#include <cmath>

namespace tracelab::kernels {

void set_thread_count(int threads) {
  if (threads > 0) omp_set_num_threads(threads);
}

int thread_count() { return omp_get_max_threads(); }

std::size_t argmax(std::span<const double> values) noexcept {
  std::size_t best = 0;
  bool found = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::isnan(values[i])) continue;
    if (!found || values[i] > values[best]) {
      best = i;
      found = true;
    }
  }
  return best;
}

}  // namespace tracelab::kernels
