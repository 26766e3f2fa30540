#include "tracelab/rng.hpp"

#include <cmath>

namespace tracelab {

BernoulliThreshold::BernoulliThreshold(double prob) noexcept {
  if (prob >= 1.0) {
    always_ = true;
  } else if (prob > 0.0) {
    threshold_ = static_cast<std::uint64_t>(std::ldexp(prob, 64));
  }
}

}  // namespace tracelab
