#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

namespace vage {

// Deterministic random stream for one simulation. Wraps mt19937_64 but keeps
// the variate transforms explicit so a seed reproduces the same draws under
// any standard library, not just within one build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform in [0, 1). 53-bit resolution, never returns 1.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform in [0, hi).
  double uniform(double hi) { return uniform() * hi; }

  // Uniform integer in [0, n). Multiply-high on the raw 64-bit word, no
  // floating point involved.
  std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(gen_()) * n) >> 64);
  }

  // Exponential with the given rate (mean 1/rate).
  double exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be positive");
    return -std::log1p(-uniform()) / rate;
  }

  // Poisson count with the given mean. Product-of-uniforms counting, split
  // into chunks so exp(-mean) never underflows.
  std::int64_t poisson(double mean) {
    if (mean < 0.0) throw std::invalid_argument("poisson: mean must be nonnegative");
    std::int64_t total = 0;
    while (mean > 256.0) {
      total += poisson_small(256.0);
      mean -= 256.0;
    }
    return total + poisson_small(mean);
  }

 private:
  std::int64_t poisson_small(double mean) {
    const double limit = std::exp(-mean);
    std::int64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  std::mt19937_64 gen_;
};

}  // namespace vage
