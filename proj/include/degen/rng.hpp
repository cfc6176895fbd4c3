#pragma once
#include <cmath>
#include <cstdint>
#include <random>

namespace degen {

// Portable uniform draws: the standard distributions are implementation
// defined, so doubles are built from the top 53 bits directly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }
  std::uint64_t bits() { return eng_(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)) % n; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace degen
