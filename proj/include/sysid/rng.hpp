#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace sysid {

// Seeded Gaussian source built on mt19937_64 with an explicit Box-Muller
// transform.  std::normal_distribution is implementation-defined, so the
// transform is done by hand to keep streams reproducible across toolchains.
class GaussianRng {
 public:
  explicit GaussianRng(std::uint64_t seed) : eng_(seed) {}

  // Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1;
    do {
      u1 = uniform01();
    } while (u1 <= 0.0);
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  std::uint64_t raw() { return eng_(); }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Fixed splitting rule for per-replicate sub-seeds: replicate j (1-based)
// draws from seed ^ (j * 0x9E3779B97F4A7C15).
inline std::uint64_t replicate_seed(std::uint64_t master, std::uint64_t j) {
  return master ^ (j * 0x9E3779B97F4A7C15ULL);
}

}  // namespace sysid
