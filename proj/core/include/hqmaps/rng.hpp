#pragma once

// Seeded random sampling with portable value derivation: all conversions from
// raw 64-bit draws to doubles are spelled out here instead of relying on
// std::uniform_real_distribution, whose output is implementation-defined.
// This makes every sampled report reproducible bit-for-bit for a fixed seed.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace hq {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1) with 53 random mantissa bits.
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  std::complex<double> unit_complex() {
    double th = uniform(0.0, 2.0 * std::numbers::pi);
    return {std::cos(th), std::sin(th)};
  }

  // Uniform on the closed disk of the given radius.
  std::complex<double> disk(double radius) {
    return radius * std::sqrt(uniform()) * unit_complex();
  }

  double gauss() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 1e-300) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double th = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(th);
    have_spare_ = true;
    return r * std::cos(th);
  }

  std::complex<double> gauss_complex() { return {gauss(), gauss()}; }

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hq
