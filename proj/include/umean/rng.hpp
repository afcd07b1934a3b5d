#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "umean/normal.hpp"

namespace umean {

/// splitmix64 finalizer; used both for seeding and for deriving independent
/// per-replication seeds from a master seed.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for replication `index` under `master`. Injective in index for fixed
/// master (mix64 is a bijection of the xor-ed counter), so replications can be
/// computed in any order, or in parallel, with identical results.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return mix64(master ^ mix64(index + 1));
}

/// Random stream with explicitly-coded variate constructions on top of
/// mt19937_64, so output depends only on the seed (the std:: distribution
/// adapters are implementation-defined and would not be portable).
class Rng {
public:
  explicit Rng(std::uint64_t seed) : gen_(mix64(seed)) {}

  /// Uniform on (0,1): 53-bit mantissa, zero excluded.
  double uniform01() {
    double v = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    return v > 0.0 ? v : 0x1.0p-53;
  }

  double normal() { return normal_quantile(uniform01()); }

  double exponential() { return -std::log(uniform01()); }

  /// Marsaglia-Tsang for shape >= 1, boosted for shape < 1.
  double gamma(double shape) {
    if (shape < 1.0) {
      double u = uniform01();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = normal();
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      double u = uniform01();
      if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
    }
  }

  double chi_squared(double dof) { return 2.0 * gamma(dof / 2.0); }

  double student_t(double dof) { return normal() / std::sqrt(chi_squared(dof) / dof); }

private:
  std::mt19937_64 gen_;
};

}  // namespace umean
