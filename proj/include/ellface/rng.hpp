#pragma once

#include <cstdint>
#include <random>

#include "ellface/types.hpp"

namespace ellface {

// Deterministic pseudo-random source.  mt19937_64 plus an explicit
// uint64 -> double mapping; std::uniform_real_distribution is
// implementation-defined and would break byte-identical reports.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  cplx box(double re_lo, double re_hi, double im_lo, double im_hi) {
    const double re = uniform(re_lo, re_hi);
    const double im = uniform(im_lo, im_hi);
    return {re, im};
  }

  // Generic complex draw used throughout the sweeps: moderate size, bounded
  // imaginary part so lattice-sum and product truncations stay converged.
  cplx generic() { return box(-0.45, 0.45, -0.3, 0.3); }

  std::uint64_t index(std::uint64_t bound) { return engine_() % bound; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ellface
