// AVX2 kernel for batched theta evaluation.  Two interleaved complex doubles
// per 256-bit register; the transcendental prologue (complex sin/cos) stays
// scalar, the M-term product loop is vectorized across the point pair.

#include <immintrin.h>

#include <cmath>

#include "ellface/theta_batch.hpp"

namespace ellface::detail {

namespace {

// a * b for two packed complex doubles [re0, im0, re1, im1].
inline __m256d cmul(__m256d a, __m256d b) {
  const __m256d b_re = _mm256_movedup_pd(b);
  const __m256d b_im = _mm256_permute_pd(b, 0xF);
  const __m256d a_swap = _mm256_permute_pd(a, 0x5);
  return _mm256_addsub_pd(_mm256_mul_pd(a, b_re), _mm256_mul_pd(a_swap, b_im));
}

inline __m256d broadcast_cplx(cplx z) {
  return _mm256_set_pd(z.imag(), z.real(), z.imag(), z.real());
}

}  // namespace

void theta_batch_avx2(const ThetaKernelData& kd, const cplx* u, cplx* out,
                      std::size_t count) {
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const cplx s0 = std::sin(kPi * u[i]);
    const cplx s1 = std::sin(kPi * u[i + 1]);
    const cplx c0 = std::cos(2.0 * kPi * u[i]);
    const cplx c1 = std::cos(2.0 * kPi * u[i + 1]);

    const __m256d co =
        _mm256_set_pd(c1.imag(), c1.real(), c0.imag(), c0.real());
    __m256d prod = _mm256_set_pd(0.0, 1.0, 0.0, 1.0);
    for (int m = 1; m <= kd.truncation_M; ++m) {
      const __m256d term =
          _mm256_sub_pd(broadcast_cplx(kd.one_plus_p2m[m]),
                        cmul(broadcast_cplx(kd.two_pm[m]), co));
      prod = cmul(prod, term);
    }

    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, prod);
    out[i] = kd.prefactor * s0 * cplx(lanes[0], lanes[1]);
    out[i + 1] = kd.prefactor * s1 * cplx(lanes[2], lanes[3]);
  }
  if (i < count) {
    theta_batch_scalar(kd, u + i, out + i, count - i);
  }
}

}  // namespace ellface::detail
