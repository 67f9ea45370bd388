#pragma once

#include <span>
#include <string>

#include "ellface/theta.hpp"

namespace ellface {

// Kernel selection for batched theta evaluation.  Auto consults the
// ELLIPTIC_FACE_SIMD environment variable (auto|scalar|avx2) and falls back
// to CPU detection; requesting Avx2 on an unsupported host silently degrades
// to scalar so results stay available everywhere.
enum class SimdMode { Auto, Scalar, Avx2 };

const char* simd_mode_name(SimdMode mode);

// The mode a theta_batch call with `requested` would actually execute.
SimdMode resolve_simd_mode(SimdMode requested);

bool avx2_kernel_available();

// Evaluates [u_k] for every element; out.size() must equal u.size().
void theta_batch(const Model& model, std::span<const cplx> u,
                 std::span<cplx> out, SimdMode mode = SimdMode::Auto);

namespace detail {
void theta_batch_scalar(const ThetaKernelData& kd, const cplx* u, cplx* out,
                        std::size_t count);
#if defined(ELLFACE_HAVE_AVX2_KERNEL)
void theta_batch_avx2(const ThetaKernelData& kd, const cplx* u, cplx* out,
                      std::size_t count);
#endif
}  // namespace detail

}  // namespace ellface
