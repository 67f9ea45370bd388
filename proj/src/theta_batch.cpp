#include "ellface/theta_batch.hpp"

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ellface {

namespace detail {

void theta_batch_scalar(const ThetaKernelData& kd, const cplx* u, cplx* out,
                        std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    const cplx co = std::cos(2.0 * kPi * u[i]);
    cplx prod = kd.prefactor * std::sin(kPi * u[i]);
    for (int m = 1; m <= kd.truncation_M; ++m) {
      prod *= kd.one_plus_p2m[m] - kd.two_pm[m] * co;
    }
    out[i] = prod;
  }
}

}  // namespace detail

const char* simd_mode_name(SimdMode mode) {
  switch (mode) {
    case SimdMode::Auto:
      return "auto";
    case SimdMode::Scalar:
      return "scalar";
    case SimdMode::Avx2:
      return "avx2";
  }
  return "unknown";
}

bool avx2_kernel_available() {
#if defined(ELLFACE_HAVE_AVX2_KERNEL)
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

namespace {

SimdMode mode_from_env() {
  const char* env = std::getenv("ELLIPTIC_FACE_SIMD");
  if (env == nullptr) return SimdMode::Auto;
  const std::string value(env);
  if (value == "scalar") return SimdMode::Scalar;
  if (value == "avx2") return SimdMode::Avx2;
  if (value == "auto" || value.empty()) return SimdMode::Auto;
  throw ConfigError("ELLIPTIC_FACE_SIMD must be auto, scalar, or avx2");
}

}  // namespace

SimdMode resolve_simd_mode(SimdMode requested) {
  SimdMode mode = requested;
  if (mode == SimdMode::Auto) mode = mode_from_env();
  if (mode == SimdMode::Auto) {
    mode = avx2_kernel_available() ? SimdMode::Avx2 : SimdMode::Scalar;
  }
  if (mode == SimdMode::Avx2 && !avx2_kernel_available()) {
    mode = SimdMode::Scalar;
  }
  return mode;
}

void theta_batch(const Model& model, std::span<const cplx> u,
                 std::span<cplx> out, SimdMode mode) {
  if (u.size() != out.size()) {
    throw std::invalid_argument("theta_batch: size mismatch");
  }
  const ThetaKernelData kd = model.kernel_data();
  switch (resolve_simd_mode(mode)) {
    case SimdMode::Scalar:
      detail::theta_batch_scalar(kd, u.data(), out.data(), u.size());
      return;
#if defined(ELLFACE_HAVE_AVX2_KERNEL)
    case SimdMode::Avx2:
      detail::theta_batch_avx2(kd, u.data(), out.data(), u.size());
      return;
#endif
    default:
      detail::theta_batch_scalar(kd, u.data(), out.data(), u.size());
      return;
  }
}

}  // namespace ellface
