#include "ellface/theta.hpp"

#include <cmath>
#include <sstream>

namespace ellface {

void ModelParams::validate() const {
  if (!(tau.imag() > 0.0)) {
    throw ConfigError("ModelParams: Im(tau) must be positive");
  }
  if (std::abs(nome_p()) >= 1.0) {
    throw ConfigError("ModelParams: |p| must be below 1");
  }
  if (hbar == cplx(0.0, 0.0)) {
    throw ConfigError("ModelParams: hbar must be nonzero");
  }
  if (rank_n < 2) {
    throw ConfigError("ModelParams: rank must be at least 2");
  }
  if (truncation_M < 1) {
    throw ConfigError("ModelParams: truncation must be at least 1");
  }
}

Model::Model(ModelParams params) : params_(params) {
  params_.validate();
  c_ = params_.crossing_c();
  p_ = params_.nome_p();

  const int M = params_.truncation_M;
  one_plus_p2m_.resize(M + 1);
  two_pm_.resize(M + 1);

  cplx pm = 1.0;                      // p^m
  cplx one_minus_prod = 1.0;          // prod (1 - p^m)
  cplx one_minus_sq_prod = 1.0;       // prod (1 - p^m)^2
  for (int m = 1; m <= M; ++m) {
    pm *= p_;
    two_pm_[m] = 2.0 * pm;
    one_plus_p2m_[m] = 1.0 + pm * pm;
    one_minus_prod *= 1.0 - pm;
    one_minus_sq_prod *= (1.0 - pm) * (1.0 - pm);
  }

  const cplx p_eighth = std::exp(2.0 * kPi * kI * params_.tau / 8.0);
  prefactor_ = kI * p_eighth * one_minus_prod;
  theta0prime_ = prefactor_ * kPi * one_minus_sq_prod;
}

cplx Model::theta(cplx u) const {
  const cplx co = std::cos(2.0 * kPi * u);
  cplx prod = prefactor_ * std::sin(kPi * u);
  const int M = params_.truncation_M;
  for (int m = 1; m <= M; ++m) {
    prod *= one_plus_p2m_[m] - two_pm_[m] * co;
  }
  return prod;
}

cplx Model::theta_checked(cplx u) const {
  const cplx value = theta(u);
  if (std::abs(value) < pole_tolerance(u)) {
    std::ostringstream msg;
    msg << "theta argument (" << u.real() << "," << u.imag()
        << ") lies on the zero lattice";
    throw PoleError(msg.str());
  }
  return value;
}

cplx Model::phi(cplx u) const {
  const cplx th = theta(u);
  if (std::abs(th) < pole_tolerance(u)) {
    throw PoleError("phi evaluated on the zero lattice of [u]");
  }
  const cplx s2 = std::sin(2.0 * kPi * u);
  const cplx co = std::cos(2.0 * kPi * u);
  cplx acc = kPi * std::cos(kPi * u) / std::sin(kPi * u);
  const int M = params_.truncation_M;
  for (int m = 1; m <= M; ++m) {
    acc += 2.0 * kPi * two_pm_[m] * s2 / (one_plus_p2m_[m] - two_pm_[m] * co);
  }
  return acc;
}

std::pair<cplx, cplx> Model::quasi_periodicity_defect(cplx u, int m) const {
  const double md = static_cast<double>(m);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  const cplx base = theta(u);
  const cplx real_shift = theta(u + md) - sign * base;
  const cplx factor =
      std::exp(-kPi * kI * md * md * params_.tau - 2.0 * kPi * kI * md * u);
  const cplx tau_shift = theta(u + md * params_.tau) - sign * factor * base;
  return {real_shift, tau_shift};
}

cplx Model::three_term_defect(cplx u, cplx v, cplx x, cplx y) const {
  const cplx a = theta(u + x) * theta(u - x) * theta(v + y) * theta(v - y);
  const cplx b = theta(u + y) * theta(u - y) * theta(v + x) * theta(v - x);
  const cplx c = theta(x + y) * theta(x - y) * theta(u + v) * theta(u - v);
  return a - b - c;
}

ThetaKernelData Model::kernel_data() const {
  return ThetaKernelData{prefactor_, one_plus_p2m_.data(), two_pm_.data(),
                         params_.truncation_M};
}

}  // namespace ellface
