#include <doctest.h>

#include <cmath>
#include <vector>

#include "ellface/rng.hpp"
#include "ellface/theta.hpp"
#include "ellface/theta_batch.hpp"

using namespace ellface;

namespace {

double rel_diff(cplx a, cplx b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

// Independent cross-check: the sine series
//   [u] = i e^{i pi tau / 4} sum_{n>=0} (-1)^n e^{i pi tau n(n+1)} sin((2n+1) pi u),
// a different representation from the product form used by Model::theta.
cplx theta_series(cplx tau, cplx u) {
  const cplx iptau = kI * kPi * tau;
  cplx acc = 0.0;
  for (int n = 0;; ++n) {
    const cplx decay = std::exp(iptau * static_cast<double>(n * (n + 1)));
    if (std::abs(decay) < 1e-30 && n > 0) break;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    acc += sign * decay * std::sin(static_cast<double>(2 * n + 1) * kPi * u);
  }
  return kI * std::exp(iptau / 4.0) * acc;
}

cplx theta_series_deriv(cplx tau, cplx u) {
  const cplx iptau = kI * kPi * tau;
  cplx acc = 0.0;
  for (int n = 0;; ++n) {
    const cplx decay = std::exp(iptau * static_cast<double>(n * (n + 1)));
    if (std::abs(decay) < 1e-30 && n > 0) break;
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    const double k = static_cast<double>(2 * n + 1);
    acc += sign * decay * k * kPi * std::cos(k * kPi * u);
  }
  return kI * std::exp(iptau / 4.0) * acc;
}

Model default_model() { return Model(ModelParams{}); }

}  // namespace

TEST_CASE("theta matches frozen high-precision values at tau = i") {
  const Model model = default_model();
  CHECK(rel_diff(model.theta(cplx(0.3, 0.0)),
                 cplx(0.0, 0.36859858185934080)) < 1e-14);
  CHECK(rel_diff(model.theta(cplx(0.17, -0.04)),
                 cplx(0.049456325199034182, 0.23301411243447181)) < 1e-14);
  CHECK(rel_diff(model.theta(cplx(0.62, 0.35)),
                 cplx(0.23446995939393823, 0.71198334896158735)) < 1e-14);
  CHECK(rel_diff(model.phi(cplx(0.3, 0.0)),
                 cplx(2.3048350399934621, 0.0)) < 1e-14);
  CHECK(rel_diff(model.phi(cplx(0.17, -0.04)),
                 cplx(5.0267902274742292, 1.4478869163838912)) < 1e-14);
  CHECK(rel_diff(model.theta0prime(),
                 cplx(0.0, 1.4243473019938937)) < 1e-14);
}

TEST_CASE("theta matches frozen values at a generic modulus") {
  ModelParams params;
  params.tau = cplx(0.3, 1.1);
  const Model model{params};
  CHECK(rel_diff(model.theta(cplx(0.3, 0.0)),
                 cplx(-0.079494185613662885, 0.33164576654370144)) < 1e-14);
  CHECK(rel_diff(model.theta(cplx(0.17, -0.04)),
                 cplx(-0.0056550881111369881, 0.22119202338048111)) < 1e-14);
}

TEST_CASE("product form agrees with the sine-series form on a random grid") {
  for (const cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.1), cplx(-0.2, 0.7)}) {
    ModelParams params;
    params.tau = tau;
    const Model model{params};
    Rng rng(2024);
    for (int k = 0; k < 200; ++k) {
      const cplx u = rng.box(-1.2, 1.2, -0.5, 0.5);
      CHECK(rel_diff(model.theta(u), theta_series(tau, u)) < 1e-13);
    }
  }
}

TEST_CASE("theta is odd and vanishes on the period lattice") {
  const Model model = default_model();
  Rng rng(7);
  for (int k = 0; k < 100; ++k) {
    const cplx u = rng.generic();
    CHECK(rel_diff(model.theta(-u), -model.theta(u)) < 1e-14);
  }
  const cplx tau = model.tau();
  for (const cplx zero :
       {cplx(0.0), cplx(1.0), cplx(-2.0), tau, -tau, 1.0 + tau}) {
    CHECK(std::abs(model.theta(zero)) < model.pole_tolerance(zero));
  }
}

TEST_CASE("quasi-periodicity in both lattice directions") {
  const Model model = default_model();
  Rng rng(11);
  for (int k = 0; k < 100; ++k) {
    const cplx u = rng.generic();
    for (int m = -2; m <= 2; ++m) {
      const auto [real_shift, tau_shift] =
          model.quasi_periodicity_defect(u, m);
      // Scale-free comparison: the m tau shift factor reaches ~1e7 at m = 2,
      // so raw differences are normalized by the larger side.
      const double md = static_cast<double>(m);
      const double scale_real =
          1.0 + std::max(std::abs(model.theta(u + md)),
                         std::abs(model.theta(u)));
      const cplx factor = std::exp(-kPi * kI * md * md * model.tau() -
                                   2.0 * kPi * kI * md * u);
      const double scale_tau =
          1.0 + std::max(std::abs(model.theta(u + md * model.tau())),
                         std::abs(factor * model.theta(u)));
      CHECK(std::abs(real_shift) / scale_real < 1e-13);
      CHECK(std::abs(tau_shift) / scale_tau < 1e-12);
    }
  }
}

TEST_CASE("the quartic three-term identity holds") {
  const Model model = default_model();
  Rng rng(13);
  for (int k = 0; k < 300; ++k) {
    const cplx u = rng.generic();
    const cplx v = rng.generic();
    const cplx x = rng.generic();
    const cplx y = rng.generic();
    CHECK(std::abs(model.three_term_defect(u, v, x, y)) < 1e-13);
  }
}

TEST_CASE("phi is the logarithmic derivative of theta") {
  for (const cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.1)}) {
    ModelParams params;
    params.tau = tau;
    const Model model{params};
    Rng rng(17);
    for (int k = 0; k < 100; ++k) {
      const cplx u = rng.generic();
      if (std::abs(model.theta(u)) < 1e-3) continue;
      const cplx expected = theta_series_deriv(tau, u) / theta_series(tau, u);
      CHECK(rel_diff(model.phi(u), expected) < 1e-12);
    }
  }
}

TEST_CASE("second central difference of phi reproduces the quartic ratio") {
  const Model model = default_model();
  const cplx h = model.hbar();
  Rng rng(19);
  for (int k = 0; k < 100; ++k) {
    const cplx u = rng.generic();
    if (std::abs(model.theta(u)) < 1e-3 ||
        std::abs(model.theta(u - h)) < 1e-3 ||
        std::abs(model.theta(u + h)) < 1e-3)
      continue;
    const cplx lhs = model.phi(u + h) + model.phi(u - h) - 2.0 * model.phi(u);
    const cplx rhs = model.theta(h) * model.theta(h) * model.theta(2.0 * u) *
                     model.theta0prime() /
                     (model.theta(u) * model.theta(u) * model.theta(u - h) *
                      model.theta(u + h));
    CHECK(rel_diff(lhs, rhs) < 1e-11);
  }
}

TEST_CASE("theta0prime matches the series derivative at zero") {
  for (const cplx tau : {cplx(0.0, 1.0), cplx(0.3, 1.1)}) {
    ModelParams params;
    params.tau = tau;
    const Model model{params};
    CHECK(rel_diff(model.theta0prime(), theta_series_deriv(tau, 0.0)) < 1e-13);
  }
}

TEST_CASE("pole guards throw on the zero lattice") {
  const Model model = default_model();
  CHECK_THROWS_AS(model.theta_checked(cplx(0.0)), PoleError);
  CHECK_THROWS_AS(model.theta_checked(cplx(1.0)), PoleError);
  CHECK_THROWS_AS(model.theta_checked(model.tau()), PoleError);
  CHECK_THROWS_AS(model.phi(cplx(0.0)), PoleError);
  CHECK_NOTHROW(model.theta_checked(cplx(0.3, 0.0)));
}

TEST_CASE("truncation order 24 is converged") {
  ModelParams coarse;
  ModelParams fine;
  fine.truncation_M = 48;
  const Model model_coarse{coarse};
  const Model model_fine{fine};
  Rng rng(23);
  for (int k = 0; k < 50; ++k) {
    const cplx u = rng.generic();
    CHECK(rel_diff(model_coarse.theta(u), model_fine.theta(u)) < 1e-14);
    if (std::abs(model_coarse.theta(u)) > 1e-3) {
      CHECK(rel_diff(model_coarse.phi(u), model_fine.phi(u)) < 1e-13);
    }
  }
}

TEST_CASE("parameter validation rejects bad inputs") {
  ModelParams params;
  params.tau = cplx(0.5, -1.0);
  CHECK_THROWS_AS(Model{params}, ConfigError);
  params = ModelParams{};
  params.hbar = 0.0;
  CHECK_THROWS_AS(Model{params}, ConfigError);
  params = ModelParams{};
  params.rank_n = 1;
  CHECK_THROWS_AS(Model{params}, ConfigError);
  params = ModelParams{};
  params.truncation_M = 0;
  CHECK_THROWS_AS(Model{params}, ConfigError);
}

TEST_CASE("batched evaluation agrees with pointwise evaluation") {
  const Model model = default_model();
  Rng rng(29);
  std::vector<cplx> u(257);
  for (auto& z : u) z = rng.box(-1.0, 1.0, -0.4, 0.4);
  std::vector<cplx> out_scalar(u.size());
  theta_batch(model, u, out_scalar, SimdMode::Scalar);
  for (std::size_t i = 0; i < u.size(); ++i) {
    CHECK(rel_diff(out_scalar[i], model.theta(u[i])) < 1e-14);
  }

  CHECK(resolve_simd_mode(SimdMode::Scalar) == SimdMode::Scalar);
  if (avx2_kernel_available()) {
    std::vector<cplx> out_vec(u.size());
    theta_batch(model, u, out_vec, SimdMode::Avx2);
    for (std::size_t i = 0; i < u.size(); ++i) {
      CHECK(rel_diff(out_vec[i], out_scalar[i]) < 1e-13);
    }
  } else {
    CHECK(resolve_simd_mode(SimdMode::Avx2) == SimdMode::Scalar);
  }

  std::vector<cplx> wrong(u.size() - 1);
  CHECK_THROWS_AS(theta_batch(model, u, wrong), std::invalid_argument);
}
