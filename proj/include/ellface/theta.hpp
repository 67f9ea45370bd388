#pragma once

#include <utility>
#include <vector>

#include "ellface/types.hpp"

namespace ellface {

// Read-only view of the precomputed product factors, shared with the batch
// kernels.  theta(u) = prefactor * sin(pi u) * prod_{m=1}^{M} (one_plus_p2m[m]
// - two_pm[m] * cos 2 pi u).
struct ThetaKernelData {
  cplx prefactor;
  const cplx* one_plus_p2m;  // 1 + p^{2m}, index 1..M
  const cplx* two_pm;        // 2 p^m, index 1..M
  int truncation_M;
};

// Immutable evaluation engine for one parameter set.  All members are
// precomputed at construction; every method is const and thread-safe.
class Model {
 public:
  explicit Model(ModelParams params);

  const ModelParams& params() const { return params_; }
  int rank() const { return params_.rank_n; }
  cplx tau() const { return params_.tau; }
  cplx hbar() const { return params_.hbar; }
  cplx crossing_c() const { return c_; }
  cplx nome_p() const { return p_; }

  // [u] = i p^{1/8} sin(pi u) prod_{m>=1} (1 - 2 p^m cos 2 pi u + p^{2m})(1 - p^m),
  // truncated at m = M.  The branch of p^{1/8} is e^{2 pi i tau / 8}.
  cplx theta(cplx u) const;

  // Same value, but throws PoleError when |[u]| < pole_tolerance(u); used
  // where [u] is about to appear in a denominator.
  cplx theta_checked(cplx u) const;

  // phi(u) = d/du log [u]
  //        = pi cot(pi u) + sum_m 4 pi p^m sin 2 pi u / (1 - 2 p^m cos 2 pi u + p^{2m}),
  // the termwise analytic derivative of the product.  Throws PoleError on the
  // zero lattice of [u].
  cplx phi(cplx u) const;

  // d[u]/du at u = 0, analytically: i p^{1/8} pi prod (1 - p^m)^3.
  cplx theta0prime() const { return theta0prime_; }

  double pole_tolerance(cplx u) const { return 1e-13 * (1.0 + std::abs(u)); }

  // Returns ([u+m] - (-1)^m [u],
  //          [u+m tau] - (-1)^m e^{-pi i m^2 tau - 2 pi i m u} [u]).
  std::pair<cplx, cplx> quasi_periodicity_defect(cplx u, int m) const;

  // [u+x][u-x][v+y][v-y] - [u+y][u-y][v+x][v-x] - [x+y][x-y][u+v][u-v].
  cplx three_term_defect(cplx u, cplx v, cplx x, cplx y) const;

  ThetaKernelData kernel_data() const;

 private:
  ModelParams params_;
  cplx c_;
  cplx p_;
  cplx prefactor_;    // i p^{1/8} prod (1 - p^m)
  cplx theta0prime_;
  std::vector<cplx> one_plus_p2m_;
  std::vector<cplx> two_pm_;
};

}  // namespace ellface
