#pragma once

#include <string>
#include <vector>

#include "ellface/rng.hpp"
#include "ellface/weights.hpp"

namespace ellface {

// Similarity transform onto the symmetric ("square-root") gauge.  The factor
//
//   s(lam, mu) = prod_{p before q} [lam_{p-q}]^{-1/2} [mu_{p-q}]^{-1/2},
//
// with mu = lam + 2 hbar q and "before" taken in the path order of P1, turns
// the asymmetric exchange and return weights into their symmetric variants.
// Square roots are principal; *branch_warning is set when any argument lies
// within 0.05 radians of the negative real axis, i.e. when the principal
// branch is about to flip and the overall sign is unreliable.
cplx gauge_s(const Model& model, const WeightVector& lam,
             const WeightVector& mu, bool* branch_warning = nullptr);

// Transformed weight on a degree-(1,1) square:
//
//   W'(lam,mu;kap,nu|u) = W * s(lam,kap) s(kap,nu) / (s(lam,mu) s(mu,nu)).
//
// Returns 0 on non-admissible squares.  When mu == kap the four factors
// cancel pairwise and the weight is returned untouched, so every pattern
// except exchange and return-pair is exactly invariant.
cplx jmo_weight_from_gauge(const Model& model, const FaceSquare& sq,
                           bool* branch_warning = nullptr);

// Transformed weight next to its symmetric closed form.  sigma is their
// ratio: a locally constant sign, +-1 up to roundoff, which may differ
// between configurations and flips only across a branch cut of the square
// roots.
struct JmoComparison {
  cplx transformed{};
  cplx reference{};
  cplx sigma{};
  bool branch_warning = false;
};

// Exchange square (top = bottom = q, left = right = p, p != +-q) against
//   [c-u][u] / ([c][h]) * ([x+h][x-h] / [x]^2)^{1/2},   x = lam_{p-q}.
JmoComparison jmo_exchange_comparison(const Model& model,
                                      const WeightVector& lam, const Step& q,
                                      const Step& p, cplx u);

// Return square (top = q, left = p, right = -q, bottom = -p, p != q) against
//   [u][x+h+c-u] / ([c][x+h]) * (G_{lam p} G_{lam q})^{1/2},   x = lam_{p+q}.
JmoComparison jmo_return_comparison(const Model& model,
                                    const WeightVector& lam, const Step& q,
                                    const Step& p, cplx u);

struct SignTableEntry {
  std::string pattern;  // "exchange" or "return"
  Step q, p;
  cplx sigma;
  double sigma_sq_defect = 0.0;  // |sigma^2 - 1|
  double modulus_defect = 0.0;   // ||transformed| - |reference|| / (1 + |reference|)
  bool branch_warning = false;
};

// Evaluates sigma for every admissible (q, p) of both patterns at `sweep`
// random (lam, u) draws; draws that land on a pole of some factor are
// skipped and redrawn.
std::vector<SignTableEntry> jmo_sign_table(const Model& model, Rng& rng,
                                           int sweep);

}  // namespace ellface
