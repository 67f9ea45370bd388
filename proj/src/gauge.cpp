#include "ellface/gauge.hpp"

#include <cmath>
#include <complex>

#include "ellface/types.hpp"

namespace ellface {

namespace {

// Principal square root with a cut-proximity flag.
cplx checked_sqrt(cplx z, bool* branch_warning) {
  if (branch_warning != nullptr && std::abs(std::arg(z)) > kPi - 0.05) {
    *branch_warning = true;
  }
  return std::sqrt(z);
}

}  // namespace

cplx gauge_s(const Model& model, const WeightVector& lam,
             const WeightVector& mu, bool* branch_warning) {
  const std::optional<Step> q = step_between(lam, mu, model.hbar());
  if (!q.has_value() || !in_P1(*q)) {
    throw AdmissibilityError("gauge_s: labels do not differ by a unit step");
  }
  cplx acc{1.0, 0.0};
  for (const Step& p : P1(model.rank())) {
    if (p == *q) break;
    const Step diff = p - *q;
    const cplx a = model.theta_checked(pairing(lam, diff));
    const cplx b = model.theta_checked(pairing(mu, diff));
    acc /= checked_sqrt(a, branch_warning) * checked_sqrt(b, branch_warning);
  }
  return acc;
}

cplx jmo_weight_from_gauge(const Model& model, const FaceSquare& sq,
                           bool* branch_warning) {
  if (sq.d != 1 || sq.dp != 1) {
    throw ConfigError("jmo_weight_from_gauge: degree-(1,1) squares only");
  }
  const std::optional<SquareSteps> steps = square_steps(sq, model.hbar());
  if (!steps.has_value() || classify11(*steps) == Pattern11::kNone) {
    return cplx{0.0, 0.0};
  }
  const cplx w = w11(model, sq);
  if (steps->top == steps->left) return w;  // ratio cancels pairwise
  const cplx num = gauge_s(model, sq.lam, sq.kap, branch_warning) *
                   gauge_s(model, sq.kap, sq.nu, branch_warning);
  const cplx den = gauge_s(model, sq.lam, sq.mu, branch_warning) *
                   gauge_s(model, sq.mu, sq.nu, branch_warning);
  return w * num / den;
}

JmoComparison jmo_exchange_comparison(const Model& model,
                                      const WeightVector& lam, const Step& q,
                                      const Step& p, cplx u) {
  if (!in_P1(q) || !in_P1(p) || p == q || p == -q) {
    throw ConfigError("jmo_exchange_comparison: need p != +-q in P1");
  }
  const cplx h = model.hbar();
  const cplx c = model.crossing_c();
  const FaceSquare sq = square_from_steps(lam, q, p, p, u, h);
  JmoComparison out;
  out.transformed = jmo_weight_from_gauge(model, sq, &out.branch_warning);
  const cplx x = pairing(lam, p - q);
  const cplx ratio = model.theta_checked(x + h) * model.theta_checked(x - h) /
                     (model.theta_checked(x) * model.theta_checked(x));
  out.reference = model.theta(c - u) * model.theta(u) /
                  (model.theta(c) * model.theta(h)) *
                  checked_sqrt(ratio, &out.branch_warning);
  out.sigma = out.transformed / out.reference;
  return out;
}

JmoComparison jmo_return_comparison(const Model& model,
                                    const WeightVector& lam, const Step& q,
                                    const Step& p, cplx u) {
  if (!in_P1(q) || !in_P1(p) || p == q) {
    throw ConfigError("jmo_return_comparison: need p != q in P1");
  }
  const cplx h = model.hbar();
  const cplx c = model.crossing_c();
  const FaceSquare sq = square_from_steps(lam, q, p, -q, u, h);
  JmoComparison out;
  out.transformed = jmo_weight_from_gauge(model, sq, &out.branch_warning);
  const cplx x = pairing(lam, p + q);
  out.reference =
      model.theta(u) * model.theta_checked(x + h + c - u) /
      (model.theta(c) * model.theta_checked(x + h)) *
      checked_sqrt(g_factor(model, lam, p) * g_factor(model, lam, q),
                   &out.branch_warning);
  out.sigma = out.transformed / out.reference;
  return out;
}

std::vector<SignTableEntry> jmo_sign_table(const Model& model, Rng& rng,
                                           int sweep) {
  std::vector<SignTableEntry> table;
  const std::vector<Step>& steps = P1(model.rank());
  for (int draw = 0; draw < sweep; ++draw) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 64) {
        throw ConfigError("jmo_sign_table: could not draw off the poles");
      }
      WeightVector lam(model.rank());
      for (int j = 0; j < model.rank(); ++j) {
        lam.set_coord(j, rng.box(0.1, 0.6, -0.15, 0.15) + cplx{0.0, 0.12});
      }
      const cplx u = rng.box(0.05, 0.45, -0.1, 0.1);
      std::vector<SignTableEntry> batch;
      try {
        for (const Step& q : steps) {
          for (const Step& p : steps) {
            if (p == q) continue;
            if (p != -q) {
              const JmoComparison ex = jmo_exchange_comparison(model, lam, q, p, u);
              batch.push_back({"exchange", q, p, ex.sigma,
                               std::abs(ex.sigma * ex.sigma - cplx{1.0, 0.0}),
                               std::abs(std::abs(ex.transformed) -
                                        std::abs(ex.reference)) /
                                   (1.0 + std::abs(ex.reference)),
                               ex.branch_warning});
            }
            const JmoComparison rp = jmo_return_comparison(model, lam, q, p, u);
            batch.push_back({"return", q, p, rp.sigma,
                             std::abs(rp.sigma * rp.sigma - cplx{1.0, 0.0}),
                             std::abs(std::abs(rp.transformed) -
                                      std::abs(rp.reference)) /
                                 (1.0 + std::abs(rp.reference)),
                             rp.branch_warning});
          }
        }
      } catch (const PoleError&) {
        continue;  // redraw lam, u
      }
      table.insert(table.end(), batch.begin(), batch.end());
      break;
    }
  }
  return table;
}

}  // namespace ellface
