#include "ellface/characters.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ellface {

namespace {

// lam + scale * beta, coordinate-wise.
WeightVector translated_by(const WeightVector& lam, const Step& beta,
                           cplx scale) {
  WeightVector out = lam;
  for (int j = 0; j < lam.rank(); ++j) {
    out.set_coord(j, lam.coord(j) +
                         scale * static_cast<double>(beta.coord(j)));
  }
  return out;
}

cplx step_pairing(const WeightVector& lam, const Step& b) {
  cplx acc = 0.0;
  for (int j = 0; j < lam.rank(); ++j) {
    acc += lam.coord(j) * static_cast<double>(b.coord(j));
  }
  return 0.5 * acc;
}

double step_norm(const Step& a, const Step& b) {
  double acc = 0.0;
  for (int j = 0; j < a.rank(); ++j) {
    acc += static_cast<double>(a.coord(j)) * static_cast<double>(b.coord(j));
  }
  return 0.5 * acc;
}

Step step_from_coords(int n, std::initializer_list<int> coords) {
  Step s(n);
  int j = 0;
  for (int c : coords) {
    const int sign = c >= 0 ? 1 : -1;
    for (int k = 0; k < std::abs(c); ++k) s = s + Step::unit(n, j, sign);
    ++j;
  }
  return s;
}

}  // namespace

cplx apply_shift(const Model& model, const ShiftOperator& op,
                 const ScalarField& f, const WeightVector& lam) {
  if (op.kind == ShiftKind::plain_shift) {
    return f(translated_by(lam, op.beta, 1.0));
  }
  const cplx tau = model.params().tau;
  const cplx phase =
      std::exp(2.0 * kPi * kI *
               (step_pairing(lam, op.beta) +
                tau * step_norm(op.beta, op.beta) / 2.0));
  return phase * f(translated_by(lam, op.beta, tau));
}

Lattice coroot_lattice(int n) {
  if (n != 2) throw ConfigError("coroot_lattice: rank 2 only");
  return Lattice{{step_from_coords(n, {2, 0}), step_from_coords(n, {0, 2})}};
}

Lattice coweight_lattice(int n) {
  if (n != 2) throw ConfigError("coweight_lattice: rank 2 only");
  return Lattice{{step_from_coords(n, {2, 0}), step_from_coords(n, {1, 1})}};
}

namespace {

long basis_det(const Lattice& lattice) {
  if (lattice.basis.size() != 2 || lattice.basis[0].rank() != 2) {
    throw ConfigError("lattice operations support rank 2 only");
  }
  const Step& a = lattice.basis[0];
  const Step& b = lattice.basis[1];
  return static_cast<long>(a.coord(0)) * b.coord(1) -
         static_cast<long>(a.coord(1)) * b.coord(0);
}

}  // namespace

bool in_lattice(const Lattice& lattice, const Step& v) {
  const long det = basis_det(lattice);
  if (det == 0) throw ConfigError("in_lattice: degenerate basis");
  const Step& a = lattice.basis[0];
  const Step& b = lattice.basis[1];
  // Cramer: v = x a + y b with x = det(v,b)/det, y = det(a,v)/det.
  const long num_x =
      static_cast<long>(v.coord(0)) * b.coord(1) -
      static_cast<long>(v.coord(1)) * b.coord(0);
  const long num_y =
      static_cast<long>(a.coord(0)) * v.coord(1) -
      static_cast<long>(a.coord(1)) * v.coord(0);
  return num_x % det == 0 && num_y % det == 0;
}

long lattice_index(const Lattice& sub, const Lattice& super) {
  const long ds = std::labs(basis_det(sub));
  const long dp = std::labs(basis_det(super));
  if (dp == 0 || ds % dp != 0) {
    throw ConfigError("lattice_index: not a sublattice pair");
  }
  return ds / dp;
}

cplx eval_character(const Model& model, const ThetaCharacter& chi,
                    const WeightVector& lam) {
  if (lam.rank() != 2) throw ConfigError("eval_character: rank 2 only");
  const cplx tau = model.params().tau;
  const int R = chi.cutoff;
  const int m0 = chi.mu.coord(0);
  const int m1 = chi.mu.coord(1);
  cplx acc = 0.0;
  for (int g0 = -R + ((-R - m0) % 2 + 2) % 2; g0 <= R; g0 += 2) {
    for (int g1 = -R + ((-R - m1) % 2 + 2) % 2; g1 <= R; g1 += 2) {
      const double gg = 0.5 * (static_cast<double>(g0) * g0 +
                               static_cast<double>(g1) * g1);
      const cplx glam = 0.5 * (static_cast<double>(g0) * lam.coord(0) +
                               static_cast<double>(g1) * lam.coord(1));
      acc += std::exp(kPi * kI * (tau * gg + 2.0 * glam));
    }
  }
  return acc;
}

std::vector<ScalarField> thw_basis(const Model& model, int cutoff) {
  const Step e1 = Step::unit(2, 0, 1);
  const Step e2 = Step::unit(2, 1, 1);
  const std::vector<std::vector<Step>> orbits = {
      {Step(2)}, {e1, e2}, {e1 + e2}};

  // Certify the truncation before handing out closures.
  const WeightVector probes[] = {
      WeightVector{cplx(0.31, 0.07), cplx(-0.22, 0.11)},
      WeightVector{cplx(-0.14, -0.09), cplx(0.41, 0.05)}};
  for (const auto& orbit : orbits) {
    for (const Step& mu : orbit) {
      for (const WeightVector& probe : probes) {
        const cplx a = eval_character(model, {mu, cutoff}, probe);
        const cplx b = eval_character(model, {mu, cutoff + 2}, probe);
        if (std::abs(a - b) > 1e-12) {
          throw ConvergenceError("thw_basis: lattice sum not converged");
        }
      }
    }
  }

  std::vector<ScalarField> basis;
  for (const auto& orbit : orbits) {
    basis.push_back([model, orbit, cutoff](const WeightVector& lam) {
      cplx acc = 0.0;
      for (const Step& mu : orbit) {
        acc += eval_character(model, {mu, cutoff}, lam);
      }
      return acc;
    });
  }
  return basis;
}

double divisor_distance(const Model& model, const WeightVector& lam) {
  const cplx h = model.hbar();
  const cplx x0 = lam.coord(0);
  const cplx x1 = lam.coord(1);
  double worst = std::abs(model.theta(x0));  // [lam_{2e1}]
  const cplx vals[] = {model.theta(x1),
                       model.theta(0.5 * (x0 + x1)),
                       model.theta(0.5 * (x0 - x1)),
                       model.theta(0.5 * (x0 + x1) + h),
                       model.theta(0.5 * (x0 - x1) + h),
                       model.theta(0.5 * (-x0 + x1) + h),
                       model.theta(0.5 * (-x0 - x1) + h)};
  for (const cplx& v : vals) worst = std::min(worst, std::abs(v));
  return worst;
}

std::vector<WeightVector> sample_away_from_divisors(const Model& model,
                                                    Rng& rng, int count,
                                                    double margin) {
  std::vector<WeightVector> pts;
  int budget = 64 * count + 256;
  while (static_cast<int>(pts.size()) < count) {
    if (--budget < 0) {
      throw ConfigError("sample_away_from_divisors: margin too demanding");
    }
    WeightVector lam(2);
    const cplx a = rng.box(-0.45, 0.55, -0.12, 0.12);
    const cplx b = rng.box(-0.45, 0.55, -0.12, 0.12);
    lam.set_coord(0, a);
    lam.set_coord(1, b);
    if (divisor_distance(model, lam) > margin) pts.push_back(lam);
  }
  return pts;
}

double span_membership_residual(const Model& model,
                                const std::vector<ScalarField>& basis,
                                const ScalarField& g,
                                const std::vector<WeightVector>& pts,
                                double* condition) {
  const int rows = static_cast<int>(pts.size());
  const int cols = static_cast<int>(basis.size());
  for (const WeightVector& lam : pts) {
    if (divisor_distance(model, lam) < 1e-8) {
      throw PoleError("span_membership_residual: sample point on a divisor");
    }
  }
  Eigen::MatrixXcd A(rows, cols);
  Eigen::VectorXcd y(rows);
  for (int k = 0; k < rows; ++k) {
    for (int j = 0; j < cols; ++j) A(k, j) = basis[j](pts[k]);
    y(k) = g(pts[k]);
  }
  if (condition != nullptr) {
    const Eigen::MatrixXcd gram = A.adjoint() * A;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gram);
    *condition = svd.singularValues().maxCoeff() /
                 svd.singularValues().minCoeff();
  }
  const Eigen::VectorXcd c = A.colPivHouseholderQr().solve(y);
  return (A * c - y).norm() / (1.0 + y.norm());
}

double theorem2_membership_residual(const Model& model, int d, int cutoff,
                                    int n_points, double margin,
                                    std::uint64_t seed) {
  if (n_points < 12) {
    throw ConfigError("theorem2_membership_residual: need >= 12 points");
  }
  const std::vector<ScalarField> basis = thw_basis(model, cutoff);
  const DifferenceOperator op = build_Mtilde(model, d);
  Rng rng(seed);
  const std::vector<WeightVector> pts =
      sample_away_from_divisors(model, rng, n_points, margin);
  double worst = 0.0;
  for (const ScalarField& b : basis) {
    const ScalarField image = [&model, &op, &b](const WeightVector& lam) {
      return apply(model, op, b, lam);
    };
    worst = std::max(worst,
                     span_membership_residual(model, basis, image, pts));
  }
  return worst;
}

cplx lemma_SM_defect(const Model& model,
                     const std::shared_ptr<FusedWeightCache>& cache,
                     const Step& beta, int d, cplx u, const ScalarField& f,
                     const WeightVector& lam) {
  const DifferenceOperator op = build_Md(model, cache, d, u);
  cplx worst = 0.0;
  for (const ShiftKind kind : {ShiftKind::tau_shift, ShiftKind::plain_shift}) {
    const ShiftOperator shift{kind, beta};
    const cplx sm = apply_shift(
        model, shift,
        [&](const WeightVector& x) { return apply(model, op, f, x); }, lam);
    const cplx ms = apply(
        model, op,
        [&](const WeightVector& x) { return apply_shift(model, shift, f, x); },
        lam);
    if (std::abs(sm - ms) > std::abs(worst)) worst = sm - ms;
  }
  return worst;
}

double pole_cancellation_check(const Model& model, const Step& p,
                               const Step& q, const ScalarField& f,
                               const WeightVector& anchor) {
  if (!in_P1(p) || !in_P1(q) || (p + q).is_zero() || p == q) {
    throw ConfigError("pole_cancellation_check: need p, q = +-e_1, +-e_2");
  }
  const cplx h = model.hbar();
  const Step t = p + q;
  const auto value_at = [&](double dist) {
    // move along t until lam_{p+q} = -h + dist; (t,t) = 1 for p != +-q
    const cplx s = (-h + dist) - step_pairing(anchor, t);
    const WeightVector lam = translated_by(anchor, t, s);
    const cplx ratio = model.theta(step_pairing(lam, t) - h) /
                       model.theta(step_pairing(lam, t) + h);
    const WeightVector moved = shifted(shifted(lam, p, h), q, h);
    return ratio * f(moved) + c_pq(model, lam, p, q) * f(lam);
  };
  const double v2 = std::abs(value_at(1e-2));
  const double v3 = std::abs(value_at(1e-3));
  const double v4 = std::abs(value_at(1e-4));
  if (v2 == 0.0 || v3 == 0.0 || v4 == 0.0) return 0.0;
  // slope of log|value| against log(dist) at the finest pair
  (void)v2;
  return std::log(v4 / v3) / std::log(1e-4 / 1e-3);
}

}  // namespace ellface
