#include "ellface/operators.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>

namespace ellface {

cplx apply(const Model& model, const DifferenceOperator& op,
           const ScalarField& f, const WeightVector& lam) {
  const cplx h = model.hbar();
  cplx acc = 0.0;
  for (const auto& [t, coeff] : op.terms) {
    acc += coeff(lam) * f(shifted(lam, t, h));
  }
  return acc;
}

DifferenceOperator compose(const Model& model, const DifferenceOperator& a,
                           const DifferenceOperator& b) {
  const cplx h = model.hbar();
  std::map<Step, std::vector<std::pair<ScalarField, ScalarField>>> pieces;
  std::map<Step, std::vector<Step>> offsets;
  for (const auto& [r, ar] : a.terms) {
    for (const auto& [s, bs] : b.terms) {
      const Step t = r + s;
      pieces[t].emplace_back(ar, bs);
      offsets[t].push_back(r);
    }
  }
  DifferenceOperator out;
  for (auto& [t, list] : pieces) {
    out.terms[t] = [h, list = std::move(list),
                    offs = std::move(offsets[t])](const WeightVector& lam) {
      cplx acc = 0.0;
      for (std::size_t k = 0; k < list.size(); ++k) {
        acc += list[k].first(lam) * list[k].second(shifted(lam, offs[k], h));
      }
      return acc;
    };
  }
  return out;
}

DifferenceOperator scaled(cplx factor, const DifferenceOperator& a) {
  DifferenceOperator out;
  for (const auto& [t, coeff] : a.terms) {
    out.terms[t] = [factor, coeff](const WeightVector& lam) {
      return factor * coeff(lam);
    };
  }
  return out;
}

cplx c_pq(const Model& model, const WeightVector& lam, const Step& p,
          const Step& q) {
  const cplx h = model.hbar();
  const cplx lpq = pairing(lam, p + q);
  return model.theta(2.0 * h) / model.theta_checked(6.0 * h) *
         model.theta(2.0 * pairing(lam, p) + 2.0 * h) /
         model.theta_checked(2.0 * pairing(lam, p)) *
         model.theta(2.0 * pairing(lam, q) + 2.0 * h) /
         model.theta_checked(2.0 * pairing(lam, q)) *
         model.theta(lpq - 5.0 * h) / model.theta_checked(lpq + h) *
         model.theta(lpq + 2.0 * h) / model.theta_checked(lpq);
}

DifferenceOperator build_Mtilde(const Model& model, int d) {
  if (model.rank() != 2) {
    throw ConfigError("build_Mtilde: requires rank 2");
  }
  DifferenceOperator op;
  if (d == 1) {
    for (const Step& p : P1(2)) {
      op.terms[p] = [model, p](const WeightVector& lam) {
        const cplx h = model.hbar();
        cplx acc = 1.0;
        for (const Step& q : P1(2)) {
          if (q == p || q == -p) continue;
          const cplx lpq = pairing(lam, p + q);
          acc *= model.theta(lpq - h) / model.theta_checked(lpq);
        }
        return acc;
      };
    }
    return op;
  }
  if (d != 2) {
    throw ConfigError("build_Mtilde: degree must be 1 or 2");
  }
  const Step e1 = Step::unit(2, 0, +1);
  const Step e2 = Step::unit(2, 1, +1);
  for (const Step& p : {e1, -e1}) {
    for (const Step& q : {e2, -e2}) {
      op.terms[p + q] = [model, p, q](const WeightVector& lam) {
        const cplx h = model.hbar();
        const cplx lpq = pairing(lam, p + q);
        return model.theta(lpq - h) / model.theta_checked(lpq + h);
      };
    }
  }
  op.terms[Step(2)] = [model, e1, e2](const WeightVector& lam) {
    cplx acc = 0.0;
    for (const Step& p : {e1, -e1}) {
      for (const Step& q : {e2, -e2}) {
        acc += c_pq(model, lam, p, q);
      }
    }
    return acc;
  };
  return op;
}

DifferenceOperator build_Md(const Model& model,
                            const std::shared_ptr<FusedWeightCache>& cache,
                            int d, cplx u) {
  if (model.rank() != 2) {
    throw ConfigError("build_Md: requires rank 2");
  }
  if (!cache) {
    throw ConfigError("build_Md: null weight cache");
  }
  DifferenceOperator op;
  for (const Step& t : Pd(d, 2)) {
    op.terms[t] = [model, cache, d, u, t](const WeightVector& lam) {
      const cplx h = model.hbar();
      const WeightVector nu = shifted(lam, t, h);
      return face_weight(model, *cache, FaceSquare{lam, nu, lam, nu, u, d, 2});
    };
  }
  return op;
}

cplx scalar_F(const Model& model, cplx u) {
  const cplx h = model.hbar();
  const cplx d3 = model.theta_checked(-3.0 * h);
  const cplx d1 = model.theta_checked(h);
  const cplx m = model.theta(u + 2.0 * h);
  return model.theta(u) * m * m * model.theta(u + 4.0 * h) / (d3 * d3 * d1 * d1);
}

cplx scalar_G(const Model& model, cplx u) { return common_factor22(model, u); }

cplx scalar_H(const Model& model, cplx u) {
  const cplx h = model.hbar();
  return model.theta(u + 6.0 * h) * model.theta(u - 3.0 * h) *
         model.theta(2.0 * h) /
         (model.theta_checked(u) * model.theta_checked(u + 3.0 * h) *
          model.theta_checked(6.0 * h));
}

double theorem1ii_defect(const Model& model,
                         const std::shared_ptr<FusedWeightCache>& cache, int d,
                         const WeightVector& lam, cplx u) {
  const DifferenceOperator md = build_Md(model, cache, d, u);
  const DifferenceOperator mt = build_Mtilde(model, d);
  const cplx front = d == 1 ? scalar_F(model, u) : scalar_G(model, u);
  const cplx hshift = d == 2 ? scalar_H(model, u) : cplx(0.0);
  double worst = 0.0;
  double scale = 0.0;
  for (const auto& [t, coeff] : md.terms) {
    cplx expected = 0.0;
    const auto it = mt.terms.find(t);
    if (it != mt.terms.end()) expected = it->second(lam);
    if (t.is_zero()) expected -= hshift;
    expected *= front;
    scale = std::max(scale, std::abs(expected));
    worst = std::max(worst, std::abs(coeff(lam) - expected));
  }
  return worst / (1.0 + scale);
}

bool safe_spectral_point(const Model& model, cplx u, double margin) {
  const cplx h = model.hbar();
  for (double k : {-3.0, -1.0, 0.0, 1.0, 2.0, 3.0, 4.0, 6.0}) {
    if (std::abs(model.theta(u + k * h)) <= margin) return false;
  }
  return true;
}

std::vector<Step> shift_sums(int d, int dp, int n) {
  std::set<Step> seen;
  for (const Step& p : Pd(d, n)) {
    for (const Step& q : Pd(dp, n)) {
      seen.insert(p + q);
    }
  }
  return std::vector<Step>(seen.begin(), seen.end());
}

TraceMatrices trace_matrices(const Model& model, FusedWeightCache& cache,
                             int d, int dp, const WeightVector& lam,
                             const Step& t, cplx u, cplx v) {
  const cplx h = model.hbar();
  TraceMatrices m;
  for (const Step& p : Pd(d, 2)) {
    if (in_Pd(dp, t - p)) m.index.emplace_back(p, t - p);
  }
  for (const Step& q : Pd(dp, 2)) {
    if (in_Pd(d, t - q)) m.index_b.emplace_back(t - q, q);
  }
  const int size = static_cast<int>(m.index.size());
  m.A.resize(size, size);
  m.B.resize(size, size);
  m.W.resize(size, size);
  const WeightVector top = shifted(lam, t, h);
  for (int col = 0; col < size; ++col) {
    const Step& p = m.index[col].first;
    const Step& q = m.index_b[col].second;
    const WeightVector lp = shifted(lam, p, h);
    const WeightVector lq = shifted(lam, q, h);
    for (int row = 0; row < size; ++row) {
      const Step& r = m.index[row].first;
      const Step& s = m.index_b[row].second;
      const WeightVector lr = shifted(lam, r, h);
      const WeightVector ls = shifted(lam, s, h);
      m.A(row, col) =
          face_weight(model, cache, FaceSquare{lam, lp, lam, lr, u, d, 2}) *
          face_weight(model, cache, FaceSquare{lp, top, lr, top, v, dp, 2});
      m.B(row, col) =
          face_weight(model, cache, FaceSquare{lam, lq, lam, ls, v, dp, 2}) *
          face_weight(model, cache, FaceSquare{lq, top, ls, top, u, d, 2});
      m.W(row, col) =
          face_weight(model, cache, FaceSquare{lam, lp, ls, top, u - v, d, dp});
    }
  }
  return m;
}

cplx commutativity_trace_defect(const Model& model, FusedWeightCache& cache,
                                int d, int dp, const WeightVector& lam,
                                const Step& t, cplx u, cplx v) {
  const TraceMatrices m = trace_matrices(model, cache, d, dp, lam, t, u, v);
  return m.A.trace() - m.B.trace();
}

IntertwiningReport intertwining_defect(const Model& model,
                                       FusedWeightCache& cache, int d, int dp,
                                       const WeightVector& lam, const Step& t,
                                       cplx u, cplx v) {
  const TraceMatrices m = trace_matrices(model, cache, d, dp, lam, t, u, v);
  IntertwiningReport report;
  const Eigen::MatrixXcd wa = m.W * m.A;
  const Eigen::MatrixXcd bw = m.B * m.W;
  report.defect = wa - bw;
  if (m.index.empty()) return report;
  report.max_abs = report.defect.cwiseAbs().maxCoeff();
  report.scale =
      std::max(wa.cwiseAbs().maxCoeff(), bw.cwiseAbs().maxCoeff());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m.W);
  report.min_singular_value = svd.singularValues().minCoeff();
  return report;
}

WeightVector weyl_apply(const SignedPermutation& w, const WeightVector& lam) {
  const int n = lam.rank();
  WeightVector out(n);
  for (int j = 0; j < n; ++j) {
    out.set_coord(w.perm[j], static_cast<double>(w.sign[j]) * lam.coord(j));
  }
  return out;
}

Step weyl_apply(const SignedPermutation& w, const Step& s) {
  const int n = s.rank();
  Step out(n);
  for (int j = 0; j < n; ++j) {
    const int target = w.sign[j] * s.coord(j);
    for (int k = 0; k < std::abs(target); ++k) {
      out = out + Step::unit(n, w.perm[j], target > 0 ? 1 : -1);
    }
  }
  return out;
}

SignedPermutation weyl_inverse(const SignedPermutation& w) {
  const int n = static_cast<int>(w.perm.size());
  SignedPermutation inv;
  inv.perm.resize(n);
  inv.sign.resize(n);
  for (int j = 0; j < n; ++j) {
    inv.perm[w.perm[j]] = j;
    inv.sign[w.perm[j]] = w.sign[j];
  }
  return inv;
}

std::vector<SignedPermutation> weyl_group(int n) {
  std::vector<int> perm(n);
  for (int j = 0; j < n; ++j) perm[j] = j;
  std::vector<SignedPermutation> group;
  do {
    for (int mask = 0; mask < (1 << n); ++mask) {
      SignedPermutation w;
      w.perm = perm;
      w.sign.resize(n);
      for (int j = 0; j < n; ++j) w.sign[j] = (mask >> j) & 1 ? -1 : 1;
      group.push_back(w);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return group;
}

}  // namespace ellface
