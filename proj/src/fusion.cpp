#include "ellface/fusion.hpp"

#include <bit>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ellface {

// --------------------------------------------------------------------------
// Step chains
// --------------------------------------------------------------------------

PathVector& operator+=(PathVector& a, const PathVector& b) {
  if (a.labels != b.labels) {
    throw std::invalid_argument("PathVector +=: label mismatch");
  }
  for (const auto& [path, c] : b.terms) a.terms[path] += c;
  return a;
}

PathVector operator*(cplx scale, PathVector v) {
  for (auto& [path, c] : v.terms) c *= scale;
  return v;
}

WeightVector path_point(const WeightVector& start, const StepPath& path, int k,
                        cplx hbar) {
  WeightVector p = start;
  for (int i = 0; i < k; ++i) p = shifted(p, path[i], hbar);
  return p;
}

WeightVector common_endpoint(const PathVector& v, cplx hbar) {
  if (v.terms.empty()) throw ConfigError("common_endpoint: empty chain");
  const StepPath& first = v.terms.begin()->first;
  Step total(v.start.rank());
  for (const Step& s : first) total = total + s;
  for (const auto& [path, c] : v.terms) {
    Step sum(v.start.rank());
    for (const Step& s : path) sum = sum + s;
    if (!(sum == total)) throw ConfigError("common_endpoint: endpoints differ");
  }
  return path_point(v.start, first, static_cast<int>(first.size()), hbar);
}

PathVector tensor_append(const PathVector& a, const PathVector& b, cplx hbar) {
  const WeightVector end = common_endpoint(a, hbar);
  for (int j = 0; j < end.rank(); ++j) {
    if (std::abs(b.start.coord(j) - end.coord(j)) > 1e-9) {
      throw ConfigError("tensor_append: chains do not meet");
    }
  }
  PathVector out;
  out.start = a.start;
  out.labels = a.labels;
  out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
  for (const auto& [pa, ca] : a.terms) {
    for (const auto& [pb, cb] : b.terms) {
      StepPath path = pa;
      path.insert(path.end(), pb.begin(), pb.end());
      out.terms[path] += ca * cb;
    }
  }
  return out;
}

PathVector apply_w11_op(const Model& model, int pos, cplx arg,
                        const PathVector& vec) {
  if (pos < 0 || pos + 1 >= vec.slots()) {
    throw std::invalid_argument("apply_w11_op: slot pair out of range");
  }
  const cplx h = model.hbar();
  PathVector out;
  out.start = vec.start;
  out.labels = vec.labels;
  std::swap(out.labels[pos], out.labels[pos + 1]);
  const auto& p1 = P1(vec.start.rank());
  for (const auto& [path, coeff] : vec.terms) {
    const WeightVector a = path_point(vec.start, path, pos, h);
    const Step sa = path[pos];
    const Step sb = path[pos + 1];
    const WeightVector mid = shifted(a, sa, h);
    const WeightVector end = shifted(mid, sb, h);
    for (const Step& l : p1) {
      const Step nb = sa + sb - l;
      if (!in_P1(nb)) continue;
      const cplx wgt =
          w11(model, FaceSquare{a, mid, shifted(a, l, h), end, arg, 1, 1});
      if (wgt == 0.0) continue;
      StepPath np = path;
      np[pos] = l;
      np[pos + 1] = nb;
      out.terms[np] += coeff * wgt;
    }
  }
  return out;
}

int p1_index(int n, const Step& s) {
  const auto& p1 = P1(n);
  for (int i = 0; i < static_cast<int>(p1.size()); ++i) {
    if (p1[i] == s) return i;
  }
  throw ConfigError("p1_index: not a degree-1 step");
}

// --------------------------------------------------------------------------
// Fusion
// --------------------------------------------------------------------------

PathVector fused_basis_vector(const Model& model, const WeightVector& lam,
                              const Step& r, cplx u) {
  if (model.rank() != 2) throw ConfigError("fused_basis_vector: rank 2 only");
  if (!in_P2(r)) {
    throw ConfigError("fused_basis_vector: label must be a degree-2 step");
  }
  const cplx h = model.hbar();
  PathVector out;
  out.start = lam;
  out.labels = {u, u - h};
  if (r.is_zero()) {
    for (const Step& p : P1(2)) {
      out.terms[{p, -p}] = model.theta(2.0 * pairing(lam, p) + 2.0 * h);
    }
  } else {
    const Step p = Step::unit(2, 0, r.coord(0));
    const Step q = Step::unit(2, 1, r.coord(1));
    out.terms[{p, q}] = model.theta(pairing(lam, p - q) + h);
    out.terms[{q, p}] = model.theta(pairing(lam, q - p) + h);
  }
  return out;
}

Eigen::MatrixXcd fusion_projector(const Model& model, const WeightVector& lam,
                                  cplx u) {
  const int n = model.rank();
  const int m = 2 * n;
  const cplx h = model.hbar();
  const auto& p1 = P1(n);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(m * m, m * m);
  for (int ia = 0; ia < m; ++ia) {
    for (int ib = 0; ib < m; ++ib) {
      PathVector v;
      v.start = lam;
      v.labels = {u - h, u};
      v.terms[{p1[ia], p1[ib]}] = 1.0;
      const PathVector w = apply_w11_op(model, 0, -h, v);
      for (const auto& [path, c] : w.terms) {
        out(p1_index(n, path[0]) * m + p1_index(n, path[1]), ia * m + ib) = c;
      }
    }
  }
  return out;
}

int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol) {
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++rank;
  }
  return rank;
}

// --------------------------------------------------------------------------
// Fused weights, closed forms
// --------------------------------------------------------------------------

cplx common_factor21(const Model& model, cplx u) {
  const cplx h = model.hbar();
  const cplx d3 = model.theta_checked(-3.0 * h);
  return model.theta(u - h) * model.theta(u + h) * model.theta(u + 3.0 * h) /
         (d3 * d3 * model.theta_checked(h));
}

cplx common_factor12(const Model& model, cplx u) {
  const cplx h = model.hbar();
  const cplx d3 = model.theta_checked(-3.0 * h);
  return model.theta(u) * model.theta(u + 2.0 * h) * model.theta(u + 4.0 * h) /
         (d3 * d3 * model.theta_checked(h));
}

cplx common_factor22(const Model& model, cplx u) {
  const cplx h = model.hbar();
  const cplx d3 = model.theta_checked(-3.0 * h);
  const cplx d1 = model.theta_checked(h);
  const cplx tu = model.theta(u);
  const cplx t3 = model.theta(u + 3.0 * h);
  return model.theta(u - h) * tu * tu * model.theta(u + h) *
         model.theta(u + 2.0 * h) * t3 * t3 * model.theta(u + 4.0 * h) /
         (d3 * d3 * d3 * d3 * d1 * d1 * d1 * d1);
}

namespace {

[[noreturn]] void throw_unlisted(const char* which, const SquareSteps& st) {
  std::ostringstream msg;
  msg << "unlisted " << which << " pattern: top " << to_string(st.top)
      << " left " << to_string(st.left) << " right " << to_string(st.right)
      << " bottom " << to_string(st.bottom);
  throw UnlistedPatternError(msg.str());
}

// Degree (2,1): top/bottom degree 2, left/right degree 1.
cplx explicit21(const Model& model, const WeightVector& lam,
                const SquareSteps& st, cplx w) {
  const cplx h = model.hbar();
  auto lp = [&](const Step& s) { return pairing(lam, s); };
  auto th = [&](cplx z) { return model.theta(z); };
  auto thc = [&](cplx z) { return model.theta_checked(z); };
  cplx val;
  if (st.left == st.right) {
    const Step q = st.left;
    if (st.top.is_zero()) {
      cplx prod = 1.0;
      for (const Step& r : P1(2)) {
        if (r == q || r == -q) continue;
        prod *= th(lp(q + r) + 2.0 * h) / thc(lp(q + r) + h);
      }
      val = th(w + h) / thc(h) * prod;
    } else if (in_P1(st.top - q)) {
      // top = p + q across the axes
      val = th(w + 2.0 * h) / thc(h);
    } else if (in_P1(st.top + q)) {
      // top = p - q across the axes
      const Step p = st.top + q;
      val = th(w) / thc(h) * th(2.0 * lp(q) + 2.0 * h) / thc(2.0 * lp(q)) *
            th(lp(p - q) - h) / thc(lp(p - q) + h);
    } else {
      throw_unlisted("degree-(2,1)", st);
    }
  } else if (st.bottom.is_zero()) {
    const Step q = st.left;
    const Step p = st.right;
    val = th(lp(q - p) - w) * th(lp(q + p) + 2.0 * h) /
          (thc(2.0 * lp(p)) * thc(lp(q - p) + h));
  } else if (st.top.is_zero()) {
    const Step q = st.left;
    const Step p = st.right;
    val = th(2.0 * h) / thc(h) * th(lp(q - p) - h - w) *
          th(2.0 * lp(q) + 2.0 * h) /
          (thc(lp(q - p) - h) * thc(lp(q + p) + h));
  } else if (st.right == -st.left) {
    const Step q = st.left;
    const Step p = st.top - q;
    val = th(2.0 * h) / thc(h) * th(2.0 * lp(q) - w) * th(lp(p - q) - h) /
          (thc(2.0 * lp(q)) * thc(lp(p + q) + h));
  } else {
    throw_unlisted("degree-(2,1)", st);
  }
  return common_factor21(model, w) * val;
}

// Degree (1,2): top/bottom degree 1, left/right degree 2.
cplx explicit12(const Model& model, const WeightVector& lam,
                const SquareSteps& st, cplx w) {
  const cplx h = model.hbar();
  auto lp = [&](const Step& s) { return pairing(lam, s); };
  auto th = [&](cplx z) { return model.theta(z); };
  auto thc = [&](cplx z) { return model.theta_checked(z); };
  const Step p = st.top;
  cplx val;
  if (st.left == st.right) {
    if (st.left.is_zero()) {
      cplx prod = 1.0;
      for (const Step& r : P1(2)) {
        if (r == p || r == -p) continue;
        prod *= th(lp(p + r) - h) / thc(lp(p + r));
      }
      val = th(w + 2.0 * h) / thc(h) * prod;
    } else if (in_P1(st.left - p)) {
      // left = p + q across the axes
      val = th(w + 3.0 * h) / thc(h);
    } else if (in_P1(st.left + p)) {
      // left = q - p across the axes
      const Step q = st.left + p;
      val = th(w + h) / thc(h) * th(2.0 * lp(p) - 2.0 * h) / thc(2.0 * lp(p)) *
            th(lp(q - p) + 2.0 * h) / thc(lp(q - p));
    } else {
      throw_unlisted("degree-(1,2)", st);
    }
  } else if (st.left.is_zero()) {
    const Step q = st.bottom;
    val = th(lp(p - q) - 2.0 * h - w) * th(lp(p + q) - h) /
          (thc(2.0 * lp(p)) * thc(lp(p - q)));
  } else if (st.right.is_zero()) {
    const Step q = st.bottom;
    val = th(2.0 * h) / thc(h) * th(lp(p - q) - h - w) *
          th(2.0 * lp(q) - 2.0 * h) / (thc(lp(p - q)) * thc(lp(p + q)));
  } else if (st.bottom == -p) {
    const Step q = st.left - p;
    val = th(2.0 * h) / thc(h) * th(2.0 * lp(p) - h - w) *
          th(lp(p + q) + 2.0 * h) / (thc(2.0 * lp(p)) * thc(lp(q - p)));
  } else {
    throw_unlisted("degree-(1,2)", st);
  }
  return common_factor12(model, w) * val;
}

// Degree (2,2): only the two patterns entering the difference operators
// have closed forms here.
cplx explicit22(const Model& model, const WeightVector& lam,
                const SquareSteps& st, cplx w) {
  const cplx h = model.hbar();
  auto lp = [&](const Step& s) { return pairing(lam, s); };
  auto th = [&](cplx z) { return model.theta(z); };
  auto thc = [&](cplx z) { return model.theta_checked(z); };
  if (!st.left.is_zero() || !st.right.is_zero()) {
    throw_unlisted("degree-(2,2)", st);
  }
  if (st.top.is_zero()) {
    const Step e1 = Step::unit(2, 0, +1);
    const Step e2 = Step::unit(2, 1, +1);
    cplx sum = 0.0;
    for (const Step& r : {e1, -e1}) {
      for (const Step& s : {e2, -e2}) {
        sum += th(2.0 * lp(r) + 2.0 * h) / thc(2.0 * lp(r)) *
               th(2.0 * lp(s) + 2.0 * h) / thc(2.0 * lp(s)) *
               th(lp(r + s) - 5.0 * h) * th(lp(r + s) + 2.0 * h) /
               (thc(lp(r + s)) * thc(lp(r + s) + h));
      }
    }
    const cplx val =
        th(2.0 * h) / thc(6.0 * h) *
        (sum - th(w + 6.0 * h) * th(w - 3.0 * h) / (thc(w) * thc(w + 3.0 * h)));
    return common_factor22(model, w) * val;
  }
  // top = bottom a two-part step, left = right = 0
  return common_factor22(model, w) * th(lp(st.top) - h) / thc(lp(st.top) + h);
}

}  // namespace

cplx fused_weight_explicit(const Model& model, const FaceSquare& sq) {
  if (sq.d == 1 && sq.dp == 1) {
    throw ConfigError("fused_weight_explicit: degree (1,1) has a direct weight");
  }
  if (model.rank() != 2) throw ConfigError("fused_weight_explicit: rank 2 only");
  const auto st = square_steps(sq, model.hbar());
  if (!st) return 0.0;
  if (!in_Pd(sq.d, st->top) || !in_Pd(sq.d, st->bottom) ||
      !in_Pd(sq.dp, st->left) || !in_Pd(sq.dp, st->right)) {
    return 0.0;
  }
  if (sq.d == 2 && sq.dp == 1) return explicit21(model, sq.lam, *st, sq.u);
  if (sq.d == 1 && sq.dp == 2) return explicit12(model, sq.lam, *st, sq.u);
  if (sq.d == 2 && sq.dp == 2) return explicit22(model, sq.lam, *st, sq.u);
  throw ConfigError("fused_weight_explicit: unsupported degree pair");
}

// --------------------------------------------------------------------------
// Fused weights, operator construction
// --------------------------------------------------------------------------

namespace {

PathVector degree_factor(const Model& model, const WeightVector& lam, int d,
                         const Step& s, cplx label) {
  if (d == 1) {
    if (!in_P1(s)) throw ConfigError("degree_factor: degree-1 step expected");
    PathVector v;
    v.start = lam;
    v.labels = {label};
    v.terms[{s}] = 1.0;
    return v;
  }
  return fused_basis_vector(model, lam, s, label);
}

// Stage plan for the exchange operators, as (slot, argument) pairs in
// application order; the split degree-2 slot carries labels (x, x-h).
std::vector<std::pair<int, cplx>> exchange_schedule(int d, int dp, cplx w,
                                                    cplx h) {
  if (d == 2 && dp == 1) return {{1, w - h}, {0, w}};
  if (d == 1 && dp == 2) return {{0, w}, {1, w + h}};
  if (d == 2 && dp == 2) return {{1, w - h}, {0, w}, {2, w}, {1, w + h}};
  throw ConfigError("exchange_schedule: unsupported degree pair");
}

FusedRow compute_row(const Model& model, int d, int dp,
                     const WeightVector& lam, const Step& top,
                     const Step& right, cplx w) {
  const cplx h = model.hbar();
  const cplx u0 = w;  // only differences of labels enter the weights
  const cplx v0 = 0.0;
  const WeightVector mu = shifted(lam, top, h);
  PathVector image = tensor_append(degree_factor(model, lam, d, top, u0),
                                   degree_factor(model, mu, dp, right, v0), h);
  for (const auto& [pos, arg] : exchange_schedule(d, dp, w, h)) {
    image = apply_w11_op(model, pos, arg, image);
  }

  std::vector<Step> lefts;
  std::vector<PathVector> basis;
  for (const Step& l : Pd(dp, 2)) {
    const Step b = top + right - l;
    if (!in_Pd(d, b)) continue;
    const WeightVector kap = shifted(lam, l, h);
    basis.push_back(tensor_append(degree_factor(model, lam, dp, l, v0),
                                  degree_factor(model, kap, d, b, u0), h));
    lefts.push_back(l);
  }

  if (!basis.empty() && basis.front().labels != image.labels) {
    throw std::logic_error("compute_row: image labels out of order");
  }

  std::map<StepPath, int> index;
  auto note = [&index](const PathVector& v) {
    for (const auto& [path, c] : v.terms) {
      index.emplace(path, static_cast<int>(index.size()));
    }
  };
  note(image);
  for (const PathVector& b : basis) note(b);

  Eigen::MatrixXcd a =
      Eigen::MatrixXcd::Zero(static_cast<int>(index.size()),
                             static_cast<int>(basis.size()));
  Eigen::VectorXcd y =
      Eigen::VectorXcd::Zero(static_cast<int>(index.size()));
  for (const auto& [path, c] : image.terms) y(index.at(path)) = c;
  for (int j = 0; j < static_cast<int>(basis.size()); ++j) {
    for (const auto& [path, c] : basis[j].terms) a(index.at(path), j) = c;
  }

  FusedRow row;
  if (lefts.empty()) {
    row.residual = y.norm() / (1.0 + y.norm());
  } else {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXcd x = svd.solve(y);
    row.residual = (a * x - y).norm() / (1.0 + y.norm());
    for (int j = 0; j < static_cast<int>(lefts.size()); ++j) {
      row.coeffs[lefts[j]] = x(j);
    }
  }
  if (row.residual > 1e-8) {
    std::ostringstream msg;
    msg << "fused image left the target span: residual " << row.residual;
    throw ProjectionError(msg.str());
  }
  return row;
}

}  // namespace

const FusedRow& FusedWeightCache::row(const Model& model, int d, int dp,
                                      const WeightVector& lam, const Step& top,
                                      const Step& right, cplx w) {
  const auto bits = [](double x) { return std::bit_cast<std::uint64_t>(x); };
  const Key key{d,
                dp,
                bits(lam.coord(0).real()),
                bits(lam.coord(0).imag()),
                bits(lam.coord(1).real()),
                bits(lam.coord(1).imag()),
                top,
                right,
                bits(w.real()),
                bits(w.imag())};
  auto it = rows_.find(key);
  if (it == rows_.end()) {
    it = rows_.emplace(key, compute_row(model, d, dp, lam, top, right, w))
             .first;
  }
  return it->second;
}

cplx fused_weight_composed(const Model& model, FusedWeightCache& cache,
                          const FaceSquare& sq) {
  if (sq.d == 1 && sq.dp == 1) {
    throw ConfigError("fused_weight_composed: degree (1,1) has a direct weight");
  }
  if (model.rank() != 2) throw ConfigError("fused_weight_composed: rank 2 only");
  const auto st = square_steps(sq, model.hbar());
  if (!st) return 0.0;
  if (!in_Pd(sq.d, st->top) || !in_Pd(sq.d, st->bottom) ||
      !in_Pd(sq.dp, st->left) || !in_Pd(sq.dp, st->right)) {
    return 0.0;
  }
  const FusedRow& row =
      cache.row(model, sq.d, sq.dp, sq.lam, st->top, st->right, sq.u);
  const auto it = row.coeffs.find(st->left);
  return it == row.coeffs.end() ? cplx(0.0) : it->second;
}

double preserve_residual(const Model& model, FusedWeightCache& cache, int d,
                         int dp, const WeightVector& lam, const Step& top,
                         const Step& right, cplx w) {
  return cache.row(model, d, dp, lam, top, right, w).residual;
}

cplx face_weight(const Model& model, FusedWeightCache& cache,
                 const FaceSquare& sq) {
  if (sq.d == 1 && sq.dp == 1) return w11(model, sq);
  return fused_weight_composed(model, cache, sq);
}

// --------------------------------------------------------------------------
// Identities
// --------------------------------------------------------------------------

cplx zero_deg_lemma_defect(const Model& model, const WeightVector& lam,
                           const Step& p, cplx u) {
  if (model.rank() != 2) throw ConfigError("zero_deg_lemma_defect: rank 2 only");
  if (!in_P1(p)) throw ConfigError("zero_deg_lemma_defect: degree-1 step expected");
  const cplx h = model.hbar();
  auto lp = [&](const Step& s) { return pairing(lam, s); };
  auto th = [&](cplx z) { return model.theta(z); };
  auto thc = [&](cplx z) { return model.theta_checked(z); };

  cplx prod = 1.0;
  for (const Step& q : P1(2)) {
    if (q == p || q == -p) continue;
    prod *= th(lp(p + q) - h) / thc(lp(p + q)) * th(lp(p + q) + 2.0 * h) /
            thc(lp(p + q) + h);
  }
  cplx lhs = th(u + h) * th(u + 2.0 * h) / (thc(2.0 * h) * thc(-3.0 * h)) * prod;
  for (const Step& q : P1(2)) {
    if (q == p || q == -p) continue;
    lhs += th(h) / thc(-3.0 * h) * th(2.0 * lp(q) - 2.0 * h) /
           thc(2.0 * lp(q)) * th(lp(p + q) + 2.0 * h + u) *
           th(lp(p + q) - h - u) * th(lp(p - q) - h) /
           (thc(lp(p + q)) * thc(lp(p + q) - h) * thc(lp(p - q) + h));
  }

  const Step e1 = Step::unit(2, 0, +1);
  const Step e2 = Step::unit(2, 1, +1);
  cplx sum = 0.0;
  for (const Step& r : {e1, -e1}) {
    for (const Step& s : {e2, -e2}) {
      sum += th(2.0 * lp(r) + 2.0 * h) / thc(2.0 * lp(r)) *
             th(2.0 * lp(s) + 2.0 * h) / thc(2.0 * lp(s)) *
             th(lp(r + s) - 5.0 * h) * th(lp(r + s) + 2.0 * h) /
             (thc(lp(r + s)) * thc(lp(r + s) + h));
    }
  }
  const cplx rhs =
      th(u) * th(u + 3.0 * h) / (thc(6.0 * h) * thc(-3.0 * h)) * sum -
      th(u + 6.0 * h) * th(u - 3.0 * h) / (thc(6.0 * h) * thc(-3.0 * h));
  return lhs - rhs;
}

cplx ybe_mixed_defect(const Model& model, FusedWeightCache& cache, int d,
                      int dp, int dpp, const WeightVector& lam, const Step& s1,
                      const Step& s2, const Step& s3, const Step& s4,
                      const Step& s5, const Step& s6, cplx u, cplx v) {
  if (!(s3 + s4 + s5 == s1 + s2 + s6)) {
    throw ConfigError("ybe_mixed_defect: boundary does not close");
  }
  const cplx h = model.hbar();
  const int n = model.rank();
  const WeightVector mu = shifted(lam, s1, h);
  const WeightVector nu = shifted(mu, s2, h);
  const WeightVector rho = shifted(lam, s3, h);
  const WeightVector sig = shifted(rho, s4, h);
  const WeightVector kap = shifted(sig, s5, h);
  cplx lhs = 0.0;
  for (const Step& t : Pd(d, n)) {
    const WeightVector eta = shifted(rho, t, h);
    const cplx w1 =
        face_weight(model, cache, FaceSquare{rho, eta, sig, kap, u - v, d, dp});
    if (w1 == 0.0) continue;
    const cplx w2 =
        face_weight(model, cache, FaceSquare{lam, mu, rho, eta, u, d, dpp});
    if (w2 == 0.0) continue;
    lhs += w1 * w2 *
           face_weight(model, cache, FaceSquare{mu, nu, eta, kap, v, dp, dpp});
  }
  cplx rhs = 0.0;
  for (const Step& t : Pd(dp, n)) {
    const WeightVector eta = shifted(lam, t, h);
    const cplx w1 =
        face_weight(model, cache, FaceSquare{lam, eta, rho, sig, v, dp, dpp});
    if (w1 == 0.0) continue;
    const cplx w2 =
        face_weight(model, cache, FaceSquare{eta, nu, sig, kap, u, d, dpp});
    if (w2 == 0.0) continue;
    rhs += w1 * w2 *
           face_weight(model, cache,
                       FaceSquare{lam, mu, eta, nu, u - v, d, dp});
  }
  return lhs - rhs;
}

}  // namespace ellface
