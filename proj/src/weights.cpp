#include "ellface/weights.hpp"

#include <cmath>
#include <sstream>

namespace ellface {

// --------------------------------------------------------------------------
// Steps and weight vectors
// --------------------------------------------------------------------------

Step Step::unit(int n, int j, int sign) {
  Step s(n);
  s.c_[j] = static_cast<std::int8_t>(sign);
  return s;
}

bool Step::is_zero() const {
  for (int j = 0; j < n_; ++j) {
    if (c_[j] != 0) return false;
  }
  return true;
}

int Step::norm1() const {
  int acc = 0;
  for (int j = 0; j < n_; ++j) acc += std::abs(c_[j]);
  return acc;
}

Step Step::operator-() const {
  Step s(n_);
  for (int j = 0; j < n_; ++j) s.c_[j] = static_cast<std::int8_t>(-c_[j]);
  return s;
}

Step Step::operator+(const Step& o) const {
  Step s(n_);
  for (int j = 0; j < n_; ++j) {
    s.c_[j] = static_cast<std::int8_t>(c_[j] + o.c_[j]);
  }
  return s;
}

Step Step::operator-(const Step& o) const {
  Step s(n_);
  for (int j = 0; j < n_; ++j) {
    s.c_[j] = static_cast<std::int8_t>(c_[j] - o.c_[j]);
  }
  return s;
}

std::string to_string(const Step& s) {
  std::string out = "[";
  for (int j = 0; j < s.rank(); ++j) {
    if (j > 0) out += ",";
    out += std::to_string(s.coord(j));
  }
  out += "]";
  return out;
}

namespace {

struct StepTables {
  std::array<std::vector<Step>, Step::kMaxRank + 1> p1;
  std::array<std::vector<Step>, Step::kMaxRank + 1> p2;

  StepTables() {
    for (int n = 1; n <= Step::kMaxRank; ++n) {
      for (int j = 0; j < n; ++j) p1[n].push_back(Step::unit(n, j, +1));
      for (int j = n - 1; j >= 0; --j) p1[n].push_back(Step::unit(n, j, -1));
    }
    // Degree-2 steps exist as a closed list only at rank 2.
    p2[2] = {Step::unit(2, 0, +1) + Step::unit(2, 1, +1),
             Step::unit(2, 0, +1) + Step::unit(2, 1, -1),
             Step::unit(2, 0, -1) + Step::unit(2, 1, +1),
             Step::unit(2, 0, -1) + Step::unit(2, 1, -1), Step(2)};
  }
};

const StepTables& step_tables() {
  static const StepTables tables;
  return tables;
}

}  // namespace

const std::vector<Step>& P1(int n) {
  if (n < 1 || n > Step::kMaxRank) {
    throw ConfigError("P1: rank out of range");
  }
  return step_tables().p1[n];
}

const std::vector<Step>& P2(int n) {
  if (n != 2) {
    throw ConfigError("P2: degree-2 step list requires rank 2");
  }
  return step_tables().p2[n];
}

const std::vector<Step>& Pd(int d, int n) {
  if (d == 1) return P1(n);
  if (d == 2) return P2(n);
  throw ConfigError("Pd: degree must be 1 or 2");
}

bool in_P1(const Step& s) { return s.norm1() == 1; }

bool in_P2(const Step& s) {
  if (s.rank() != 2) return false;
  const int a = std::abs(s.coord(0));
  const int b = std::abs(s.coord(1));
  return (a == 1 && b == 1) || (a == 0 && b == 0);
}

bool in_Pd(int d, const Step& s) { return d == 1 ? in_P1(s) : in_P2(s); }

WeightVector::WeightVector(std::initializer_list<cplx> coords) {
  n_ = static_cast<int>(coords.size());
  int j = 0;
  for (const cplx& v : coords) x_[j++] = v;
}

std::string to_string(const WeightVector& v) {
  std::ostringstream out;
  out << "(";
  for (int j = 0; j < v.rank(); ++j) {
    if (j > 0) out << ", ";
    out << v.coord(j).real() << (v.coord(j).imag() < 0 ? "-" : "+")
        << std::abs(v.coord(j).imag()) << "i";
  }
  out << ")";
  return out.str();
}

cplx pairing(const WeightVector& a, const WeightVector& b) {
  cplx acc = 0.0;
  for (int j = 0; j < a.rank(); ++j) acc += a.coord(j) * b.coord(j);
  return 0.5 * acc;
}

cplx pairing(const WeightVector& lam, const Step& p) {
  cplx acc = 0.0;
  for (int j = 0; j < lam.rank(); ++j) {
    acc += lam.coord(j) * static_cast<double>(p.coord(j));
  }
  return 0.5 * acc;
}

cplx pairing(const Step& a, const Step& b) {
  double acc = 0.0;
  for (int j = 0; j < a.rank(); ++j) {
    acc += static_cast<double>(a.coord(j)) * static_cast<double>(b.coord(j));
  }
  return 0.5 * acc;
}

WeightVector shifted(const WeightVector& lam, const Step& p, cplx hbar) {
  WeightVector out = lam;
  for (int j = 0; j < lam.rank(); ++j) {
    out.set_coord(j, lam.coord(j) +
                         2.0 * hbar * static_cast<double>(p.coord(j)));
  }
  return out;
}

WeightVector translated(const WeightVector& lam, const Step& beta,
                        cplx scale) {
  WeightVector out = lam;
  for (int j = 0; j < lam.rank(); ++j) {
    out.set_coord(j, lam.coord(j) + scale * static_cast<double>(beta.coord(j)));
  }
  return out;
}

std::optional<Step> step_between(const WeightVector& lam,
                                 const WeightVector& mu, cplx hbar) {
  constexpr double kSnapTol = 1e-7;
  Step s(lam.rank());
  Step out(lam.rank());
  for (int j = 0; j < lam.rank(); ++j) {
    const cplx ratio = (mu.coord(j) - lam.coord(j)) / (2.0 * hbar);
    const double rounded = std::round(ratio.real());
    if (std::abs(ratio.real() - rounded) > kSnapTol ||
        std::abs(ratio.imag()) > kSnapTol || std::abs(rounded) > 3.5) {
      return std::nullopt;
    }
    out = out + Step::unit(lam.rank(), j, static_cast<int>(rounded));
  }
  return out;
}

// --------------------------------------------------------------------------
// Squares
// --------------------------------------------------------------------------

std::optional<SquareSteps> square_steps(const FaceSquare& sq, cplx hbar) {
  const auto top = step_between(sq.lam, sq.mu, hbar);
  const auto left = step_between(sq.lam, sq.kap, hbar);
  const auto right = step_between(sq.mu, sq.nu, hbar);
  const auto bottom = step_between(sq.kap, sq.nu, hbar);
  if (!top || !left || !right || !bottom) return std::nullopt;
  return SquareSteps{*top, *left, *right, *bottom};
}

FaceSquare square_from_steps(const WeightVector& lam, const Step& top,
                             const Step& left, const Step& right, cplx u,
                             cplx hbar, int d, int dp) {
  FaceSquare sq;
  sq.lam = lam;
  sq.mu = shifted(lam, top, hbar);
  sq.kap = shifted(lam, left, hbar);
  sq.nu = shifted(sq.mu, right, hbar);
  sq.u = u;
  sq.d = d;
  sq.dp = dp;
  return sq;
}

Pattern11 classify11(const SquareSteps& s) {
  if (!in_P1(s.top) || !in_P1(s.left) || !in_P1(s.right) || !in_P1(s.bottom)) {
    return Pattern11::kNone;
  }
  if (s.top + s.right != s.left + s.bottom) return Pattern11::kNone;
  if (s.top == s.bottom && s.left == s.right) {
    if (s.top == s.left) return Pattern11::kStraight;
    if (s.top == -s.left) return Pattern11::kReturnPair;
    return Pattern11::kExchange;
  }
  if (s.top == s.left && s.right == s.bottom) {
    if (s.right == -s.top) return Pattern11::kReturnDiagonal;
    return Pattern11::kBentDiagonal;
  }
  if (s.right == -s.top && s.bottom == -s.left) return Pattern11::kReturnPair;
  return Pattern11::kNone;
}

namespace {

// prod_{r != +-p} [lam_{p+r} + shift]; pole-checked when the product sits in
// a denominator.
cplx fan_product(const Model& model, const WeightVector& lam, const Step& p,
                 cplx shift, bool checked) {
  cplx acc = 1.0;
  for (const Step& r : P1(lam.rank())) {
    if (r == p || r == -p) continue;
    const cplx arg = pairing(lam, p + r) + shift;
    acc *= checked ? model.theta_checked(arg) : model.theta(arg);
  }
  return acc;
}

}  // namespace

cplx g_factor(const Model& model, const WeightVector& lam, const Step& p) {
  const cplx h = model.hbar();
  const cplx two_lam_p = 2.0 * pairing(lam, p);
  return -model.theta(two_lam_p + 2.0 * h) / model.theta_checked(two_lam_p) *
         fan_product(model, lam, p, h, false) /
         fan_product(model, lam, p, 0.0, true);
}

cplx crossing_g(const Model& model, const WeightVector& lam,
                const WeightVector& mu) {
  const auto p = step_between(lam, mu, model.hbar());
  if (!p || !in_P1(*p)) {
    throw AdmissibilityError("crossing_g: mu - lam is not a degree-1 step");
  }
  return model.theta(2.0 * pairing(mu, *p)) *
         fan_product(model, mu, *p, 0.0, false);
}

cplx w11(const Model& model, const FaceSquare& sq) {
  if (sq.d != 1 || sq.dp != 1) {
    throw ConfigError("w11: square must have degree type (1,1)");
  }
  const auto steps = square_steps(sq, model.hbar());
  if (!steps) return 0.0;
  const Pattern11 pattern = classify11(*steps);
  if (pattern == Pattern11::kNone) return 0.0;

  const cplx u = sq.u;
  const cplx h = model.hbar();
  const cplx c = model.crossing_c();
  const cplx inv_cc = 1.0 / model.theta_checked(c);
  const WeightVector& lam = sq.lam;

  switch (pattern) {
    case Pattern11::kStraight: {
      return model.theta(c - u) * model.theta(u + h) * inv_cc /
             model.theta_checked(h);
    }
    case Pattern11::kBentDiagonal: {
      const cplx lam_pq = pairing(lam, steps->top - steps->right);
      return model.theta(c - u) * model.theta(lam_pq - u) * inv_cc /
             model.theta_checked(lam_pq);
    }
    case Pattern11::kExchange: {
      const cplx lam_pq = pairing(lam, steps->left - steps->top);
      return model.theta(c - u) * model.theta(u) *
             model.theta(lam_pq + h) * inv_cc /
             (model.theta_checked(h) * model.theta_checked(lam_pq));
    }
    case Pattern11::kReturnDiagonal: {
      const cplx two_lam_p = 2.0 * pairing(lam, steps->top);
      const cplx denom = model.theta_checked(two_lam_p + h);
      const cplx direct = model.theta(c - u) * model.theta(two_lam_p + h - u);
      const cplx exchange = model.theta(u) * model.theta(two_lam_p + h + c - u);
      return inv_cc / denom *
             (direct + exchange * g_factor(model, lam, steps->top));
    }
    case Pattern11::kReturnPair: {
      const Step p = steps->left;
      const Step q = steps->top;
      const cplx lam_pq = pairing(lam, p + q);
      const cplx two_lam_p = 2.0 * pairing(lam, p);
      const cplx two_lam_q = 2.0 * pairing(lam, q);
      return -model.theta(u) * model.theta(lam_pq + h + c - u) * inv_cc /
             model.theta_checked(lam_pq + h) *
             model.theta(two_lam_p + 2.0 * h) /
             model.theta_checked(two_lam_q) *
             fan_product(model, lam, p, h, false) /
             fan_product(model, lam, q, 0.0, true);
    }
    case Pattern11::kNone:
      break;
  }
  return 0.0;
}

cplx initial_defect(const Model& model, const WeightVector& lam,
                    const WeightVector& mu, const WeightVector& kap,
                    const WeightVector& nu) {
  FaceSquare sq{lam, mu, kap, nu, 0.0, 1, 1};
  const auto top = step_between(lam, mu, model.hbar());
  const auto left = step_between(lam, kap, model.hbar());
  const double delta = (top && left && *top == *left) ? 1.0 : 0.0;
  return w11(model, sq) - delta;
}

cplx inversion_defect(const Model& model, const WeightVector& lam,
                      const WeightVector& mu, const WeightVector& kap,
                      const WeightVector& nu, cplx u) {
  const cplx h = model.hbar();
  const cplx c = model.crossing_c();
  cplx sum = 0.0;
  for (const Step& p : P1(lam.rank())) {
    const WeightVector eta = shifted(lam, p, h);
    sum += w11(model, FaceSquare{lam, eta, kap, nu, u, 1, 1}) *
           w11(model, FaceSquare{lam, mu, eta, nu, -u, 1, 1});
  }
  const auto top = step_between(lam, mu, h);
  const auto left = step_between(lam, kap, h);
  const double delta = (top && left && *top == *left) ? 1.0 : 0.0;
  const cplx cc = model.theta_checked(c);
  const cplx hh = model.theta_checked(h);
  const cplx factor = model.theta(c + u) * model.theta(c - u) *
                      model.theta(h + u) * model.theta(h - u) /
                      (cc * cc * hh * hh);
  return sum - delta * factor;
}

cplx identity_iii_defect(const Model& model, const WeightVector& lam,
                         const Step& p, const Step& q, cplx u) {
  const cplx h = model.hbar();
  const cplx c = model.crossing_c();
  const cplx lam_p = pairing(lam, p);
  const cplx lam_q = pairing(lam, q);

  cplx lhs = 0.0;
  for (const Step& r : P1(lam.rank())) {
    const cplx lam_r = pairing(lam, r);
    lhs += model.theta(lam_p + lam_r + h + c - u) *
           model.theta(lam_q + lam_r + h + c + u) /
           (model.theta_checked(lam_p + lam_r + h) *
            model.theta_checked(lam_q + lam_r + h)) *
           g_factor(model, lam, r);
  }

  cplx rhs = 0.0;
  const cplx lam_pq = lam_p + lam_q;
  if (p == q) {
    const cplx hh = model.theta_checked(h);
    const cplx denom = model.theta_checked(2.0 * lam_p + h);
    rhs += model.theta(c - u) * model.theta(c + u) *
           model.theta(2.0 * lam_p) * model.theta(2.0 * lam_q + 2.0 * h) /
           (hh * hh * denom * denom) / g_factor(model, lam, p);
  }
  const cplx uu = model.theta_checked(u);
  rhs += model.theta(c + u) * model.theta(2.0 * lam_q + h + u) *
         model.theta(lam_pq + h + c - u) /
         (uu * model.theta_checked(2.0 * lam_q + h) *
          model.theta_checked(lam_pq + h));
  rhs -= model.theta(c - u) * model.theta(2.0 * lam_p + h - u) *
         model.theta(lam_pq + h + c + u) /
         (uu * model.theta_checked(2.0 * lam_p + h) *
          model.theta_checked(lam_pq + h));
  return lhs - rhs;
}

cplx crossing_defect(const Model& model, const FaceSquare& sq) {
  const cplx c = model.crossing_c();
  const cplx lhs = w11(model, sq);
  const cplx ratio = crossing_g(model, sq.lam, sq.kap) /
                     crossing_g(model, sq.mu, sq.nu);
  const cplx rhs =
      ratio * w11(model, FaceSquare{sq.kap, sq.lam, sq.nu, sq.mu,
                                    c - sq.u, 1, 1});
  return lhs - rhs;
}

cplx reflection_defect(const Model& model, const FaceSquare& sq) {
  const cplx lhs = w11(model, sq);
  const cplx ratio = crossing_g(model, sq.lam, sq.kap) *
                     crossing_g(model, sq.kap, sq.nu) /
                     (crossing_g(model, sq.lam, sq.mu) *
                      crossing_g(model, sq.mu, sq.nu));
  const cplx rhs =
      ratio * w11(model, FaceSquare{sq.lam, sq.kap, sq.mu, sq.nu, sq.u, 1, 1});
  return lhs - rhs;
}

cplx ybe11_defect(const Model& model, const WeightVector& lam,
                  const WeightVector& mu, const WeightVector& nu,
                  const WeightVector& kap, const WeightVector& sig,
                  const WeightVector& rho, cplx u, cplx v) {
  const cplx h = model.hbar();
  cplx lhs = 0.0;
  for (const Step& p : P1(lam.rank())) {
    const WeightVector eta = shifted(rho, p, h);
    lhs += w11(model, FaceSquare{rho, eta, sig, kap, u - v, 1, 1}) *
           w11(model, FaceSquare{lam, mu, rho, eta, u, 1, 1}) *
           w11(model, FaceSquare{mu, nu, eta, kap, v, 1, 1});
  }
  cplx rhs = 0.0;
  for (const Step& p : P1(lam.rank())) {
    const WeightVector eta = shifted(lam, p, h);
    rhs += w11(model, FaceSquare{lam, eta, rho, sig, v, 1, 1}) *
           w11(model, FaceSquare{eta, nu, sig, kap, u, 1, 1}) *
           w11(model, FaceSquare{lam, mu, eta, nu, u - v, 1, 1});
  }
  return lhs - rhs;
}

}  // namespace ellface
