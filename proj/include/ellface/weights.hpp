#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ellface/theta.hpp"

namespace ellface {

// ---------------------------------------------------------------------------
// Weight-space combinatorics.
//
// Weights live in the span of an orthogonal-ish basis e_1..e_n with
// (e_j, e_k) = delta_jk / 2.  Lattice steps are integer vectors in that
// basis; a step p of degree d has d nonzero entries (or none, for the
// degree-2 zero step).  The hat map sends a step p to 2*hbar*p.
// ---------------------------------------------------------------------------

class Step {
 public:
  static constexpr int kMaxRank = 6;

  Step() = default;
  explicit Step(int n) : n_(static_cast<std::int8_t>(n)) {}

  // sign * e_j (0-based j).
  static Step unit(int n, int j, int sign);

  int rank() const { return n_; }
  int coord(int j) const { return c_[j]; }
  bool is_zero() const;
  int norm1() const;

  Step operator-() const;
  Step operator+(const Step& o) const;
  Step operator-(const Step& o) const;

  friend bool operator==(const Step&, const Step&) = default;
  friend auto operator<=>(const Step&, const Step&) = default;

 private:
  std::array<std::int8_t, kMaxRank> c_{};
  std::int8_t n_{0};
};

std::string to_string(const Step& s);

// All degree-1 steps +-e_j, ordered e_1, ..., e_n, -e_n, ..., -e_1.  This
// ordering doubles as the path order used by the similarity transform.
const std::vector<Step>& P1(int n);

// Degree-2 steps for rank 2: e_1+e_2, e_1-e_2, -e_1+e_2, -e_1-e_2, 0.
const std::vector<Step>& P2(int n);

const std::vector<Step>& Pd(int d, int n);

bool in_P1(const Step& s);
bool in_P2(const Step& s);
bool in_Pd(int d, const Step& s);

class WeightVector {
 public:
  WeightVector() = default;
  explicit WeightVector(int n) : n_(n) {}
  WeightVector(std::initializer_list<cplx> coords);

  int rank() const { return n_; }
  cplx coord(int j) const { return x_[j]; }
  void set_coord(int j, cplx v) { x_[j] = v; }

 private:
  std::array<cplx, Step::kMaxRank> x_{};
  int n_{0};
};

std::string to_string(const WeightVector& v);

// (a, b) = 1/2 sum_j a_j b_j.
cplx pairing(const WeightVector& a, const WeightVector& b);
cplx pairing(const WeightVector& lam, const Step& p);
cplx pairing(const Step& a, const Step& b);

// lam + 2 hbar p.
WeightVector shifted(const WeightVector& lam, const Step& p, cplx hbar);

// lam + scale * beta (integer beta); used by the lattice shift operators.
WeightVector translated(const WeightVector& lam, const Step& beta, cplx scale);

// Recovers p with mu = lam + 2 hbar p, snapping to integer coordinates;
// nullopt when mu - lam is not an integer multiple of 2 hbar in every slot.
std::optional<Step> step_between(const WeightVector& lam,
                                 const WeightVector& mu, cplx hbar);

// ---------------------------------------------------------------------------
// Face squares.
//
// A square W(lam, mu; kap, nu | u) has corners
//     lam  mu
//     kap  nu
// with top step mu-lam and bottom step nu-kap of degree d, left step
// kap-lam and right step nu-mu of degree dp.  It is admissible when all
// four steps exist and have the right degree; weights vanish otherwise.
// ---------------------------------------------------------------------------

struct FaceSquare {
  WeightVector lam, mu, kap, nu;
  cplx u{};
  int d{1};
  int dp{1};
};

struct SquareSteps {
  Step top, left, right, bottom;
};

std::optional<SquareSteps> square_steps(const FaceSquare& sq, cplx hbar);

// Builds the square with given top/left/right steps; the bottom step is
// determined by closure.
FaceSquare square_from_steps(const WeightVector& lam, const Step& top,
                             const Step& left, const Step& right, cplx u,
                             cplx hbar, int d = 1, int dp = 1);

// Step patterns of an admissible degree-(1,1) square, classified by the
// shape of the two paths (top,right) and (left,bottom):
//   Straight        all four steps equal
//   BentDiagonal    top = left = p, right = bottom = q, q != +-p
//   Exchange        top = bottom = q, left = right = p, q != +-p
//   ReturnDiagonal  top = left = p, right = bottom = -p
//   ReturnPair      top = q, left = p, right = -q, bottom = -p, p != q
enum class Pattern11 {
  kNone,
  kStraight,
  kBentDiagonal,
  kExchange,
  kReturnDiagonal,
  kReturnPair,
};

Pattern11 classify11(const SquareSteps& s);

// Boltzmann weight of a degree-(1,1) square; 0 on non-admissible squares.
cplx w11(const Model& model, const FaceSquare& sq);

// G_{lam p} = -([2 lam_p + 2h] / [2 lam_p]) prod_{r != +-p} [lam_{p+r}+h]/[lam_{p+r}].
cplx g_factor(const Model& model, const WeightVector& lam, const Step& p);

// g(lam, mu) = [2 mu_p] prod_{q != +-p} [mu_{p+q}] for mu = lam + 2 hbar p.
// Throws AdmissibilityError when mu - lam is not a degree-1 hat step.
cplx crossing_g(const Model& model, const WeightVector& lam,
                const WeightVector& mu);

// w11 at u = 0 minus delta_{mu kap}.
cplx initial_defect(const Model& model, const WeightVector& lam,
                    const WeightVector& mu, const WeightVector& kap,
                    const WeightVector& nu);

// sum_eta W(lam,eta;kap,nu|u) W(lam,mu;eta,nu|-u)
//   - delta_{mu kap} [c+u][c-u][h+u][h-u] / ([c]^2 [h]^2).
cplx inversion_defect(const Model& model, const WeightVector& lam,
                      const WeightVector& mu, const WeightVector& kap,
                      const WeightVector& nu, cplx u);

// Defect of the one-variable summation identity behind the inversion
// relation, for degree-1 steps p, q.
cplx identity_iii_defect(const Model& model, const WeightVector& lam,
                         const Step& p, const Step& q, cplx u);

// W(lam,mu;kap,nu|u) - (g(lam,kap)/g(mu,nu)) W(kap,lam;nu,mu|c-u).
cplx crossing_defect(const Model& model, const FaceSquare& sq);

// W(lam,mu;kap,nu|u)
//   - (g(lam,kap) g(kap,nu) / (g(lam,mu) g(mu,nu))) W(lam,kap;mu,nu|u).
cplx reflection_defect(const Model& model, const FaceSquare& sq);

// Hexagon defect of the star-triangle relation for degree (1,1,1):
//   sum_eta W(rho,eta;sig,kap|u-v) W(lam,mu;rho,eta|u) W(mu,nu;eta,kap|v)
// - sum_eta W(lam,eta;rho,sig|v) W(eta,nu;sig,kap|u) W(lam,mu;eta,nu|u-v).
cplx ybe11_defect(const Model& model, const WeightVector& lam,
                  const WeightVector& mu, const WeightVector& nu,
                  const WeightVector& kap, const WeightVector& sig,
                  const WeightVector& rho, cplx u, cplx v);

}  // namespace ellface
