#pragma once

#include <cstdint>
#include <map>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "ellface/theta.hpp"
#include "ellface/weights.hpp"

namespace ellface {

// ---------------------------------------------------------------------------
// Step chains.
//
// A chain over a start weight lam holds one degree-1 step per tensor slot
// together with a spectral label per slot.  A PathVector is a finite linear
// combination of step sequences; all terms share the start point and the
// label vector.  Exchange operators act on two adjacent slots and swap the
// two labels, so the labels track where each original slot ended up.
// ---------------------------------------------------------------------------

using StepPath = std::vector<Step>;

struct PathVector {
  WeightVector start;
  std::vector<cplx> labels;
  std::map<StepPath, cplx> terms;

  int slots() const { return static_cast<int>(labels.size()); }
};

PathVector& operator+=(PathVector& a, const PathVector& b);
PathVector operator*(cplx scale, PathVector v);

// Point reached from start after the first k steps of the path.
WeightVector path_point(const WeightVector& start, const StepPath& path, int k,
                        cplx hbar);

// Endpoint shared by every term; ConfigError if the terms disagree.
WeightVector common_endpoint(const PathVector& v, cplx hbar);

// Chain concatenation; b.start must be the common endpoint of a.
PathVector tensor_append(const PathVector& a, const PathVector& b, cplx hbar);

// Exchange operator on slots (pos, pos+1) at spectral argument arg: every
// segment (s_a, s_b) is replaced by the sum over degree-1 steps l of the
// degree-(1,1) weight of the square with top s_a, left l, right s_b times
// the segment (l, s_a+s_b-l).
PathVector apply_w11_op(const Model& model, int pos, cplx arg,
                        const PathVector& vec);

// Index of a degree-1 step within P1(n).
int p1_index(int n, const Step& s);

// ---------------------------------------------------------------------------
// Fusion.
//
// The degree-2 slot at spectral parameter u is realized inside a pair of
// degree-1 slots with labels (u, u-h).  Its basis vectors are
//   fbar_{lam}^{lam+p^+q^}(u) = [lam_{p-q}+h] (p,q) + [lam_{q-p}+h] (q,p)
// for a two-part step p+q, and
//   fbar_{lam}^{lam}(u)       = sum_{p} [2 lam_p + 2h] (p,-p)
// for the zero step.  The projector onto their span is the exchange
// operator specialized to argument -h.  Rank 2 only.
// ---------------------------------------------------------------------------

PathVector fused_basis_vector(const Model& model, const WeightVector& lam,
                              const Step& r, cplx u);

// Matrix of the exchange operator at argument -h on the (2n)^2-dimensional
// chain block at lam with labels (u-h, u); the path (a, b) is indexed as
// p1_index(a) * 2n + p1_index(b), columns input, rows output.
Eigen::MatrixXcd fusion_projector(const Model& model, const WeightVector& lam,
                                  cplx u);

// Number of singular values above rel_tol times the largest one.
int numeric_rank(const Eigen::MatrixXcd& m, double rel_tol = 1e-8);

// ---------------------------------------------------------------------------
// Fused weights.
//
// Squares of degree (2,1), (1,2), (2,2) get their values two ways: from the
// closed-form list of patterns with the common factor reinstated, and from
// the operator construction (stage the exchange operators over the split
// slots, then expand the image in the target chain basis).  Both return the
// same normalization.
// ---------------------------------------------------------------------------

// Common factors multiplying the listed pattern values.
cplx common_factor21(const Model& model, cplx u);  // [u-h][u+h][u+3h]/([-3h]^2[h])
cplx common_factor12(const Model& model, cplx u);  // [u][u+2h][u+4h]/([-3h]^2[h])
cplx common_factor22(const Model& model, cplx u);  // [u-h][u]^2[u+h][u+2h][u+3h]^2[u+4h]/([-3h]^4[h]^4)

// Closed-form value of a listed fused square pattern, times the common
// factor for its degree.  Returns 0 on non-admissible squares.  Throws
// UnlistedPatternError for admissible degree-(2,2) squares other than the
// two listed ones, ConfigError for degree (1,1).
cplx fused_weight_explicit(const Model& model, const FaceSquare& sq);

// One row of a fused exchange operator: target-basis coefficients over the
// admissible left steps for fixed (degrees, lam, top, right, argument),
// plus the relative least-squares residual of the expansion.
struct FusedRow {
  std::map<Step, cplx> coeffs;
  double residual{0.0};
};

// Memo for composed rows.  Keys are bit-exact inputs; use one cache per
// model instance.
class FusedWeightCache {
 public:
  const FusedRow& row(const Model& model, int d, int dp,
                      const WeightVector& lam, const Step& top,
                      const Step& right, cplx w);

  std::size_t size() const { return rows_.size(); }
  void clear() { rows_.clear(); }

 private:
  using Key = std::tuple<int, int, std::uint64_t, std::uint64_t, std::uint64_t,
                         std::uint64_t, Step, Step, std::uint64_t, std::uint64_t>;
  std::map<Key, FusedRow> rows_;
};

// Fused weight from the operator construction.  Returns 0 on non-admissible
// squares; ProjectionError if the image fails to lie in the span of the
// target basis (relative residual above 1e-8).
cplx fused_weight_composed(const Model& model, FusedWeightCache& cache,
                          const FaceSquare& sq);

// Relative expansion residual for the given row inputs; small residuals
// certify that the staged operators preserve the fused subspace.
double preserve_residual(const Model& model, FusedWeightCache& cache, int d,
                         int dp, const WeightVector& lam, const Step& top,
                         const Step& right, cplx w);

// Degree dispatch: (1,1) squares go to w11, all others to the composed
// construction.
cplx face_weight(const Model& model, FusedWeightCache& cache,
                 const FaceSquare& sq);

// LHS - RHS of the coefficient identity behind the all-zero degree-(2,2)
// value (the scalar part of the degree-2 difference operator):
//   [u+h][u+2h]/([2h][-3h]) prod_{q != +-p} ([lam_{p+q}-h][lam_{p+q}+2h] / ([lam_{p+q}][lam_{p+q}+h]))
//   + [h]/[-3h] sum_{q != +-p} ([2 lam_q-2h]/[2 lam_q])
//         [lam_{p+q}+2h+u][lam_{p+q}-h-u][lam_{p-q}-h] / ([lam_{p+q}][lam_{p+q}-h][lam_{p-q}+h])
//   - [u][u+3h]/([6h][-3h]) sum_{r,s} ([2 lam_r+2h][2 lam_s+2h]/([2 lam_r][2 lam_s]))
//         [lam_{r+s}-5h][lam_{r+s}+2h] / ([lam_{r+s}][lam_{r+s}+h])
//   + [u+6h][u-3h]/([6h][-3h]),
// where r runs over +-e_1 and s over +-e_2.
cplx zero_deg_lemma_defect(const Model& model, const WeightVector& lam,
                           const Step& p, cplx u);

// Hexagon defect of the star-triangle relation for degrees (d, dp, dpp):
//   sum_eta W_{d,dp}(rho,eta;sig,kap|u-v) W_{d,dpp}(lam,mu;rho,eta|u)
//           W_{dp,dpp}(mu,nu;eta,kap|v)
// - sum_eta W_{dp,dpp}(lam,eta;rho,sig|v) W_{d,dpp}(eta,nu;sig,kap|u)
//           W_{d,dp}(lam,mu;eta,nu|u-v),
// with mu = lam+s1^, nu = mu+s2^, rho = lam+s3^, sig = rho+s4^,
// kap = sig+s5^ = nu+s6^; eta runs over rho+P_d and lam+P_dp hat-steps.
cplx ybe_mixed_defect(const Model& model, FusedWeightCache& cache, int d,
                      int dp, int dpp, const WeightVector& lam, const Step& s1,
                      const Step& s2, const Step& s3, const Step& s4,
                      const Step& s5, const Step& s6, cplx u, cplx v);

}  // namespace ellface
