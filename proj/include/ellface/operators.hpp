#pragma once

#include <functional>
#include <map>
#include <memory>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ellface/fusion.hpp"

namespace ellface {

using ScalarField = std::function<cplx(const WeightVector&)>;

// Finite difference operator  (Op f)(lam) = sum_t coeff_t(lam) f(lam + 2h t).
// Coefficients are closures evaluated on demand; the operator itself carries
// no spectral data beyond what the closures capture.
struct DifferenceOperator {
  std::map<Step, ScalarField> terms;
};

cplx apply(const Model& model, const DifferenceOperator& op,
           const ScalarField& f, const WeightVector& lam);

// (A B)_t(lam) = sum_{r+s=t} A_r(lam) B_s(lam + 2h r).
DifferenceOperator compose(const Model& model, const DifferenceOperator& a,
                           const DifferenceOperator& b);

DifferenceOperator scaled(cplx factor, const DifferenceOperator& a);

// Zero-shift summand of the normalized degree-2 operator:
//   C_{p,q} = ([2h]/[6h]) ([2lam_p+2h]/[2lam_p]) ([2lam_q+2h]/[2lam_q])
//             ([lam_{p+q}-5h]/[lam_{p+q}+h]) ([lam_{p+q}+2h]/[lam_{p+q}]).
cplx c_pq(const Model& model, const WeightVector& lam, const Step& p,
          const Step& q);

// The u-independent normalized operators:
//   Mtilde_1 = sum_{p in P_1} prod_{q != +-p} ([lam_{p+q}-h]/[lam_{p+q}]) T_p
//   Mtilde_2 = sum_{p=+-e_1, q=+-e_2}
//                ( ([lam_{p+q}-h]/[lam_{p+q}+h]) T_{p+q} + C_{p,q}(lam) ).
DifferenceOperator build_Mtilde(const Model& model, int d);

// Spectral operators from the composed diagonal fused weights:
//   M_d(u) = sum_{p in P_d} W_{d2}(lam, lam+p^; lam, lam+p^ | u) T_p,
// with the degree-(d,2) weights evaluated through the staged construction.
DifferenceOperator build_Md(const Model& model,
                            const std::shared_ptr<FusedWeightCache>& cache,
                            int d, cplx u);

// Scalar factors of the factorization M_1(u) = F(u) Mtilde_1 and
// M_2(u) = G(u) (Mtilde_2 - H(u)); G is the degree-(2,2) common factor.
cplx scalar_F(const Model& model, cplx u);
cplx scalar_G(const Model& model, cplx u);
cplx scalar_H(const Model& model, cplx u);

// Max over shifts t of the factorization defect
//   |M_d(u)_t(lam) - expected_t(lam)| / (1 + max_t |expected_t(lam)|).
double theorem1ii_defect(const Model& model,
                         const std::shared_ptr<FusedWeightCache>& cache, int d,
                         const WeightVector& lam, cplx u);

// True when every theta factor entering F, G, H stays at least `margin`
// away from zero, keeping the factorization and its poles well conditioned.
bool safe_spectral_point(const Model& model, cplx u, double margin);

// All distinct total shifts p + q with p in P_d, q in P_dp.
std::vector<Step> shift_sums(int d, int dp, int n);

// The three matrices of the trace argument, indexed by
// I_t = {(p,q) in P_d x P_dp : p + q = t}:
//   A_t^{(p,q)}_{(r,s)} = W_{d2}(lam, lam+p^; lam, lam+r^ | u)
//                         W_{dp2}(lam+p^, lam+t^; lam+r^, lam+t^ | v)
//   B_t^{(p,q)}_{(r,s)} = W_{dp2}(lam, lam+q^; lam, lam+s^ | v)
//                         W_{d2}(lam+q^, lam+t^; lam+s^, lam+t^ | u)
//   W_t^{(p,q)}_{(r,s)} = W_{ddp}(lam, lam+p^; lam+s^, lam+t^ | u-v).
// Matrices over the split set {(p,q) : p + q = t}.  Each axis is enumerated
// by the intermediate vertex of the two-hop path: `index` lists (p, t-p) in
// step order (the vertex after the degree-d hop, used by A and by W's
// columns), `index_b` lists (t-q, q) (the vertex after the degree-dp hop,
// used by B and by W's rows).  Columns carry the free pair, so W A = B W.
struct TraceMatrices {
  std::vector<std::pair<Step, Step>> index;
  std::vector<std::pair<Step, Step>> index_b;
  Eigen::MatrixXcd A, B, W;
};

TraceMatrices trace_matrices(const Model& model, FusedWeightCache& cache,
                             int d, int dp, const WeightVector& lam,
                             const Step& t, cplx u, cplx v);

// tr A_t - tr B_t; vanishing for every t makes the operators commute.
cplx commutativity_trace_defect(const Model& model, FusedWeightCache& cache,
                                int d, int dp, const WeightVector& lam,
                                const Step& t, cplx u, cplx v);

struct IntertwiningReport {
  Eigen::MatrixXcd defect;          // W_t A_t - B_t W_t
  double max_abs = 0.0;             // largest |entry| of the defect
  double scale = 0.0;               // largest |entry| of the two products
  double min_singular_value = 0.0;  // smallest singular value of W_t
};

IntertwiningReport intertwining_defect(const Model& model,
                                       FusedWeightCache& cache, int d, int dp,
                                       const WeightVector& lam, const Step& t,
                                       cplx u, cplx v);

// Hyperoctahedral (signed permutation) action: w e_j = sign[j] e_{perm[j]}.
struct SignedPermutation {
  std::vector<int> perm;
  std::vector<int> sign;
};

WeightVector weyl_apply(const SignedPermutation& w, const WeightVector& lam);
Step weyl_apply(const SignedPermutation& w, const Step& s);
SignedPermutation weyl_inverse(const SignedPermutation& w);
std::vector<SignedPermutation> weyl_group(int n);

}  // namespace ellface
