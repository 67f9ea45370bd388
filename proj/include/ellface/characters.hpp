#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "ellface/operators.hpp"
#include "ellface/rng.hpp"

namespace ellface {

// ---------------------------------------------------------------------------
// Lattice translation operators and the three-dimensional space of symmetric
// theta functions they fix.
//
//   (S_{tau b} f)(lam) = exp[2 pi i ((lam,b) + tau (b,b)/2)] f(lam + tau b)
//   (S_b f)(lam)       = f(lam + b)
//
// They compose exactly (S_{tau b} S_{tau g} = S_{tau(b+g)}) and satisfy the
// Heisenberg relation S_g S_{tau b} = e^{2 pi i (g,b)} S_{tau b} S_g.
// ---------------------------------------------------------------------------

enum class ShiftKind { tau_shift, plain_shift };

struct ShiftOperator {
  ShiftKind kind{ShiftKind::plain_shift};
  Step beta;  // integer weight vector
};

cplx apply_shift(const Model& model, const ShiftOperator& op,
                 const ScalarField& f, const WeightVector& lam);

// Integer lattices in the weight space, spanned by generator steps.
struct Lattice {
  std::vector<Step> basis;
};

Lattice coroot_lattice(int n = 2);    // Z 2e_1 + Z 2e_2
Lattice coweight_lattice(int n = 2);  // coroot lattice + Z (e_1 + e_2)

// Exact integer membership (rank 2 only).
bool in_lattice(const Lattice& lattice, const Step& v);

// [super : sub] as a ratio of basis determinants (rank 2 only).
long lattice_index(const Lattice& sub, const Lattice& super);

// Classical theta sum over a coset of the coroot lattice:
//   Theta_mu(lam) = sum_{g in Q + mu, |coords| <= cutoff}
//                     exp[pi i tau (g,g) + 2 pi i (g,lam)].
struct ThetaCharacter {
  Step mu;         // characteristic: 0, e_1, e_2 or e_1+e_2
  int cutoff{6};
};

cplx eval_character(const Model& model, const ThetaCharacter& chi,
                    const WeightVector& lam);

// The symmetrized characters {Theta_0, Theta_{e1} + Theta_{e2},
// Theta_{e1+e2}}: each is sign-and-permutation invariant and fixed by both
// shift actions of the coroot lattice.  Throws ConvergenceError when raising
// the cutoff by 2 moves probe values by more than 1e-12.
std::vector<ScalarField> thw_basis(const Model& model, int cutoff = 6);

// Smallest |[.]| over the factors cutting out the coefficient pole lines:
// [lam_p] for the four positive roots p and [lam_q + h] for the four
// two-part steps q.
double divisor_distance(const Model& model, const WeightVector& lam);

// Draws points coordinate-wise from a bounded box, rejecting any with
// divisor_distance <= margin.
std::vector<WeightVector> sample_away_from_divisors(const Model& model,
                                                    Rng& rng, int count,
                                                    double margin);

// Relative least-squares distance of g from span(basis), evaluated on the
// given points.  Writes the Gram condition number through *condition when
// non-null.  Throws PoleError if a point sits on a coefficient pole line.
double span_membership_residual(const Model& model,
                                const std::vector<ScalarField>& basis,
                                const ScalarField& g,
                                const std::vector<WeightVector>& pts,
                                double* condition = nullptr);

// Max over the basis of the residual of M~_d(basis element) against the
// basis span; ~0 certifies that the operators preserve the space.
double theorem2_membership_residual(const Model& model, int d, int cutoff = 6,
                                    int n_points = 12, double margin = 0.05,
                                    std::uint64_t seed = 0x7e0473f2u);

// Worse (larger modulus) of the two commutator values
// ([S_{tau beta}, M_d(u)] f)(lam) and ([S_beta, M_d(u)] f)(lam).
cplx lemma_SM_defect(const Model& model,
                     const std::shared_ptr<FusedWeightCache>& cache,
                     const Step& beta, int d, cplx u, const ScalarField& f,
                     const WeightVector& lam);

// Growth exponent of
//   ([lam_{p+q}-h]/[lam_{p+q}+h]) f(lam+p^+q^) + C_{p,q}(lam) f(lam)
// along a ray approaching the line lam_{p+q} = -h (distances 1e-2 -> 1e-4):
// ~0 when the two residues cancel, ~-1 when a simple pole survives.  The
// anchor supplies the transverse coordinates.
double pole_cancellation_check(const Model& model, const Step& p,
                               const Step& q, const ScalarField& f,
                               const WeightVector& anchor);

}  // namespace ellface
