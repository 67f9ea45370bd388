#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "ellface/operators.hpp"
#include "ellface/rng.hpp"

using namespace ellface;

namespace {

double rel_diff(cplx a, cplx b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

Model default_model() { return Model(ModelParams{}); }

WeightVector generic_lambda(Rng& rng, int n) {
  WeightVector lam(n);
  for (int j = 0; j < n; ++j) {
    lam.set_coord(j, rng.box(0.1, 0.6, -0.15, 0.15) +
                         cplx(0.25 * j, 0.1 * j));
  }
  return lam;
}

cplx safe_argument(const Model& model, Rng& rng, double margin = 1e-3) {
  for (int attempt = 0; attempt < 256; ++attempt) {
    const cplx u = rng.generic();
    if (safe_spectral_point(model, u, margin)) return u;
  }
  throw std::runtime_error("no safe spectral point found");
}

ScalarField random_trig(Rng& rng) {
  struct Wave {
    int a, b;
    cplx amp;
  };
  std::vector<Wave> waves;
  for (int k = 0; k < 3; ++k) {
    const int a = static_cast<int>(rng.index(5)) - 2;
    const int b = static_cast<int>(rng.index(5)) - 2;
    waves.push_back({a, b, rng.generic()});
  }
  return [waves](const WeightVector& lam) {
    cplx acc = 0.0;
    for (const auto& w : waves) {
      acc += w.amp * std::exp(cplx(0.0, 2.0 * M_PI) *
                              (static_cast<double>(w.a) * lam.coord(0) +
                               static_cast<double>(w.b) * lam.coord(1)));
    }
    return acc;
  };
}

const WeightVector kLambdaRef{cplx(0.31, 0.07), cplx(-0.22, 0.11)};

}  // namespace

TEST_CASE("difference operators apply and compose like their definitions") {
  const Model model = default_model();
  Rng rng(501);
  const WeightVector lam = generic_lambda(rng, 2);

  const DifferenceOperator zero;
  CHECK(apply(model, zero, [](const WeightVector&) { return cplx(1.0); },
              lam) == cplx(0.0));

  // constant function under the degree-1 normalized operator: plain sum
  const DifferenceOperator m1 = build_Mtilde(model, 1);
  const cplx h = model.hbar();
  cplx direct = 0.0;
  for (const Step& p : P1(2)) {
    cplx acc = 1.0;
    for (const Step& q : P1(2)) {
      if (q == p || q == -p) continue;
      acc *= model.theta(pairing(lam, p + q) - h) /
             model.theta(pairing(lam, p + q));
    }
    direct += acc;
  }
  CHECK(rel_diff(apply(model, m1,
                       [](const WeightVector&) { return cplx(1.0); }, lam),
                 direct) < 1e-14);

  // composition matches double application and is associative
  const DifferenceOperator m2 = build_Mtilde(model, 2);
  const ScalarField f = random_trig(rng);
  const ScalarField m2f = [&](const WeightVector& x) {
    return apply(model, m2, f, x);
  };
  const DifferenceOperator m12 = compose(model, m1, m2);
  CHECK(rel_diff(apply(model, m12, f, lam), apply(model, m1, m2f, lam)) <
        1e-13);
  const DifferenceOperator left = compose(model, compose(model, m1, m2), m1);
  const DifferenceOperator right = compose(model, m1, compose(model, m2, m1));
  CHECK(rel_diff(apply(model, left, f, lam), apply(model, right, f, lam)) <
        1e-13);

  CHECK(rel_diff(apply(model, scaled(cplx(0.0, 2.0), m1), f, lam),
                 cplx(0.0, 2.0) * apply(model, m1, f, lam)) < 1e-14);
}

TEST_CASE("normalized operators have the displayed shape and Weyl covariance") {
  const Model model = default_model();
  Rng rng(502);
  const DifferenceOperator m1 = build_Mtilde(model, 1);
  const DifferenceOperator m2 = build_Mtilde(model, 2);
  CHECK(m1.terms.size() == 4);
  CHECK(m2.terms.size() == 5);
  CHECK(m2.terms.count(Step(2)) == 1);

  const auto group = weyl_group(2);
  CHECK(group.size() == 8);
  for (int trial = 0; trial < 2; ++trial) {
    const WeightVector lam = generic_lambda(rng, 2);
    for (const auto& w : group) {
      const WeightVector wl = weyl_apply(w, lam);
      const SignedPermutation winv = weyl_inverse(w);
      for (const DifferenceOperator* op : {&m1, &m2}) {
        for (const auto& [t, coeff] : op->terms) {
          const Step back = weyl_apply(winv, t);
          REQUIRE(op->terms.count(back) == 1);
          CHECK(rel_diff(coeff(wl), op->terms.at(back)(lam)) < 1e-12);
        }
      }
    }
  }
}

TEST_CASE("spectral operators factor through the normalized ones") {
  const Model model = default_model();
  Rng rng(503);
  auto cache = std::make_shared<FusedWeightCache>();
  for (int trial = 0; trial < 6; ++trial) {
    const WeightVector lam = generic_lambda(rng, 2);
    const cplx u = safe_argument(model, rng);
    CHECK(theorem1ii_defect(model, cache, 1, lam, u) < 1e-11);
    CHECK(theorem1ii_defect(model, cache, 2, lam, u) < 1e-11);
  }

  // the degree-2 operator vanishes identically at u = h
  const DifferenceOperator m2h = build_Md(model, cache, 2, model.hbar());
  const WeightVector lam = generic_lambda(rng, 2);
  for (const auto& [t, coeff] : m2h.terms) {
    CHECK(std::abs(coeff(lam)) < 1e-10);
  }
}

TEST_CASE("spectral safety guard rejects the factor zeros") {
  const Model model = default_model();
  CHECK_FALSE(safe_spectral_point(model, 0.0, 1e-3));
  CHECK_FALSE(safe_spectral_point(model, -3.0 * model.hbar(), 1e-3));
  CHECK_FALSE(safe_spectral_point(model, model.hbar(), 1e-3));
  CHECK(safe_spectral_point(model, cplx(0.17, -0.04), 1e-3));
}

TEST_CASE("total shift sets enumerate the step sums") {
  CHECK(shift_sums(1, 1, 2).size() == 9);
  CHECK(shift_sums(1, 2, 2).size() == 12);
  CHECK(shift_sums(2, 1, 2).size() == 12);
  CHECK(shift_sums(2, 2, 2).size() == 13);
  int pairs = 0;
  for (const Step& t : shift_sums(2, 2, 2)) {
    for (const Step& p : Pd(2, 2)) {
      if (in_Pd(2, t - p)) ++pairs;
    }
  }
  CHECK(pairs == 25);
}

TEST_CASE("trace matrices obey the commutation and intertwining identities") {
  const Model model = default_model();
  Rng rng(504);
  const struct {
    int d, dp;
  } combos[] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
  for (const auto& c : combos) {
    FusedWeightCache cache;
    const WeightVector lam = generic_lambda(rng, 2);
    const cplx u = safe_argument(model, rng);
    const cplx v = safe_argument(model, rng);
    for (const Step& t : shift_sums(c.d, c.dp, 2)) {
      const cplx defect =
          commutativity_trace_defect(model, cache, c.d, c.dp, lam, t, u, v);
      const TraceMatrices m =
          trace_matrices(model, cache, c.d, c.dp, lam, t, u, v);
      const double scale =
          std::max(std::abs(m.A.trace()), std::abs(m.B.trace()));
      CHECK(std::abs(defect) / (1.0 + scale) < 1e-10);

      const IntertwiningReport rep =
          intertwining_defect(model, cache, c.d, c.dp, lam, t, u, v);
      CHECK(rep.max_abs / (1.0 + rep.scale) < 1e-9);
      CHECK(rep.min_singular_value > 1e-6);
    }
  }
}

TEST_CASE("equal-degree equal-argument trace matrices coincide entrywise") {
  const Model model = default_model();
  Rng rng(505);
  FusedWeightCache cache;
  const WeightVector lam = generic_lambda(rng, 2);
  const cplx u = safe_argument(model, rng);
  for (const Step& t : shift_sums(2, 2, 2)) {
    const TraceMatrices m = trace_matrices(model, cache, 2, 2, lam, t, u, u);
    CHECK((m.A - m.B).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("composed spectral operators reproduce the trace coefficients") {
  const Model model = default_model();
  Rng rng(506);
  auto cache = std::make_shared<FusedWeightCache>();
  const WeightVector lam = generic_lambda(rng, 2);
  const cplx u = safe_argument(model, rng);
  const cplx v = safe_argument(model, rng);
  const DifferenceOperator prod = compose(
      model, build_Md(model, cache, 1, u), build_Md(model, cache, 2, v));
  for (const auto& [t, coeff] : prod.terms) {
    const TraceMatrices m = trace_matrices(model, *cache, 1, 2, lam, t, u, v);
    CHECK(rel_diff(coeff(lam), m.A.trace()) < 1e-11);
  }
}

TEST_CASE("spectral operators commute on sample functions") {
  const Model model = default_model();
  Rng rng(507);
  auto cache = std::make_shared<FusedWeightCache>();
  const cplx u = safe_argument(model, rng);
  const cplx v = safe_argument(model, rng);
  const DifferenceOperator m1u = build_Md(model, cache, 1, u);
  const DifferenceOperator m2v = build_Md(model, cache, 2, v);
  const DifferenceOperator ab = compose(model, m1u, m2v);
  const DifferenceOperator ba = compose(model, m2v, m1u);
  for (int trial = 0; trial < 4; ++trial) {
    const WeightVector lam = generic_lambda(rng, 2);
    const ScalarField f = random_trig(rng);
    const cplx lhs = apply(model, ab, f, lam);
    const cplx rhs = apply(model, ba, f, lam);
    CHECK(rel_diff(lhs, rhs) < 1e-10);
  }

  // the normalized operators commute as well
  const DifferenceOperator m1 = build_Mtilde(model, 1);
  const DifferenceOperator m2 = build_Mtilde(model, 2);
  const DifferenceOperator tt = compose(model, m1, m2);
  const DifferenceOperator uu = compose(model, m2, m1);
  const WeightVector lam = generic_lambda(rng, 2);
  const ScalarField f = random_trig(rng);
  CHECK(rel_diff(apply(model, tt, f, lam), apply(model, uu, f, lam)) < 1e-10);
}

TEST_CASE("coefficient evaluation reports poles") {
  const Model model = default_model();
  const DifferenceOperator m2 = build_Mtilde(model, 2);
  WeightVector lam(2);
  lam.set_coord(0, 0.0);  // [2 lam_{e_1}] = [0] = 0 in a denominator
  lam.set_coord(1, cplx(0.4, 0.12));
  CHECK_THROWS_AS(m2.terms.at(Step(2))(lam), PoleError);
}
