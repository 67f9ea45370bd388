#include <doctest.h>

#include <cmath>
#include <map>

#include "ellface/rng.hpp"
#include "ellface/weights.hpp"

using namespace ellface;

namespace {

double rel_diff(cplx a, cplx b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

Model default_model() { return Model(ModelParams{}); }

Model rank3_model() {
  ModelParams params;
  params.rank_n = 3;
  return Model(params);
}

WeightVector generic_lambda(Rng& rng, int n) {
  WeightVector lam(n);
  for (int j = 0; j < n; ++j) {
    lam.set_coord(j, rng.box(0.1, 0.6, -0.15, 0.15) +
                         cplx(0.25 * j, 0.1 * j));
  }
  return lam;
}

const WeightVector kLambdaRef{cplx(0.31, 0.07), cplx(-0.22, 0.11)};
const cplx kURef{0.17, -0.04};

}  // namespace

TEST_CASE("step sets have the expected cardinality and order") {
  const auto& p1 = P1(2);
  REQUIRE(p1.size() == 4);
  CHECK(p1[0] == Step::unit(2, 0, +1));
  CHECK(p1[1] == Step::unit(2, 1, +1));
  CHECK(p1[2] == Step::unit(2, 1, -1));
  CHECK(p1[3] == Step::unit(2, 0, -1));
  CHECK(P1(3).size() == 6);
  const auto& p2 = P2(2);
  REQUIRE(p2.size() == 5);
  CHECK(p2[4].is_zero());
  for (const Step& s : p1) CHECK(in_P1(s));
  for (const Step& s : p2) CHECK(in_P2(s));
  CHECK_FALSE(in_P1(p2[0]));
  CHECK_FALSE(in_P2(p1[0]));
  CHECK_THROWS_AS(P2(3), ConfigError);
}

TEST_CASE("pairing realizes the half-integer inner product") {
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < 2; ++k) {
      const cplx val =
          pairing(Step::unit(2, j, +1), Step::unit(2, k, +1));
      CHECK(val == (j == k ? cplx(0.5) : cplx(0.0)));
    }
  }
  Rng rng(31);
  const WeightVector lam = generic_lambda(rng, 2);
  const Step p = Step::unit(2, 0, +1);
  const Step q = Step::unit(2, 1, -1);
  // additivity in the step argument
  CHECK(rel_diff(pairing(lam, p + q), pairing(lam, p) + pairing(lam, q)) <
        1e-15);
}

TEST_CASE("hat shifts round-trip through step recovery") {
  const Model model = default_model();
  Rng rng(37);
  const WeightVector lam = generic_lambda(rng, 2);
  for (const Step& p : P1(2)) {
    const WeightVector mu = shifted(lam, p, model.hbar());
    const auto back = step_between(lam, mu, model.hbar());
    REQUIRE(back.has_value());
    CHECK(*back == p);
  }
  for (const Step& t : P2(2)) {
    const WeightVector mu = shifted(lam, t, model.hbar());
    const auto back = step_between(lam, mu, model.hbar());
    REQUIRE(back.has_value());
    CHECK(*back == t);
  }
  WeightVector off = lam;
  off.set_coord(0, lam.coord(0) + 0.3);
  CHECK_FALSE(step_between(lam, off, model.hbar()).has_value());
}

TEST_CASE("diagonal weight values match frozen high-precision references") {
  const Model model = default_model();
  const cplx h = model.hbar();
  const Step e1 = Step::unit(2, 0, +1);
  const Step e2 = Step::unit(2, 1, +1);

  // top = left = e1, right = bottom = -e1 (the diagonal return pattern)
  const FaceSquare sq_return =
      square_from_steps(kLambdaRef, e1, e1, -e1, kURef, h);
  CHECK(rel_diff(w11(model, sq_return),
                 cplx(0.6942511937613953, 0.63341896155037472)) < 1e-13);

  // top = left = e1, right = bottom = e2 (the bent diagonal pattern)
  const FaceSquare sq_bent =
      square_from_steps(kLambdaRef, e1, e1, e2, kURef, h);
  CHECK(rel_diff(w11(model, sq_bent),
                 cplx(0.4120793425287632, 0.018311949612298298)) < 1e-13);
}

TEST_CASE("weights at u = 0 reduce to the identity square") {
  const Model model = default_model();
  const cplx h = model.hbar();
  const Step e1 = Step::unit(2, 0, +1);
  const Step e2 = Step::unit(2, 1, +1);
  Rng rng(41);
  const WeightVector lam = generic_lambda(rng, 2);

  const FaceSquare straight = square_from_steps(lam, e1, e1, e1, 0.0, h);
  CHECK(rel_diff(w11(model, straight), 1.0) < 1e-14);
  const FaceSquare exchange = square_from_steps(lam, e1, e2, e2, 0.0, h);
  CHECK(std::abs(w11(model, exchange)) < 1e-14);

  // full delta check over every admissible square
  for (const Step& t : P1(2)) {
    for (const Step& l : P1(2)) {
      for (const Step& r : P1(2)) {
        const FaceSquare sq = square_from_steps(lam, t, l, r, 0.0, h);
        const auto steps = square_steps(sq, h);
        if (!steps || classify11(*steps) == Pattern11::kNone) continue;
        CHECK(std::abs(initial_defect(model, sq.lam, sq.mu, sq.kap, sq.nu)) <
              1e-13);
      }
    }
  }
}

TEST_CASE("non-admissible squares carry weight exactly zero") {
  const Model model = default_model();
  const cplx h = model.hbar();
  Rng rng(43);
  const WeightVector lam = generic_lambda(rng, 2);

  std::map<Pattern11, int> counts;
  int admissible = 0;
  for (const Step& t : P1(2)) {
    for (const Step& l : P1(2)) {
      for (const Step& r : P1(2)) {
        const FaceSquare sq = square_from_steps(lam, t, l, r, 0.3, h);
        const Step claimed_bottom = t + r - l;
        if (in_P1(claimed_bottom)) {
          ++admissible;
          const auto steps = square_steps(sq, h);
          REQUIRE(steps.has_value());
          const Pattern11 pattern = classify11(*steps);
          CHECK(pattern != Pattern11::kNone);
          ++counts[pattern];
        } else {
          CHECK(w11(model, sq) == cplx(0.0));
        }
      }
    }
  }
  CHECK(admissible == 36);
  CHECK(counts[Pattern11::kStraight] == 4);
  CHECK(counts[Pattern11::kBentDiagonal] == 8);
  CHECK(counts[Pattern11::kExchange] == 8);
  CHECK(counts[Pattern11::kReturnDiagonal] == 4);
  CHECK(counts[Pattern11::kReturnPair] == 12);

  // corners off the weight lattice entirely
  FaceSquare off = square_from_steps(lam, P1(2)[0], P1(2)[0], P1(2)[0], 0.3, h);
  off.nu.set_coord(1, off.nu.coord(1) + 0.17);
  CHECK(w11(model, off) == cplx(0.0));
}

TEST_CASE("inversion relation closes over the internal sum") {
  for (int n : {2, 3}) {
    const Model model = n == 2 ? default_model() : rank3_model();
    const cplx h = model.hbar();
    Rng rng(47 + n);
    for (int k = 0; k < 10; ++k) {
      const WeightVector lam = generic_lambda(rng, n);
      const cplx u = rng.generic();
      for (const Step& p : P1(n)) {
        for (const Step& q : P1(n)) {
          for (const Step& r : P1(n)) {
            if (!in_P1(p + r - q)) continue;
            const WeightVector mu = shifted(lam, p, h);
            const WeightVector kap = shifted(lam, q, h);
            const WeightVector nu = shifted(mu, r, h);
            CHECK(std::abs(inversion_defect(model, lam, mu, kap, nu, u)) <
                  1e-10);
          }
        }
      }
    }
  }
}

TEST_CASE("the internal summation identity holds for every step pair") {
  for (int n : {2, 3}) {
    const Model model = n == 2 ? default_model() : rank3_model();
    Rng rng(53 + n);
    for (int k = 0; k < (n == 2 ? 20 : 6); ++k) {
      const WeightVector lam = generic_lambda(rng, n);
      const cplx u = rng.generic();
      if (std::abs(model.theta(u)) < 5e-2) continue;
      for (const Step& p : P1(n)) {
        for (const Step& q : P1(n)) {
          CHECK(std::abs(identity_iii_defect(model, lam, p, q, u)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("crossing symmetry relates u and c-u across the diagonal") {
  const Model model = default_model();
  const cplx h = model.hbar();
  Rng rng(59);
  for (int k = 0; k < 10; ++k) {
    const WeightVector lam = generic_lambda(rng, 2);
    const cplx u = rng.generic();
    for (const Step& t : P1(2)) {
      for (const Step& l : P1(2)) {
        for (const Step& r : P1(2)) {
          if (!in_P1(t + r - l)) continue;
          const FaceSquare sq = square_from_steps(lam, t, l, r, u, h);
          CHECK(std::abs(crossing_defect(model, sq)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("reflection symmetry relates a square to its transpose") {
  const Model model = default_model();
  const cplx h = model.hbar();
  Rng rng(61);
  for (int k = 0; k < 10; ++k) {
    const WeightVector lam = generic_lambda(rng, 2);
    const cplx u = rng.generic();
    for (const Step& t : P1(2)) {
      for (const Step& l : P1(2)) {
        for (const Step& r : P1(2)) {
          if (!in_P1(t + r - l)) continue;
          const FaceSquare sq = square_from_steps(lam, t, l, r, u, h);
          CHECK(std::abs(reflection_defect(model, sq)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("star-triangle relation holds on every admissible hexagon") {
  const Model model = default_model();
  const cplx h = model.hbar();
  Rng rng(67);
  int hexagons = 0;
  for (int k = 0; k < 5; ++k) {
    const WeightVector lam = generic_lambda(rng, 2);
    const cplx u = rng.generic();
    const cplx v = rng.generic();
    for (const Step& s1 : P1(2)) {
      const WeightVector mu = shifted(lam, s1, h);
      for (const Step& s2 : P1(2)) {
        const WeightVector nu = shifted(mu, s2, h);
        for (const Step& s3 : P1(2)) {
          const WeightVector rho = shifted(lam, s3, h);
          for (const Step& s4 : P1(2)) {
            const WeightVector sig = shifted(rho, s4, h);
            for (const Step& s5 : P1(2)) {
              if (!in_P1(s3 + s4 + s5 - s1 - s2)) continue;
              const WeightVector kap = shifted(sig, s5, h);
              ++hexagons;
              CHECK(std::abs(ybe11_defect(model, lam, mu, nu, kap, sig, rho,
                                          u, v)) < 1e-10);
            }
          }
        }
      }
    }
  }
  CHECK(hexagons > 0);
}

TEST_CASE("weights are invariant under a global branch rotation") {
  // tau -> tau + 1 leaves the nome fixed and multiplies every theta value by
  // the same eighth root of unity, so all weight ratios must be unchanged.
  const Model model = default_model();
  ModelParams rotated_params;
  rotated_params.tau = model.tau() + 1.0;
  const Model rotated{rotated_params};
  const cplx ratio = rotated.theta(cplx(0.3)) / model.theta(cplx(0.3));
  CHECK(rel_diff(ratio, std::exp(kI * kPi / 4.0)) < 1e-14);

  const cplx h = model.hbar();
  Rng rng(71);
  const WeightVector lam = generic_lambda(rng, 2);
  const cplx u = rng.generic();
  for (const Step& t : P1(2)) {
    for (const Step& l : P1(2)) {
      for (const Step& r : P1(2)) {
        if (!in_P1(t + r - l)) continue;
        const FaceSquare sq = square_from_steps(lam, t, l, r, u, h);
        CHECK(rel_diff(w11(model, sq), w11(rotated, sq)) < 1e-12);
      }
    }
  }
}

TEST_CASE("degenerate inputs raise the documented errors") {
  const Model model = default_model();
  const cplx h = model.hbar();
  Rng rng(73);
  const WeightVector lam = generic_lambda(rng, 2);

  WeightVector not_a_step = lam;
  not_a_step.set_coord(0, lam.coord(0) + 0.41);
  CHECK_THROWS_AS(crossing_g(model, lam, not_a_step), AdmissibilityError);
  CHECK_THROWS_AS(
      crossing_g(model, lam, shifted(lam, P2(2)[0], h)),
      AdmissibilityError);

  // lam with x_1 = x_2 puts a pattern denominator on the theta zero lattice
  WeightVector degenerate{cplx(0.31, 0.07), cplx(0.31, 0.07)};
  const FaceSquare sq = square_from_steps(
      degenerate, Step::unit(2, 0, +1), Step::unit(2, 0, +1),
      Step::unit(2, 1, +1), cplx(0.17, -0.04), h);
  CHECK_THROWS_AS(w11(model, sq), PoleError);

  FaceSquare wrong_type = sq;
  wrong_type.d = 2;
  CHECK_THROWS_AS(w11(model, wrong_type), ConfigError);
}
