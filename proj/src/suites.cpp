#include "ellface/suites.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ellface/characters.hpp"
#include "ellface/fusion.hpp"
#include "ellface/gauge.hpp"
#include "ellface/operators.hpp"
#include "ellface/rng.hpp"
#include "ellface/theta_batch.hpp"
#include "ellface/weights.hpp"

namespace ellface {

namespace {

// ---------------------------------------------------------------------------
// Formatting and hashing helpers.
// ---------------------------------------------------------------------------

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::string format_defect(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9e", x);
  return buf;
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex16(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

double parse_double_strict(const std::string& text) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    throw ConfigError("not a number: '" + text + "'");
  }
  if (pos != text.size()) throw ConfigError("trailing junk in '" + text + "'");
  return value;
}

double rel(cplx a, cplx b) {
  return std::abs(a - b) / (1.0 + std::max(std::abs(a), std::abs(b)));
}

// ---------------------------------------------------------------------------
// Deterministic input draws shared by the sweeps.  Every case logs the
// values it drew into `inputs`, which becomes the record digest.
// ---------------------------------------------------------------------------

void log_input(std::string& inputs, const std::string& key, cplx value) {
  inputs += key + "=" + format_complex(value) + ";";
}

void log_input(std::string& inputs, const std::string& key, const Step& s) {
  inputs += key + "=" + to_string(s) + ";";
}

WeightVector draw_lambda(Rng& rng, int n, std::string& inputs) {
  WeightVector lam(n);
  for (int j = 0; j < n; ++j) {
    lam.set_coord(j, rng.box(0.1, 0.6, -0.15, 0.15) +
                         cplx(0.25 * j, 0.1 * j));
  }
  inputs += "lam=";
  for (int j = 0; j < n; ++j) inputs += format_complex(lam.coord(j)) + (j + 1 < n ? "," : ";");
  return lam;
}

cplx draw_spectral(const Model& model, Rng& rng, std::string& inputs,
                   const std::string& key) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    const cplx u = rng.generic();
    if (safe_spectral_point(model, u, 1e-3)) {
      log_input(inputs, key, u);
      return u;
    }
  }
  throw ConfigError("could not draw a spectral point clear of the factor zeros");
}

// ---------------------------------------------------------------------------
// Per-suite case evaluators.  Each draws its own inputs from the per-case
// generator and returns the worst normalized defect.
// ---------------------------------------------------------------------------

double theta_case(const Model& model, Rng& rng, std::string& inputs) {
  cplx u = rng.box(-0.8, 0.8, -0.35, 0.35);
  for (int attempt = 0; attempt < 32 && std::abs(model.theta(u)) < 1e-3;
       ++attempt) {
    u = rng.box(-0.8, 0.8, -0.35, 0.35);
  }
  const int m = static_cast<int>(rng.index(5)) - 2;
  const cplx v = rng.generic();
  const cplx x = rng.generic();
  const cplx y = rng.generic();
  log_input(inputs, "u", u);
  inputs += "m=" + std::to_string(m) + ";";
  log_input(inputs, "v", v);
  log_input(inputs, "x", x);
  log_input(inputs, "y", y);

  double defect =
      std::abs(model.theta(u) + model.theta(-u)) / (1.0 + std::abs(model.theta(u)));
  const auto [real_shift, tau_shift] = model.quasi_periodicity_defect(u, m);
  const double md = static_cast<double>(m);
  const double scale_real = 1.0 + std::max(std::abs(model.theta(u + md)),
                                           std::abs(model.theta(u)));
  const cplx factor =
      std::exp(-kPi * kI * md * md * model.tau() - 2.0 * kPi * kI * md * u);
  const double scale_tau =
      1.0 + std::max(std::abs(model.theta(u + md * model.tau())),
                     std::abs(factor * model.theta(u)));
  defect = std::max(defect, std::abs(real_shift) / scale_real);
  defect = std::max(defect, std::abs(tau_shift) / scale_tau);
  defect = std::max(defect, std::abs(model.three_term_defect(u, v, x, y)));
  return defect;
}

double simd_case(const Model& model, Rng& rng, std::string& inputs) {
  std::vector<cplx> u(32);
  for (cplx& z : u) z = rng.box(-0.9, 0.9, -0.4, 0.4);
  inputs += "u=";
  for (const cplx& z : u) inputs += format_complex(z) + ",";
  inputs += ";";
  std::vector<cplx> fast(u.size());
  std::vector<cplx> reference(u.size());
  theta_batch(model, u, fast, SimdMode::Auto);
  theta_batch(model, u, reference, SimdMode::Scalar);
  double defect = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    defect = std::max(defect, rel(fast[k], reference[k]));
    defect = std::max(defect, rel(reference[k], model.theta(u[k])));
  }
  return defect;
}

double weights_case(const Model& model, Rng& rng, std::string& inputs) {
  const int n = model.rank();
  const WeightVector lam = draw_lambda(rng, n, inputs);
  const cplx u = rng.generic();
  log_input(inputs, "u", u);
  const cplx h = model.hbar();
  const std::vector<Step>& p1 = P1(n);

  // Square with all four corners labelled, for the delta-style defects.
  Step pm = p1[rng.index(p1.size())];
  Step pk = p1[rng.index(p1.size())];
  std::vector<Step> closing;
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 64) throw ConfigError("no closing step");
    closing.clear();
    for (const Step& pn : p1) {
      if (in_P1(pm + pn - pk)) closing.push_back(pn);
    }
    if (!closing.empty()) break;
    pm = p1[rng.index(p1.size())];
    pk = p1[rng.index(p1.size())];
  }
  const Step pn = closing[rng.index(closing.size())];
  log_input(inputs, "top", pm);
  log_input(inputs, "left", pk);
  log_input(inputs, "right", pn);
  const WeightVector mu = shifted(lam, pm, h);
  const WeightVector kap = shifted(lam, pk, h);
  const WeightVector nu = shifted(mu, pn, h);

  double defect = std::abs(initial_defect(model, lam, mu, kap, nu));
  const cplx c = model.crossing_c();
  const cplx inv_scale = model.theta(c + u) * model.theta(c - u) *
                         model.theta(h + u) * model.theta(h - u) /
                         (model.theta(c) * model.theta(c) * model.theta(h) *
                          model.theta(h));
  defect = std::max(defect, std::abs(inversion_defect(model, lam, mu, kap, nu, u)) /
                                (1.0 + std::abs(inv_scale)));

  const FaceSquare sq = square_from_steps(lam, pm, pk, pn, u, h);
  const double wscale = 1.0 + std::abs(w11(model, sq));
  defect = std::max(defect, std::abs(crossing_defect(model, sq)) / wscale);
  defect = std::max(defect, std::abs(reflection_defect(model, sq)) / wscale);

  const Step q = p1[rng.index(p1.size())];
  log_input(inputs, "q", q);
  defect = std::max(defect, std::abs(identity_iii_defect(model, lam, pm, q, u)));
  return defect;
}

double ybe_case(const Model& model, Rng& rng, std::string& inputs) {
  const int n = model.rank();
  const WeightVector lam = draw_lambda(rng, n, inputs);
  const cplx u = rng.generic();
  const cplx v = rng.generic();
  log_input(inputs, "u", u);
  log_input(inputs, "v", v);
  const cplx h = model.hbar();
  const std::vector<Step>& p1 = P1(n);

  for (int attempt = 0;; ++attempt) {
    if (attempt >= 64) throw ConfigError("no admissible hexagon");
    const Step s1 = p1[rng.index(p1.size())];
    const Step s2 = p1[rng.index(p1.size())];
    const Step s3 = p1[rng.index(p1.size())];
    const Step s4 = p1[rng.index(p1.size())];
    std::vector<Step> closing;
    for (const Step& s5 : p1) {
      if (in_P1(s3 + s4 + s5 - s1 - s2)) closing.push_back(s5);
    }
    if (closing.empty()) continue;
    const Step s5 = closing[rng.index(closing.size())];
    for (const Step* s : {&s1, &s2, &s3, &s4, &s5}) log_input(inputs, "s", *s);

    const WeightVector mu = shifted(lam, s1, h);
    const WeightVector nu = shifted(mu, s2, h);
    const WeightVector rho = shifted(lam, s3, h);
    const WeightVector sig = shifted(rho, s4, h);
    const WeightVector kap = shifted(sig, s5, h);
    cplx lhs = 0.0;
    cplx rhs = 0.0;
    for (const Step& p : p1) {
      const WeightVector left_eta = shifted(rho, p, h);
      lhs += w11(model, FaceSquare{rho, left_eta, sig, kap, u - v}) *
             w11(model, FaceSquare{lam, mu, rho, left_eta, u}) *
             w11(model, FaceSquare{mu, nu, left_eta, kap, v});
      const WeightVector right_eta = shifted(lam, p, h);
      rhs += w11(model, FaceSquare{lam, right_eta, rho, sig, v}) *
             w11(model, FaceSquare{right_eta, nu, sig, kap, u}) *
             w11(model, FaceSquare{lam, mu, right_eta, nu, u - v});
    }
    return rel(lhs, rhs);
  }
}

FaceSquare draw_fused_square(Rng& rng, const WeightVector& lam, int d, int dp,
                             cplx u, cplx h, std::string& inputs) {
  const std::vector<Step>& tops = Pd(d, lam.rank());
  const std::vector<Step>& sides = Pd(dp, lam.rank());
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 128) throw ConfigError("no admissible fused square");
    const Step top = tops[rng.index(tops.size())];
    const Step left = sides[rng.index(sides.size())];
    const Step right = sides[rng.index(sides.size())];
    if (!in_Pd(d, top + right - left)) continue;
    log_input(inputs, "top", top);
    log_input(inputs, "left", left);
    log_input(inputs, "right", right);
    return square_from_steps(lam, top, left, right, u, h, d, dp);
  }
}

double fusion_case(const Model& model, Rng& rng, std::string& inputs,
                   std::uint64_t index) {
  const int n = model.rank();
  const WeightVector lam = draw_lambda(rng, n, inputs);
  const cplx u = rng.generic();
  log_input(inputs, "u", u);
  const cplx h = model.hbar();
  FusedWeightCache cache;

  const int mode = static_cast<int>(index % 4);
  inputs += "mode=" + std::to_string(mode) + ";";
  if (mode == 3) {
    const int r = numeric_rank(fusion_projector(model, lam, u));
    double defect = std::abs(static_cast<double>(r - 5));
    const Step p = P1(n)[rng.index(P1(n).size())];
    log_input(inputs, "p", p);
    defect = std::max(defect, std::abs(zero_deg_lemma_defect(model, lam, p, u)));
    return defect;
  }

  const int d = (mode == 1) ? 1 : 2;
  const int dp = (mode == 0) ? 1 : 2;
  FaceSquare sq = draw_fused_square(rng, lam, d, dp, u, h, inputs);
  if (d == 2 && dp == 2) {
    // Only the diagonal two-part and zero patterns have listed values.
    const Step t = (index % 8 < 4) ? P2(n)[rng.index(4)] : Step(n);
    log_input(inputs, "t", t);
    sq = square_from_steps(lam, t, Step(n), Step(n), u, h, 2, 2);
  }
  const cplx explicit_value = fused_weight_explicit(model, sq);
  const cplx composed_value = fused_weight_composed(model, cache, sq);
  double defect = rel(explicit_value, composed_value);

  const auto steps = square_steps(sq, h);
  defect = std::max(defect, preserve_residual(model, cache, d, dp, lam,
                                              steps->top, steps->right, u));
  return defect;
}

double operators_case(const Model& model, Rng& rng, std::string& inputs,
                      std::uint64_t index) {
  const int n = model.rank();
  const WeightVector lam = draw_lambda(rng, n, inputs);
  const cplx u = draw_spectral(model, rng, inputs, "u");
  const cplx v = draw_spectral(model, rng, inputs, "v");
  auto cache = std::make_shared<FusedWeightCache>();

  const int mode = static_cast<int>(index % 3);
  inputs += "mode=" + std::to_string(mode) + ";";
  if (mode == 0) {
    return std::max(theorem1ii_defect(model, cache, 1, lam, u),
                    theorem1ii_defect(model, cache, 2, lam, u));
  }
  if (mode == 1) {
    static constexpr int kCombo[4][2] = {{1, 1}, {1, 2}, {2, 1}, {2, 2}};
    const auto& combo = kCombo[(index / 3) % 4];
    inputs += "d=" + std::to_string(combo[0]) + ";dp=" +
              std::to_string(combo[1]) + ";";
    double defect = 0.0;
    for (const Step& t : shift_sums(combo[0], combo[1], n)) {
      const TraceMatrices m = trace_matrices(model, *cache, combo[0], combo[1],
                                             lam, t, u, v);
      defect = std::max(defect, rel(m.A.trace(), m.B.trace()));
    }
    return defect;
  }

  // Commutator of the two spectral operators on a random trigonometric f.
  cplx amp[3];
  int freq[3][2];
  for (int w = 0; w < 3; ++w) {
    amp[w] = rng.generic();
    freq[w][0] = static_cast<int>(rng.index(3)) - 1;
    freq[w][1] = static_cast<int>(rng.index(3)) - 1;
    log_input(inputs, "amp", amp[w]);
    inputs += "freq=" + std::to_string(freq[w][0]) + "," +
              std::to_string(freq[w][1]) + ";";
  }
  const ScalarField f = [amp0 = amp[0], amp1 = amp[1], amp2 = amp[2],
                         f00 = freq[0][0], f01 = freq[0][1], f10 = freq[1][0],
                         f11 = freq[1][1], f20 = freq[2][0],
                         f21 = freq[2][1]](const WeightVector& x) {
    const cplx two_pi_i = 2.0 * kPi * kI;
    return amp0 * std::exp(two_pi_i * (static_cast<double>(f00) * x.coord(0) +
                                       static_cast<double>(f01) * x.coord(1))) +
           amp1 * std::exp(two_pi_i * (static_cast<double>(f10) * x.coord(0) +
                                       static_cast<double>(f11) * x.coord(1))) +
           amp2 * std::exp(two_pi_i * (static_cast<double>(f20) * x.coord(0) +
                                       static_cast<double>(f21) * x.coord(1)));
  };
  const DifferenceOperator m1 = build_Md(model, cache, 1, u);
  const DifferenceOperator m2 = build_Md(model, cache, 2, v);
  const cplx ab = apply(model, m1, [&](const WeightVector& x) {
    return apply(model, m2, f, x);
  }, lam);
  const cplx ba = apply(model, m2, [&](const WeightVector& x) {
    return apply(model, m1, f, x);
  }, lam);
  return rel(ab, ba);
}

double characters_case(const Model& model, Rng& rng, std::string& inputs,
                       std::uint64_t index, std::uint64_t case_seed) {
  const int d = 1 + static_cast<int>(index % 2);
  inputs += "d=" + std::to_string(d) + ";";
  if (index % 4 < 2) {
    inputs += "check=membership;seed=" + std::to_string(case_seed) + ";";
    return theorem2_membership_residual(model, d, 6, 12, 0.05, case_seed);
  }
  const WeightVector lam = draw_lambda(rng, model.rank(), inputs);
  const cplx u = draw_spectral(model, rng, inputs, "u");
  static const int kBeta[3][2] = {{2, 0}, {1, 1}, {0, 2}};
  const auto& bc = kBeta[(index / 4) % 3];
  Step beta(model.rank());
  for (int j = 0; j < 2; ++j) {
    for (int k = 0; k < bc[j]; ++k) beta = beta + Step::unit(model.rank(), j, +1);
  }
  log_input(inputs, "beta", beta);
  const cplx a = rng.generic();
  const cplx b = rng.generic();
  log_input(inputs, "a", a);
  log_input(inputs, "b", b);
  const ScalarField f = [a, b](const WeightVector& x) {
    return a + b * std::exp(2.0 * kPi * kI * (x.coord(0) + x.coord(1)));
  };
  auto cache = std::make_shared<FusedWeightCache>();
  return std::abs(lemma_SM_defect(model, cache, beta, d, u, f, lam));
}

double gauge_case(const Model& model, Rng& rng, std::string& inputs,
                  std::uint64_t index) {
  if (index % 3 != 2) {
    std::vector<SignTableEntry> table = jmo_sign_table(model, rng, 1);
    inputs += "check=sign-table;draw=" + std::to_string(index) + ";";
    double defect = 0.0;
    for (const SignTableEntry& entry : table) {
      defect = std::max(defect, entry.sigma_sq_defect);
      defect = std::max(defect, entry.modulus_defect);
    }
    return defect;
  }

  // Hexagon relation for the transformed weights.
  const int n = model.rank();
  const WeightVector lam = draw_lambda(rng, n, inputs);
  const cplx u = rng.generic();
  const cplx v = rng.generic();
  log_input(inputs, "u", u);
  log_input(inputs, "v", v);
  const cplx h = model.hbar();
  const std::vector<Step>& p1 = P1(n);
  for (int attempt = 0;; ++attempt) {
    if (attempt >= 64) throw ConfigError("no admissible hexagon");
    const Step s1 = p1[rng.index(p1.size())];
    const Step s2 = p1[rng.index(p1.size())];
    const Step s3 = p1[rng.index(p1.size())];
    const Step s4 = p1[rng.index(p1.size())];
    std::vector<Step> closing;
    for (const Step& s5 : p1) {
      if (in_P1(s3 + s4 + s5 - s1 - s2)) closing.push_back(s5);
    }
    if (closing.empty()) continue;
    const Step s5 = closing[rng.index(closing.size())];
    for (const Step* s : {&s1, &s2, &s3, &s4, &s5}) log_input(inputs, "s", *s);
    const WeightVector mu = shifted(lam, s1, h);
    const WeightVector nu = shifted(mu, s2, h);
    const WeightVector rho = shifted(lam, s3, h);
    const WeightVector sig = shifted(rho, s4, h);
    const WeightVector kap = shifted(sig, s5, h);
    cplx lhs = 0.0;
    cplx rhs = 0.0;
    for (const Step& p : p1) {
      const WeightVector left_eta = shifted(rho, p, h);
      lhs += jmo_weight_from_gauge(model,
                                   FaceSquare{rho, left_eta, sig, kap, u - v}) *
             jmo_weight_from_gauge(model,
                                   FaceSquare{lam, mu, rho, left_eta, u}) *
             jmo_weight_from_gauge(model,
                                   FaceSquare{mu, nu, left_eta, kap, v});
      const WeightVector right_eta = shifted(lam, p, h);
      rhs += jmo_weight_from_gauge(model,
                                   FaceSquare{lam, right_eta, rho, sig, v}) *
             jmo_weight_from_gauge(model,
                                   FaceSquare{right_eta, nu, sig, kap, u}) *
             jmo_weight_from_gauge(model,
                                   FaceSquare{lam, mu, right_eta, nu, u - v});
    }
    return rel(lhs, rhs);
  }
}

// ---------------------------------------------------------------------------
// Sweep orchestration.
// ---------------------------------------------------------------------------

struct SuiteSpec {
  const char* name;
  int default_sweep;
  double default_tolerance;
};

constexpr SuiteSpec kSuites[] = {
    {"theta", 1000, 1e-11},  {"simd", 256, 1e-12}, {"weights", 200, 1e-10},
    {"ybe", 100, 1e-9},      {"fusion", 40, 1e-9}, {"operators", 12, 1e-9},
    {"characters", 4, 1e-8}, {"gauge", 24, 1e-9},
};

std::uint64_t case_seed_for(std::uint64_t seed, const std::string& suite,
                            std::uint64_t index) {
  std::uint64_t h = fnv1a64(suite + "/" + std::to_string(index));
  h ^= seed * 0x9e3779b97f4a7c15ULL;
  h ^= h >> 32;
  return h;
}

double dispatch_case(const std::string& suite, const Model& model,
                     std::uint64_t index, std::uint64_t case_seed,
                     std::string& inputs) {
  Rng rng(case_seed);
  if (suite == "theta") return theta_case(model, rng, inputs);
  if (suite == "simd") return simd_case(model, rng, inputs);
  if (suite == "weights") return weights_case(model, rng, inputs);
  if (suite == "ybe") return ybe_case(model, rng, inputs);
  if (suite == "fusion") return fusion_case(model, rng, inputs, index);
  if (suite == "operators") return operators_case(model, rng, inputs, index);
  if (suite == "characters")
    return characters_case(model, rng, inputs, index, case_seed);
  if (suite == "gauge") return gauge_case(model, rng, inputs, index);
  throw ConfigError("unknown suite '" + suite + "'");
}

int thread_cap() {
  if (const char* env = std::getenv("ELLIPTIC_FACE_THREADS")) {
    const int parsed = std::atoi(env);
    if (parsed >= 1) return parsed;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::string case_id_for(const std::string& suite, std::uint64_t index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%05llu", static_cast<unsigned long long>(index));
  return suite + "/" + buf;
}

void run_one_suite(const std::string& suite, const SuiteConfig& config,
                   const Model& model, std::vector<CaseRecord>& records) {
  const int sweep = config.sweep_sizes.at(suite);
  const double tolerance = config.tolerances.at(suite);
  std::vector<CaseRecord> local(static_cast<std::size_t>(std::max(sweep, 0)));
  std::atomic<std::uint64_t> next{0};
  const int workers =
      std::max(1, std::min(thread_cap(), static_cast<int>(local.size())));
  auto work = [&]() {
    for (;;) {
      const std::uint64_t index = next.fetch_add(1);
      if (index >= local.size()) return;
      const std::uint64_t cs = case_seed_for(config.seed, suite, index);
      CaseRecord& record = local[index];
      record.suite = suite;
      record.case_id = case_id_for(suite, index);
      record.tolerance = tolerance;
      std::string inputs;
      const GuardedOutcome outcome = run_guarded(
          [&] { return dispatch_case(suite, model, index, cs, inputs); });
      record.digest = hex16(fnv1a64(inputs));
      record.defect = outcome.defect;
      if (!outcome.reason.empty()) {
        record.passed = false;
        record.reason = outcome.reason;
      } else if (!(outcome.defect <= tolerance)) {
        record.passed = false;
        record.reason = "tolerance";
      } else {
        record.passed = true;
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  records.insert(records.end(), local.begin(), local.end());
}

}  // namespace

// ---------------------------------------------------------------------------
// Config plumbing.
// ---------------------------------------------------------------------------

SuiteConfig default_suite_config() {
  SuiteConfig config;
  for (const SuiteSpec& spec : kSuites) {
    config.sweep_sizes[spec.name] = spec.default_sweep;
    config.tolerances[spec.name] = spec.default_tolerance;
  }
  return config;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const SuiteSpec& spec : kSuites) out.emplace_back(spec.name);
    return out;
  }();
  return names;
}

cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  }
  if (s.empty()) throw ConfigError("empty complex value");
  const std::size_t comma = s.find(',');
  if (comma != std::string::npos) {
    return {parse_double_strict(s.substr(0, comma)),
            parse_double_strict(s.substr(comma + 1))};
  }
  if (s.back() == 'i') {
    const std::string payload = s.substr(0, s.size() - 1);
    std::size_t split = std::string::npos;
    for (std::size_t k = payload.size(); k-- > 1;) {
      if ((payload[k] == '+' || payload[k] == '-') && payload[k - 1] != 'e' &&
          payload[k - 1] != 'E') {
        split = k;
        break;
      }
    }
    const auto imag_part = [](const std::string& part) {
      if (part.empty() || part == "+") return 1.0;
      if (part == "-") return -1.0;
      return parse_double_strict(part);
    };
    if (split == std::string::npos) return {0.0, imag_part(payload)};
    return {parse_double_strict(payload.substr(0, split)),
            imag_part(payload.substr(split))};
  }
  return {parse_double_strict(s), 0.0};
}

std::string format_complex(cplx z) {
  return format_double(z.real()) + "," + format_double(z.imag());
}

std::string serialize_config(const SuiteConfig& config) {
  std::string out;
  out += "tau=" + format_complex(config.params.tau) + "\n";
  out += "hbar=" + format_complex(config.params.hbar) + "\n";
  out += "rank=" + std::to_string(config.params.rank_n) + "\n";
  out += "truncation=" + std::to_string(config.params.truncation_M) + "\n";
  out += "seed=" + std::to_string(config.seed) + "\n";
  for (const auto& [suite, sweep] : config.sweep_sizes) {
    out += "sweep_" + suite + "=" + std::to_string(sweep) + "\n";
  }
  for (const auto& [suite, tol] : config.tolerances) {
    out += "tol_" + suite + "=" + format_double(tol) + "\n";
  }
  out += "out=" + config.output_path + "\n";
  return out;
}

void apply_config_entry(SuiteConfig& config, const std::string& key,
                        const std::string& value) {
  const auto suite_key = [&](const std::string& prefix) -> std::string {
    std::string suite = key.substr(prefix.size());
    if (std::find(suite_names().begin(), suite_names().end(), suite) ==
        suite_names().end()) {
      throw ConfigError("unknown suite in key '" + key + "'");
    }
    return suite;
  };
  if (key == "tau") {
    config.params.tau = parse_complex(value);
  } else if (key == "hbar") {
    config.params.hbar = parse_complex(value);
  } else if (key == "rank") {
    config.params.rank_n = static_cast<int>(parse_double_strict(value));
  } else if (key == "truncation") {
    config.params.truncation_M = static_cast<int>(parse_double_strict(value));
  } else if (key == "seed") {
    const double seed = parse_double_strict(value);
    if (seed < 0) throw ConfigError("seed must be nonnegative");
    config.seed = static_cast<std::uint64_t>(seed);
  } else if (key == "sweep") {
    const int sweep = static_cast<int>(parse_double_strict(value));
    if (sweep < 0) throw ConfigError("sweep must be nonnegative");
    for (auto& [suite, size] : config.sweep_sizes) size = sweep;
  } else if (key == "tol") {
    const double tol = parse_double_strict(value);
    if (tol < 0) throw ConfigError("tol must be nonnegative");
    for (auto& [suite, t] : config.tolerances) t = tol;
  } else if (key.rfind("sweep_", 0) == 0) {
    const int sweep = static_cast<int>(parse_double_strict(value));
    if (sweep < 0) throw ConfigError("sweep must be nonnegative");
    config.sweep_sizes[suite_key("sweep_")] = sweep;
  } else if (key.rfind("tol_", 0) == 0) {
    const double tol = parse_double_strict(value);
    if (tol < 0) throw ConfigError("tol must be nonnegative");
    config.tolerances[suite_key("tol_")] = tol;
  } else if (key == "out") {
    config.output_path = value;
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

SuiteConfig parse_config_text(const std::string& text) {
  SuiteConfig config = default_suite_config();
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back()))) {
      line.pop_back();
    }
    std::size_t start = 0;
    while (start < line.size() &&
           std::isspace(static_cast<unsigned char>(line[start]))) {
      ++start;
    }
    if (start > 0) line.erase(0, start);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line without '=': '" + line + "'");
    }
    apply_config_entry(config, line.substr(0, eq), line.substr(eq + 1));
  }
  return config;
}

// ---------------------------------------------------------------------------
// Reports.
// ---------------------------------------------------------------------------

int SuiteReport::failed_count() const {
  int failed = 0;
  for (const CaseRecord& record : records) {
    if (!record.passed) ++failed;
  }
  return failed;
}

std::string SuiteReport::body() const {
  std::string out = "report=1\n";
  std::istringstream in(serialize_config(config));
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("out=", 0) == 0) continue;  // path does not affect results
    out += line + "\n";
  }
  out += "suites=";
  for (std::size_t k = 0; k < suites_run.size(); ++k) {
    out += (k ? "," : "") + suites_run[k];
  }
  out += "\n---\n";
  for (const CaseRecord& record : records) {
    out += "case=" + record.case_id + " digest=" + record.digest +
           " defect=" + format_defect(record.defect) +
           " tol=" + format_defect(record.tolerance) +
           " status=" + (record.passed ? "pass" : "fail");
    if (!record.reason.empty()) out += " reason=" + record.reason;
    out += "\n";
  }
  for (const std::string& suite : suites_run) {
    int cases = 0;
    int passed = 0;
    for (const CaseRecord& record : records) {
      if (record.suite != suite) continue;
      ++cases;
      if (record.passed) ++passed;
    }
    out += "summary suite=" + suite + " cases=" + std::to_string(cases) +
           " passed=" + std::to_string(passed) +
           " failed=" + std::to_string(cases - passed) + "\n";
  }
  out += "summary total cases=" + std::to_string(records.size()) +
         " passed=" + std::to_string(records.size() - failed_count()) +
         " failed=" + std::to_string(failed_count()) + "\n";
  return out;
}

GuardedOutcome run_guarded(const std::function<double()>& eval) {
  try {
    return {eval(), ""};
  } catch (const PoleError&) {
    return {std::numeric_limits<double>::quiet_NaN(), "pole"};
  } catch (const std::exception&) {
    return {std::numeric_limits<double>::quiet_NaN(), "error"};
  }
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  config.params.validate();
  std::vector<std::string> to_run;
  if (name == "all") {
    to_run = suite_names();
  } else if (std::find(suite_names().begin(), suite_names().end(), name) !=
             suite_names().end()) {
    to_run = {name};
  } else {
    throw ConfigError("unknown suite '" + name + "'");
  }

  SuiteConfig normalized = config;
  for (const SuiteSpec& spec : kSuites) {
    normalized.sweep_sizes.emplace(spec.name, spec.default_sweep);
    normalized.tolerances.emplace(spec.name, spec.default_tolerance);
  }

  const auto start = std::chrono::steady_clock::now();
  const Model model(normalized.params);
  SuiteReport report;
  report.config = normalized;
  report.suites_run = to_run;
  for (const std::string& suite : to_run) {
    run_one_suite(suite, normalized, model, report.records);
  }
  std::sort(report.records.begin(), report.records.end(),
            [](const CaseRecord& a, const CaseRecord& b) {
              return a.case_id < b.case_id;
            });
  report.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  return report;
}

// ---------------------------------------------------------------------------
// Table dump.
// ---------------------------------------------------------------------------

namespace {

const char* pattern_tag(Pattern11 pattern) {
  switch (pattern) {
    case Pattern11::kStraight: return "2-5a";
    case Pattern11::kBentDiagonal: return "2-5b";
    case Pattern11::kExchange: return "2-5c";
    case Pattern11::kReturnPair: return "2-5d";
    case Pattern11::kReturnDiagonal: return "2-5e";
    case Pattern11::kNone: break;
  }
  return "none";
}

void append_w11_block(std::string& out, const Model& model,
                      const WeightVector& lam, cplx u) {
  const cplx h = model.hbar();
  for (const Step& top : P1(2)) {
    for (const Step& left : P1(2)) {
      for (const Step& right : P1(2)) {
        if (!in_P1(top + right - left)) continue;
        const FaceSquare sq = square_from_steps(lam, top, left, right, u, h);
        const auto steps = square_steps(sq, h);
        out += std::string("tag=") + pattern_tag(classify11(*steps)) +
               " top=" + to_string(top) + " left=" + to_string(left) +
               " right=" + to_string(right) +
               " value=" + format_complex(w11(model, sq)) + "\n";
      }
    }
  }
}

// Label for a listed degree-(2,1) pattern; tagged entries use the table
// labels, the rest are named by their step geometry.
std::string fused21_label(const SquareSteps& s) {
  if (s.left == s.right) {
    if (s.top.is_zero()) return "tag=ex1";
    if (in_P1(s.top - s.left)) return "pattern=side-in-top";
    return "pattern=side-against-top";
  }
  if (s.bottom.is_zero()) return "tag=ex2";
  if (s.top.is_zero()) return "tag=ex3";
  return "pattern=side-return";
}

std::string fused12_label(const SquareSteps& s) {
  if (s.left == s.right) {
    if (s.left.is_zero()) return "tag=sign1";
    if (in_P1(s.left - s.top)) return "pattern=top-in-side";
    return "pattern=top-against-side";
  }
  if (s.left.is_zero()) return "pattern=left-zero";
  if (s.right.is_zero()) return "pattern=right-zero";
  return "pattern=top-return";
}

void append_fused_block(std::string& out, const Model& model,
                        const WeightVector& lam, cplx u, int d, int dp) {
  const cplx h = model.hbar();
  for (const Step& top : Pd(d, 2)) {
    for (const Step& left : Pd(dp, 2)) {
      for (const Step& right : Pd(dp, 2)) {
        if (!in_Pd(d, top + right - left)) continue;
        const FaceSquare sq = square_from_steps(lam, top, left, right, u, h, d, dp);
        const auto steps = square_steps(sq, h);
        const std::string label =
            (d == 2) ? fused21_label(*steps) : fused12_label(*steps);
        out += label + " top=" + to_string(top) + " left=" + to_string(left) +
               " right=" + to_string(right) +
               " value=" + format_complex(fused_weight_explicit(model, sq)) +
               "\n";
      }
    }
  }
}

}  // namespace

std::string print_tables(const SuiteConfig& config) {
  config.params.validate();
  if (config.params.rank_n != 2) {
    throw ConfigError("tables are only listed for rank 2");
  }
  const Model model(config.params);
  Rng rng(config.seed);
  std::string header_inputs;
  const WeightVector lam = draw_lambda(rng, 2, header_inputs);
  const cplx u = rng.generic();
  const cplx h = model.hbar();

  std::string out;
  out += "tables tau=" + format_complex(model.tau()) +
         " hbar=" + format_complex(h) +
         " rank=" + std::to_string(config.params.rank_n) +
         " truncation=" + std::to_string(config.params.truncation_M) + "\n";
  out += "lambda=" + format_complex(lam.coord(0)) + ";" +
         format_complex(lam.coord(1)) + "\n";
  out += "u=" + format_complex(u) + "\n";

  out += "[plain squares]\n";
  append_w11_block(out, model, lam, u);

  out += "[fused 2x1]\n";
  append_fused_block(out, model, lam, u, 2, 1);

  out += "[fused 1x2]\n";
  append_fused_block(out, model, lam, u, 1, 2);

  out += "[fused 2x2]\n";
  for (const Step& t : P2(2)) {
    if (t.is_zero()) continue;
    const FaceSquare sq = square_from_steps(lam, t, Step(2), Step(2), u, h, 2, 2);
    out += "tag=deg2part top=" + to_string(t) +
           " value=" + format_complex(fused_weight_explicit(model, sq)) + "\n";
  }
  const FaceSquare zero_sq =
      square_from_steps(lam, Step(2), Step(2), Step(2), u, h, 2, 2);
  out += "tag=degzero value=" +
         format_complex(fused_weight_explicit(model, zero_sq)) + "\n";

  out += "[operator coefficients]\n";
  for (int d = 1; d <= 2; ++d) {
    const DifferenceOperator op = build_Mtilde(model, d);
    for (const auto& [term, coeff] : op.terms) {
      out += "mtilde d=" + std::to_string(d) + " term=" + to_string(term) +
             " value=" + format_complex(coeff(lam)) + "\n";
    }
  }

  out += "[identity check u=0]\n";
  append_w11_block(out, model, lam, cplx{0.0, 0.0});
  return out;
}

}  // namespace ellface
