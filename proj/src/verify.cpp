#include "sketchy/verify.hpp"

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <stdexcept>

#include "sketchy/diagnostics.hpp"
#include "sketchy/synth.hpp"

namespace sketchy {

namespace {

std::string format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

int defaulted(int requested, int fallback) {
  return requested > 0 ? requested : fallback;
}

VerifyCheck lemma1_check(const VerifyOptions& opt) {
  const Index N = 2000, r = 8;
  const int trials = defaulted(opt.trials, 200);
  RandomStream rng(opt.seed, 1);
  const Matrix V1 = thin_qr(gaussian_map(N, r, rng)).Q;
  const Scalar mu = incoherence(V1, r);
  const auto n = static_cast<Index>(
      std::ceil(8.0 * mu * static_cast<double>(r) * std::log(double(r))));
  const PassRate rate = check_lemma1(V1, std::min(n, N), trials, rng);
  VerifyCheck check;
  check.name = "lemma1_subsampled_singular_value_bounds";
  check.pass = rate.both_rate() >= 0.95;
  check.detail = format("both-bounds rate %.4f over %d trials (n=%lld, mu=%.3f)",
                        rate.both_rate(), trials, (long long)n, mu);
  return check;
}

VerifyCheck lemma3_check(const VerifyOptions& opt) {
  const int instances = defaulted(opt.instances, 100);
  const Index M = 50, N = 40, r = 5, k = 15, n = 20;
  RandomStream rng(opt.seed, 3);
  int held = 0, degenerate = 0;
  for (int i = 0; i < instances; ++i) {
    const Matrix A = gaussian_map(M, N, rng);
    const IndexSet theta = sample_without_replacement(n, N, rng);
    const Matrix omega = gaussian_map(k, n, rng);
    const InequalityPair pair = check_lemma3(A, r, theta, omega);
    if (pair.degenerate) {
      ++degenerate;
      continue;
    }
    held += pair.holds();
  }
  VerifyCheck check;
  check.name = "lemma3_deterministic_range_bound";
  check.pass = (held + degenerate) == instances && degenerate < instances;
  check.detail = format("lhs <= rhs in %d/%d instances (%d degenerate)", held,
                        instances, degenerate);
  return check;
}

VerifyCheck lemma4_check(const VerifyOptions& opt) {
  const Index k = 20, r = 8;
  const int trials = defaulted(opt.trials, 10000);
  RandomStream rng(opt.seed, 4);
  const PassRate rate = check_lemma4(k, r, trials, rng);
  const double p_fail = 1.0 / (double(k) * k * k);
  const double band = p_fail + 3.0 * std::sqrt(p_fail / trials);
  const double violation = 1.0 - rate.both_rate();
  VerifyCheck check;
  check.name = "lemma4_gaussian_pinv_tail";
  check.pass = violation <= band;
  check.detail = format("violation rate %.6f <= %.6f over %d trials",
                        violation, band, trials);
  return check;
}

VerifyCheck lemma5_check(const VerifyOptions& opt) {
  const int trials = defaulted(opt.trials, 10000);
  RandomStream rng(opt.seed, 5);
  const Matrix S = gaussian_map(3, 5, rng);
  const Matrix T = gaussian_map(4, 2, rng);
  const Scalar deviation = check_lemma5(S, T, trials, rng);
  VerifyCheck check;
  check.name = "lemma5_gaussian_frobenius_identity";
  check.pass = deviation <= 0.05;
  check.detail =
      format("relative deviation %.4f over %d trials", deviation, trials);
  return check;
}

std::vector<VerifyCheck> lemma7_checks(const VerifyOptions& opt) {
  const int instances = defaulted(opt.instances, 10);
  std::vector<VerifyCheck> checks;

  SketchConfig cfg;
  cfg.r = 5;
  cfg.k = 12;
  cfg.s = 25;
  cfg.p = 0.6;
  cfg.q = 0.6;

  Scalar worst = 0;
  int held = 0, degenerate = 0;
  RandomStream seeder(opt.seed, 7);
  for (int i = 0; i < instances; ++i) {
    SynthSpec spec = calibrated_spec(80, 60, cfg.r, 0.05, 0, 0,
                                     seeder.next_u64());
    const Matrix A = generate(spec);
    cfg.seed = seeder.next_u64();
    const CoreSketch sk = build_core_sketches(A, cfg);
    const ApproxFactors factors = recover(sk);
    const ResidualReport report = check_lemma7(A, factors, sk);
    if (report.degenerate) {
      ++degenerate;
      continue;
    }
    worst = std::max(worst, report.residual);
    held += (report.residual <= 1e-10);
  }
  VerifyCheck identity;
  identity.name = "lemma7_core_decomposition_identity";
  identity.pass = (held + degenerate) == instances && degenerate < instances;
  identity.detail = format("residual <= 1e-10 in %d/%d (worst %.3e)", held,
                           instances, worst);
  checks.push_back(identity);

  // Negative control: a perturbed core sketch must break the identity.
  SynthSpec spec = calibrated_spec(80, 60, cfg.r, 0.05, 0, 0, opt.seed);
  const Matrix A = generate(spec);
  cfg.seed = opt.seed + 1;
  CoreSketch sk = build_core_sketches(A, cfg);
  RandomStream noise(opt.seed, 77);
  sk.Z += 1e-3 * gaussian_map(sk.Z.rows(), sk.Z.cols(), noise);
  const ApproxFactors factors = recover(sk);
  const ResidualReport report = check_lemma7(A, factors, sk);
  VerifyCheck control;
  control.name = "lemma7_perturbed_core_negative_control";
  control.pass = !report.degenerate && report.residual >= 1e-6;
  control.detail = format("perturbed residual %.3e >= 1e-6", report.residual);
  checks.push_back(control);
  return checks;
}

CoverageReport desk_coverage(const VerifyOptions& opt) {
  SynthSpec spec = calibrated_spec(400, 300, 6, 0.033, 4.1137, 2.7068,
                                   opt.seed);
  const Matrix A = generate(spec);
  SketchConfig cfg;
  cfg.r = 6;
  cfg.k = 25;
  cfg.s = 51;
  cfg.p = 0.5;
  cfg.q = 0.5;
  const int trials = defaulted(opt.trials, 500);
  return check_theorem_coverage(A, cfg, trials, opt.seed);
}

VerifyCheck thm1_check(const VerifyOptions& opt) {
  const CoverageReport cov = desk_coverage(opt);
  VerifyCheck check;
  check.name = "thm1_range_capture_coverage";
  check.pass = cov.range_rate() >= cov.theory.probability_floor_range;
  check.detail = format("coverage %.4f >= floor %.4f over %d trials",
                        cov.range_rate(), cov.theory.probability_floor_range,
                        cov.trials);
  return check;
}

std::vector<VerifyCheck> thm2_checks(const VerifyOptions& opt) {
  const CoverageReport cov = desk_coverage(opt);
  const double floor = cov.theory.probability_floor_core;
  VerifyCheck initial;
  initial.name = "thm2_initial_approximation_coverage";
  initial.pass = cov.initial_rate() >= floor;
  initial.detail = format("coverage %.4f >= floor %.4f (conditioned on %d)",
                          cov.initial_rate(), floor, cov.range_pass);
  VerifyCheck final_check;
  final_check.name = "thm2_final_rank_r_coverage";
  final_check.pass = cov.final_rate() >= floor;
  final_check.detail = format("coverage %.4f >= floor %.4f (conditioned on %d)",
                              cov.final_rate(), floor, cov.range_pass);
  return {initial, final_check};
}

}  // namespace

std::vector<VerifyCheck> run_verify_suite(const std::string& suite,
                                          const VerifyOptions& options) {
  std::vector<VerifyCheck> checks;
  auto want = [&suite](const char* name) {
    return suite == name || suite == "all";
  };
  bool known = suite == "all";
  if (want("lemma1")) { checks.push_back(lemma1_check(options)); known = true; }
  if (want("lemma3")) { checks.push_back(lemma3_check(options)); known = true; }
  if (want("lemma4")) { checks.push_back(lemma4_check(options)); known = true; }
  if (want("lemma5")) { checks.push_back(lemma5_check(options)); known = true; }
  if (want("lemma7")) {
    for (auto& c : lemma7_checks(options)) checks.push_back(std::move(c));
    known = true;
  }
  if (want("thm1")) { checks.push_back(thm1_check(options)); known = true; }
  if (want("thm2")) {
    for (auto& c : thm2_checks(options)) checks.push_back(std::move(c));
    known = true;
  }
  if (!known)
    throw std::invalid_argument(
        "unknown verify suite '" + suite +
        "' (expected lemma1|lemma3|lemma4|lemma5|lemma7|thm1|thm2|all)");
  return checks;
}

bool all_pass(const std::vector<VerifyCheck>& checks) {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

}  // namespace sketchy
