#include "sketchy/driver.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sketchy {

std::string MethodSpec::name() const {
  switch (kind) {
    case Kind::sketchy_core: return "sketchy_core_svd";
    case Kind::sketchy_full: return "sketchy_svd";
    case Kind::baseline: return to_string(baseline);
  }
  return "?";
}

MethodSpec method_from_string(const std::string& name) {
  MethodSpec spec;
  if (name == "sketchy_core_svd" || name == "sketchycoresvd") {
    spec.kind = MethodSpec::Kind::sketchy_core;
    return spec;
  }
  if (name == "sketchy_svd" || name == "sketchysvd") {
    spec.kind = MethodSpec::Kind::sketchy_full;
    return spec;
  }
  spec.kind = MethodSpec::Kind::baseline;
  spec.baseline = baseline_from_string(name);
  return spec;
}

std::vector<MethodSpec> all_methods() {
  std::vector<MethodSpec> out;
  out.push_back({MethodSpec::Kind::sketchy_core, {}});
  out.push_back({MethodSpec::Kind::sketchy_full, {}});
  for (auto b : {BaselineMethod::hmt, BaselineMethod::woodruff,
                 BaselineMethod::cohen, BaselineMethod::boutsidis,
                 BaselineMethod::tropp17})
    out.push_back({MethodSpec::Kind::baseline, b});
  return out;
}

std::uint64_t trial_seed(std::uint64_t base_seed, int trial) {
  return RandomStream(base_seed, 0x7269616C + static_cast<std::uint64_t>(trial))
      .next_u64();
}

RunOutcome run_trials(const Matrix& A, const MethodSpec& method,
                      const SketchConfig& config, int trials,
                      bool with_diagnostics) {
  if (trials < 1)
    throw std::invalid_argument("run_trials: trials must be positive");
  SketchConfig cfg = config.resolved();
  if (method.kind != MethodSpec::Kind::sketchy_core) {
    cfg.p = 1.0;
    cfg.q = 1.0;
  }
  cfg.validate(A.rows(), A.cols());

  const DenseAccessor accessor(A);
  RunOutcome out;
  out.method = method.name();
  out.config = cfg;
  out.trials = trials;

  PhaseTimes accumulated;
  ApproxFactors sample_factors;  // from the last trial, for incoherence
  for (int t = 0; t < trials; ++t) {
    SketchConfig trial_cfg = cfg;
    trial_cfg.seed = trial_seed(cfg.seed, t);

    RankRFactors factors;
    switch (method.kind) {
      case MethodSpec::Kind::sketchy_core:
        factors = sketchy_core_svd(accessor, trial_cfg, &accumulated);
        break;
      case MethodSpec::Kind::sketchy_full:
        factors = sketchy_svd(accessor, trial_cfg, &accumulated);
        break;
      case MethodSpec::Kind::baseline: {
        RandomStream rng(trial_cfg.seed);
        const auto start = std::chrono::steady_clock::now();
        factors = baseline_approx(A, method.baseline, cfg.r, cfg.k, cfg.s, rng);
        accumulated.sketch +=
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          start)
                .count();
        break;
      }
    }
    out.err.values.push_back(approx_error(accessor, factors));
    if (with_diagnostics && t + 1 == trials) {
      const CoreSketch sk = build_core_sketches(accessor, trial_cfg);
      sample_factors = recover(sk);
    }
  }

  double sum = 0;
  for (double v : out.err.values) sum += v;
  out.err.mean = sum / trials;
  double sq = 0;
  for (double v : out.err.values) sq += (v - out.err.mean) * (v - out.err.mean);
  out.err.stddev = trials > 1 ? std::sqrt(sq / (trials - 1)) : 0.0;

  out.mean_times.sketch = accumulated.sketch / trials;
  out.mean_times.qr = accumulated.qr / trials;
  out.mean_times.core = accumulated.core / trials;
  out.mean_times.truncate = accumulated.truncate / trials;

  if (with_diagnostics) {
    const SpectrumSummary spectrum = SpectrumSummary::of(A);
    out.scree_at_r = scree_curve(spectrum.singular_values)(cfg.r);
    const IncoherenceStats inc =
        measure_incoherence(A, cfg.r, sample_factors);
    out.incoherence = inc;
    out.bounds = evaluate_bounds(spectrum, inc, cfg, A.rows(), A.cols());
  }
  return out;
}

nlohmann::json json_number(Scalar value) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return value;
}

nlohmann::json to_json(const SketchConfig& config) {
  const SketchConfig c = config.resolved();
  return {{"r", c.r},      {"k", c.k},
          {"s", c.s},      {"p", c.p},
          {"q", c.q},      {"map", to_string(c.map_kind)},
          {"seed", c.seed}, {"adaptive", c.adaptive_core_sampling}};
}

nlohmann::json to_json(const PhaseTimes& times) {
  return {{"sketch", times.sketch},
          {"qr", times.qr},
          {"core", times.core},
          {"truncate", times.truncate}};
}

nlohmann::json to_json(const IncoherenceStats& stats) {
  return {{"mu", stats.mu},
          {"nu", stats.nu},
          {"mu_prime", stats.mu_prime},
          {"nu_prime", stats.nu_prime}};
}

nlohmann::json to_json(const TheoryReport& report) {
  auto floor_json = [](const SampleFloor& f) {
    return nlohmann::json{{"required", f.required},
                          {"actual", f.actual},
                          {"satisfied", f.satisfied}};
  };
  return {{"C1", report.C1},
          {"C2", report.C2},
          {"Cqsk", report.Cqsk},
          {"C3", report.C3},
          {"C4", report.C4},
          {"bound_range", json_number(report.bound_range)},
          {"bound_initial", json_number(report.bound_initial)},
          {"bound_final", json_number(report.bound_final)},
          {"probability_floor_range", report.probability_floor_range},
          {"probability_floor_core", report.probability_floor_core},
          {"sample_floors",
           {{"m", floor_json(report.floor_m)},
            {"n", floor_json(report.floor_n)},
            {"m_prime", floor_json(report.floor_m_prime)},
            {"n_prime", floor_json(report.floor_n_prime)}}}};
}

nlohmann::json to_json(const RunOutcome& outcome) {
  nlohmann::json j{{"method", outcome.method},
                   {"config", to_json(outcome.config)},
                   {"trials", outcome.trials},
                   {"err",
                    {{"mean", outcome.err.mean},
                     {"std", outcome.err.stddev},
                     {"values", outcome.err.values}}},
                   {"phase_seconds", to_json(outcome.mean_times)}};
  j["scree_at_r"] =
      outcome.scree_at_r ? json_number(*outcome.scree_at_r) : nullptr;
  j["incoherence"] =
      outcome.incoherence ? to_json(*outcome.incoherence) : nullptr;
  j["bounds"] = outcome.bounds ? to_json(*outcome.bounds) : nullptr;
  return j;
}

nlohmann::json to_json(const SynthSpec& spec) {
  nlohmann::json j{{"rows", spec.M},
                   {"cols", spec.N},
                   {"family", to_string(spec.family)},
                   {"coherence", to_string(spec.coherence)},
                   {"seed", spec.seed}};
  switch (spec.family) {
    case SpectrumFamily::explicit_values: {
      std::vector<Scalar> vals(spec.values.data(),
                               spec.values.data() + spec.values.size());
      j["values"] = vals;
      break;
    }
    case SpectrumFamily::polynomial:
      j["alpha"] = spec.alpha;
      break;
    case SpectrumFamily::exponential:
      j["beta"] = spec.beta;
      break;
    case SpectrumFamily::lowrank_noise:
      j["rank"] = spec.rank;
      j["noise"] = spec.noise;
      break;
  }
  if (spec.spectrum_length > 0) j["length"] = spec.spectrum_length;
  if (spec.coherence == CoherenceMode::spiked) {
    j["mu_target"] = spec.mu_target;
    j["nu_target"] = spec.nu_target;
    j["coherence_rank"] = spec.coherence_rank;
  }
  return j;
}

SynthSpec synth_spec_from_json(const nlohmann::json& j) {
  SynthSpec spec;
  spec.M = j.at("rows").get<Index>();
  spec.N = j.at("cols").get<Index>();
  spec.family = spectrum_family_from_string(j.at("family").get<std::string>());
  spec.coherence =
      coherence_mode_from_string(j.value("coherence", "incoherent"));
  spec.seed = j.value("seed", std::uint64_t{0});
  switch (spec.family) {
    case SpectrumFamily::explicit_values: {
      const auto vals = j.at("values").get<std::vector<Scalar>>();
      spec.values = Eigen::Map<const Vector>(vals.data(),
                                             static_cast<Index>(vals.size()));
      break;
    }
    case SpectrumFamily::polynomial:
      spec.alpha = j.at("alpha").get<Scalar>();
      break;
    case SpectrumFamily::exponential:
      spec.beta = j.at("beta").get<Scalar>();
      break;
    case SpectrumFamily::lowrank_noise:
      spec.rank = j.at("rank").get<Index>();
      spec.noise = j.value("noise", 0.0);
      break;
  }
  spec.spectrum_length = j.value("length", Index{0});
  if (spec.coherence == CoherenceMode::spiked) {
    spec.mu_target = j.value("mu_target", 0.0);
    spec.nu_target = j.value("nu_target", 0.0);
    spec.coherence_rank = j.value("coherence_rank", Index{1});
  }
  return spec;
}

nlohmann::json approx_report(const RunOutcome& outcome, Index rows, Index cols,
                             const std::string& source) {
  return {{"schema_version", 1},
          {"kind", "approx"},
          {"input", {{"rows", rows}, {"cols", cols}, {"source", source}}},
          {"run", to_json(outcome)}};
}

nlohmann::json compare_report(const std::vector<RunOutcome>& runs, Index rows,
                              Index cols, const std::string& source) {
  nlohmann::json list = nlohmann::json::array();
  for (const auto& run : runs) list.push_back(to_json(run));
  return {{"schema_version", 1},
          {"kind", "compare"},
          {"input", {{"rows", rows}, {"cols", cols}, {"source", source}}},
          {"runs", list}};
}

std::string compare_csv(const std::vector<RunOutcome>& runs) {
  std::string csv =
      "method,p,err_mean,err_std,sketch_seconds,qr_seconds,core_seconds,"
      "truncate_seconds\n";
  char buf[256];
  for (const auto& run : runs) {
    // Only the subsampled method has a meaningful sampling ratio.
    std::string p_cell = "-";
    if (run.method == "sketchy_core_svd") {
      std::snprintf(buf, sizeof(buf), "%g", run.config.p);
      p_cell = buf;
    }
    std::snprintf(buf, sizeof(buf), "%s,%s,%.12g,%.12g,%.6g,%.6g,%.6g,%.6g\n",
                  run.method.c_str(), p_cell.c_str(), run.err.mean,
                  run.err.stddev, run.mean_times.sketch, run.mean_times.qr,
                  run.mean_times.core, run.mean_times.truncate);
    csv += buf;
  }
  return csv;
}

}  // namespace sketchy
