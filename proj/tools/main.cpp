// Command-line surface: approx, compare, scree, verify, bench, synth.
// Exit codes: 0 success, 1 verification failure, 2 usage/config error,
// 3 I/O error.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sketchy/driver.hpp"
#include "sketchy/io.hpp"
#include "sketchy/synth.hpp"
#include "sketchy/verify.hpp"

namespace {

using namespace sketchy;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

struct CommonOpts {
  std::string input;
  std::string format = "auto";
  std::uint64_t seed = 0;
  int trials = 1;
  std::string json_out;
  std::string csv_out;
  long max_dense = 2000;
};

void emit(const json& report, const std::string& json_out) {
  if (json_out.empty()) {
    std::cout << report.dump(2) << std::endl;
  } else {
    std::ofstream out(json_out, std::ios::trunc);
    if (!out) throw ParseError(json_out + ": cannot open for writing");
    out << report.dump(2) << '\n';
  }
}

void emit_csv(const std::string& csv, const std::string& csv_out) {
  if (csv_out.empty()) {
    std::cout << csv;
  } else {
    std::ofstream out(csv_out, std::ios::trunc);
    if (!out) throw ParseError(csv_out + ": cannot open for writing");
    out << csv;
  }
}

Matrix load_input(const CommonOpts& opts) {
  if (opts.input.empty())
    throw std::invalid_argument("--input is required");
  return load_matrix(opts.input, file_format_from_string(opts.format));
}

void check_dense_guard(Index rows, Index cols, long max_dense) {
  if (static_cast<double>(rows) * static_cast<double>(cols) >
      static_cast<double>(max_dense) * static_cast<double>(max_dense))
    throw std::invalid_argument(
        "matrix " + std::to_string(rows) + "x" + std::to_string(cols) +
        " exceeds the --max-dense guard (" + std::to_string(max_dense) +
        "^2 entries); full-SVD diagnostics are desk-scale only");
}

std::vector<double> parse_sweep(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    if (!token.empty()) out.push_back(std::stod(token));
  }
  if (out.empty()) throw std::invalid_argument("empty p sweep");
  return out;
}

// --- approx -----------------------------------------------------------------

int cmd_approx(const CommonOpts& opts, const std::string& method_name,
               const SketchConfig& config, bool diagnostics) {
  const Matrix A = load_input(opts);
  if (diagnostics) check_dense_guard(A.rows(), A.cols(), opts.max_dense);
  const MethodSpec method = method_from_string(method_name);
  const RunOutcome outcome =
      run_trials(A, method, config, opts.trials, diagnostics);
  emit(approx_report(outcome, A.rows(), A.cols(), opts.input), opts.json_out);
  return kExitOk;
}

// --- compare ----------------------------------------------------------------

int cmd_compare(const CommonOpts& opts, const std::string& methods_arg,
                const SketchConfig& config, const std::string& sweep_arg) {
  const Matrix A = load_input(opts);

  std::vector<MethodSpec> methods;
  if (methods_arg == "all") {
    methods = all_methods();
  } else {
    std::stringstream ss(methods_arg);
    std::string token;
    while (std::getline(ss, token, ','))
      if (!token.empty()) methods.push_back(method_from_string(token));
    if (methods.empty())
      throw std::invalid_argument("no methods given");
  }
  const std::vector<double> sweep =
      sweep_arg.empty() ? std::vector<double>{config.p}
                        : parse_sweep(sweep_arg);

  std::vector<RunOutcome> runs;
  for (const MethodSpec& method : methods) {
    if (method.kind == MethodSpec::Kind::sketchy_core) {
      for (double p : sweep) {
        SketchConfig cfg = config;
        cfg.p = p;
        cfg.q = p;
        runs.push_back(run_trials(A, method, cfg, opts.trials));
      }
    } else {
      runs.push_back(run_trials(A, method, config, opts.trials));
    }
  }
  emit(compare_report(runs, A.rows(), A.cols(), opts.input), opts.json_out);
  if (!opts.csv_out.empty() || opts.json_out.empty())
    emit_csv(compare_csv(runs), opts.csv_out);
  return kExitOk;
}

// --- scree ------------------------------------------------------------------

int cmd_scree(const CommonOpts& opts, long r_max) {
  const Matrix A = load_input(opts);
  check_dense_guard(A.rows(), A.cols(), opts.max_dense);
  const Vector sigma = svd(A).sigma;
  const Vector curve = scree_curve(sigma);
  const Index upper =
      r_max >= 0 ? std::min<Index>(r_max, curve.size() - 1) : curve.size() - 1;
  std::string csv = "r,scree\n";
  char buf[64];
  for (Index r = 0; r <= upper; ++r) {
    std::snprintf(buf, sizeof(buf), "%lld,%.12g\n",
                  static_cast<long long>(r), curve(r));
    csv += buf;
  }
  emit_csv(csv, opts.csv_out);
  return kExitOk;
}

// --- verify -----------------------------------------------------------------

int cmd_verify(const CommonOpts& opts, const std::string& suite,
               int instances) {
  VerifyOptions vopt;
  vopt.seed = opts.seed == 0 ? 42 : opts.seed;
  vopt.trials = opts.trials > 1 ? opts.trials : 0;
  vopt.instances = instances;
  const std::vector<VerifyCheck> checks = run_verify_suite(suite, vopt);

  json check_list = json::array();
  for (const auto& c : checks) {
    check_list.push_back(
        {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    std::fprintf(stderr, "[%s] %s: %s\n", c.pass ? "PASS" : "FAIL",
                 c.name.c_str(), c.detail.c_str());
  }
  const bool pass = all_pass(checks);
  emit(json{{"schema_version", 1},
            {"kind", "verify"},
            {"suite", suite},
            {"pass", pass},
            {"checks", check_list}},
       opts.json_out);
  return pass ? kExitOk : kExitVerifyFailure;
}

// --- bench ------------------------------------------------------------------

double median_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

int cmd_bench(const CommonOpts& opts, Index rows, Index cols,
              SketchConfig config, const std::string& sweep_arg, int reps) {
  if (static_cast<double>(rows) * static_cast<double>(cols) >
      1.6e8)  // 1.28 GB of doubles
    throw std::invalid_argument("bench size exceeds the memory guard");
  const std::vector<double> sweep = parse_sweep(sweep_arg);

  config = config.resolved();
  SynthSpec spec;
  spec.M = rows;
  spec.N = cols;
  spec.family = SpectrumFamily::polynomial;
  spec.alpha = 1.0;
  spec.spectrum_length =
      std::min(std::min(rows, cols), 2 * config.s + 1);
  spec.seed = opts.seed;
  const Matrix A = generate(spec);

  struct Row {
    std::string method;
    double p;
    PhaseTimes median;
  };
  std::vector<Row> rows_out;

  auto run_method = [&](bool subsampled, double p) {
    std::vector<double> sketch, qr, core, trunc;
    for (int rep = 0; rep < reps; ++rep) {
      SketchConfig cfg = config;
      cfg.p = p;
      cfg.q = p;
      cfg.seed = trial_seed(opts.seed, rep);
      PhaseTimes t;
      if (subsampled)
        (void)sketchy_core_svd(A, cfg, &t);
      else
        (void)sketchy_svd(A, cfg, &t);
      sketch.push_back(t.sketch);
      qr.push_back(t.qr);
      core.push_back(t.core);
      trunc.push_back(t.truncate);
    }
    PhaseTimes med;
    med.sketch = median_of(sketch);
    med.qr = median_of(qr);
    med.core = median_of(core);
    med.truncate = median_of(trunc);
    return med;
  };

  for (double p : sweep)
    rows_out.push_back({"sketchy_core_svd", p, run_method(true, p)});
  rows_out.push_back({"sketchy_svd", 1.0, run_method(false, 1.0)});

  std::string csv =
      "method,p,sketch_seconds,qr_seconds,core_seconds,truncate_seconds,"
      "total_excl_truncate\n";
  char buf[256];
  for (const Row& row : rows_out) {
    std::snprintf(buf, sizeof(buf), "%s,%g,%.6g,%.6g,%.6g,%.6g,%.6g\n",
                  row.method.c_str(), row.p, row.median.sketch, row.median.qr,
                  row.median.core, row.median.truncate,
                  row.median.sketch + row.median.qr + row.median.core);
    csv += buf;
  }
  emit_csv(csv, opts.csv_out);
  return kExitOk;
}

// --- synth ------------------------------------------------------------------

int cmd_synth(const CommonOpts& opts, const std::string& preset,
              const std::string& spec_path, Index rows, Index cols,
              const std::string& spectrum_arg, Index length,
              const std::string& coherence, double mu, double nu,
              Index coherence_rank, const std::string& out_path) {
  SynthSpec spec;
  if (!preset.empty()) {
    if (preset == "yale")
      spec = yale_like_spec(opts.seed);
    else if (preset == "cardiac")
      spec = cardiac_like_spec(opts.seed);
    else if (preset == "video")
      spec = video_like_spec(opts.seed);
    else
      throw std::invalid_argument("unknown preset '" + preset +
                                  "' (yale|cardiac|video)");
  } else if (!spec_path.empty()) {
    std::ifstream in(spec_path);
    if (!in) throw ParseError(spec_path + ": cannot open for reading");
    spec = synth_spec_from_json(json::parse(in));
    if (opts.seed != 0) spec.seed = opts.seed;
  } else {
    if (rows < 1 || cols < 1)
      throw std::invalid_argument("--rows and --cols are required");
    spec.M = rows;
    spec.N = cols;
    spec.seed = opts.seed;
    const auto colon = spectrum_arg.find(':');
    const std::string family = spectrum_arg.substr(0, colon);
    const std::string args =
        colon == std::string::npos ? "" : spectrum_arg.substr(colon + 1);
    spec.family = spectrum_family_from_string(family);
    switch (spec.family) {
      case SpectrumFamily::polynomial:
        spec.alpha = args.empty() ? 1.0 : std::stod(args);
        break;
      case SpectrumFamily::exponential:
        spec.beta = args.empty() ? 0.5 : std::stod(args);
        break;
      case SpectrumFamily::lowrank_noise: {
        const auto comma = args.find(',');
        spec.rank = std::stol(args.substr(0, comma));
        spec.noise =
            comma == std::string::npos ? 0.0 : std::stod(args.substr(comma + 1));
        break;
      }
      case SpectrumFamily::explicit_values: {
        std::vector<double> values;
        std::stringstream ss(args);
        std::string token;
        while (std::getline(ss, token, ','))
          values.push_back(std::stod(token));
        spec.values = Eigen::Map<const Vector>(
            values.data(), static_cast<Index>(values.size()));
        break;
      }
    }
    spec.spectrum_length = length;
    spec.coherence = coherence_mode_from_string(coherence);
    spec.mu_target = mu;
    spec.nu_target = nu;
    spec.coherence_rank = coherence_rank;
  }

  check_dense_guard(spec.M, spec.N, std::max<long>(opts.max_dense, 20000));
  const Matrix A = generate(spec);
  save_matrix(out_path, A);
  emit(json{{"schema_version", 1},
            {"kind", "synth"},
            {"spec", to_json(spec)},
            {"output", out_path}},
       opts.json_out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sketch-based near-optimal low-rank SVD from subsampled rows "
               "and columns, with baselines, diagnostics, and bounds"};
  app.require_subcommand(1);

  CommonOpts opts;
  SketchConfig config;
  std::string method_name = "sketchy_core_svd";
  std::string methods_arg = "all";
  std::string sweep_arg;
  bool diagnostics = false;
  long r_max = -1;
  std::string suite = "all";
  int instances = 0;
  Index bench_rows = 5000, bench_cols = 2000;
  int reps = 5;
  std::string preset, spec_path, out_path;
  Index synth_rows = 0, synth_cols = 0, synth_length = 0, coherence_rank = 1;
  std::string spectrum_arg = "poly:1.0", coherence = "incoherent";
  double mu = 0, nu = 0;
  std::string map_name = "gaussian";

  auto add_common = [&](CLI::App* cmd, bool with_input) {
    if (with_input) {
      cmd->add_option("--input", opts.input, "input matrix file");
      cmd->add_option("--format", opts.format,
                      "input format: auto|csv|mtx|binary");
    }
    cmd->add_option("--seed", opts.seed, "base random seed");
    cmd->add_option("--trials", opts.trials, "number of trials");
    cmd->add_option("--json", opts.json_out, "write the JSON report here");
    cmd->add_option("--csv", opts.csv_out, "write the CSV table here");
    cmd->add_option("--max-dense", opts.max_dense,
                    "full-SVD guard: refuse when rows*cols exceeds this^2");
  };
  auto add_config = [&](CLI::App* cmd) {
    cmd->add_option("--rank,-r", config.r, "target rank r")->required();
    cmd->add_option("-k", config.k, "range sketch size (default 4r+1)");
    cmd->add_option("-s", config.s, "core sketch size (default 2k+1)");
    cmd->add_option("-p", config.p, "row/column sampling ratio");
    cmd->add_option("-q", config.q, "core sampling ratio (default p)");
    cmd->add_option("--map", map_name, "map kind: gaussian|sparse-sign");
    cmd->add_flag("--adaptive", config.adaptive_core_sampling,
                  "size m', n' from the measured incoherence of Q, P");
  };

  CLI::App* approx = app.add_subcommand("approx", "run one method");
  add_common(approx, true);
  add_config(approx);
  approx->add_option("--method", method_name,
                     "sketchy_core_svd|sketchy_svd|hmt|woodruff|cohen|"
                     "boutsidis|tropp17");
  approx->add_flag("--diagnostics", diagnostics,
                   "add exact scree, incoherence, and theory bounds");

  CLI::App* compare = app.add_subcommand("compare", "aligned method table");
  add_common(compare, true);
  add_config(compare);
  compare->add_option("--methods", methods_arg, "comma list or 'all'");
  compare->add_option("--p-sweep", sweep_arg,
                      "sampling ratios for the subsampled method");

  CLI::App* scree = app.add_subcommand("scree", "exact scree curve (CSV)");
  add_common(scree, true);
  scree->add_option("--r-max", r_max, "last rank to print");

  CLI::App* verify = app.add_subcommand(
      "verify", "run lemma/theorem verification suites");
  add_common(verify, false);
  verify->add_option("--suite", suite,
                     "lemma1|lemma3|lemma4|lemma5|lemma7|thm1|thm2|all");
  verify->add_option("--instances", instances, "instance count override");

  CLI::App* bench = app.add_subcommand("bench", "phase timing sweep (CSV)");
  add_common(bench, false);
  add_config(bench);
  bench->add_option("--rows", bench_rows, "synthetic rows");
  bench->add_option("--cols", bench_cols, "synthetic cols");
  bench->add_option("--p-sweep", sweep_arg, "sampling ratios")->required();
  bench->add_option("--reps", reps, "repetitions per cell");

  CLI::App* synth = app.add_subcommand("synth", "emit a synthetic matrix");
  add_common(synth, false);
  synth->add_option("--preset", preset, "yale|cardiac|video");
  synth->add_option("--spec", spec_path, "SynthSpec JSON file");
  synth->add_option("--rows", synth_rows, "rows");
  synth->add_option("--cols", synth_cols, "cols");
  synth->add_option("--spectrum", spectrum_arg,
                    "poly:a | exp:b | lowrank:r,noise | explicit:v1,v2,...");
  synth->add_option("--length", synth_length, "spectrum length");
  synth->add_option("--coherence", coherence, "incoherent|spiked");
  synth->add_option("--mu", mu, "spiked-mode row coherence target");
  synth->add_option("--nu", nu, "spiked-mode column coherence target");
  synth->add_option("--coherence-rank", coherence_rank,
                    "rank scale for the coherence targets");
  synth->add_option("--out", out_path, "output matrix path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    config.map_kind = map_kind_from_string(map_name);
    config.seed = opts.seed;
    if (approx->parsed())
      return cmd_approx(opts, method_name, config, diagnostics);
    if (compare->parsed())
      return cmd_compare(opts, methods_arg, config, sweep_arg);
    if (scree->parsed()) return cmd_scree(opts, r_max);
    if (verify->parsed()) return cmd_verify(opts, suite, instances);
    if (bench->parsed())
      return cmd_bench(opts, bench_rows, bench_cols, config, sweep_arg, reps);
    if (synth->parsed())
      return cmd_synth(opts, preset, spec_path, synth_rows, synth_cols,
                       spectrum_arg, synth_length, coherence, mu, nu,
                       coherence_rank, out_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return kExitUsage;
  }
  return kExitUsage;
}
