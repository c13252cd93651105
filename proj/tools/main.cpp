// codedtof: command-line front end for the coded time-of-flight matrix
// toolkit. Subcommands: generate | shift | analyze | sweep | simulate.
// Exit codes: 0 ok, 2 configuration/validation, 3 algorithmic failure,
// 4 I/O failure.

#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "codedtof/analysis.hpp"
#include "codedtof/codegen.hpp"
#include "codedtof/errors.hpp"
#include "codedtof/io.hpp"
#include "codedtof/model.hpp"
#include "codedtof/recovery.hpp"
#include "codedtof/shifts.hpp"
#include "codedtof/synthesis.hpp"
#include "codedtof/version.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Seed used when --seed is absent. A fixed value, not entropy: every run is
// reproducible by default.
constexpr std::uint64_t kDefaultSeed = 42;

struct GlobalOpts {
  std::string config_path;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  std::string out_dir = ".";
};

// Camera profile used when --config is absent (the sensor this toolkit was
// built around: 448 MHz modulation, 3.5 MHz repetition, 8 sub-steps per
// chip, 0.4 ns kernel FWHM, 14 measurements, column degree 3).
codedtof::CameraConfig default_config() {
  codedtof::CameraConfig c;
  c.f_m_mhz = 448.0;
  c.f_r_mhz = 3.5;
  c.n_steps = 8;
  c.fwhm_ns = 0.4;
  c.m = 14;
  c.n_deg = 3;
  return c;
}

codedtof::CameraConfig effective_config(const GlobalOpts& g) {
  return g.config_path.empty() ? default_config()
                               : codedtof::io::load_config(g.config_path);
}

ordered_json config_to_json(const codedtof::CameraConfig& c) {
  ordered_json j;
  j["f_m_mhz"] = c.f_m_mhz;
  j["f_r_mhz"] = c.f_r_mhz;
  j["n_steps"] = c.n_steps;
  j["fwhm_ns"] = c.fwhm_ns;
  j["m"] = c.m;
  j["n_deg"] = c.n_deg;
  return j;
}

// Collects digests and timings while a command runs, then writes
// manifest.json into the output directory.
class ManifestBuilder {
 public:
  ManifestBuilder(std::string command, const GlobalOpts& g)
      : out_dir_(g.out_dir) {
    m_.version = codedtof::kVersion;
    m_.command = std::move(command);
    m_.seed = g.seed;
  }

  void set_config(const codedtof::CameraConfig& c) {
    m_.config_json = config_to_json(c).dump();
  }
  void add_input(const fs::path& p) {
    m_.inputs[p.string()] = codedtof::io::digest_file(p);
  }
  void add_output(const fs::path& p) {
    m_.outputs[p.filename().string()] = codedtof::io::digest_file(p);
  }
  void add_timing(const std::string& stage, std::int64_t ms) {
    m_.timings_ms[stage] = ms;
  }

  void write() { codedtof::io::save_manifest(m_, out_dir_ / "manifest.json"); }

 private:
  codedtof::io::RunManifest m_;
  fs::path out_dir_;
};

class StageTimer {
 public:
  explicit StageTimer(ManifestBuilder& mb, std::string stage)
      : mb_(mb), stage_(std::move(stage)),
        t0_(std::chrono::steady_clock::now()) {}
  ~StageTimer() {
    const auto dt = std::chrono::steady_clock::now() - t0_;
    mb_.add_timing(
        stage_,
        std::chrono::duration_cast<std::chrono::milliseconds>(dt).count());
  }

 private:
  ManifestBuilder& mb_;
  std::string stage_;
  std::chrono::steady_clock::time_point t0_;
};

fs::path ensure_out_dir(const GlobalOpts& g) {
  fs::path dir(g.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec && !fs::is_directory(dir))
    throw codedtof::IoError("cannot create output directory " + dir.string() +
                            ": " + ec.message());
  return dir;
}

std::string join_args(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) {
    if (i) s += ' ';
    s += argv[i];
  }
  return s;
}

// --- generate ---------------------------------------------------------------

struct GenerateOpts {
  std::string method;
  double p = 0.5;
  bool density_matched = false;
  bool export_kernel = false;
};

int run_generate(const GlobalOpts& g, const GenerateOpts& o,
                 const std::string& cmdline) {
  const fs::path dir = ensure_out_dir(g);
  ManifestBuilder mb(cmdline, g);

  const codedtof::CameraConfig config = effective_config(g);
  mb.set_config(config);
  if (!g.config_path.empty()) mb.add_input(g.config_path);
  const codedtof::DerivedGrid grid = codedtof::derive_grid(config);
  const codedtof::Kernel kernel = codedtof::build_kernel(grid);

  codedtof::BinaryCodeMatrix codes;
  std::vector<codedtof::GCombTraceRow> trace;
  {
    StageTimer t(mb, "generate");
    if (o.method == "random") {
      const double p =
          o.density_matched ? double(config.n_deg) / config.m : o.p;
      codes = codedtof::gen_random(config.m, grid.n, p, g.seed);
    } else if (o.method == "she") {
      codes = codedtof::gen_she(config.m, grid.n, g.seed);
    } else if (o.method == "peg") {
      codes = codedtof::gen_peg(config.m, grid.n, config.n_deg);
    } else {  // gcomb (choices enforced by the parser)
      auto result = codedtof::gen_gcomb(config.m, grid.n, config.n_deg,
                                        kernel, grid);
      codes = std::move(result.codes);
      trace = std::move(result.trace);
    }
  }

  codedtof::SensingMatrix a;
  {
    StageTimer t(mb, "synthesize");
    a = codedtof::synthesize(codes, kernel, grid);
  }

  {
    StageTimer t(mb, "write");
    codedtof::io::save_codes(codes, dir / "codes.codes");
    mb.add_output(dir / "codes.codes");
    codedtof::io::save_matrix(a, dir / "matrix.json");
    mb.add_output(dir / "matrix.json");
    if (o.method == "gcomb") {
      codedtof::io::save_gcomb_trace_csv(trace, dir / "gcomb_trace.csv");
      mb.add_output(dir / "gcomb_trace.csv");
    }
    if (o.export_kernel) {
      codedtof::io::save_kernel_csv(kernel, dir / "kernel.csv");
      mb.add_output(dir / "kernel.csv");
    }
  }
  mb.write();
  return 0;
}

// --- shift ------------------------------------------------------------------

struct ShiftOpts {
  std::string matrix_path;
  std::string strategy = "greedy";
  int passes = 1;
};

std::optional<double> try_min_chordal(const codedtof::SensingMatrix& a) {
  try {
    return codedtof::min_chordal_distance(a);
  } catch (const codedtof::ZeroColumn&) {
    return std::nullopt;
  }
}

int run_shift(const GlobalOpts& g, const ShiftOpts& o,
              const std::string& cmdline) {
  const fs::path dir = ensure_out_dir(g);
  ManifestBuilder mb(cmdline, g);
  mb.add_input(o.matrix_path);

  const codedtof::SensingMatrix a = codedtof::io::load_matrix(o.matrix_path);

  codedtof::ShiftVector shifts;
  std::optional<codedtof::ShiftResult> greedy;
  {
    StageTimer t(mb, "search");
    if (o.strategy == "none") {
      shifts.assign(a.rows, 0);
    } else if (o.strategy == "uniform") {
      shifts = codedtof::uniform_shifts(a.rows, a.cols);
    } else if (o.strategy == "random") {
      shifts = codedtof::random_shifts(a.rows, a.cols, g.seed);
    } else {  // greedy
      greedy = codedtof::greedy_shift_search(a, o.passes, g.threads);
      shifts = greedy->shifts;
    }
  }

  const codedtof::SensingMatrix shifted = codedtof::apply_shifts(a, shifts);

  ordered_json summary;
  summary["strategy"] = o.strategy;
  if (greedy) {
    summary["objective_before"] = greedy->objective_before;
    summary["objective_after"] = greedy->objective_after;
  } else {
    const auto before = try_min_chordal(a);
    const auto after = try_min_chordal(shifted);
    summary["objective_before"] =
        before ? ordered_json(*before) : ordered_json(nullptr);
    summary["objective_after"] =
        after ? ordered_json(*after) : ordered_json(nullptr);
  }

  {
    StageTimer t(mb, "write");
    codedtof::io::save_matrix(shifted, dir / "shifted_matrix.json");
    mb.add_output(dir / "shifted_matrix.json");
    codedtof::io::save_shifts(shifts, dir / "shifts.json");
    mb.add_output(dir / "shifts.json");
    if (greedy) {
      codedtof::io::save_trajectory_csv(*greedy, dir / "trajectory.csv");
      mb.add_output(dir / "trajectory.csv");
    }
    std::ofstream out(dir / "shift_summary.json");
    if (!out) throw codedtof::IoError("cannot write shift_summary.json");
    out << summary.dump(2) << "\n";
    out.close();
    mb.add_output(dir / "shift_summary.json");
  }
  mb.write();
  return 0;
}

// --- analyze ----------------------------------------------------------------

struct AnalyzeOpts {
  std::string matrix_path;
  int bins = 100;
  std::vector<double> thresholds = {0.9, 0.99, 0.999};
  bool export_gram = false;
};

int run_analyze(const GlobalOpts& g, const AnalyzeOpts& o,
                const std::string& cmdline) {
  const fs::path dir = ensure_out_dir(g);
  ManifestBuilder mb(cmdline, g);
  mb.add_input(o.matrix_path);

  const codedtof::SensingMatrix a = codedtof::io::load_matrix(o.matrix_path);
  codedtof::AnalysisReport rep;
  {
    StageTimer t(mb, "analyze");
    rep = codedtof::analyze(a, o.bins, o.thresholds);
  }

  ordered_json j;
  j["rows"] = a.rows;
  j["cols"] = a.cols;
  j["mu"] = rep.mu;
  j["min_chordal"] = rep.min_chordal;
  ordered_json hc = ordered_json::object();
  for (const auto& [theta, count] : rep.high_corr)
    hc[ordered_json(theta).dump()] = count;
  j["high_corr_pairs"] = hc;
  j["n_bins"] = o.bins;

  {
    StageTimer t(mb, "write");
    std::ofstream out(dir / "report.json");
    if (!out) throw codedtof::IoError("cannot write report.json");
    out << j.dump(2) << "\n";
    out.close();
    mb.add_output(dir / "report.json");
    codedtof::io::save_histogram_csv(rep.histogram, dir / "histogram.csv");
    mb.add_output(dir / "histogram.csv");
    if (o.export_gram) {
      codedtof::SensingMatrix gram;
      gram.rows = a.cols;
      gram.cols = a.cols;
      gram.dt_ns = a.dt_ns;
      gram.data = codedtof::gram_normalized(a);
      codedtof::io::save_matrix(gram, dir / "gram.json");
      mb.add_output(dir / "gram.json");
    }
  }
  mb.write();
  return 0;
}

// --- sweep ------------------------------------------------------------------

struct SweepOpts {
  std::string method = "random";
  std::vector<int> n_list = {16, 32, 64, 128};
  int n_real = 100;
  double p = 0.5;
};

codedtof::Generator parse_generator(const std::string& name) {
  if (name == "random") return codedtof::Generator::kRandom;
  if (name == "she") return codedtof::Generator::kShe;
  if (name == "peg") return codedtof::Generator::kPeg;
  return codedtof::Generator::kGComb;
}

int run_sweep(const GlobalOpts& g, const SweepOpts& o,
              const std::string& cmdline) {
  const fs::path dir = ensure_out_dir(g);
  ManifestBuilder mb(cmdline, g);

  const codedtof::CameraConfig base = effective_config(g);
  mb.set_config(base);
  if (!g.config_path.empty()) mb.add_input(g.config_path);

  codedtof::SweepResult sweep;
  {
    StageTimer t(mb, "sweep");
    sweep = codedtof::sweep_coherence(parse_generator(o.method), o.p, base,
                                      o.n_list, o.n_real, g.seed);
  }

  ordered_json j;
  j["method"] = o.method;
  j["n_real"] = o.n_real;
  ordered_json rows = ordered_json::array();
  for (const auto& agg : sweep.aggregates) {
    ordered_json r;
    r["n"] = agg.n;
    r["eta"] = agg.eta;
    r["n_real"] = agg.n_real;
    r["mean_mu"] = agg.mean_mu;
    r["max_mu"] = agg.max_mu;
    r["fraction_at_one"] = agg.fraction_at_one;
    rows.push_back(r);
  }
  j["aggregates"] = rows;

  {
    StageTimer t(mb, "write");
    codedtof::io::save_sweep_csv(sweep, dir / "sweep.csv");
    mb.add_output(dir / "sweep.csv");
    std::ofstream out(dir / "sweep_summary.json");
    if (!out) throw codedtof::IoError("cannot write sweep_summary.json");
    out << j.dump(2) << "\n";
    out.close();
    mb.add_output(dir / "sweep_summary.json");
  }
  mb.write();
  return 0;
}

// --- simulate ---------------------------------------------------------------

struct SimulateOpts {
  std::string matrix_path;
  int k = 1;
  std::vector<double> snr_db;  // empty -> single noiseless level
  int trials = 100;
  bool exhaustive = false;
};

int run_simulate(const GlobalOpts& g, const SimulateOpts& o,
                 const std::string& cmdline) {
  const fs::path dir = ensure_out_dir(g);
  ManifestBuilder mb(cmdline, g);
  mb.add_input(o.matrix_path);

  const codedtof::CameraConfig config = effective_config(g);
  mb.set_config(config);
  if (!g.config_path.empty()) mb.add_input(g.config_path);
  const codedtof::DerivedGrid grid = codedtof::derive_grid(config);

  // dt comes from the configuration; the matrix file stores raw values only.
  codedtof::SensingMatrix a =
      codedtof::io::load_matrix(o.matrix_path, grid.dt_ns);

  if (o.exhaustive && o.k != 1)
    throw codedtof::ConfigError("--exhaustive requires --k 1");

  std::vector<std::optional<double>> snrs;
  if (o.snr_db.empty()) {
    snrs.push_back(std::nullopt);
  } else {
    for (double s : o.snr_db)
      snrs.push_back(std::isinf(s) ? std::nullopt
                                   : std::optional<double>(s));
  }

  codedtof::TrialStats stats;
  {
    StageTimer t(mb, "trials");
    stats = codedtof::recovery_trial_batch(a, o.k, snrs, o.trials, g.seed);
  }

  ordered_json j;
  j["k"] = o.k;
  j["trials"] = o.trials;
  ordered_json aggs = ordered_json::array();
  for (const auto& agg : stats.aggregates) {
    ordered_json r;
    if (std::isinf(agg.snr_db))
      r["snr_db"] = agg.snr_db > 0 ? "inf" : "-inf";
    else
      r["snr_db"] = agg.snr_db;
    r["trials"] = agg.trials;
    r["exact_rate"] = agg.exact_rate;
    r["mean_delay_err_ns"] = agg.mean_delay_err_ns;
    r["mean_depth_err_m"] = agg.mean_depth_err_m;
    aggs.push_back(r);
  }
  j["aggregates"] = aggs;

  if (o.exhaustive) {
    StageTimer t(mb, "exhaustive");
    int exact = 0;
    for (int pos = 0; pos < a.cols; ++pos) {
      codedtof::SceneResponse scene;
      scene.n_samples = a.cols;
      scene.targets = {{pos, 1.0}};
      const auto y = codedtof::measure(a, scene, std::nullopt, g.seed);
      const auto rec = codedtof::matched_filter(a, y);
      if (rec.support.size() == 1 && rec.support[0] == pos) ++exact;
    }
    ordered_json ex;
    ex["positions"] = a.cols;
    ex["exact"] = exact;
    j["exhaustive"] = ex;
  }

  {
    StageTimer t(mb, "write");
    codedtof::io::save_trials_csv(stats, dir / "trials.csv");
    mb.add_output(dir / "trials.csv");
    std::ofstream out(dir / "aggregate.json");
    if (!out) throw codedtof::IoError("cannot write aggregate.json");
    out << j.dump(2) << "\n";
    out.close();
    mb.add_output(dir / "aggregate.json");
  }
  mb.write();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-coherence sensing matrices for coded pulse-based "
               "time-of-flight sensing"};
  app.set_version_flag("--version", codedtof::kVersion);
  app.require_subcommand(1);

  GlobalOpts g;
  app.add_option("--config", g.config_path,
                 "Camera configuration JSON (defaults to the built-in "
                 "profile)");
  app.add_option("--seed", g.seed, "Master seed for all randomness")
      ->capture_default_str();
  app.add_option("--threads", g.threads, "Worker thread cap")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--out-dir", g.out_dir, "Output directory")
      ->capture_default_str();

  GenerateOpts gen;
  auto* cmd_gen =
      app.add_subcommand("generate", "Generate codes and synthesize the "
                                     "sensing matrix");
  cmd_gen->fallthrough();
  cmd_gen->add_option("--method", gen.method, "Code construction")
      ->required()
      ->check(CLI::IsMember({"random", "she", "peg", "gcomb"}));
  cmd_gen->add_option("--p", gen.p, "Bernoulli density for --method random")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  cmd_gen->add_flag("--density-matched", gen.density_matched,
                    "Use p = n_deg / m for --method random");
  cmd_gen->add_flag("--export-kernel", gen.export_kernel,
                    "Also write kernel.csv");

  ShiftOpts sh;
  auto* cmd_shift =
      app.add_subcommand("shift", "Select and apply per-row cyclic offsets");
  cmd_shift->fallthrough();
  cmd_shift->add_option("--matrix", sh.matrix_path, "Input matrix JSON")
      ->required();
  cmd_shift->add_option("--strategy", sh.strategy, "Offset selection")
      ->check(CLI::IsMember({"none", "uniform", "random", "greedy"}))
      ->capture_default_str();
  cmd_shift->add_option("--passes", sh.passes, "Greedy sweep count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  AnalyzeOpts an;
  auto* cmd_analyze =
      app.add_subcommand("analyze", "Coherence, Gram and histogram report");
  cmd_analyze->fallthrough();
  cmd_analyze->add_option("--matrix", an.matrix_path, "Input matrix JSON")
      ->required();
  cmd_analyze->add_option("--bins", an.bins, "Histogram bin count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_analyze
      ->add_option("--thresholds", an.thresholds,
                   "High-correlation thresholds")
      ->capture_default_str();
  cmd_analyze->add_flag("--export-gram", an.export_gram,
                        "Also write gram.json");

  SweepOpts sw;
  auto* cmd_sweep =
      app.add_subcommand("sweep", "Coherence versus aspect ratio");
  cmd_sweep->fallthrough();
  cmd_sweep->add_option("--method", sw.method, "Code construction")
      ->check(CLI::IsMember({"random", "she", "peg", "gcomb"}))
      ->capture_default_str();
  cmd_sweep->add_option("--n-list", sw.n_list, "Code lengths to sweep")
      ->capture_default_str();
  cmd_sweep->add_option("--n-real", sw.n_real,
                        "Realizations per length for seeded constructions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sweep->add_option("--p", sw.p, "Bernoulli density for random codes")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();

  SimulateOpts sim;
  auto* cmd_sim =
      app.add_subcommand("simulate", "Sparse recovery trials on a matrix");
  cmd_sim->fallthrough();
  cmd_sim->add_option("--matrix", sim.matrix_path, "Input matrix JSON")
      ->required();
  cmd_sim->add_option("--k", sim.k, "Targets per scene")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sim->add_option("--snr", sim.snr_db,
                      "SNR levels in dB (inf = noiseless; default noiseless)");
  cmd_sim->add_option("--trials", sim.trials, "Trials per SNR level")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd_sim->add_flag("--exhaustive", sim.exhaustive,
                    "Single-target noiseless sweep over every delay (k = 1)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  const std::string cmdline = join_args(argc, argv);
  try {
    if (*cmd_gen) return run_generate(g, gen, cmdline);
    if (*cmd_shift) return run_shift(g, sh, cmdline);
    if (*cmd_analyze) return run_analyze(g, an, cmdline);
    if (*cmd_sweep) return run_sweep(g, sw, cmdline);
    return run_simulate(g, sim, cmdline);
  } catch (const codedtof::IoError& e) {
    std::cerr << "codedtof: io error: " << e.what() << "\n";
    return 4;
  } catch (const codedtof::AlgorithmError& e) {
    std::cerr << "codedtof: " << e.what() << "\n";
    return 3;
  } catch (const codedtof::ConfigError& e) {
    std::cerr << "codedtof: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "codedtof: unexpected error: " << e.what() << "\n";
    return 1;
  }
}
