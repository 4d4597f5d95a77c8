#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cyclesync/bbq.hpp"
#include "cyclesync/csv.hpp"
#include "cyclesync/error.hpp"
#include "cyclesync/panel.hpp"
#include "cyclesync/parallel.hpp"
#include "cyclesync/report.hpp"
#include "cyclesync/simgen.hpp"
#include "cyclesync/softcluster.hpp"
#include "cyclesync/sync.hpp"
#include "cyclesync/wavelet.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cyclesync;

namespace {

struct RunConfig {
  std::string input;
  std::string output;
  std::string bank = "LA8";
  int levels = 5;
  std::vector<int> cycle_levels = {3, 4};
  std::string boundary = "reflect";
  double zero_epsilon = 1e-12;
  std::vector<std::vector<int>> windows;  // [begin, end) pairs; empty = full sample
  long omega1 = 1000;
  int omega2 = 1;
  int omega3 = 2;
  double omega4 = 0.8;
  double omega5 = 0.45;
  int omega6 = 0;
  double kappa = 0.0;
  std::uint64_t seed = 1;
  std::string ward = "d2";
  std::vector<int> grid_omega3 = {2};
  std::vector<double> grid_omega4 = {0.8};
  std::vector<double> grid_omega5 = {0.45};
  int threads = default_threads();
  std::string indicator;  // decompose: restrict to one id
  // simulate
  int n_sync = 10, n_anti = 10, n_noise = 10;
  int base_period = 16;
  double noise_sd = 0.15;
  double amplitude_spread = 0.5;
  int sim_t = 120;
  std::uint64_t design_seed = 136;
  std::string preset;
};

void apply_config_file(RunConfig& cfg, const std::string& path, json& raw_echo) {
  std::ifstream in(path);
  require(in.good(), errc::io_error, "cannot read config file " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    fail(errc::bad_config, "config file " + path + " is not valid JSON: " + e.what());
  }
  raw_echo = doc;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& k = it.key();
    const json& v = it.value();
    try {
      if (k == "input") cfg.input = v.get<std::string>();
      else if (k == "output") cfg.output = v.get<std::string>();
      else if (k == "bank") cfg.bank = v.get<std::string>();
      else if (k == "levels") cfg.levels = v.get<int>();
      else if (k == "cycle_levels") cfg.cycle_levels = v.get<std::vector<int>>();
      else if (k == "boundary") cfg.boundary = v.get<std::string>();
      else if (k == "zero_epsilon") cfg.zero_epsilon = v.get<double>();
      else if (k == "windows") cfg.windows = v.get<std::vector<std::vector<int>>>();
      else if (k == "omega1") cfg.omega1 = v.get<long>();
      else if (k == "omega2") cfg.omega2 = v.get<int>();
      else if (k == "omega3") cfg.omega3 = v.get<int>();
      else if (k == "omega4") cfg.omega4 = v.get<double>();
      else if (k == "omega5") cfg.omega5 = v.get<double>();
      else if (k == "omega6") cfg.omega6 = v.get<int>();
      else if (k == "kappa") cfg.kappa = v.get<double>();
      else if (k == "seed") cfg.seed = v.get<std::uint64_t>();
      else if (k == "ward") cfg.ward = v.get<std::string>();
      else if (k == "grid_omega3") cfg.grid_omega3 = v.get<std::vector<int>>();
      else if (k == "grid_omega4") cfg.grid_omega4 = v.get<std::vector<double>>();
      else if (k == "grid_omega5") cfg.grid_omega5 = v.get<std::vector<double>>();
      else if (k == "threads") cfg.threads = v.get<int>();
      else if (k == "indicator") cfg.indicator = v.get<std::string>();
      else if (k == "n_sync") cfg.n_sync = v.get<int>();
      else if (k == "n_anti") cfg.n_anti = v.get<int>();
      else if (k == "n_noise") cfg.n_noise = v.get<int>();
      else if (k == "base_period") cfg.base_period = v.get<int>();
      else if (k == "noise_sd") cfg.noise_sd = v.get<double>();
      else if (k == "amplitude_spread") cfg.amplitude_spread = v.get<double>();
      else if (k == "t") cfg.sim_t = v.get<int>();
      else if (k == "design_seed") cfg.design_seed = v.get<std::uint64_t>();
      else fail(errc::bad_config, "unknown config key '" + k + "' in " + path);
    } catch (const json::exception& e) {
      fail(errc::bad_config, "config key '" + k + "' in " + path + ": " + e.what());
    }
  }
}

json effective_config(const RunConfig& cfg) {
  json out;
  out["input"] = cfg.input;
  out["output"] = cfg.output;
  out["bank"] = cfg.bank;
  out["levels"] = cfg.levels;
  out["cycle_levels"] = cfg.cycle_levels;
  out["boundary"] = cfg.boundary;
  out["zero_epsilon"] = cfg.zero_epsilon;
  out["windows"] = cfg.windows;
  out["omega1"] = cfg.omega1;
  out["omega2"] = cfg.omega2;
  out["omega3"] = cfg.omega3;
  out["omega4"] = cfg.omega4;
  out["omega5"] = cfg.omega5;
  out["omega6"] = cfg.omega6;
  out["kappa"] = cfg.kappa;
  out["seed"] = cfg.seed;
  out["ward"] = cfg.ward;
  out["grid_omega3"] = cfg.grid_omega3;
  out["grid_omega4"] = cfg.grid_omega4;
  out["grid_omega5"] = cfg.grid_omega5;
  out["threads"] = cfg.threads;
  return out;
}

std::string iso_now() {
  std::time_t tt = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Summary {
 public:
  Summary(const fs::path& dir, const std::string& subcommand, const RunConfig& cfg,
          const json& raw_config)
      : path_(dir / "summary.json"), start_(std::chrono::steady_clock::now()) {
    doc_["begun"] = iso_now();
    doc_["subcommand"] = subcommand;
    doc_["config"] = effective_config(cfg);
    if (!raw_config.is_null()) doc_["config_file"] = raw_config;
    flush();
  }

  json& results() { return doc_["results"]; }

  void complete() {
    const auto elapsed = std::chrono::steady_clock::now() - start_;
    doc_["completed"] = iso_now();
    doc_["wall_seconds"] = std::chrono::duration<double>(elapsed).count();
    flush();
  }

 private:
  void flush() {
    std::ofstream out(path_);
    require(out.good(), errc::io_error, "cannot write " + path_.string());
    out << doc_.dump(2) << "\n";
  }

  fs::path path_;
  std::chrono::steady_clock::time_point start_;
  json doc_;
};

WaveletConfig wavelet_config(const RunConfig& cfg) {
  WaveletConfig w;
  w.bank = cfg.bank;
  w.levels = cfg.levels;
  w.cycle_levels = cfg.cycle_levels;
  if (cfg.boundary == "reflect") w.boundary = Boundary::reflect;
  else if (cfg.boundary == "periodic") w.boundary = Boundary::periodic;
  else fail(errc::bad_config, "boundary must be reflect or periodic, got '" + cfg.boundary + "'");
  return w;
}

SyncConfig sync_config(const RunConfig& cfg) {
  SyncConfig s;
  s.zero_epsilon = cfg.zero_epsilon;
  for (const auto& w : cfg.windows) {
    require(w.size() == 2, errc::bad_config, "each window must be a [begin, end) pair");
    s.windows.push_back(Window{w[0], w[1]});
  }
  return s;
}

SoftClusterConfig soft_config(const RunConfig& cfg) {
  SoftClusterConfig s;
  s.omega1 = cfg.omega1;
  s.omega2 = cfg.omega2;
  s.omega3 = cfg.omega3;
  s.omega4 = cfg.omega4;
  s.omega5 = cfg.omega5;
  s.omega6 = cfg.omega6;
  s.kappa = cfg.kappa;
  s.seed = cfg.seed;
  if (cfg.ward == "d2") s.ward = WardVariant::d2;
  else if (cfg.ward == "d") s.ward = WardVariant::d;
  else fail(errc::bad_config, "ward must be d2 or d, got '" + cfg.ward + "'");
  return s;
}

fs::path ensure_output(const RunConfig& cfg) {
  require(!cfg.output.empty(), errc::bad_config, "--output directory is required");
  fs::path dir(cfg.output);
  std::error_code ec;
  fs::create_directories(dir, ec);
  require(!ec, errc::io_error, "cannot create output directory " + dir.string());
  return dir;
}

Panel load_input(const RunConfig& cfg) {
  require(!cfg.input.empty(), errc::bad_config, "--input panel CSV is required");
  return load_panel(cfg.input);
}

std::string sanitize(const std::string& key) {
  std::string out = key;
  for (char& c : out)
    if (c == ':' || c == '/' || c == '\\') c = '_';
  return out;
}

int run_decompose(const RunConfig& cfg, Summary& summary, const fs::path& dir) {
  Panel panel = load_input(cfg);
  if (!cfg.indicator.empty()) panel = subset(panel, {cfg.indicator});
  WaveletConfig wcfg = wavelet_config(cfg);
  FilterBank<double> bank = FilterBank<double>::by_name(wcfg.bank);
  bank.validate();
  std::vector<std::string> files;
  for (int i = 0; i < panel.n(); ++i) {
    Eigen::VectorXd adjusted = drift_adjust(panel.values.row(i).transpose());
    MraStack<double> stack = modwt_mra(adjusted, bank, wcfg.levels, wcfg.boundary);
    std::string name = "mra_" + sanitize(panel.ids[std::size_t(i)].key()) + ".csv";
    write_mra(dir / name, stack, panel.quarters);
    files.push_back(name);
  }
  summary.results()["n_indicators"] = panel.n();
  summary.results()["levels"] = wcfg.levels;
  summary.results()["files"] = files;
  return 0;
}

int run_cycles(const RunConfig& cfg, Summary& summary, const fs::path& dir, ThreadPool& pool) {
  Panel panel = load_input(cfg);
  CyclePanel cycles = extract_cycles(panel, wavelet_config(cfg), pool);
  write_cycles(dir / "cycles.csv", cycles);
  summary.results()["n_indicators"] = panel.n();
  summary.results()["t"] = panel.t();
  return 0;
}

int run_sync_matrix(const RunConfig& cfg, Summary& summary, const fs::path& dir,
                    ThreadPool& pool) {
  Panel panel = load_input(cfg);
  CyclePanel cycles = extract_cycles(panel, wavelet_config(cfg), pool);
  SyncConfig scfg = sync_config(cfg);
  const auto windows = scfg.resolve(int(panel.t()));
  for (std::size_t w = 0; w < windows.size(); ++w) {
    DissimilarityMatrix dm = sync_dissimilarity_matrix(cycles, scfg, windows[w]);
    std::string name = windows.size() == 1 ? "dissimilarity.csv"
                                           : "dissimilarity_w" + std::to_string(w + 1) + ".csv";
    write_dissimilarity(dir / name, dm);
  }
  summary.results()["n_indicators"] = panel.n();
  summary.results()["windows"] = int(windows.size());
  return 0;
}

void write_soft_outputs(const fs::path& dir, const CyclePanel& cycles,
                        const SoftClusterResult& res, Summary& summary) {
  write_assignments(dir / "assignments.csv", res);
  write_probabilities(dir / "probabilities.csv", res.stats);
  write_composition(dir / "composition.csv", composition_table(res));
  write_country_counts(dir / "country_counts.csv", country_counts(res, cycles));

  json sizes;
  std::map<std::string, int> by_label;
  for (const auto& lab : res.labels) by_label[lab] += 1;
  for (const auto& [lab, count] : by_label) sizes[lab] = count;
  summary.results()["sizes"] = sizes;
  summary.results()["degenerate_resamples"] = res.stats.degenerate_resamples;
  summary.results()["never_cosampled"] = res.stats.never_cosampled;

  std::vector<std::string> pool_keys, sync_keys;
  for (std::size_t i = 0; i < res.ids.size(); ++i) {
    pool_keys.push_back(res.ids[i].key());
    if (res.labels[i] == "Synchronous") sync_keys.push_back(res.ids[i].key());
  }
  json explained;
  try {
    PcSummary pc = first_pc(cycles, pool_keys);
    explained["pool"] = pc.explained_fraction;
  } catch (const error& e) {
    explained["pool_error"] = errc_name(e.code());
  }
  bool wrote_pc = false;
  try {
    PcSummary pc = first_pc(cycles, sync_keys);
    explained["synchronous"] = pc.explained_fraction;
    write_pc(dir / "pc.csv", cycles.quarters, pc);
    wrote_pc = true;
  } catch (const error& e) {
    explained["synchronous_error"] = errc_name(e.code());
  }
  if (!wrote_pc) {
    PcSummary pc = first_pc(cycles, pool_keys);
    write_pc(dir / "pc.csv", cycles.quarters, pc);
  }
  summary.results()["explained_fraction"] = explained;
}

int run_softcluster(const RunConfig& cfg, Summary& summary, const fs::path& dir,
                    ThreadPool& pool) {
  Panel panel = load_input(cfg);
  CyclePanel cycles = extract_cycles(panel, wavelet_config(cfg), pool);
  SoftClusterResult res = soft_cluster(cycles, soft_config(cfg), sync_config(cfg), pool);
  write_soft_outputs(dir, cycles, res, summary);
  return 0;
}

int run_grid_search(const RunConfig& cfg, Summary& summary, const fs::path& dir,
                    ThreadPool& pool) {
  Panel panel = load_input(cfg);
  CyclePanel cycles = extract_cycles(panel, wavelet_config(cfg), pool);
  GridReport report = grid_search(cycles, cfg.grid_omega3, cfg.grid_omega4, cfg.grid_omega5,
                                  soft_config(cfg), sync_config(cfg), pool);
  write_grid(dir / "grid.csv", report);
  int ok = 0;
  for (const auto& cell : report.cells) ok += cell.ok ? 1 : 0;
  summary.results()["n_cells"] = int(report.cells.size());
  summary.results()["n_ok"] = ok;
  return 0;
}

void bbq_outputs(const RunConfig& cfg, const CyclePanel& cycles, const fs::path& dir,
                 ThreadPool& pool) {
  const std::size_t n = cycles.ids.size();
  std::vector<PhaseChronology> chrons(n);
  std::vector<PhaseStats> stats(n);
  pool.parallel_for(std::int64_t(n), [&](std::int64_t i0, int) {
    const std::size_t i = std::size_t(i0);
    Eigen::VectorXd cycle = cycles.cycles.row(Eigen::Index(i)).transpose();
    const double sd = sample_sd(cycle);
    // dating is scale-invariant; standardizing keeps amplitudes comparable
    // across indicators, with the raw dispersion reported in `scale`
    Eigen::VectorXd dated = sd > 0.0 ? Eigen::VectorXd(standardize(cycle)) : cycle;
    chrons[i] = bbq_date(dated);
    stats[i] = phase_stats(chrons[i], cycle);
  });
  std::vector<double> sync_ref = reference_synchronicity(cycles, cfg.zero_epsilon);
  std::vector<double> gamma(n, std::numeric_limits<double>::quiet_NaN());
  std::vector<std::string> pool_keys;
  for (const auto& id : cycles.ids) pool_keys.push_back(id.key());
  if (pool_keys.size() >= 3) {
    for (std::size_t i = 0; i < n; ++i) {
      try {
        gamma[i] = proximity_of_sync(cycles, pool_keys, pool_keys[i], cfg.zero_epsilon);
      } catch (const error&) {
        // NA for degenerate members
      }
    }
  }
  write_turning_points(dir / "turning_points.csv", cycles.ids, chrons, cycles.quarters);
  write_phase_stats(dir / "phase_stats.csv", cycles.ids, stats, sync_ref, gamma);
}

int run_bbq(const RunConfig& cfg, Summary& summary, const fs::path& dir, ThreadPool& pool) {
  Panel panel = load_input(cfg);
  CyclePanel cycles = extract_cycles(panel, wavelet_config(cfg), pool);
  bbq_outputs(cfg, cycles, dir, pool);
  summary.results()["n_indicators"] = panel.n();
  return 0;
}

int run_summarize(const RunConfig& cfg, Summary& summary, const fs::path& dir,
                  ThreadPool& pool) {
  Panel panel = load_input(cfg);
  CyclePanel cycles = extract_cycles(panel, wavelet_config(cfg), pool);
  write_cycles(dir / "cycles.csv", cycles);
  SyncConfig scfg = sync_config(cfg);
  const auto windows = scfg.resolve(int(panel.t()));
  for (std::size_t w = 0; w < windows.size(); ++w) {
    DissimilarityMatrix dm = sync_dissimilarity_matrix(cycles, scfg, windows[w]);
    std::string name = windows.size() == 1 ? "dissimilarity.csv"
                                           : "dissimilarity_w" + std::to_string(w + 1) + ".csv";
    write_dissimilarity(dir / name, dm);
  }
  SoftClusterResult res = soft_cluster(cycles, soft_config(cfg), scfg, pool);
  write_soft_outputs(dir, cycles, res, summary);
  bbq_outputs(cfg, cycles, dir, pool);
  summary.results()["n_indicators"] = panel.n();
  summary.results()["t"] = panel.t();
  return 0;
}

int run_simulate(const RunConfig& cfg, Summary& summary, const fs::path& dir) {
  if (!cfg.preset.empty())
    require(cfg.preset == "default", errc::bad_config,
            "unknown preset '" + cfg.preset + "' (only: default)");
  PlantedDesign design;
  if (cfg.preset.empty()) {
    design.n_sync = cfg.n_sync;
    design.n_anti = cfg.n_anti;
    design.n_noise = cfg.n_noise;
    design.base_period = cfg.base_period;
    design.noise_sd = cfg.noise_sd;
    design.amplitude_spread = cfg.amplitude_spread;
    design.t = cfg.sim_t;
    design.seed = cfg.design_seed;
  }
  PlantedPanel planted = generate(design);
  write_panel(dir / "panel.csv", planted.panel);
  std::ofstream truth(dir / "truth.csv");
  require(truth.good(), errc::io_error, "cannot write truth.csv");
  truth << "indicator,truth\n";
  for (std::size_t i = 0; i < planted.panel.ids.size(); ++i)
    truth << planted.panel.ids[i].key() << "," << truth_name(planted.truth[i]) << "\n";
  summary.results()["n_indicators"] = planted.panel.n();
  summary.results()["t"] = planted.panel.t();
  summary.results()["design_seed"] = design.seed;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  json raw_config;
  std::string config_path;

  // config file first so explicit flags override its values
  for (int i = 1; i + 1 < argc; ++i) {
    std::string a = argv[i];
    if (a == "--config" || a == "-c") config_path = argv[i + 1];
  }
  try {
    if (!config_path.empty()) apply_config_file(cfg, config_path, raw_config);
  } catch (const error& e) {
    std::cerr << "cyclesync: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"Business-cycle synchronicity toolkit"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string dummy_config;
  app.add_option("-c,--config", dummy_config, "JSON config file (flags override)");

  auto add_common = [&](CLI::App* sub, bool needs_input) {
    if (needs_input) sub->add_option("-i,--input", cfg.input, "wide panel CSV");
    sub->add_option("-o,--output", cfg.output, "output directory");
    sub->add_option("-c,--config", dummy_config, "JSON config file (flags override)");
    sub->add_option("--threads", cfg.threads, "worker threads (default: CYCLESYNC_THREADS)");
  };
  auto add_wavelet = [&](CLI::App* sub) {
    sub->add_option("--bank", cfg.bank, "filter bank: LA8 or Haar");
    sub->add_option("--levels", cfg.levels, "decomposition depth J");
    sub->add_option("--cycle-levels", cfg.cycle_levels, "detail levels summed into the cycle");
    sub->add_option("--boundary", cfg.boundary, "reflect or periodic");
  };
  auto add_sync = [&](CLI::App* sub) {
    sub->add_option("--zero-epsilon", cfg.zero_epsilon, "zero threshold for sign products");
  };
  auto add_soft = [&](CLI::App* sub) {
    sub->add_option("--omega1", cfg.omega1, "bootstrap iterations");
    sub->add_option("--omega2", cfg.omega2, "window count");
    sub->add_option("--omega3", cfg.omega3, "clusters per bootstrap run");
    sub->add_option("--omega4", cfg.omega4, "probability threshold");
    sub->add_option("--omega5", cfg.omega5, "drop-out fraction");
    sub->add_option("--omega6", cfg.omega6, "final cluster count (0 = omega3)");
    sub->add_option("--kappa", cfg.kappa, "silhouette cleanup threshold");
    sub->add_option("--seed", cfg.seed, "bootstrap seed");
    sub->add_option("--ward", cfg.ward, "ward variant: d2 or d");
  };

  CLI::App* decompose = app.add_subcommand("decompose", "write the MRA stack per indicator");
  add_common(decompose, true);
  add_wavelet(decompose);
  decompose->add_option("--indicator", cfg.indicator, "restrict to one REGION:SECTOR id");

  CLI::App* cycles_cmd = app.add_subcommand("cycles", "extract business-cycle components");
  add_common(cycles_cmd, true);
  add_wavelet(cycles_cmd);

  CLI::App* sync_cmd = app.add_subcommand("sync-matrix", "synchronicity dissimilarity matrix");
  add_common(sync_cmd, true);
  add_wavelet(sync_cmd);
  add_sync(sync_cmd);

  CLI::App* soft_cmd = app.add_subcommand("softcluster", "bootstrapped soft clustering");
  add_common(soft_cmd, true);
  add_wavelet(soft_cmd);
  add_sync(soft_cmd);
  add_soft(soft_cmd);

  CLI::App* grid_cmd = app.add_subcommand("grid-search", "sweep omega3/omega4/omega5");
  add_common(grid_cmd, true);
  add_wavelet(grid_cmd);
  add_sync(grid_cmd);
  add_soft(grid_cmd);
  grid_cmd->add_option("--grid-omega3", cfg.grid_omega3, "omega3 grid values");
  grid_cmd->add_option("--grid-omega4", cfg.grid_omega4, "omega4 grid values");
  grid_cmd->add_option("--grid-omega5", cfg.grid_omega5, "omega5 grid values");

  CLI::App* bbq_cmd = app.add_subcommand("bbq", "turning-point dating and phase statistics");
  add_common(bbq_cmd, true);
  add_wavelet(bbq_cmd);
  add_sync(bbq_cmd);

  CLI::App* summarize_cmd = app.add_subcommand("summarize", "full pipeline in one run");
  add_common(summarize_cmd, true);
  add_wavelet(summarize_cmd);
  add_sync(summarize_cmd);
  add_soft(summarize_cmd);

  CLI::App* simulate_cmd = app.add_subcommand("simulate", "generate a planted synthetic panel");
  add_common(simulate_cmd, false);
  simulate_cmd->add_option("--preset", cfg.preset, "named design (default)");
  simulate_cmd->add_option("--n-sync", cfg.n_sync, "synchronous group size");
  simulate_cmd->add_option("--n-anti", cfg.n_anti, "anti-phase group size");
  simulate_cmd->add_option("--n-noise", cfg.n_noise, "noise group size");
  simulate_cmd->add_option("--base-period", cfg.base_period, "common cycle period in quarters");
  simulate_cmd->add_option("--noise-sd", cfg.noise_sd, "additive noise level");
  simulate_cmd->add_option("--amplitude-spread", cfg.amplitude_spread, "amplitude spread");
  simulate_cmd->add_option("--t", cfg.sim_t, "sample length in quarters");
  simulate_cmd->add_option("--design-seed", cfg.design_seed, "generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << "cyclesync: code=bad_config " << e.what() << "\n";
    std::cerr << app.help() << "\n";
    return 1;
  }

  try {
    require(cfg.threads >= 1, errc::bad_config, "--threads must be >= 1");
    ThreadPool pool(cfg.threads);
    const fs::path dir = ensure_output(cfg);
    const std::string name = app.get_subcommands().front()->get_name();
    Summary summary(dir, name, cfg, raw_config);
    int rc = 0;
    if (name == "decompose") rc = run_decompose(cfg, summary, dir);
    else if (name == "cycles") rc = run_cycles(cfg, summary, dir, pool);
    else if (name == "sync-matrix") rc = run_sync_matrix(cfg, summary, dir, pool);
    else if (name == "softcluster") rc = run_softcluster(cfg, summary, dir, pool);
    else if (name == "grid-search") rc = run_grid_search(cfg, summary, dir, pool);
    else if (name == "bbq") rc = run_bbq(cfg, summary, dir, pool);
    else if (name == "summarize") rc = run_summarize(cfg, summary, dir, pool);
    else if (name == "simulate") rc = run_simulate(cfg, summary, dir);
    else fail(errc::internal, "unhandled subcommand " + name);
    summary.complete();
    return rc;
  } catch (const error& e) {
    std::cerr << "cyclesync: " << e.what() << "\n";
    return e.code() == errc::internal ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "cyclesync: code=internal " << e.what() << "\n";
    return 2;
  }
}
