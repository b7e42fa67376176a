#include "impair/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "impair/dataset.hpp"
#include "impair/error.hpp"
#include "impair/evaluation.hpp"
#include "impair/rng.hpp"
#include "impair/simulator.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace impair {

namespace {

void write_file(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << body;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

std::string utc_stamp() {
  const auto now = std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
  std::string s = format_timestamp(now.time_since_epoch().count());  // YYYY-MM-DDTHH:MM:SSZ
  s.erase(std::remove_if(s.begin(), s.end(), [](char c) { return c == '-' || c == ':'; }), s.end());
  return s;
}

fs::path run_directory(const std::string& root, const std::string& subcommand, const std::string& tag) {
  fs::path dir = fs::path(root) / subcommand / (tag.empty() ? utc_stamp() : tag);
  fs::create_directories(dir);
  return dir;
}

// Records outputs in order and is written last.
struct Manifest {
  std::string subcommand;
  std::uint64_t seed = 0;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::vector<std::string> artifacts;

  void write(const fs::path& path) const {
    nlohmann::ordered_json j;
    j["tool"] = "impair";
    j["version"] = kToolVersion;
    j["subcommand"] = subcommand;
    j["seed"] = seed;
    j["config"] = config;
    j["artifacts"] = artifacts;
    write_file(path, j.dump(2) + "\n");
  }
};

std::string slug(const std::string& name) {
  std::string s;
  for (char c : name) s += c == ' ' ? '_' : static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::vector<std::string> resolve_presets(const std::vector<std::string>& requested) {
  if (requested.empty()) return leaderboard_names();
  std::vector<std::string> out;
  for (const auto& r : requested) out.push_back(find_preset(r).name);
  return out;
}

struct GenDataFlags {
  std::size_t n_normal = 100;
  std::size_t n_induced = 99;
  std::uint64_t seed = 7;
  double overlap = GeneratorConfig{}.overlap_fraction;
  std::string out;
};

int cmd_gen_data(const GenDataFlags& f) {
  GeneratorConfig cfg;
  cfg.n_normal = f.n_normal;
  cfg.n_induced = f.n_induced;
  cfg.seed = f.seed;
  cfg.overlap_fraction = f.overlap;
  const Dataset ds = generate_synthetic(cfg);
  const fs::path out(f.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  save_csv(ds, out);

  Manifest m{"gen-data", f.seed, {}, {out.string()}};
  m.config = {{"n_normal", cfg.n_normal},
              {"n_induced", cfg.n_induced},
              {"induced_bac_max", cfg.induced_bac_max},
              {"induced_pulse_zmax", cfg.induced_pulse_zmax},
              {"overlap_fraction", cfg.overlap_fraction}};
  const fs::path manifest = out.string() + ".manifest.json";
  m.write(manifest);
  std::cout << "wrote " << ds.size() << " samples to " << out.string() << "\n";
  return 0;
}

struct TrainEvalFlags {
  std::string data;
  std::size_t k = 5;
  std::uint64_t seed = 7;
  std::vector<std::string> presets;
  std::string out_dir = "out";
  std::string tag;
  bool no_stratify = false;
  bool serial = false;
};

int cmd_train_eval(const TrainEvalFlags& f) {
  const Dataset ds = load_csv(f.data);
  const auto names = resolve_presets(f.presets);
  LeaderboardOptions opt;
  opt.k = f.k;
  opt.seed = f.seed;
  opt.stratified = !f.no_stratify;
  opt.parallel = !f.serial;
  const auto rows = run_leaderboard(ds, names, opt);

  const fs::path dir = run_directory(f.out_dir, "train-eval", f.tag);
  Manifest m{"train-eval", f.seed, {}, {}};
  m.config = {{"data", f.data}, {"k", f.k}, {"stratified", opt.stratified}, {"presets", names}};
  auto emit = [&](const fs::path& p, const std::string& body) {
    write_file(p, body);
    m.artifacts.push_back(p.string());
  };

  const std::string table = render_leaderboard_text(rows);
  emit(dir / "leaderboard.txt", table);
  emit(dir / "leaderboard.csv", render_leaderboard_csv(rows));
  fs::create_directories(dir / "reports");
  for (const auto& r : rows) emit(dir / "reports" / (slug(r.report.classifier) + ".json"), report_to_json(r.report));
  emit(dir / "scatter.csv", export_scatter(ds).to_csv());
  const auto& best = *std::find_if(rows.begin(), rows.end(), [](const LeaderboardRow& r) { return r.winner; });
  emit(dir / "parallel_coords.csv", export_parallel_coords(ds, best.report.predictions).to_csv());
  m.config["parallel_coords_classifier"] = best.report.classifier;
  m.write(dir / "manifest.json");

  std::cout << table;
  std::cout << "best: " << best.report.classifier << " (" << format_percent(best.report.accuracy) << "%)\n";
  std::cout << "outputs in " << dir.string() << "\n";
  return 0;
}

struct SimulateFlags {
  std::string config;
  std::string out_dir = "out";
  std::string tag;
  std::optional<std::uint64_t> seed;
  bool expect_alert = false;
  bool expect_no_alert = false;
};

int cmd_simulate(const SimulateFlags& f) {
  ScenarioConfig cfg = load_scenario(f.config);
  if (f.seed) cfg.seed = *f.seed;
  const fs::path dir = run_directory(f.out_dir, "simulate", f.tag);
  const fs::path sink_path = dir / "alerts.log";
  write_file(sink_path, "");
  FileAlertSink sink(sink_path);
  const SimulationResult res = run_decision_loop(cfg, sink);

  Manifest m{"simulate", cfg.seed, nlohmann::ordered_json::parse(scenario_to_json(cfg)), {}};
  write_file(dir / "steps.csv", step_log_csv(res.log));
  m.artifacts = {(dir / "steps.csv").string(), sink_path.string()};
  m.write(dir / "manifest.json");

  if (res.alert) {
    std::cout << format_alert(*res.alert) << "\n";
  } else {
    std::cout << "no alert (" << res.log.size() << " windows, all negative feedback or debounced)\n";
  }
  if (f.expect_alert && !res.alert) {
    std::cerr << "expected an alert, none fired\n";
    return 1;
  }
  if (f.expect_no_alert && res.alert) {
    std::cerr << "expected no alert, got: " << format_alert(*res.alert) << "\n";
    return 1;
  }
  return 0;
}

struct PlotExportFlags {
  std::string data;
  std::string preset = "Boosted Trees";
  std::size_t k = 5;
  std::uint64_t seed = 7;
  std::string out_dir = "out";
  std::string tag;
};

int cmd_plot_export(const PlotExportFlags& f) {
  const Dataset ds = load_csv(f.data);
  const Preset& preset = find_preset(f.preset);
  require_trainable(ds);
  const FoldPlan plan = stratified_kfold(ds, f.k, derive_seed(f.seed, "folds"));
  const EvalReport report = cross_validate(ds, preset, plan, f.seed);

  const fs::path dir = run_directory(f.out_dir, "plot-export", f.tag);
  Manifest m{"plot-export", f.seed, {{"data", f.data}, {"preset", preset.name}, {"k", f.k}}, {}};
  write_file(dir / "scatter.csv", export_scatter(ds).to_csv());
  write_file(dir / "parallel_coords.csv", export_parallel_coords(ds, report.predictions).to_csv());
  m.artifacts = {(dir / "scatter.csv").string(), (dir / "parallel_coords.csv").string()};
  m.write(dir / "manifest.json");
  std::cout << "outputs in " << dir.string() << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Impairment classifier suite and bracelet alert simulator", "impair"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  GenDataFlags gen;
  auto* gen_cmd = app.add_subcommand("gen-data", "Generate a synthetic BAC/pulse dataset");
  gen_cmd->add_option("--n-normal", gen.n_normal, "Normal subjects")->capture_default_str();
  gen_cmd->add_option("--n-induced", gen.n_induced, "Drug/alcohol induced subjects")->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  gen_cmd->add_option("--overlap", gen.overlap, "Class overlap fraction in [0, 1]")->capture_default_str();
  gen_cmd->add_option("--out", gen.out, "Output CSV path")->required();

  TrainEvalFlags te;
  auto* te_cmd = app.add_subcommand("train-eval", "Cross-validate classifier presets and write the leaderboard");
  te_cmd->add_option("--data", te.data, "Dataset CSV")->required();
  te_cmd->add_option("--k", te.k, "Number of folds")->capture_default_str();
  te_cmd->add_option("--seed", te.seed, "Random seed")->capture_default_str();
  te_cmd->add_option("--presets", te.presets, "Comma-separated preset names (default: all 23)")->delimiter(',');
  te_cmd->add_option("--out-dir", te.out_dir, "Output root")->capture_default_str();
  te_cmd->add_option("--tag", te.tag, "Run directory name (default: UTC timestamp)");
  te_cmd->add_flag("--no-stratify", te.no_stratify, "Plain k-fold instead of stratified");
  te_cmd->add_flag("--serial", te.serial, "Evaluate presets one at a time");

  SimulateFlags sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run the bracelet sense/decide/alert loop on a scenario");
  sim_cmd->add_option("--config", sim.config, "Scenario JSON")->required();
  sim_cmd->add_option("--out-dir", sim.out_dir, "Output root")->capture_default_str();
  sim_cmd->add_option("--tag", sim.tag, "Run directory name (default: UTC timestamp)");
  sim_cmd->add_option("--seed", sim.seed, "Override the scenario seed");
  auto* expect_yes = sim_cmd->add_flag("--expect-alert", sim.expect_alert, "Exit 1 unless an alert fires");
  auto* expect_no = sim_cmd->add_flag("--expect-no-alert", sim.expect_no_alert, "Exit 1 if an alert fires");
  expect_yes->excludes(expect_no);

  PlotExportFlags pe;
  auto* pe_cmd = app.add_subcommand("plot-export", "Write scatter and parallel-coordinates CSVs");
  pe_cmd->add_option("--data", pe.data, "Dataset CSV")->required();
  pe_cmd->add_option("--preset", pe.preset, "Classifier whose CV predictions are plotted")->capture_default_str();
  pe_cmd->add_option("--k", pe.k, "Number of folds")->capture_default_str();
  pe_cmd->add_option("--seed", pe.seed, "Random seed")->capture_default_str();
  pe_cmd->add_option("--out-dir", pe.out_dir, "Output root")->capture_default_str();
  pe_cmd->add_option("--tag", pe.tag, "Run directory name (default: UTC timestamp)");

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto subs = app.get_subcommands();
    std::cerr << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  try {
    if (gen_cmd->parsed()) return cmd_gen_data(gen);
    if (te_cmd->parsed()) return cmd_train_eval(te);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (pe_cmd->parsed()) return cmd_plot_export(pe);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace impair
