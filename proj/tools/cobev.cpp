#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "cobev/error.hpp"
#include "cobev/experiment.hpp"
#include "cobev/export.hpp"
#include "cobev/image.hpp"
#include "cobev/track_io.hpp"

namespace fs = std::filesystem;
using namespace cobev;

namespace {

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  std::optional<int> jobs;
};

ExperimentConfig resolve(const Globals& g) {
  ExperimentConfig cfg = g.config.empty() ? ExperimentConfig{} : load_experiment_config(g.config);
  if (g.seed) cfg.seed = *g.seed;
  if (g.jobs) {
    if (*g.jobs < 1) throw Error("--jobs must be >= 1");
    cfg.jobs = *g.jobs;
  }
  fs::create_directories(g.out);
  return cfg;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
}

std::string scenario_name(int id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "scenario_%04d.json", id);
  return buf;
}

void write_manifests(const std::vector<Scenario>& scenarios, const fs::path& dir) {
  fs::create_directories(dir);
  for (const auto& scn : scenarios) {
    write_file(dir / scenario_name(scn.id), scenario_manifest(scn).dump(1) + "\n");
  }
}

void write_histogram(const std::vector<CriticalityReport>& reports, const ExperimentConfig& cfg,
                     const fs::path& base) {
  const auto counts = criticality_histogram(reports, cfg.candidates.count());
  std::ostringstream csv;
  write_histogram_csv(csv, counts);
  write_file(base.string() + ".csv", csv.str());
  render_histogram(counts, base.string() + ".png");
}

void write_reports(const std::vector<Scenario>& scenarios,
                   const std::vector<CriticalityReport>& reports, const fs::path& path) {
  std::ostringstream csv;
  csv << "scenario,colliding_count,unseen_actors\n";
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    csv << scenarios[i].id << ',' << reports[i].colliding_count << ','
        << reports[i].unseen_actor_ids.size() << '\n';
  }
  write_file(path, csv.str());
}

void cmd_synth(const Globals& g) {
  const ExperimentConfig cfg = resolve(g);
  if (cfg.source != SourceKind::synth) throw Error("synth: the config has no 'synth' section");
  for (int e = 0; e < cfg.episodes; ++e) {
    char name[32];
    std::snprintf(name, sizeof name, "tracks_%03d.csv", e);
    save_tracks_csv((fs::path(g.out) / name).string(),
                    synth_tracks(cfg.synth, synth_episode_seed(cfg, e)));
  }
}

void cmd_slice(const Globals& g) {
  const ExperimentConfig cfg = resolve(g);
  const auto scenarios = load_scenarios(cfg);
  write_manifests(scenarios, fs::path(g.out) / "scenarios");
  std::cout << scenarios.size() << " scenarios\n";
}

void cmd_assess(const Globals& g) {
  const ExperimentConfig cfg = resolve(g);
  const auto scenarios = load_scenarios(cfg);
  const auto reports = assess_all(scenarios, cfg);
  write_reports(scenarios, reports, fs::path(g.out) / "criticality.csv");
  write_histogram(reports, cfg, fs::path(g.out) / "histogram_before");
}

void cmd_augment(const Globals& g) {
  const ExperimentConfig cfg = resolve(g);
  const auto scenarios = load_scenarios(cfg);
  const AugmentOutcome aug = augment_all(scenarios, cfg);
  std::vector<Scenario> kept;
  for (std::size_t i = 0; i < aug.scenarios.size(); ++i) {
    if (aug.augmented[i]) kept.push_back(aug.scenarios[i]);
  }
  write_manifests(kept, fs::path(g.out) / "augmented");
  const auto reports = assess_all(aug.scenarios, cfg);
  write_reports(aug.scenarios, reports, fs::path(g.out) / "criticality_after.csv");
  write_histogram(reports, cfg, fs::path(g.out) / "histogram_after");
  std::cout << kept.size() << " of " << scenarios.size() << " scenarios augmented\n";
}

void cmd_evaluate(const Globals& g) {
  const ExperimentConfig cfg = resolve(g);
  const ExperimentSummary summary = run_experiment(cfg, g.out);
  write_metrics_csv(std::cout, summary.results);
}

void cmd_histogram(const Globals& g) {
  const ExperimentConfig cfg = resolve(g);
  const auto scenarios = load_scenarios(cfg);
  write_histogram(assess_all(scenarios, cfg), cfg, fs::path(g.out) / "histogram_before");
  if (cfg.augment) {
    write_histogram(assess_all(augment_all(scenarios, cfg).scenarios, cfg), cfg,
                    fs::path(g.out) / "histogram_after");
  }
}

void cmd_render(const Globals& g, int scenario, std::optional<ActorId> agent) {
  ExperimentConfig cfg = resolve(g);
  std::vector<Scenario> scenarios = load_scenarios(cfg);
  if (cfg.augment) scenarios = augment_all(scenarios, cfg).scenarios;
  if (scenario < 0 || static_cast<std::size_t>(scenario) >= scenarios.size()) {
    throw Error("render: scenario " + std::to_string(scenario) + " out of range [0, " +
                std::to_string(scenarios.size()) + ")");
  }
  const Scenario& scn = scenarios[static_cast<std::size_t>(scenario)];
  const ActorId id = agent.value_or(scn.ego_id);
  if (std::find(scn.comm_ids.begin(), scn.comm_ids.end(), id) == scn.comm_ids.end()) {
    throw Error("render: agent " + std::to_string(id) + " is not a communicating agent");
  }
  render_agent(scn, id, cfg, g.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cooperative bird's-eye-view trajectory evaluation"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  int jobs = 1;
  app.add_option("--config", g.config, "Experiment config (JSON)")->check(CLI::ExistingFile);
  auto* seed_opt = app.add_option("--seed", seed, "Override the config seed");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  auto* jobs_opt = app.add_option("--jobs", jobs, "Worker threads");

  auto* synth = app.add_subcommand("synth", "Write synthetic track CSVs");
  auto* slice = app.add_subcommand("slice", "Cut scenarios and write their manifests");
  auto* assess = app.add_subcommand("assess", "Criticality per scenario and histogram");
  auto* augment = app.add_subcommand("augment", "Adversarial augmentation and histogram");
  auto* evaluate = app.add_subcommand("evaluate", "Full pipeline with metrics CSV");
  auto* histogram = app.add_subcommand("histogram", "Criticality histograms before/after");
  auto* render = app.add_subcommand("render", "Observation, forecast and costmap images");
  int scenario = 0;
  ActorId agent = 0;
  render->add_option("--scenario", scenario, "Scenario index")->capture_default_str();
  auto* agent_opt = render->add_option("--agent", agent, "Agent id (default: ego)");

  CLI11_PARSE(app, argc, argv);
  if (*seed_opt) g.seed = seed;
  if (*jobs_opt) g.jobs = jobs;

  try {
    if (*synth) cmd_synth(g);
    if (*slice) cmd_slice(g);
    if (*assess) cmd_assess(g);
    if (*augment) cmd_augment(g);
    if (*evaluate) cmd_evaluate(g);
    if (*histogram) cmd_histogram(g);
    if (*render) {
      cmd_render(g, scenario, *agent_opt ? std::optional<ActorId>(agent) : std::nullopt);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
