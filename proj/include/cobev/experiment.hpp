#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cobev/eval.hpp"
#include "cobev/suite.hpp"
#include "cobev/synth.hpp"

namespace cobev {

enum class SourceKind : std::uint8_t { tracks, synth, suite };

/// Everything run_experiment needs, parsed from one JSON file. Exactly one of
/// `tracks`, `synth` or `suite` names the scenario source.
struct ExperimentConfig {
  SourceKind source = SourceKind::synth;
  std::string tracks_path;  // resolved against the config file's directory
  SynthConfig synth;
  int episodes = 1;  // independent synthetic recordings
  SuiteConfig suite;

  GridConfig grid;
  SensorConfig sensor;
  WindowConfig windows;
  double dt = 0.1;
  CandidateConfig candidates;
  int stride = 0;  // 0 = one full observation + planning window
  int comm_count = 4;
  int max_scenarios = 0;  // 0 keeps all

  bool augment = false;
  AugmentConfig augmentation;
  bool only_augmented = false;  // evaluate only successfully augmented scenes

  std::string forecaster = "oracle";
  std::vector<PolicyName> policies{PolicyName::ego, PolicyName::rand_traj, PolicyName::rand,
                                   PolicyName::ego_all, PolicyName::ego_concern,
                                   PolicyName::ego_concern_uncertainty, PolicyName::ego_star};
  SelectionPolicy selection = SelectionPolicy::above_ego;
  double threshold = 0.0;
  std::vector<int> n_available{1, 2, 3};
  std::vector<int> k_values{1, 10};
  TopKMode topk_mode = TopKMode::fraction;
  std::uint64_t seed = 0;
  int renders = 0;  // scenarios to render, lowest ids first
  double sdf_cap = kDefaultSdfCap;
  int jobs = 1;
};

/// Parses and validates a config. Errors name the offending field path.
/// `base_dir` resolves a relative tracks path.
ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::string& base_dir = ".");
ExperimentConfig load_experiment_config(const std::string& path);
nlohmann::json experiment_config_json(const ExperimentConfig& cfg);

AugmentContext augment_context(const ExperimentConfig& cfg);
EvalOptions eval_options(const ExperimentConfig& cfg);

/// Seed of synthetic recording `episode`.
std::uint64_t synth_episode_seed(const ExperimentConfig& cfg, int episode);

/// Scenario source: the crafted suite, or recordings (loaded or synthesized)
/// cut into windows. Ids are consecutive from 0.
std::vector<Scenario> load_scenarios(const ExperimentConfig& cfg);

struct AugmentOutcome {
  std::vector<Scenario> scenarios;  // augmented where possible, ids kept
  std::vector<bool> augmented;
};

/// augment_adversarial on every scenario with a per-scenario seed stream.
AugmentOutcome augment_all(const std::vector<Scenario>& scenarios, const ExperimentConfig& cfg);

std::vector<CriticalityReport> assess_all(const std::vector<Scenario>& scenarios,
                                          const ExperimentConfig& cfg);

/// Policy specs in config order; policies that never communicate appear once
/// with n_available = 0, the others once per n_available value.
std::vector<PolicySpec> experiment_policies(const ExperimentConfig& cfg);

void write_metrics_csv(std::ostream& out, const std::vector<EvalResult>& results);
void write_histogram_csv(std::ostream& out, const std::vector<std::size_t>& counts);

struct ExperimentSummary {
  std::vector<Scenario> scenarios;  // as evaluated
  std::vector<CriticalityReport> before;
  std::optional<std::vector<CriticalityReport>> after;
  std::vector<EvalResult> results;
};

/// Full pipeline into `out_dir`: metrics.csv, scenarios/<id>.json,
/// histogram_before.{csv,png}, histogram_after.{csv,png} when augmenting,
/// renders/ when requested, and config.json echoing the resolved config.
ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir);

/// Observation at t = 0, forecast masks and costmaps of one agent.
void render_agent(const Scenario& scn, ActorId agent, const ExperimentConfig& cfg,
                  const std::string& out_dir);

}  // namespace cobev
