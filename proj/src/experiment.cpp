#include "cobev/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "cobev/config.hpp"
#include "cobev/error.hpp"
#include "cobev/export.hpp"
#include "cobev/image.hpp"
#include "cobev/parallel.hpp"
#include "cobev/track_io.hpp"

namespace cobev {

namespace fs = std::filesystem;

namespace {

// Independent seed streams derived from the experiment seed.
constexpr std::uint64_t kPolicyStream = 1;
constexpr std::uint64_t kAugmentStream = 2;
constexpr std::uint64_t kSynthStream = 3;

bool communicates(PolicyName name) {
  return name != PolicyName::ego && name != PolicyName::rand_traj && name != PolicyName::ego_star;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string padded(int id) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d", id);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

nlohmann::json range_json(std::pair<double, double> r) { return {r.first, r.second}; }

}  // namespace

ExperimentConfig parse_experiment_config(const nlohmann::json& j, const std::string& base_dir) {
  ExperimentConfig cfg;
  ConfigReader r(j, "");

  const int sources = static_cast<int>(r.has("tracks")) + static_cast<int>(r.has("synth")) +
                      static_cast<int>(r.has("suite"));
  if (sources != 1) {
    throw Error("config: exactly one of 'tracks', 'synth' or 'suite' must be given");
  }

  if (r.has("windows")) {
    auto w = r.object("windows");
    cfg.windows.obs_s = w.number("obs_s", cfg.windows.obs_s);
    cfg.windows.plan_s = w.number("plan_s", cfg.windows.plan_s);
    cfg.dt = w.number("dt", cfg.dt);
    w.finish();
    if (!(cfg.dt > 0.0)) w.fail("dt", "must be positive");
    if (cfg.windows.obs_frames(cfg.dt) < 2) w.fail("obs_s", "needs at least 2 frames");
    if (cfg.windows.plan_frames(cfg.dt) < 1) w.fail("plan_s", "needs at least 1 frame");
  }

  if (r.has("tracks")) {
    cfg.source = SourceKind::tracks;
    const fs::path p = r.string("tracks", "");
    if (p.empty()) r.fail("tracks", "empty path");
    cfg.tracks_path = p.is_absolute() ? p.string() : (fs::path(base_dir) / p).string();
  } else if (r.has("synth")) {
    cfg.source = SourceKind::synth;
    auto s = r.object("synth");
    cfg.synth = read_synth_config(s);
    if (s.has("dt") && cfg.synth.dt != cfg.dt) s.fail("dt", "must match windows.dt");
    cfg.synth.dt = cfg.dt;
    cfg.episodes = s.integer("episodes", cfg.episodes);
    if (cfg.episodes < 1) s.fail("episodes", "must be >= 1");
    s.finish();
  } else {
    cfg.source = SourceKind::suite;
    auto s = r.object("suite");
    cfg.suite = read_suite_config(s);
    s.finish();
    cfg.suite.dt = cfg.dt;
    cfg.suite.windows = cfg.windows;
  }

  if (r.has("grid")) {
    auto g = r.object("grid");
    cfg.grid.resolution = g.number("resolution", cfg.grid.resolution);
    cfg.grid.width = g.integer("width", cfg.grid.width);
    cfg.grid.height = g.integer("height", cfg.grid.height);
    g.finish();
    if (!(cfg.grid.resolution > 0.0)) g.fail("resolution", "must be positive");
    if (cfg.grid.width < 1) g.fail("width", "must be >= 1");
    if (cfg.grid.height < 1) g.fail("height", "must be >= 1");
  }

  if (r.has("sensor")) {
    auto s = r.object("sensor");
    cfg.sensor.n_rays = s.integer("n_rays", cfg.sensor.n_rays);
    cfg.sensor.max_range = s.number("max_range", cfg.sensor.max_range);
    s.finish();
    validate_section("sensor", [&] { cfg.sensor.validate(); });
  }

  if (r.has("candidates")) {
    auto c = r.object("candidates");
    if (c.has("n") && (c.has("n_accel") || c.has("n_yaw_rate"))) {
      c.fail("n", "give either n or n_accel/n_yaw_rate");
    }
    if (c.has("n")) {
      const int n = c.integer("n", 64);
      const int side = static_cast<int>(std::lround(std::sqrt(std::max(n, 0))));
      if (n < 1 || side * side != n) c.fail("n", "must be a positive perfect square");
      cfg.candidates.n_accel = cfg.candidates.n_yaw_rate = side;
    }
    cfg.candidates.n_accel = c.integer("n_accel", cfg.candidates.n_accel);
    cfg.candidates.n_yaw_rate = c.integer("n_yaw_rate", cfg.candidates.n_yaw_rate);
    const auto accel =
        c.range("accel_range", {cfg.candidates.accel_min, cfg.candidates.accel_max});
    const auto yaw =
        c.range("yaw_rate_range", {cfg.candidates.yaw_rate_min, cfg.candidates.yaw_rate_max});
    cfg.candidates.accel_min = accel.first;
    cfg.candidates.accel_max = accel.second;
    cfg.candidates.yaw_rate_min = yaw.first;
    cfg.candidates.yaw_rate_max = yaw.second;
    cfg.candidates.substeps = c.integer("substeps", cfg.candidates.substeps);
    c.finish();
    validate_section("candidates", [&] { cfg.candidates.validate(); });
  }

  if (r.has("slice")) {
    auto s = r.object("slice");
    cfg.stride = s.integer("stride", 0);
    cfg.comm_count = s.integer("comm_count", cfg.comm_count);
    cfg.max_scenarios = s.integer("max_scenarios", cfg.max_scenarios);
    s.finish();
    if (cfg.stride < 0) s.fail("stride", "must be >= 0 (0 = one full window)");
    if (cfg.comm_count < 1) s.fail("comm_count", "must be >= 1");
    if (cfg.max_scenarios < 0) s.fail("max_scenarios", "must be >= 0");
  }

  if (r.has("augment")) {
    auto a = r.object("augment");
    cfg.augment = a.boolean("enabled", true);
    const auto offset = a.range("occluder_offset", {cfg.augmentation.occluder_offset_min,
                                                    cfg.augmentation.occluder_offset_max});
    cfg.augmentation.occluder_offset_min = offset.first;
    cfg.augmentation.occluder_offset_max = offset.second;
    cfg.augmentation.pedestrian_max_speed =
        a.number("pedestrian_max_speed", cfg.augmentation.pedestrian_max_speed);
    cfg.augmentation.max_attempts = a.integer("max_attempts", cfg.augmentation.max_attempts);
    cfg.augmentation.crossing_fraction =
        a.number("crossing_fraction", cfg.augmentation.crossing_fraction);
    cfg.augmentation.occluder_speed = a.number("occluder_speed", cfg.augmentation.occluder_speed);
    cfg.augmentation.target_candidate =
        a.integer("target_candidate", cfg.augmentation.target_candidate);
    cfg.only_augmented = a.boolean("only_augmented", cfg.only_augmented);
    a.finish();
    validate_section("augment", [&] { cfg.augmentation.validate(); });
    if (cfg.augment && cfg.source == SourceKind::suite) {
      a.fail("enabled", "the crafted suite is already augmented");
    }
  }

  cfg.forecaster = r.string("forecaster", cfg.forecaster);
  if (cfg.forecaster != "oracle" && cfg.forecaster != "persistence") {
    r.fail("forecaster", "expected 'oracle' or 'persistence'");
  }

  if (r.has("policies")) {
    cfg.policies.clear();
    for (const auto& name : r.strings("policies", {})) {
      try {
        cfg.policies.push_back(parse_policy_name(name));
      } catch (const Error& e) {
        r.fail("policies", e.what());
      }
    }
    if (cfg.policies.empty()) r.fail("policies", "must not be empty");
  }

  const std::string selection = r.string("selection", to_string(cfg.selection));
  try {
    cfg.selection = parse_selection_policy(selection);
  } catch (const Error& e) {
    r.fail("selection", e.what());
  }
  if (cfg.selection == SelectionPolicy::random) {
    r.fail("selection", "random selection is the 'rand' policy");
  }
  cfg.threshold = r.number("threshold", cfg.threshold);
  if (cfg.threshold < 0.0) r.fail("threshold", "must be >= 0");

  cfg.n_available = r.integers("n_available", cfg.n_available);
  if (cfg.n_available.empty()) r.fail("n_available", "must not be empty");
  for (int n : cfg.n_available) {
    if (n < 0) r.fail("n_available", "values must be >= 0");
  }
  cfg.k_values = r.integers("k_values", cfg.k_values);
  if (cfg.k_values.empty()) r.fail("k_values", "must not be empty");
  for (int k : cfg.k_values) {
    if (k < 1 || k > cfg.candidates.count()) {
      r.fail("k_values", "values must lie in [1, candidate count]");
    }
  }
  const std::string mode = r.string("topk_mode", to_string(cfg.topk_mode));
  try {
    cfg.topk_mode = parse_topk_mode(mode);
  } catch (const Error& e) {
    r.fail("topk_mode", e.what());
  }

  cfg.seed = r.uint64("seed", cfg.seed);
  cfg.renders = r.integer("renders", cfg.renders);
  if (cfg.renders < 0) r.fail("renders", "must be >= 0");
  cfg.sdf_cap = r.number("sdf_cap", cfg.sdf_cap);
  if (!(cfg.sdf_cap > 0.0)) r.fail("sdf_cap", "must be positive");
  cfg.jobs = r.integer("jobs", cfg.jobs);
  if (cfg.jobs < 1) r.fail("jobs", "must be >= 1");
  r.finish();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("config: " + path + ": " + e.what());
  }
  return parse_experiment_config(j, fs::path(path).parent_path().string());
}

nlohmann::json experiment_config_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  switch (cfg.source) {
    case SourceKind::tracks: j["tracks"] = cfg.tracks_path; break;
    case SourceKind::synth: {
      const auto& s = cfg.synth;
      j["synth"] = {{"vehicles", s.vehicles},
                    {"pedestrians", s.pedestrians},
                    {"frames", s.frames},
                    {"area", s.area},
                    {"road_spacing", s.road_spacing},
                    {"lane_offset", s.lane_offset},
                    {"speed_range", range_json(s.speed_range)},
                    {"pedestrian_speed_range", range_json(s.pedestrian_speed_range)},
                    {"turning_fraction", s.turning_fraction},
                    {"yaw_rate_range", range_json(s.yaw_rate_range)},
                    {"headings", s.headings},
                    {"episodes", cfg.episodes}};
      break;
    }
    case SourceKind::suite: {
      const auto& s = cfg.suite;
      j["suite"] = {{"size", s.size},
                    {"max_tries", s.max_tries},
                    {"lane_width", s.lane_width},
                    {"ego_speed", range_json(s.ego_speed)},
                    {"parked_x", range_json(s.parked_x)},
                    {"parked_spacing", range_json(s.parked_spacing)},
                    {"oncoming_x", range_json(s.oncoming_x)},
                    {"oncoming_speed", range_json(s.oncoming_speed)},
                    {"side_street_x", range_json(s.side_street_x)},
                    {"side_street_y", range_json(s.side_street_y)},
                    {"left_street_x", range_json(s.left_street_x)},
                    {"tailgate_gap", range_json(s.tailgate_gap)},
                    {"crossing_fraction", s.crossing_fraction},
                    {"occluder_speed", s.occluder_speed},
                    {"occluder_offset", range_json(s.occluder_offset)}};
      break;
    }
  }
  j["windows"] = {{"obs_s", cfg.windows.obs_s}, {"plan_s", cfg.windows.plan_s}, {"dt", cfg.dt}};
  j["grid"] = {{"resolution", cfg.grid.resolution},
               {"width", cfg.grid.width},
               {"height", cfg.grid.height}};
  j["sensor"] = {{"n_rays", cfg.sensor.n_rays}, {"max_range", cfg.sensor.max_range}};
  j["candidates"] = {
      {"n_accel", cfg.candidates.n_accel},
      {"n_yaw_rate", cfg.candidates.n_yaw_rate},
      {"accel_range", {cfg.candidates.accel_min, cfg.candidates.accel_max}},
      {"yaw_rate_range", {cfg.candidates.yaw_rate_min, cfg.candidates.yaw_rate_max}},
      {"substeps", cfg.candidates.substeps}};
  j["slice"] = {{"stride", cfg.stride},
                {"comm_count", cfg.comm_count},
                {"max_scenarios", cfg.max_scenarios}};
  const auto& a = cfg.augmentation;
  j["augment"] = {{"enabled", cfg.augment},
                  {"occluder_offset", {a.occluder_offset_min, a.occluder_offset_max}},
                  {"pedestrian_max_speed", a.pedestrian_max_speed},
                  {"max_attempts", a.max_attempts},
                  {"crossing_fraction", a.crossing_fraction},
                  {"occluder_speed", a.occluder_speed},
                  {"target_candidate", a.target_candidate},
                  {"only_augmented", cfg.only_augmented}};
  j["forecaster"] = cfg.forecaster;
  nlohmann::json policies = nlohmann::json::array();
  for (auto p : cfg.policies) policies.push_back(to_string(p));
  j["policies"] = policies;
  j["selection"] = to_string(cfg.selection);
  j["threshold"] = cfg.threshold;
  j["n_available"] = cfg.n_available;
  j["k_values"] = cfg.k_values;
  j["topk_mode"] = to_string(cfg.topk_mode);
  j["seed"] = cfg.seed;
  j["renders"] = cfg.renders;
  j["sdf_cap"] = cfg.sdf_cap;
  j["jobs"] = cfg.jobs;
  return j;
}

AugmentContext augment_context(const ExperimentConfig& cfg) {
  return {cfg.grid, cfg.sensor, cfg.candidates, cfg.augmentation};
}

EvalOptions eval_options(const ExperimentConfig& cfg) {
  EvalOptions opts;
  opts.candidates = cfg.candidates;
  opts.round.grid = cfg.grid;
  opts.round.sdf_cap = cfg.sdf_cap;
  opts.sensor = cfg.sensor;
  if (cfg.forecaster == "persistence") {
    opts.forecaster = std::make_shared<const PersistenceForecaster>(cfg.sensor);
  } else {
    opts.forecaster = std::make_shared<const OracleForecaster>(cfg.sensor);
  }
  opts.mode = cfg.topk_mode;
  opts.jobs = cfg.jobs;
  return opts;
}

std::uint64_t synth_episode_seed(const ExperimentConfig& cfg, int episode) {
  return mix_seed(mix_seed(cfg.seed, kSynthStream), static_cast<std::uint64_t>(episode));
}

std::vector<Scenario> load_scenarios(const ExperimentConfig& cfg) {
  std::vector<Scenario> out;
  if (cfg.source == SourceKind::suite) {
    out = crafted_suite(cfg.suite, cfg.seed, augment_context(cfg));
    for (auto& scn : out) scn.source = "suite";
  } else {
    SliceConfig slice;
    slice.windows = cfg.windows;
    slice.comm_count = cfg.comm_count;
    const auto add = [&](const TrackSet& tracks, const std::string& source, std::uint64_t seed) {
      const int stride = cfg.stride > 0 ? cfg.stride
                                        : cfg.windows.obs_frames(cfg.dt) + cfg.windows.plan_frames(cfg.dt);
      for (auto& scn : slice_scenarios(tracks, stride, seed, slice)) {
        scn.source = source;
        out.push_back(std::move(scn));
      }
    };
    if (cfg.source == SourceKind::tracks) {
      add(load_tracks_csv(cfg.tracks_path, cfg.dt), cfg.tracks_path, cfg.seed);
    } else {
      for (int e = 0; e < cfg.episodes; ++e) {
        const std::uint64_t s = synth_episode_seed(cfg, e);
        add(synth_tracks(cfg.synth, s), "synth:" + std::to_string(e), s);
      }
    }
  }
  if (cfg.max_scenarios > 0 && out.size() > static_cast<std::size_t>(cfg.max_scenarios)) {
    out.resize(static_cast<std::size_t>(cfg.max_scenarios));
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].id = static_cast<int>(i);
  return out;
}

AugmentOutcome augment_all(const std::vector<Scenario>& scenarios, const ExperimentConfig& cfg) {
  const AugmentContext ctx = augment_context(cfg);
  const std::uint64_t base = mix_seed(cfg.seed, kAugmentStream);
  AugmentOutcome out{scenarios, std::vector<bool>(scenarios.size(), false)};
  std::vector<char> ok(scenarios.size(), 0);
  parallel_for(scenarios.size(), cfg.jobs, [&](std::size_t i) {
    try {
      out.scenarios[i] = augment_adversarial(
          scenarios[i], mix_seed(base, static_cast<std::uint64_t>(scenarios[i].id)), ctx);
      ok[i] = 1;
    } catch (const Error&) {
      // infeasible or already critical: keep the scene as recorded
    }
  });
  for (std::size_t i = 0; i < ok.size(); ++i) out.augmented[i] = ok[i] != 0;
  return out;
}

std::vector<CriticalityReport> assess_all(const std::vector<Scenario>& scenarios,
                                          const ExperimentConfig& cfg) {
  std::vector<CriticalityReport> out(scenarios.size());
  parallel_for(scenarios.size(), cfg.jobs, [&](std::size_t i) {
    out[i] = assess_criticality(scenarios[i], scenario_candidates(scenarios[i], cfg.candidates),
                                cfg.sensor);
  });
  return out;
}

std::vector<PolicySpec> experiment_policies(const ExperimentConfig& cfg) {
  const std::uint64_t seed = mix_seed(cfg.seed, kPolicyStream);
  std::vector<PolicySpec> out;
  for (auto name : cfg.policies) {
    if (!communicates(name)) {
      out.push_back(make_policy(name, 0, seed));
      continue;
    }
    for (int n : cfg.n_available) {
      out.push_back(make_policy(name, n, seed, cfg.selection, cfg.threshold));
    }
  }
  return out;
}

void write_metrics_csv(std::ostream& out, const std::vector<EvalResult>& results) {
  out << "policy,n_available,k,collision_rate_pct,rel_to_ego_pct,avg_links,avg_bytes\n";
  for (const auto& r : results) {
    for (int k : r.k_values) {
      out << to_string(r.policy.name) << ',' << r.policy.cfg.n_available << ',' << k << ','
          << fmt(r.rate_pct.at(k)) << ',' << fmt(r.rel_to_ego_pct.at(k)) << ','
          << fmt(r.avg_links) << ',' << fmt(r.avg_bytes) << '\n';
    }
  }
}

void write_histogram_csv(std::ostream& out, const std::vector<std::size_t>& counts) {
  out << "colliding_count,scenarios\n";
  for (std::size_t x = 0; x < counts.size(); ++x) out << x << ',' << counts[x] << '\n';
}

namespace {

nlohmann::json report_json(const CriticalityReport& r) {
  std::vector<int> flagged;
  for (std::size_t i = 0; i < r.collides_with_unseen.size(); ++i) {
    if (r.collides_with_unseen[i]) flagged.push_back(static_cast<int>(i));
  }
  return {{"colliding_count", r.colliding_count},
          {"colliding_candidates", flagged},
          {"unseen_actor_ids", r.unseen_actor_ids}};
}

void write_histogram(const fs::path& dir, const std::string& name,
                     const std::vector<CriticalityReport>& reports, int n_candidates) {
  const auto counts = criticality_histogram(reports, n_candidates);
  std::ostringstream csv;
  write_histogram_csv(csv, counts);
  write_text(dir / (name + ".csv"), csv.str());
  render_histogram(counts, (dir / (name + ".png")).string());
}

}  // namespace

ExperimentSummary run_experiment(const ExperimentConfig& cfg, const std::string& out_dir) {
  const fs::path out(out_dir);
  fs::create_directories(out / "scenarios");
  write_text(out / "config.json", experiment_config_json(cfg).dump(2) + "\n");

  ExperimentSummary summary;
  std::vector<Scenario> scenarios = load_scenarios(cfg);
  if (scenarios.empty()) throw Error("experiment: the source yields no scenarios");
  const int n_candidates = cfg.candidates.count();

  summary.before = assess_all(scenarios, cfg);
  write_histogram(out, "histogram_before", summary.before, n_candidates);

  std::vector<const CriticalityReport*> report_of(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) report_of[i] = &summary.before[i];
  if (cfg.augment) {
    AugmentOutcome aug = augment_all(scenarios, cfg);
    summary.after = assess_all(aug.scenarios, cfg);
    write_histogram(out, "histogram_after", *summary.after, n_candidates);
    scenarios.clear();
    std::vector<const CriticalityReport*> kept;
    for (std::size_t i = 0; i < aug.scenarios.size(); ++i) {
      if (cfg.only_augmented && !aug.augmented[i]) continue;
      scenarios.push_back(std::move(aug.scenarios[i]));
      kept.push_back(&(*summary.after)[i]);
    }
    report_of = std::move(kept);
    if (scenarios.empty()) throw Error("experiment: no scenario could be augmented");
  }

  summary.results = evaluate_all(scenarios, experiment_policies(cfg), cfg.k_values,
                                 eval_options(cfg));

  std::ostringstream metrics;
  write_metrics_csv(metrics, summary.results);
  write_text(out / "metrics.csv", metrics.str());

  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const Scenario& scn = scenarios[i];
    nlohmann::json rounds = nlohmann::json::array();
    for (const auto& r : summary.results) {
      const ScenarioRecord& rec = r.records[i];
      nlohmann::json topk = nlohmann::json::object();
      for (int k : r.k_values) {
        topk[std::to_string(k)] = topk_collision(rec.round.ranking, rec.collisions, k, r.mode);
      }
      rounds.push_back({{"policy", to_string(r.policy.name)},
                        {"n_available", r.policy.cfg.n_available},
                        {"round", round_log_json(rec.round)},
                        {"topk_collision", topk}});
    }
    std::vector<int> colliding;
    const auto& flags = summary.results.front().records[i].collisions;
    for (std::size_t c = 0; c < flags.size(); ++c) {
      if (flags[c]) colliding.push_back(static_cast<int>(c));
    }
    const nlohmann::json log = {{"scenario", scenario_manifest(scn)},
                                {"criticality", report_json(*report_of[i])},
                                {"colliding_candidates", colliding},
                                {"rounds", rounds}};
    write_text(out / "scenarios" / ("scenario_" + padded(scn.id) + ".json"), log.dump(1) + "\n");
  }

  const std::size_t to_render = std::min<std::size_t>(static_cast<std::size_t>(cfg.renders),
                                                      scenarios.size());
  for (std::size_t i = 0; i < to_render; ++i) {
    const Scenario& scn = scenarios[i];
    for (ActorId id : scn.comm_ids) {
      render_agent(scn, id, cfg,
                   (out / "renders" / ("scenario_" + padded(scn.id)) /
                    ("agent_" + std::to_string(id)))
                       .string());
    }
  }

  summary.scenarios = std::move(scenarios);
  return summary;
}

void render_agent(const Scenario& scn, ActorId agent, const ExperimentConfig& cfg,
                  const std::string& out_dir) {
  const fs::path dir(out_dir);
  fs::create_directories(dir);
  const auto opts = eval_options(cfg);
  RoundOptions round;
  round.grid = cfg.grid;
  round.sdf_cap = cfg.sdf_cap;
  const AgentView view = build_agent_view(scn, agent, *opts.forecaster, round);

  const GridSpec spec = view.maps.spec;
  const auto now = observation_sequence(scn.tracks, agent, scn.now_frame(), scn.now_frame(), spec,
                                        cfg.sensor);
  render_raster(now.front(), (dir / "observation_t0").string());
  for (int t = 0; t < view.masks.horizon; ++t) {
    const auto plane = view.masks.plane(t);
    const ObservationRaster forecast{spec, {plane.begin(), plane.end()}};
    const std::string step = std::to_string(t + 1);
    render_raster(forecast, (dir / ("forecast_t" + step)).string());
    render_sdf(view.cost.plane(t), spec, view.cost.cap, (dir / ("costmap_t" + step)).string());
  }
}

}  // namespace cobev
