// Copyright 2026 The fleetreloc Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli/commands.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "fleetreloc/instance_io.h"
#include "fleetreloc/neural.h"
#include "fleetreloc/parallel.h"
#include "fleetreloc/pipeline.h"
#include "fleetreloc/policy.h"

namespace fleetreloc::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

int PositiveInt(const Config& cfg, const std::string& key, long min = 1) {
  const long v = cfg.GetInt(key);
  if (v < min || v > std::numeric_limits<int>::max())
    throw UsageError(fmt::format("{}: must be at least {}, got {}", key, min, v));
  return static_cast<int>(v);
}

double NonNegative(const Config& cfg, const std::string& key) {
  const double v = cfg.GetDouble(key);
  if (!(v >= 0.0) || !std::isfinite(v))
    throw UsageError(fmt::format("{}: must be a finite non-negative number", key));
  return v;
}

fs::path OutDir(const Config& cfg) {
  const fs::path dir = cfg.GetString("run.out_dir");
  fs::create_directories(dir);
  return dir;
}

int Workers(const Config& cfg) { return PositiveInt(cfg, "run.workers"); }

std::string EchoLine(const Config& cfg) {
  return "# config: " + cfg.ToJson(EchoOmittedKeys()).dump() + "\n";
}

// Instance names are used in file names.
std::string SafeName(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return out;
}

std::vector<Policy> PoliciesFrom(const Config& cfg, std::vector<std::string> names) {
  std::shared_ptr<const MlpModel> model;
  const bool wants_model = std::find(names.begin(), names.end(), "learned") != names.end();
  if (wants_model) {
    const std::string path = cfg.GetString("policies.model");
    if (path.empty()) throw UsageError("policies.model: required by the learned policy");
    if (!fs::exists(path)) throw Error("model file not found: " + path);
    model = std::make_shared<const MlpModel>(load_model(path));
  }
  std::vector<Policy> out;
  for (const std::string& name : names) {
    try {
      out.push_back(parse_policy(name, model));
    } catch (const Error& e) {
      throw UsageError(std::string("policies.list: ") + e.what());
    }
  }
  if (out.empty()) throw UsageError("policies.list: empty");
  return out;
}

struct Episode {
  std::string instance;
  std::string policy;
  std::uint64_t seed = 0;
  std::optional<EpisodeMetrics> metrics;
  std::string error;
};

// Runs every (instance, policy) pair and writes the per-episode outputs.
std::vector<Episode> RunEpisodes(const Config& cfg, const std::vector<Scenario>& scenarios,
                                 const std::vector<Policy>& policies, const fs::path& dir,
                                 std::ostream& out) {
  const SimConfig base = SimConfigFrom(cfg);
  const bool epoch_csv = cfg.GetBool("run.epoch_csv");
  const int np = static_cast<int>(policies.size());
  const int jobs = static_cast<int>(scenarios.size()) * np;
  std::vector<Episode> episodes(jobs);
  fs::create_directories(dir / "episodes");
  const json echo = cfg.ToJson(EchoOmittedKeys());
  parallel_for(jobs, Workers(cfg), [&](int job) {
    const Scenario& s = scenarios[job / np];
    const Policy& p = policies[job % np];
    Episode& e = episodes[job];
    e.instance = s.name;
    e.policy = p.name();
    SimConfig sim = base;
    sim.seed = base.seed + static_cast<std::uint64_t>(job / np);
    e.seed = sim.seed;
    try {
      e.metrics = run_episode(s, p, sim);
      const std::string stem = SafeName(s.name) + "__" + p.name();
      json doc;
      doc["instance"] = s.name;
      doc["policy"] = p.name();
      doc["seed"] = sim.seed;
      doc["config"] = echo;
      doc["metrics"] = metrics_to_json(*e.metrics);
      WriteFileAtomic(dir / "episodes" / (stem + ".json"), doc.dump(2) + "\n");
      if (epoch_csv) {
        const fs::path tmp = dir / "episodes" / (stem + ".csv.tmp");
        write_epoch_csv(tmp, *e.metrics);
        fs::rename(tmp, dir / "episodes" / (stem + ".csv"));
      }
    } catch (const std::exception& ex) {
      e.metrics.reset();
      e.error = ex.what();
    }
  });
  for (const Episode& e : episodes)
    if (!e.metrics) out << "episode " << e.instance << " / " << e.policy << " failed: " << e.error << "\n";
  return episodes;
}

void WriteRollup(const Config& cfg, const fs::path& path, const std::vector<Episode>& episodes) {
  std::string csv = EchoLine(cfg);
  csv += "instance,policy,wait_avg,served,dropped,relocations,reloc_time\n";
  for (const Episode& e : episodes) {
    if (!e.metrics) continue;
    const EpisodeMetrics& m = *e.metrics;
    csv += fmt::format("{},{},{:.6f},{},{},{},{:.3f}\n", e.instance, e.policy, m.waiting_avg,
                       m.served, m.dropped, m.relocations, m.relocation_seconds);
  }
  WriteFileAtomic(path, csv);
}

void PrintRollup(std::ostream& out, const std::vector<Episode>& episodes) {
  out << fmt::format("{:<20} {:<12} {:>9} {:>7} {:>7} {:>7}\n", "instance", "policy", "wait_min",
                     "served", "dropped", "reloc");
  for (const Episode& e : episodes) {
    if (!e.metrics) continue;
    out << fmt::format("{:<20} {:<12} {:>9.3f} {:>7} {:>7} {:>7}\n", e.instance, e.policy,
                       e.metrics->waiting_avg, e.metrics->served, e.metrics->dropped,
                       e.metrics->relocations);
  }
}

int ExitCode(const std::vector<Episode>& episodes) {
  for (const Episode& e : episodes)
    if (!e.metrics) return 1;
  return 0;
}

std::uint64_t Fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string LintScenario(const Scenario& s) {
  std::ostringstream why;
  const int n = s.zone_count();
  if (s.travel_epochs.rows() != n || s.travel_epochs.cols() != n)
    why << "travel_epochs: expected " << n << "x" << n << "\n";
  if (s.travel_seconds.rows() != n || s.travel_seconds.cols() != n)
    why << "travel_seconds: expected " << n << "x" << n << "\n";
  for (int i = 0; i < s.travel_epochs.rows(); ++i)
    for (int j = 0; j < s.travel_epochs.cols(); ++j)
      if (s.travel_epochs(i, j) < 1)
        why << fmt::format("travel_epochs[{}][{}]: must be at least 1\n", i, j);
  for (int i = 0; i < s.travel_seconds.rows(); ++i)
    for (int j = 0; j < s.travel_seconds.cols(); ++j)
      if (!(s.travel_seconds(i, j) >= 0.0))
        why << fmt::format("travel_seconds[{}][{}]: must be non-negative\n", i, j);
  for (int i = 0; i < static_cast<int>(s.initial_fleet.size()); ++i)
    if (s.initial_fleet[i] < 0) why << fmt::format("initial_fleet[{}]: negative\n", i);
  if (s.episode_epochs < 1) why << "episode_epochs: must be positive\n";
  if (!(s.epoch_seconds > 0.0)) why << "epoch_seconds: must be positive\n";
  const double end = s.episode_epochs * s.epoch_seconds;
  for (std::size_t k = 0; k < s.trips.size(); ++k) {
    const TripRecord& t = s.trips[k];
    if (t.pickup_seconds < 0.0 || t.pickup_seconds >= end)
      why << fmt::format("trips[{}]: pickup {} outside the episode\n", k, t.pickup_seconds);
    if (t.party_size < 1) why << fmt::format("trips[{}]: party size below 1\n", k);
  }
  return why.str();
}

}  // namespace

const std::set<std::string>& EchoOmittedKeys() {
  static const std::set<std::string> keys = {"run.out_dir", "run.workers"};
  return keys;
}

void WriteFileAtomic(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp.string());
    f << content;
    if (!f.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

SimConfig SimConfigFrom(const Config& cfg) {
  SimConfig s;
  s.tick_seconds = cfg.GetDouble("sim.tick_seconds");
  s.ticks_per_epoch = PositiveInt(cfg, "sim.ticks_per_epoch");
  s.relocation_period_ticks = PositiveInt(cfg, "sim.relocation_period_ticks");
  s.max_wait_epochs = PositiveInt(cfg, "sim.max_wait_epochs");
  s.pooling_ratio = cfg.GetDouble("sim.pooling_ratio");
  s.forecast_sigma_pct = cfg.GetDouble("sim.forecast_sigma_pct");
  s.weights.qp_base = cfg.GetDouble("weights.qp_base");
  s.weights.qp_decay = cfg.GetDouble("weights.qp_decay");
  s.weights.qr_scale = cfg.GetDouble("weights.qr_scale");
  s.weights.qr_base = cfg.GetDouble("weights.qr_base");
  const long big_m = cfg.GetInt("weights.big_m");
  if (big_m < 0) throw UsageError("weights.big_m: must be non-negative (0 = fleet size)");
  if (big_m > 0) s.weights.big_m = static_cast<int>(big_m);
  const long ms = cfg.GetInt("run.time_limit_ms");
  if (ms < 0) throw UsageError("run.time_limit_ms: must be non-negative");
  s.milp.time_limit_s = static_cast<double>(ms) / 1000.0;
  const long nodes = cfg.GetInt("run.node_limit");
  if (nodes < 0) throw UsageError("run.node_limit: must be non-negative (0 = unlimited)");
  s.milp.node_limit = nodes;
  const long seed = cfg.GetInt("run.seed");
  if (seed < 0) throw UsageError("run.seed: must be non-negative");
  s.seed = static_cast<std::uint64_t>(seed);
  try {
    validate_config(s);
  } catch (const Error& e) {
    throw UsageError(std::string("sim: ") + e.what());
  }
  return s;
}

std::vector<Scenario> ScenariosFrom(const Config& cfg) {
  const std::string source = cfg.GetString("scenario.source");
  std::vector<Scenario> out;
  if (source == "files") {
    const std::vector<std::string> files = cfg.GetStringList("scenario.files");
    if (files.empty()) throw UsageError("scenario.files: empty while scenario.source = \"files\"");
    for (const std::string& f : files) {
      Scenario s = read_scenario(f);
      if (s.name.empty()) s.name = fs::path(f).stem().string();
      out.push_back(std::move(s));
    }
    return out;
  }
  if (source != "synthetic")
    throw UsageError("scenario.source: expected \"synthetic\" or \"files\", got \"" + source + "\"");
  SyntheticConfig sc;
  sc.zones = PositiveInt(cfg, "scenario.zones");
  sc.grid_cols = PositiveInt(cfg, "scenario.grid_cols");
  sc.spacing_m = NonNegative(cfg, "scenario.spacing_m");
  sc.jitter_m = NonNegative(cfg, "scenario.jitter_m");
  sc.speed_mps = cfg.GetDouble("scenario.speed_mps");
  if (!(sc.speed_mps > 0.0)) throw UsageError("scenario.speed_mps: must be positive");
  sc.fleet = PositiveInt(cfg, "scenario.fleet", 0);
  sc.hot_zones = PositiveInt(cfg, "scenario.hot_zones");
  if (sc.hot_zones >= sc.zones)
    throw UsageError("scenario.hot_zones: must be below scenario.zones");
  sc.episode_epochs = PositiveInt(cfg, "scenario.epochs");
  const SimConfig sim = SimConfigFrom(cfg);
  sc.epoch_seconds = sim.epoch_seconds();
  sc.tick_seconds = sim.tick_seconds;
  sc.hot_riders_per_epoch = NonNegative(cfg, "scenario.hot_riders_per_epoch");
  sc.background_riders_per_epoch = NonNegative(cfg, "scenario.background_riders_per_epoch");
  sc.background_to_hot = NonNegative(cfg, "scenario.background_to_hot");
  if (sc.background_to_hot > 1.0) throw UsageError("scenario.background_to_hot: must be at most 1");
  const long layout = cfg.GetInt("scenario.layout_seed");
  if (layout < 0) throw UsageError("scenario.layout_seed: must be non-negative");
  sc.layout_seed = static_cast<std::uint64_t>(layout);
  const int count = PositiveInt(cfg, "scenario.instances", 0);
  for (int k = 0; k < count; ++k) {
    sc.seed = sim.seed + static_cast<std::uint64_t>(k);
    Scenario s = make_synthetic_scenario(sc);
    s.name = fmt::format("synthetic-{}", sc.seed);
    out.push_back(std::move(s));
  }
  return out;
}

int RunSimulate(const Config& cfg, std::ostream& out) {
  const std::vector<Policy> policies = PoliciesFrom(cfg, cfg.GetStringList("policies.list"));
  const std::vector<Scenario> scenarios = ScenariosFrom(cfg);
  const fs::path dir = OutDir(cfg);
  const std::vector<Episode> episodes = RunEpisodes(cfg, scenarios, policies, dir, out);
  WriteRollup(cfg, dir / "rollup.csv", episodes);
  PrintRollup(out, episodes);
  return ExitCode(episodes);
}

int RunHarvest(const Config& cfg, std::ostream& out) {
  HarvestConfig hc;
  hc.horizon = PositiveInt(cfg, "harvest.horizon");
  hc.perturbations = PositiveInt(cfg, "harvest.perturbations", 0);
  hc.perturb_sigma_pct = NonNegative(cfg, "harvest.perturb_sigma_pct");
  hc.sim = SimConfigFrom(cfg);
  const std::vector<Scenario> bases = ScenariosFrom(cfg);
  const fs::path dir = OutDir(cfg);
  const fs::path path = dir / cfg.GetString("harvest.output");
  HarvestResult r;
  try {
    r = harvest(bases, hc, Workers(cfg));
  } catch (const std::exception& e) {
    out << "harvest failed: " << e.what() << "\n";
    return 1;
  }
  const fs::path tmp = path.string() + ".tmp";
  write_pairs(tmp, r.pairs);
  fs::rename(tmp, path);
  json summary;
  summary["pairs"] = r.pairs.size();
  summary["decisions"] = r.decisions;
  summary["timeouts"] = r.timeouts;
  summary["timeout_rate"] = r.timeout_rate();
  summary["output"] = path.filename().string();
  summary["seed"] = hc.sim.seed;
  summary["config"] = cfg.ToJson(EchoOmittedKeys());
  WriteFileAtomic(dir / "harvest_summary.json", summary.dump(2) + "\n");
  out << fmt::format("pairs {} from {} decisions; MPC timeout rate {:.4f} ({} without incumbent)\n",
                     r.pairs.size(), r.decisions, r.timeout_rate(), r.timeouts);
  out << "wrote " << path.string() << "\n";
  return 0;
}

int RunTrain(const Config& cfg, std::ostream& out) {
  const std::string dataset = cfg.GetString("train.dataset");
  if (dataset.empty()) throw UsageError("train.dataset: required");
  if (!fs::exists(dataset)) throw Error("dataset not found: " + dataset);
  const std::vector<TrainingPair> pairs = read_pairs(dataset);
  if (pairs.empty()) throw TrainingError("dataset " + dataset + " holds no pairs");
  // input = Z*T supply + Z*Z*T demand, label = 2Z.
  const int zones = static_cast<int>(pairs.front().label.size()) / 2;
  const int per_epoch = zones * (zones + 1);
  const int in = static_cast<int>(pairs.front().input.size());
  if (zones < 1 || in % per_epoch != 0)
    throw Error("dataset " + dataset + ": pair shape matches no zone count and horizon");
  FitConfig fc;
  fc.zones = zones;
  fc.horizon = in / per_epoch;
  fc.split_ratio = PositiveInt(cfg, "train.split_ratio");
  TrainConfig& t = fc.train;
  t.hidden.clear();
  for (long h : cfg.GetIntList("train.hidden")) {
    if (h < 1) throw UsageError("train.hidden: widths must be positive");
    t.hidden.push_back(static_cast<int>(h));
  }
  t.batch_size = PositiveInt(cfg, "train.batch_size");
  t.learning_rate = cfg.GetDouble("train.learning_rate");
  if (!(t.learning_rate > 0.0)) throw UsageError("train.learning_rate: must be positive");
  t.l1 = NonNegative(cfg, "train.l1");
  t.epochs = PositiveInt(cfg, "train.epochs");
  t.kappa = cfg.GetDouble("train.kappa");
  t.mu = PositiveInt(cfg, "train.mu");
  t.tail_weight = NonNegative(cfg, "train.tail_weight");
  t.zero_fraction_threshold = NonNegative(cfg, "train.zero_fraction_threshold");
  t.standardize_inputs = cfg.GetBool("train.standardize_inputs");
  t.seed = SimConfigFrom(cfg).seed;

  const FitResult fit = fit_relocation_model(to_dataset(pairs), fc);
  const FidelityReport rep = evaluate_fidelity(fit.trained.model, fit.validation_set, t.seed);
  const fs::path dir = OutDir(cfg);
  const fs::path model_path = dir / cfg.GetString("train.model");
  const std::string model_text = model_to_string(fit.trained.model);
  WriteFileAtomic(model_path, model_text);
  {
    const fs::path tmp = dir / "training_curve.csv.tmp";
    write_training_curve(tmp, fit.trained.curve);
    fs::rename(tmp, dir / "training_curve.csv");
  }
  std::string val = EchoLine(cfg);
  val += "samples,mse_before_rounding,mse_after_rounding\n";
  val += fmt::format("{},{:.6f},{:.6f}\n", rep.samples, rep.mse_raw, rep.mse_restored);
  WriteFileAtomic(dir / "validation_error.csv", val);
  // Per-element errors against the label mean, inflows first.
  std::vector<double> mean(2 * zones, 0.0);
  for (const std::vector<double>& y : fit.validation_set.labels)
    for (int k = 0; k < 2 * zones; ++k) mean[k] += y[k];
  std::string el = EchoLine(cfg);
  el += "element,side,zone,label_mean,mae_before_rounding,mae_after_rounding\n";
  for (int k = 0; k < 2 * zones; ++k) {
    const double m = rep.samples > 0 ? mean[k] / rep.samples : 0.0;
    el += fmt::format("{},{},{},{:.6f},{:.6f},{:.6f}\n", k, k < zones ? "inflow" : "outflow",
                      k % zones, m, rep.mae_raw[k], rep.mae_restored[k]);
  }
  WriteFileAtomic(dir / "element_error.csv", el);

  out << fmt::format("pairs {} ({} zones, horizon {}); train rows {} after mean-sampling, "
                     "validation rows {}\n",
                     pairs.size(), zones, fc.horizon, fit.train_set.size(), rep.samples);
  out << "validation error (MSE)\n";
  out << fmt::format("  {:<18}{:<18}\n", "before rounding", "after rounding");
  out << fmt::format("  {:<18.4f}{:<18.4f}\n", rep.mse_raw, rep.mse_restored);
  out << fmt::format("max per-element MAE: {:.4f} before rounding, {:.4f} after\n",
                     rep.max_mae_raw(), rep.max_mae_restored());
  out << fmt::format("model {} hash {:016x}\n", model_path.string(), Fnv1a(model_text));
  return 0;
}

int RunEvaluate(const Config& cfg, std::ostream& out) {
  std::vector<std::string> names = cfg.GetStringList("policies.list");
  if (std::find(names.begin(), names.end(), "dispatcher") == names.end())
    names.insert(names.begin(), "dispatcher");
  const std::vector<Policy> policies = PoliciesFrom(cfg, names);
  const std::vector<Scenario> scenarios = ScenariosFrom(cfg);
  const fs::path dir = OutDir(cfg);
  const std::vector<Episode> episodes = RunEpisodes(cfg, scenarios, policies, dir, out);
  WriteRollup(cfg, dir / "rollup.csv", episodes);

  const std::string echo = EchoLine(cfg);
  std::map<std::string, const EpisodeMetrics*> dispatcher;
  for (const Episode& e : episodes)
    if (e.metrics && e.policy == "dispatcher") dispatcher[e.instance] = &*e.metrics;
  auto reduction = [](double base, double w) {
    return base > 0.0 ? 100.0 * (base - w) / base : 0.0;
  };
  std::string red = echo + "instance,policy,wait_avg,reduction_pct\n";
  std::string waits = echo + "instance,policy,epoch,waiting_avg\n";
  std::string relocs = echo + "instance,policy,epoch,relocations\n";
  std::string rtime = echo + "instance,policy,relocations,reloc_time_total_s,reloc_time_mean_s\n";
  std::map<std::string, std::pair<double, double>> totals;  // policy -> (sum wait, sum disp wait)
  std::map<std::string, int> counted;
  for (const Episode& e : episodes) {
    if (!e.metrics) continue;
    const EpisodeMetrics& m = *e.metrics;
    for (const EpochRecord& r : m.epochs) {
      waits += fmt::format("{},{},{},{:.6f}\n", e.instance, e.policy, r.epoch, r.waiting_avg);
      relocs += fmt::format("{},{},{},{}\n", e.instance, e.policy, r.epoch, r.relocations);
    }
    rtime += fmt::format("{},{},{},{:.3f},{:.3f}\n", e.instance, e.policy, m.relocations,
                         m.relocation_seconds,
                         m.relocations > 0 ? m.relocation_seconds / m.relocations : 0.0);
    const auto it = dispatcher.find(e.instance);
    if (e.policy == "dispatcher" || it == dispatcher.end()) continue;
    red += fmt::format("{},{},{:.6f},{:.4f}\n", e.instance, e.policy, m.waiting_avg,
                       reduction(it->second->waiting_avg, m.waiting_avg));
    totals[e.policy].first += m.waiting_avg;
    totals[e.policy].second += it->second->waiting_avg;
    ++counted[e.policy];
  }
  for (const Policy& p : policies) {
    const auto it = totals.find(p.name());
    if (it == totals.end()) continue;
    const int n = counted[p.name()];
    red += fmt::format("all,{},{:.6f},{:.4f}\n", p.name(), it->second.first / n,
                       reduction(it->second.second, it->second.first));
  }
  WriteFileAtomic(dir / "reduction.csv", red);
  WriteFileAtomic(dir / "waiting.csv", waits);
  WriteFileAtomic(dir / "relocations.csv", relocs);
  WriteFileAtomic(dir / "relocation_time.csv", rtime);

  // Wall times; not part of the reproducible outputs.
  std::string tt = "policy,decisions,mean_s,max_s\n";
  out << "\ntransportation solve time\n";
  out << fmt::format("  {:<12} {:>9} {:>10} {:>10}\n", "policy", "decisions", "mean_s", "max_s");
  for (const Policy& p : policies) {
    if (p.kind != PolicyKind::kLearned) continue;
    int n = 0;
    double sum = 0.0;
    double mx = 0.0;
    for (const Episode& e : episodes) {
      if (!e.metrics || e.policy != p.name()) continue;
      for (const EpochRecord& r : e.metrics->epochs) {
        sum += r.transport_seconds;
        mx = std::max(mx, r.transport_seconds);
        ++n;
      }
    }
    const double mean = n > 0 ? sum / n : 0.0;
    tt += fmt::format("{},{},{:.6f},{:.6f}\n", p.name(), n, mean, mx);
    out << fmt::format("  {:<12} {:>9} {:>10.6f} {:>10.6f}\n", p.name(), n, mean, mx);
  }
  WriteFileAtomic(dir / "transport_time.csv", tt);

  out << "\nreduction in average waiting time vs dispatcher\n";
  out << fmt::format("  {:<12} {:>10} {:>12}\n", "policy", "wait_min", "reduction_%");
  for (const Policy& p : policies) {
    const auto it = totals.find(p.name());
    if (it == totals.end()) continue;
    const int n = counted[p.name()];
    out << fmt::format("  {:<12} {:>10.3f} {:>12.2f}\n", p.name(), it->second.first / n,
                       reduction(it->second.second, it->second.first));
  }
  out << "\n";
  PrintRollup(out, episodes);
  return ExitCode(episodes);
}

int RunValidate(const Config& cfg, const std::vector<fs::path>& files, std::ostream& out) {
  int bad = 0;
  if (files.empty()) {
    SimConfigFrom(cfg);
    const std::vector<Scenario> scenarios = ScenariosFrom(cfg);
    for (const Scenario& s : scenarios) {
      const std::string why = LintScenario(s);
      out << s.name << (why.empty() ? ": ok\n" : ":\n" + why);
      bad += !why.empty();
    }
    out << "config: ok\n";
    return bad > 0 ? 1 : 0;
  }
  for (const fs::path& f : files) {
    std::string why;
    try {
      std::ifstream in(f);
      if (!in) throw LoadError("cannot read file");
      const json doc = json::parse(in);
      if (doc.is_object() && doc.contains("initial_fleet")) {
        why = LintScenario(scenario_from_json(doc));
      } else {
        for (const Violation& v : validate_instance(instance_from_json(doc)))
          why += v.ToString() + "\n";
      }
    } catch (const std::exception& e) {
      why = std::string(e.what()) + "\n";
    }
    out << f.string() << (why.empty() ? ": ok\n" : ":\n" + why);
    bad += !why.empty();
  }
  return bad > 0 ? 1 : 0;
}

}  // namespace fleetreloc::cli
