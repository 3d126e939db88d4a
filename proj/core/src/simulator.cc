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

#include "fleetreloc/simulator.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include <spdlog/spdlog.h>

#include "fleetreloc/instance_io.h"

namespace fleetreloc {
namespace {

using json = nlohmann::json;

std::uint64_t Mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

int SimConfig::pooling_cap() const {
  return std::max(1, static_cast<int>(std::ceil(pooling_ratio - 1e-9)));
}

void validate_config(const SimConfig& cfg) {
  if (!(cfg.tick_seconds > 0.0)) throw Error("tick_seconds must be positive");
  if (cfg.ticks_per_epoch < 1) throw Error("ticks_per_epoch must be at least 1");
  if (cfg.relocation_period_ticks < 1)
    throw Error("relocation_period_ticks must be a positive multiple of the dispatch period");
  if (cfg.max_wait_epochs < 1) throw Error("max_wait_epochs must be at least 1");
  if (!(cfg.pooling_ratio > 0.0)) throw Error("pooling_ratio must be positive");
  if (cfg.forecast_sigma_pct < 0.0) throw Error("forecast_sigma_pct must be non-negative");
}

Simulator::Simulator(const Scenario& scenario, const SimConfig& cfg)
    : scenario_(scenario), cfg_(cfg) {
  validate_config(cfg);
  if (static_cast<int>(scenario.initial_fleet.size()) != scenario.zone_count())
    throw Error("initial_fleet has " + std::to_string(scenario.initial_fleet.size()) +
                " entries for " + std::to_string(scenario.zone_count()) + " zones");
  for (int z = 0; z < scenario.zone_count(); ++z)
    for (int k = 0; k < scenario.initial_fleet[z]; ++k)
      vehicles_.push_back({static_cast<int>(vehicles_.size()), VehicleStatus::kIdle, z, 0});
}

void Simulator::Advance(long tick) {
  if (tick < now_) throw Error("simulator clock cannot go backwards");
  now_ = tick;
  for (Vehicle& v : vehicles_)
    if (v.status != VehicleStatus::kIdle && v.arrival_tick <= now_) v.status = VehicleStatus::kIdle;

  const auto& trips = scenario_.trips;
  while (next_trip_ < trips.size()) {
    const TripRecord& t = trips[next_trip_];
    const long at = static_cast<long>(std::floor(t.pickup_seconds / cfg_.tick_seconds + 1e-9));
    if (at > now_) break;
    RiderRequest r;
    r.id = static_cast<int>(riders_.size());
    r.origin = t.origin;
    r.destination = t.destination;
    r.arrival_tick = at;
    r.party_size = t.party_size;
    riders_.push_back(r);
    open_.push_back(r.id);
    ++metrics_.arrivals;
    ++next_trip_;
  }

  const long max_wait = static_cast<long>(cfg_.max_wait_epochs) * cfg_.ticks_per_epoch;
  std::erase_if(open_, [&](int id) {
    RiderRequest& r = riders_[id];
    if (now_ - r.arrival_tick <= max_wait) return false;
    r.dropout_tick = now_;
    ++metrics_.dropped;
    return true;
  });
}

void Simulator::Finish(long pickup, RiderRequest& r) {
  r.pickup_tick = pickup;
  ++metrics_.served;
  epoch_wait_sum_ += (pickup - r.arrival_tick) * cfg_.tick_seconds / 60.0;
}

int Simulator::Dispatch() {
  const int nz = scenario_.zone_count();
  std::vector<std::vector<int>> idle(nz);  // ascending ids
  for (const Vehicle& v : vehicles_)
    if (v.status == VehicleStatus::kIdle) idle[v.zone].push_back(v.id);
  std::vector<std::size_t> next_idle(nz, 0);

  const int cap = cfg_.pooling_cap();
  int dispatched = 0;
  std::vector<bool> taken(open_.size(), false);
  for (std::size_t a = 0; a < open_.size(); ++a) {
    if (taken[a]) continue;
    const RiderRequest& first = riders_[open_[a]];
    const int zone = first.origin;
    if (next_idle[zone] == idle[zone].size()) continue;
    Vehicle& v = vehicles_[idle[zone][next_idle[zone]++]];
    int load = 0;
    for (std::size_t b = a; b < open_.size(); ++b) {
      if (taken[b]) continue;
      RiderRequest& r = riders_[open_[b]];
      if (r.origin != zone || r.destination != first.destination) continue;
      // The oldest rider always boards, even when the party alone exceeds the cap.
      if (b != a && load + r.party_size > cap) continue;
      load += r.party_size;
      taken[b] = true;
      Finish(now_, r);
    }
    v.status = VehicleStatus::kServing;
    v.zone = first.destination;
    // Trips inside a zone take one epoch.
    const int lambda = zone == first.destination
                           ? 1
                           : std::max(1, scenario_.travel_epochs(zone, first.destination));
    v.arrival_tick = now_ + static_cast<long>(lambda) * cfg_.ticks_per_epoch;
    ++dispatched;
  }
  std::size_t k = 0;
  std::erase_if(open_, [&](int) { return taken[k++]; });
  return dispatched;
}

Matrix<int> Simulator::EstimateSupply(int epochs) const {
  Matrix<int> v(scenario_.zone_count(), epochs, 0);
  for (const Vehicle& veh : vehicles_) {
    if (veh.status == VehicleStatus::kIdle) {
      v(veh.zone, 0) += 1;
      continue;
    }
    const long idx = (veh.arrival_tick - now_) / cfg_.ticks_per_epoch;
    if (idx < epochs) v(veh.zone, static_cast<int>(idx)) += 1;
  }
  return v;
}

Tensor3<int> Simulator::TrueDemand(int epochs) const {
  const int nz = scenario_.zone_count();
  Tensor3<int> riders(nz, nz, epochs, 0);
  for (int id : open_) {
    const RiderRequest& r = riders_[id];
    riders(r.origin, r.destination, 0) += r.party_size;
  }
  const long epoch_start = now_ - now_ % cfg_.ticks_per_epoch;
  for (std::size_t k = next_trip_; k < scenario_.trips.size(); ++k) {
    const TripRecord& t = scenario_.trips[k];
    const long at = static_cast<long>(std::floor(t.pickup_seconds / cfg_.tick_seconds + 1e-9));
    const long e = (at - epoch_start) / cfg_.ticks_per_epoch;
    if (e >= epochs) break;
    riders(t.origin, t.destination, static_cast<int>(e)) += t.party_size;
  }
  for (int& x : riders.data()) x = vehicles_needed(x, cfg_.pooling_ratio);
  return riders;
}

int Simulator::ApplyRelocations(const RelocationPlan& plan) {
  const int nz = scenario_.zone_count();
  if (plan.zone_count() != nz) throw Error("relocation plan has the wrong zone count");
  std::vector<std::vector<int>> idle(nz);
  for (const Vehicle& v : vehicles_)
    if (v.status == VehicleStatus::kIdle) idle[v.zone].push_back(v.id);
  int moved = 0;
  for (int i = 0; i < nz; ++i) {
    std::size_t next = 0;
    int requested = 0;
    for (int j = 0; j < nz; ++j) requested += j == i ? 0 : std::max(0, plan.flows(i, j));
    if (requested > static_cast<int>(idle[i].size()))
      spdlog::warn("relocation plan sends {} vehicles out of zone {} which has {} idle; clipping",
                   requested, i, idle[i].size());
    for (int j = 0; j < nz; ++j) {
      if (j == i) continue;
      for (int n = 0; n < plan.flows(i, j) && next < idle[i].size(); ++n) {
        Vehicle& v = vehicles_[idle[i][next++]];
        v.status = VehicleStatus::kRelocating;
        v.zone = j;
        v.arrival_tick = now_ + static_cast<long>(std::max(1, scenario_.travel_epochs(i, j))) *
                                    cfg_.ticks_per_epoch;
        ++moved;
        ++metrics_.relocations;
        metrics_.relocation_seconds += scenario_.travel_seconds(i, j);
      }
    }
  }
  return moved;
}

int Simulator::idle_count() const {
  return static_cast<int>(std::count_if(vehicles_.begin(), vehicles_.end(), [](const Vehicle& v) {
    return v.status == VehicleStatus::kIdle;
  }));
}

EpisodeMetrics run_episode(const Scenario& scenario, const Policy& policy, const SimConfig& cfg,
                           std::vector<TrainingPair>* pairs, int group) {
  Simulator sim(scenario, cfg);
  const long total_ticks = static_cast<long>(scenario.episode_epochs) * cfg.ticks_per_epoch;
  const int horizon = policy.planning_horizon();
  EpochRecord rec;
  int served_at_start = 0, dropped_at_start = 0;
  for (long tick = 0; tick < total_ticks; ++tick) {
    if (tick % cfg.ticks_per_epoch == 0) {
      rec = EpochRecord{};
      rec.epoch = static_cast<int>(tick / cfg.ticks_per_epoch);
      sim.epoch_wait_sum_ = 0.0;
      served_at_start = sim.metrics_.served;
      dropped_at_start = sim.metrics_.dropped;
    }
    sim.Advance(tick);
    sim.Dispatch();
    if (tick % cfg.ticks_per_epoch == 0) rec.idle_count = sim.idle_count();
    if (tick % cfg.relocation_period_ticks == 0 && horizon > 0) {
      const std::uint64_t epoch_seed = Mix(cfg.seed, static_cast<std::uint64_t>(tick));
      const HorizonConfig h{horizon, std::min(cfg.max_wait_epochs, horizon), cfg.epoch_seconds()};
      MpcInstance inst = make_empty_instance(scenario.zone_count(), h, cfg.pooling_ratio);
      inst.zones = scenario.zones;
      inst.weights = cfg.weights;
      inst.supply = sim.EstimateSupply(horizon);
      inst.demand = forecast_demand(sim.TrueDemand(horizon), cfg.forecast_sigma_pct, Mix(epoch_seed, 1));
      inst.travel_epochs = scenario.travel_epochs;
      inst.travel_seconds = scenario.travel_seconds;
      DecideOptions opts;
      opts.milp = cfg.milp;
      opts.seed = Mix(epoch_seed, 2);
      const Decision d = decide(policy, inst, opts);
      ++sim.metrics_.decisions;
      rec.decide_seconds += d.wall_seconds;
      rec.transport_seconds += d.transport_seconds;
      if (d.solver_failed) {
        rec.solver_failed = true;
        ++sim.metrics_.solver_failures;
      } else if (pairs != nullptr && policy.kind == PolicyKind::kMpc) {
        pairs->push_back({encode_input(inst), encode_label(aggregate(d.plan)), group,
                          static_cast<int>(tick / cfg.ticks_per_epoch)});
      }
      rec.relocations += sim.ApplyRelocations(d.plan);
    }
    if ((tick + 1) % cfg.ticks_per_epoch == 0 || tick + 1 == total_ticks) {
      rec.served = sim.metrics_.served - served_at_start;
      rec.dropped = sim.metrics_.dropped - dropped_at_start;
      rec.waiting_avg = rec.served > 0 ? sim.epoch_wait_sum_ / rec.served : 0.0;
      sim.metrics_.epochs.push_back(rec);
    }
  }
  EpisodeMetrics m = sim.metrics_;
  double wait_sum = 0.0;
  for (const RiderRequest& r : sim.riders())
    if (r.pickup_tick) wait_sum += (*r.pickup_tick - r.arrival_tick) * cfg.tick_seconds / 60.0;
  m.waiting_avg = m.served > 0 ? wait_sum / m.served : 0.0;
  m.waiting = m.arrivals - m.served - m.dropped;
  return m;
}

json config_to_json(const SimConfig& cfg) {
  return {{"tick_seconds", cfg.tick_seconds},
          {"ticks_per_epoch", cfg.ticks_per_epoch},
          {"relocation_period_ticks", cfg.relocation_period_ticks},
          {"max_wait_epochs", cfg.max_wait_epochs},
          {"pooling_ratio", cfg.pooling_ratio},
          {"forecast_sigma_pct", cfg.forecast_sigma_pct},
          {"weights",
           {{"qp_base", cfg.weights.qp_base},
            {"qp_decay", cfg.weights.qp_decay},
            {"qr_scale", cfg.weights.qr_scale},
            {"qr_base", cfg.weights.qr_base},
            {"big_m", cfg.weights.big_m ? json(*cfg.weights.big_m) : json(nullptr)}}},
          {"milp",
           {{"time_limit_s", std::isfinite(cfg.milp.time_limit_s) ? json(cfg.milp.time_limit_s) : json(nullptr)},
            {"node_limit", cfg.milp.node_limit},
            {"relative_gap", cfg.milp.relative_gap}}},
          {"seed", cfg.seed}};
}

json metrics_to_json(const EpisodeMetrics& m, bool include_timings) {
  json epochs = json::array();
  for (const EpochRecord& e : m.epochs) {
    json row{{"epoch", e.epoch},
             {"waiting_avg", e.waiting_avg},
             {"served", e.served},
             {"dropped", e.dropped},
             {"relocations", e.relocations},
             {"idle_count", e.idle_count},
             {"solver_failed", e.solver_failed}};
    if (include_timings) {
      row["decide_seconds"] = e.decide_seconds;
      row["transport_seconds"] = e.transport_seconds;
    }
    epochs.push_back(std::move(row));
  }
  return {{"waiting_avg", m.waiting_avg},
          {"arrivals", m.arrivals},
          {"served", m.served},
          {"dropped", m.dropped},
          {"waiting", m.waiting},
          {"relocations", m.relocations},
          {"relocation_seconds", m.relocation_seconds},
          {"decisions", m.decisions},
          {"solver_failures", m.solver_failures},
          {"epochs", epochs}};
}

void write_epoch_csv(const std::filesystem::path& path, const EpisodeMetrics& m) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << "epoch,waiting_avg,relocations,idle_count\n";
  for (const EpochRecord& e : m.epochs)
    out << e.epoch << ',' << e.waiting_avg << ',' << e.relocations << ',' << e.idle_count << '\n';
}

json pair_to_json(const TrainingPair& p) {
  return {{"group", p.group}, {"epoch", p.epoch}, {"input", p.input}, {"label", p.label}};
}

TrainingPair pair_from_json(const json& doc) {
  try {
    TrainingPair p;
    p.group = doc.value("group", 0);
    p.epoch = doc.value("epoch", 0);
    p.input = doc.at("input").get<std::vector<double>>();
    p.label = doc.at("label").get<std::vector<double>>();
    return p;
  } catch (const json::exception& e) {
    throw LoadError(std::string("malformed training pair: ") + e.what());
  }
}

void write_pairs(const std::filesystem::path& path, const std::vector<TrainingPair>& pairs) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (const TrainingPair& p : pairs) out << pair_to_json(p).dump() << '\n';
}

std::vector<TrainingPair> read_pairs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open training pairs " + path.string());
  std::vector<TrainingPair> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(pair_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw LoadError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    } catch (const LoadError& e) {
      throw LoadError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace fleetreloc
