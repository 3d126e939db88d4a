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

#include "fleetreloc/dataio.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <unordered_map>

#include "fleetreloc/instance_io.h"

namespace fleetreloc {
namespace {

using json = nlohmann::json;

constexpr int kMaxDiagnostics = 10;

std::vector<std::string> SplitCsvLine(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        field += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(field));
      field.clear();
    } else if (c != '\r') {
      field += c;
    }
  }
  out.push_back(std::move(field));
  return out;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::optional<double> ParseDouble(const std::string& s) {
  const std::string t = Trim(s);
  if (t.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

std::optional<int> ParseInt(const std::string& s) {
  const std::string t = Trim(s);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) return std::nullopt;
  return v;
}

// Days since 1970-01-01 of a proleptic Gregorian date.
long long DaysFromCivil(int y, unsigned m, unsigned d) {
  y -= m <= 2;
  const int era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return static_cast<long long>(era) * 146097 + static_cast<long long>(doe) - 719468;
}

std::optional<double> ParseTimestamp(const std::string& raw) {
  const std::string s = Trim(raw);
  if (auto plain = ParseDouble(s)) return plain;
  int y, mo, d, h = 0, mi = 0;
  double sec = 0.0;
  char sep = 0;
  std::istringstream in(s);
  char dash1, dash2, colon1, colon2;
  if (!(in >> y >> dash1 >> mo >> dash2 >> d) || dash1 != '-' || dash2 != '-') return std::nullopt;
  if (in.peek() == 'T' || in.peek() == ' ') in.get(sep);
  if (sep != 0) {
    if (!(in >> h >> colon1 >> mi >> colon2 >> sec) || colon1 != ':' || colon2 != ':')
      return std::nullopt;
  }
  if (mo < 1 || mo > 12 || d < 1 || d > 31 || h < 0 || h > 23 || mi < 0 || mi > 59 ||
      sec < 0.0 || sec >= 61.0)
    return std::nullopt;
  return static_cast<double>(DaysFromCivil(y, mo, d)) * 86400.0 + h * 3600.0 + mi * 60.0 + sec;
}

json TripsToJson(const std::vector<TripRecord>& trips) {
  json out = json::array();
  for (const TripRecord& t : trips)
    out.push_back({t.pickup_seconds, t.origin, t.destination, t.party_size});
  return out;
}

template <typename T>
json MatrixJson(const Matrix<T>& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

template <typename T>
Matrix<T> MatrixOf(const json& doc, int n, const char* field) {
  if (!doc.is_array() || static_cast<int>(doc.size()) != n)
    throw LoadError(std::string(field) + ": expected " + std::to_string(n) + " rows");
  Matrix<T> m(n, n);
  for (int r = 0; r < n; ++r) {
    if (!doc[r].is_array() || static_cast<int>(doc[r].size()) != n)
      throw LoadError(std::string(field) + ": row " + std::to_string(r) + " has the wrong length");
    for (int c = 0; c < n; ++c) m(r, c) = doc[r][c].get<T>();
  }
  return m;
}

}  // namespace

std::optional<int> ZoneGrid::ZoneOf(double x, double y) const {
  if (!(cell_width > 0.0) || !(cell_height > 0.0)) return std::nullopt;
  const double fx = (x - min_x) / cell_width;
  const double fy = (y - min_y) / cell_height;
  if (!(fx >= 0.0) || !(fy >= 0.0) || fx > cols || fy > rows) return std::nullopt;
  const int c = std::min(cols - 1, static_cast<int>(fx));
  const int r = std::min(rows - 1, static_cast<int>(fy));
  return r * cols + c;
}

ZoneSet ZoneGrid::Zones() const {
  ZoneSet z;
  z.count = zone_count();
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c)
      z.centroids.push_back({min_x + (c + 0.5) * cell_width, min_y + (r + 0.5) * cell_height});
  return z;
}

TripLoad load_trips(const std::filesystem::path& path, const TripCsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open trip file " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw LoadError(path.string() + ": missing header row");
  const std::vector<std::string> header = SplitCsvLine(line);
  auto column = [&](const std::string& name) -> int {
    for (std::size_t k = 0; k < header.size(); ++k)
      if (Trim(header[k]) == name) return static_cast<int>(k);
    return -1;
  };
  const int c_time = column(schema.pickup_time);
  const int c_pz = column(schema.pickup_zone), c_dz = column(schema.dropoff_zone);
  const int c_px = column(schema.pickup_lon), c_py = column(schema.pickup_lat);
  const int c_dx = column(schema.dropoff_lon), c_dy = column(schema.dropoff_lat);
  const int c_party = column(schema.passenger_count);
  if (c_time < 0) throw LoadError(path.string() + ": no column '" + schema.pickup_time + "'");
  const bool by_zone = c_pz >= 0 && c_dz >= 0;
  const bool by_coord = c_px >= 0 && c_py >= 0 && c_dx >= 0 && c_dy >= 0;
  if (!by_zone && !by_coord)
    throw LoadError(path.string() + ": needs zone columns or pickup/dropoff coordinates");
  if (!by_zone && !schema.grid)
    throw LoadError(path.string() + ": coordinate columns need a zone grid");

  TripLoad out;
  std::vector<std::pair<double, TripRecord>> rows;
  int line_no = 1;
  auto malformed = [&](const std::string& why) {
    ++out.malformed;
    if (static_cast<int>(out.diagnostics.size()) < kMaxDiagnostics)
      out.diagnostics.push_back("line " + std::to_string(line_no) + ": " + why);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (Trim(line).empty()) continue;
    const std::vector<std::string> f = SplitCsvLine(line);
    auto field = [&](int c) -> std::string { return c >= 0 && c < static_cast<int>(f.size()) ? f[c] : ""; };
    const auto t = ParseTimestamp(field(c_time));
    if (!t) {
      malformed("bad timestamp '" + field(c_time) + "'");
      continue;
    }
    TripRecord rec;
    if (c_party >= 0) {
      const auto p = ParseInt(field(c_party));
      if (!p || *p < 0) {
        malformed("bad passenger count '" + field(c_party) + "'");
        continue;
      }
      if (*p == 0) continue;  // no rider to serve
      rec.party_size = *p;
    }
    if (by_zone) {
      const auto o = ParseInt(field(c_pz)), d = ParseInt(field(c_dz));
      if (!o || !d) {
        malformed("bad zone id");
        continue;
      }
      if (*o < 0 || *d < 0 || (schema.zone_count > 0 && (*o >= schema.zone_count || *d >= schema.zone_count))) {
        ++out.unmappable;
        continue;
      }
      rec.origin = *o;
      rec.destination = *d;
    } else {
      const auto px = ParseDouble(field(c_px)), py = ParseDouble(field(c_py));
      const auto dx = ParseDouble(field(c_dx)), dy = ParseDouble(field(c_dy));
      if (!px || !py || !dx || !dy) {
        malformed("bad coordinates");
        continue;
      }
      const auto o = schema.grid->ZoneOf(*px, *py), d = schema.grid->ZoneOf(*dx, *dy);
      if (!o || !d) {
        ++out.unmappable;
        continue;
      }
      rec.origin = *o;
      rec.destination = *d;
    }
    rows.push_back({*t, rec});
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  double start = schema.start_seconds.value_or(rows.empty() ? 0.0 : rows.front().first);
  for (auto& [t, rec] : rows) {
    rec.pickup_seconds = t - start;
    out.trips.push_back(rec);
  }
  return out;
}

int vehicles_needed(int riders, double pooling_ratio) {
  if (riders <= 0) return 0;
  // The epsilon keeps exact multiples such as 3 / 1.5 from rounding up.
  return static_cast<int>(std::ceil(riders / pooling_ratio - 1e-9));
}

Tensor3<int> build_demand(const std::vector<TripRecord>& trips, int zones,
                          const HorizonConfig& horizon, double pooling_ratio,
                          double start_seconds) {
  Tensor3<int> riders(zones, zones, horizon.epochs, 0);
  for (const TripRecord& t : trips) {
    const double rel = t.pickup_seconds - start_seconds;
    if (rel < 0.0) continue;
    const auto epoch = static_cast<long long>(std::floor(rel / horizon.epoch_seconds));
    if (epoch >= horizon.epochs) continue;
    if (t.origin < 0 || t.origin >= zones || t.destination < 0 || t.destination >= zones) continue;
    riders(t.origin, t.destination, static_cast<int>(epoch)) += t.party_size;
  }
  for (int& v : riders.data()) v = vehicles_needed(v, pooling_ratio);
  return riders;
}

Tensor3<int> forecast_demand(const Tensor3<int>& demand, double sigma_pct, std::uint64_t seed) {
  Tensor3<int> out = demand;
  if (sigma_pct <= 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int& v : out.data()) {
    const double z = unit(rng);  // drawn for every cell, keeps cells independent of each other
    if (v == 0) continue;
    v = std::max(0, static_cast<int>(std::lround(v + z * sigma_pct / 100.0 * v)));
  }
  return out;
}

std::vector<TripRecord> perturb_trips(const std::vector<TripRecord>& trips, std::uint64_t seed,
                                      double tick_seconds, double sigma_pct,
                                      std::optional<double> forced_pct, double* drawn_pct) {
  std::mt19937_64 rng(seed);
  const double p = forced_pct ? *forced_pct : std::normal_distribution<double>(0.0, sigma_pct)(rng);
  if (drawn_pct != nullptr) *drawn_pct = p;
  const int n = static_cast<int>(trips.size());
  const int k = std::min(n, static_cast<int>(std::lround(std::abs(p) / 100.0 * n)));
  if (k == 0) return trips;

  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(k);
  std::vector<TripRecord> out;
  if (p < 0.0) {
    std::vector<bool> drop(n, false);
    for (int i : idx) drop[i] = true;
    for (int i = 0; i < n; ++i)
      if (!drop[i]) out.push_back(trips[i]);
    return out;
  }
  out = trips;
  std::sort(idx.begin(), idx.end());
  std::uniform_int_distribution<int> jitter(-1, 1);
  for (int i : idx) {
    TripRecord copy = trips[i];
    copy.pickup_seconds = std::max(0.0, copy.pickup_seconds + jitter(rng) * tick_seconds);
    out.push_back(copy);
  }
  std::stable_sort(out.begin(), out.end(), [](const TripRecord& a, const TripRecord& b) {
    return a.pickup_seconds < b.pickup_seconds;
  });
  return out;
}

int Scenario::fleet_size() const {
  return std::accumulate(initial_fleet.begin(), initial_fleet.end(), 0);
}

void derive_travel(const ZoneSet& zones, double speed_mps, double epoch_seconds,
                   Matrix<int>* travel_epochs, Matrix<double>* travel_seconds) {
  const int n = zones.count;
  *travel_epochs = Matrix<int>(n, n, 1);
  *travel_seconds = Matrix<double>(n, n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double d = std::abs(zones.centroids[i].x - zones.centroids[j].x) +
                       std::abs(zones.centroids[i].y - zones.centroids[j].y);
      const double s = d / speed_mps;
      (*travel_seconds)(i, j) = s;
      (*travel_epochs)(i, j) = std::max(1, static_cast<int>(std::ceil(s / epoch_seconds - 1e-9)));
    }
}

Scenario make_synthetic_scenario(const SyntheticConfig& cfg) {
  if (cfg.zones < 2 || cfg.grid_cols < 1 || cfg.hot_zones < 1 || cfg.hot_zones >= cfg.zones)
    throw Error("synthetic scenario needs at least 2 zones and 1 <= hot_zones < zones");
  std::mt19937_64 rng(cfg.seed);
  Scenario s;
  s.name = "synthetic-" + std::to_string(cfg.seed);
  s.episode_epochs = cfg.episode_epochs;
  s.epoch_seconds = cfg.epoch_seconds;
  s.zones.count = cfg.zones;
  std::mt19937_64 layout_rng(cfg.layout_seed);
  std::uniform_real_distribution<double> jitter(-cfg.jitter_m, cfg.jitter_m);
  for (int z = 0; z < cfg.zones; ++z) {
    const int c = z % cfg.grid_cols, r = z / cfg.grid_cols;
    const double dx = jitter(layout_rng), dy = jitter(layout_rng);
    s.zones.centroids.push_back({(c + 0.5) * cfg.spacing_m + dx, (r + 0.5) * cfg.spacing_m + dy});
  }
  derive_travel(s.zones, cfg.speed_mps, cfg.epoch_seconds, &s.travel_epochs, &s.travel_seconds);

  // Zones ordered by distance from the west edge; the first ones are hot,
  // the fleet starts in the last ones.
  std::vector<int> order(cfg.zones);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return s.zones.centroids[a].x + 1e-3 * s.zones.centroids[a].y <
           s.zones.centroids[b].x + 1e-3 * s.zones.centroids[b].y;
  });
  const std::vector<int> hot(order.begin(), order.begin() + cfg.hot_zones);
  const std::vector<int> cold(order.begin() + cfg.hot_zones, order.end());
  const int depots = std::max(1, static_cast<int>(cold.size()) / 2);
  s.initial_fleet.assign(cfg.zones, 0);
  for (int v = 0; v < cfg.fleet; ++v) s.initial_fleet[order[cfg.zones - 1 - v % depots]] += 1;

  const int ticks_per_epoch = std::max(1, static_cast<int>(std::lround(cfg.epoch_seconds / cfg.tick_seconds)));
  std::uniform_int_distribution<int> tick_in_epoch(0, ticks_per_epoch - 1);
  std::uniform_int_distribution<int> pick_hot(0, static_cast<int>(hot.size()) - 1);
  std::uniform_int_distribution<int> pick_cold(0, static_cast<int>(cold.size()) - 1);
  auto add = [&](int epoch, int o, int d) {
    TripRecord t;
    t.pickup_seconds = (epoch * ticks_per_epoch + tick_in_epoch(rng)) * cfg.tick_seconds;
    t.origin = o;
    t.destination = d;
    s.trips.push_back(t);
  };
  for (int e = 0; e < cfg.episode_epochs; ++e) {
    const int n_hot = std::poisson_distribution<int>(cfg.hot_riders_per_epoch)(rng);
    for (int k = 0; k < n_hot; ++k) add(e, hot[pick_hot(rng)], cold[pick_cold(rng)]);
    const int n_bg = std::poisson_distribution<int>(cfg.background_riders_per_epoch)(rng);
    for (int k = 0; k < n_bg; ++k) {
      const int o = cold[pick_cold(rng)];
      int d = cold[pick_cold(rng)];
      if (d == o || std::bernoulli_distribution(cfg.background_to_hot)(rng)) d = hot[pick_hot(rng)];
      add(e, o, d);
    }
  }
  std::stable_sort(s.trips.begin(), s.trips.end(), [](const TripRecord& a, const TripRecord& b) {
    return a.pickup_seconds < b.pickup_seconds;
  });
  return s;
}

json scenario_to_json(const Scenario& s) {
  json zones{{"count", s.zones.count}, {"centroids", json::array()}};
  for (const Point& p : s.zones.centroids) zones["centroids"].push_back({p.x, p.y});
  return {{"name", s.name},
          {"zones", zones},
          {"travel_epochs", MatrixJson(s.travel_epochs)},
          {"travel_seconds", MatrixJson(s.travel_seconds)},
          {"initial_fleet", s.initial_fleet},
          {"episode_epochs", s.episode_epochs},
          {"epoch_seconds", s.epoch_seconds},
          {"trips", TripsToJson(s.trips)}};
}

Scenario scenario_from_json(const json& doc) {
  try {
    Scenario s;
    s.name = doc.value("name", "");
    const json& zones = doc.at("zones");
    s.zones.count = zones.at("count").get<int>();
    if (s.zones.count < 1) throw LoadError("zones.count must be positive");
    for (const json& p : zones.value("centroids", json::array()))
      s.zones.centroids.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
    const int n = s.zones.count;
    s.travel_epochs = MatrixOf<int>(doc.at("travel_epochs"), n, "travel_epochs");
    s.travel_seconds = MatrixOf<double>(doc.at("travel_seconds"), n, "travel_seconds");
    s.initial_fleet = doc.at("initial_fleet").get<std::vector<int>>();
    if (static_cast<int>(s.initial_fleet.size()) != n)
      throw LoadError("initial_fleet: expected " + std::to_string(n) + " entries");
    s.episode_epochs = doc.at("episode_epochs").get<int>();
    s.epoch_seconds = doc.value("epoch_seconds", 300.0);
    for (const json& t : doc.at("trips")) {
      TripRecord r{t.at(0).get<double>(), t.at(1).get<int>(), t.at(2).get<int>(),
                   t.size() > 3 ? t.at(3).get<int>() : 1};
      if (r.origin < 0 || r.origin >= n || r.destination < 0 || r.destination >= n)
        throw LoadError("trip zone out of range");
      s.trips.push_back(r);
    }
    std::stable_sort(s.trips.begin(), s.trips.end(), [](const TripRecord& a, const TripRecord& b) {
      return a.pickup_seconds < b.pickup_seconds;
    });
    return s;
  } catch (const json::exception& e) {
    throw LoadError(std::string("malformed scenario: ") + e.what());
  }
}

void write_scenario(const std::filesystem::path& path, const Scenario& s) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << scenario_to_json(s).dump() << '\n';
}

Scenario read_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open scenario " + path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw LoadError(path.string() + ": " + e.what());
  }
  return scenario_from_json(doc);
}

}  // namespace fleetreloc
