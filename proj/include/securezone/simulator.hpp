#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "securezone/protocol.hpp"

namespace securezone {

// Deterministic discrete-event simulation: zones broadcast beacons over
// disc-shaped radio ranges, firearms move on waypoint paths and assess every
// beacon they are in range of. One scenario file fully determines the log.
//
// Clock model: an entity's `clock_offset` is how far its clock lags the
// global timeline (negative = running ahead). A zone schedules beacons at
// multiples of its period on its own clock, so beacon k is broadcast at
// global time k*period + offset and stamped ts = k*period. A firearm
// receiving at global time t assesses with its clock reading t - offset.

struct ScenarioInvalid : Error {
  using Error::Error;
};

struct ZoneSpec {
  std::uint32_t sza_id = 0;
  double x = 0;
  double y = 0;
  double radius = 0;
  std::string policy;
  double beacon_period = 5.0;
  double clock_offset = 0.0;
};

struct FirearmSpec {
  struct Waypoint {
    double t = 0;
    double x = 0;
    double y = 0;
  };

  std::uint64_t firearm_id = 0;
  std::uint64_t user_id = 0;
  std::vector<std::string> attributes;
  std::uint64_t expires_at = 0;
  std::vector<Waypoint> path;
  double clock_offset = 0.0;
};

struct Scenario {
  double duration = 0;
  std::uint64_t seed = 0;
  std::uint32_t token_window = kDefaultTokenWindow;
  AttributeSet universe;
  std::vector<ZoneSpec> zones;
  std::vector<FirearmSpec> firearms;
};

struct EventRecord {
  double t = 0;  // global beacon time
  std::uint32_t sza_id = 0;
  std::uint64_t firearm_id = 0;
  double distance = 0;
  AdvisoryOutcome outcome;
};

struct EventLog {
  std::vector<EventRecord> records;
};

/// Piecewise-linear position along the waypoint path, held constant before
/// the first and after the last waypoint.
inline std::pair<double, double> position_at(const FirearmSpec& spec, double t) {
  const auto& p = spec.path;
  if (p.empty()) throw ScenarioInvalid("firearm path needs at least one waypoint");
  if (t <= p.front().t) return {p.front().x, p.front().y};
  if (t >= p.back().t) return {p.back().x, p.back().y};
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    if (t <= p[i + 1].t) {
      const double u = (t - p[i].t) / (p[i + 1].t - p[i].t);
      return {p[i].x + u * (p[i + 1].x - p[i].x), p[i].y + u * (p[i + 1].y - p[i].y)};
    }
  }
  return {p.back().x, p.back().y};
}

namespace detail {

inline constexpr std::size_t kMaxBeaconsPerZone = 200000;

inline std::uint64_t clock_seconds(double local_time) {
  if (local_time <= 0) return 0;
  return static_cast<std::uint64_t>(local_time);
}

/// Per-beacon generator derived from (scenario seed, zone, beacon index), so
/// message composition does not depend on event interleaving.
inline DeterministicRng beacon_rng(std::uint64_t seed, std::uint32_t sza_id, std::uint64_t k) {
  ByteWriter w;
  w.raw(std::string_view("SZSIM-BEACON"));
  w.u64(seed);
  w.u32(sza_id);
  w.u64(k);
  const Digest d = hash(w.bytes());
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v = v << 8 | d.bytes[static_cast<std::size_t>(i)];
  return DeterministicRng(v);
}

inline void validate_scenario(const Scenario& sc) {
  auto fail = [](const std::string& msg) { throw ScenarioInvalid("invalid scenario: " + msg); };
  if (!(sc.duration >= 0) || !std::isfinite(sc.duration)) fail("duration must be finite and >= 0");
  if (sc.token_window == 0) fail("token window must be >= 1");
  for (const auto& name : sc.universe) {
    if (!is_valid_attribute_name(name)) fail("bad universe attribute '" + name + "'");
  }
  std::set<std::uint32_t> zone_ids;
  for (const auto& z : sc.zones) {
    if (!zone_ids.insert(z.sza_id).second) fail("duplicate sza_id " + std::to_string(z.sza_id));
    if (!(z.radius > 0) || !std::isfinite(z.radius)) fail("zone radius must be > 0");
    if (!(z.beacon_period > 0) || !std::isfinite(z.beacon_period)) fail("beacon period must be > 0");
    if (!std::isfinite(z.clock_offset) || !std::isfinite(z.x) || !std::isfinite(z.y)) {
      fail("zone numbers must be finite");
    }
    if (sc.duration / z.beacon_period > static_cast<double>(kMaxBeaconsPerZone)) {
      fail("beacon schedule too dense");
    }
    try {
      const AccessTree tree = parse_policy(z.policy);
      for (const auto& leaf : leaf_attributes(tree)) {
        if (!sc.universe.contains(leaf)) {
          fail("zone " + std::to_string(z.sza_id) + " policy uses unknown attribute '" + leaf +
               "'");
        }
      }
    } catch (const ScenarioInvalid&) {
      throw;
    } catch (const Error& e) {
      fail("zone " + std::to_string(z.sza_id) + " policy: " + e.what());
    }
  }
  std::set<std::uint64_t> firearm_ids;
  for (const auto& f : sc.firearms) {
    if (!firearm_ids.insert(f.firearm_id).second) {
      fail("duplicate firearm_id " + std::to_string(f.firearm_id));
    }
    if (f.attributes.empty()) fail("firearm " + std::to_string(f.firearm_id) + " has no attributes");
    for (const auto& a : f.attributes) {
      if (!sc.universe.contains(a)) {
        fail("firearm " + std::to_string(f.firearm_id) + " has unknown attribute '" + a + "'");
      }
    }
    if (f.expires_at == 0) fail("firearm expiration must be >= 1");
    if (f.path.empty()) fail("firearm " + std::to_string(f.firearm_id) + " needs a waypoint");
    for (std::size_t i = 0; i < f.path.size(); ++i) {
      const auto& w = f.path[i];
      if (!std::isfinite(w.t) || !std::isfinite(w.x) || !std::isfinite(w.y)) {
        fail("waypoint numbers must be finite");
      }
      if (i > 0 && !(w.t > f.path[i - 1].t)) fail("waypoint times must be strictly increasing");
    }
    if (!std::isfinite(f.clock_offset)) fail("firearm clock offset must be finite");
  }
}

}  // namespace detail

/// Runs the scenario: CA setup, zone and firearm registration from the
/// scenario seed, then every (beacon, in-range firearm) assessment. Records
/// are sorted by (t, sza_id, firearm_id); the whole run is deterministic.
inline EventLog run(const Scenario& sc) {
  detail::validate_scenario(sc);
  DeterministicRng rng(sc.seed);
  CentralAuthority ca = ca_setup(rng, sc.universe);

  std::vector<SzaState> szas;
  szas.reserve(sc.zones.size());
  for (const auto& z : sc.zones) {
    szas.push_back(sza_create(ca, z.sza_id, parse_policy(z.policy), rng));
  }
  std::vector<FirearmKeyBundle> bundles;
  bundles.reserve(sc.firearms.size());
  for (const auto& f : sc.firearms) {
    AttributeSet attrs(f.attributes.begin(), f.attributes.end());
    bundles.push_back(
        firearm_register(ca, attrs, f.firearm_id, f.user_id, f.expires_at, 0, rng));
  }

  EventLog log;
  for (std::size_t zi = 0; zi < sc.zones.size(); ++zi) {
    const auto& z = sc.zones[zi];
    std::uint64_t k = 0;
    if (z.clock_offset < 0) {
      k = static_cast<std::uint64_t>(std::ceil(-z.clock_offset / z.beacon_period));
    }
    for (;; ++k) {
      const double local = static_cast<double>(k) * z.beacon_period;
      const double t = local + z.clock_offset;
      if (t < 0) continue;
      if (t > sc.duration) break;
      auto rng_beacon = detail::beacon_rng(sc.seed, z.sza_id, k);
      const Bytes msg = compose_zone_message(szas[zi], detail::clock_seconds(local), rng_beacon,
                                             sc.token_window);
      for (std::size_t fi = 0; fi < sc.firearms.size(); ++fi) {
        const auto& f = sc.firearms[fi];
        const auto [px, py] = position_at(f, t);
        const double distance = std::hypot(px - z.x, py - z.y);
        if (distance > z.radius) continue;
        const std::uint64_t local_now = detail::clock_seconds(t - f.clock_offset);
        auto outcome = assess(bundles[fi], msg, local_now, sc.token_window);
        log.records.push_back({t, z.sza_id, f.firearm_id, distance, std::move(outcome)});
      }
    }
  }
  std::sort(log.records.begin(), log.records.end(), [](const EventRecord& a, const EventRecord& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.sza_id != b.sza_id) return a.sza_id < b.sza_id;
    return a.firearm_id < b.firearm_id;
  });
  return log;
}

// --- reporting ----------------------------------------------------------------

struct OutcomeCounts {
  std::array<std::uint64_t, 6> by_kind{};
  std::uint64_t total = 0;

  void add(Advisory a) {
    ++by_kind[static_cast<std::size_t>(a)];
    ++total;
  }

  bool operator==(const OutcomeCounts&) const = default;
};

struct SimulationSummary {
  OutcomeCounts totals;
  std::map<std::uint32_t, OutcomeCounts> per_zone;
  std::map<std::uint64_t, OutcomeCounts> per_firearm;

  bool operator==(const SimulationSummary&) const = default;
};

inline SimulationSummary report(const EventLog& log) {
  SimulationSummary s;
  for (const auto& r : log.records) {
    s.totals.add(r.outcome.kind);
    s.per_zone[r.sza_id].add(r.outcome.kind);
    s.per_firearm[r.firearm_id].add(r.outcome.kind);
  }
  return s;
}

namespace detail {

inline nlohmann::json counts_to_json(const OutcomeCounts& c) {
  nlohmann::json j;
  j["total"] = c.total;
  for (std::size_t i = 0; i < c.by_kind.size(); ++i) {
    j[std::string(advisory_token(static_cast<Advisory>(i)))] = c.by_kind[i];
  }
  return j;
}

}  // namespace detail

inline nlohmann::json summary_to_json(const SimulationSummary& s) {
  nlohmann::json j;
  j["szsim"] = 1;
  j["type"] = "summary";
  j["totals"] = detail::counts_to_json(s.totals);
  nlohmann::json zones = nlohmann::json::object();
  for (const auto& [id, c] : s.per_zone) zones[std::to_string(id)] = detail::counts_to_json(c);
  j["per_zone"] = zones;
  nlohmann::json firearms = nlohmann::json::object();
  for (const auto& [id, c] : s.per_firearm) {
    firearms[std::to_string(id)] = detail::counts_to_json(c);
  }
  j["per_firearm"] = firearms;
  return j;
}

inline std::string summary_to_text(const SimulationSummary& s) {
  std::string out = "records: " + std::to_string(s.totals.total) + "\n";
  auto line = [](const OutcomeCounts& c) {
    std::string acc;
    for (std::size_t i = 0; i < c.by_kind.size(); ++i) {
      if (c.by_kind[i] == 0) continue;
      acc += " " + std::string(advisory_token(static_cast<Advisory>(i))) + "=" +
             std::to_string(c.by_kind[i]);
    }
    return acc.empty() ? std::string(" (none)") : acc;
  };
  out += "outcomes:" + line(s.totals) + "\n";
  for (const auto& [id, c] : s.per_zone) {
    out += "zone " + std::to_string(id) + ":" + line(c) + "\n";
  }
  for (const auto& [id, c] : s.per_firearm) {
    out += "firearm " + std::to_string(id) + ":" + line(c) + "\n";
  }
  return out;
}

/// One JSON record per line followed by one summary line; key order and
/// number formatting come from nlohmann::json, so equal logs are equal bytes.
inline std::string event_log_to_jsonl(const EventLog& log) {
  std::string out;
  for (const auto& r : log.records) {
    nlohmann::json j;
    j["szsim"] = 1;
    j["type"] = "record";
    j["t"] = r.t;
    j["sza_id"] = r.sza_id;
    j["firearm_id"] = r.firearm_id;
    j["distance"] = r.distance;
    j["outcome"] = std::string(advisory_token(r.outcome.kind));
    j["detail"] = r.outcome.detail;
    out += j.dump();
    out += '\n';
  }
  out += summary_to_json(report(log)).dump();
  out += '\n';
  return out;
}

// --- scenario files --------------------------------------------------------------

inline Scenario scenario_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& msg) { throw ScenarioInvalid("invalid scenario: " + msg); };
  Scenario sc;
  try {
    sc.duration = j.at("duration").get<double>();
    sc.seed = j.at("seed").get<std::uint64_t>();
    sc.token_window = j.value("window", kDefaultTokenWindow);
    for (const auto& a : j.at("universe")) sc.universe.insert(a.get<std::string>());
    for (const auto& zj : j.at("zones")) {
      ZoneSpec z;
      z.sza_id = zj.at("sza_id").get<std::uint32_t>();
      z.x = zj.at("x").get<double>();
      z.y = zj.at("y").get<double>();
      z.radius = zj.at("radius").get<double>();
      z.policy = zj.at("policy").get<std::string>();
      z.beacon_period = zj.at("period").get<double>();
      z.clock_offset = zj.value("clock_offset", 0.0);
      sc.zones.push_back(std::move(z));
    }
    for (const auto& fj : j.at("firearms")) {
      FirearmSpec f;
      f.firearm_id = fj.at("firearm_id").get<std::uint64_t>();
      f.user_id = fj.value("user_id", f.firearm_id);
      for (const auto& a : fj.at("attributes")) f.attributes.push_back(a.get<std::string>());
      f.expires_at = fj.at("et").get<std::uint64_t>();
      for (const auto& wj : fj.at("path")) {
        if (!wj.is_array() || wj.size() != 3) fail("waypoints must be [t, x, y]");
        f.path.push_back({wj[0].get<double>(), wj[1].get<double>(), wj[2].get<double>()});
      }
      f.clock_offset = fj.value("clock_offset", 0.0);
      sc.firearms.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& e) {
    fail(e.what());
  }
  detail::validate_scenario(sc);
  return sc;
}

inline Scenario parse_scenario(std::string_view text) {
  nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ScenarioInvalid("invalid scenario: not valid JSON");
  return scenario_from_json(j);
}

}  // namespace securezone
