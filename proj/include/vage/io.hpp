#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "vage/engine.hpp"

namespace vage {
namespace detail {
// Round-trippable decimal rendering for CSV output.
inline std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}
}  // namespace detail

// Result JSON schema (documented in the README): scalar run parameters,
// per-node averages, occupancy, event tallies, and optional snapshots.
inline nlohmann::json to_json(const SimResult& r) {
  nlohmann::json j;
  j["n"] = r.n;
  j["horizon"] = r.horizon;
  j["warmup"] = r.warmup;
  j["seed"] = r.seed;
  j["network_avg"] = r.network_avg;
  j["per_node_avg_age"] = r.per_node_avg_age;
  j["occupancy"] = {{"frac_state1", r.occupancy.frac_state1},
                    {"frac_state2", r.occupancy.frac_state2},
                    {"switch_count", r.occupancy.switch_count},
                    {"total_time", r.occupancy.total_time}};
  j["n0_count"] = r.n0_count;
  j["events"] = {{"source_self", r.events.source_self},
                 {"source_to_node", r.events.source_to_node},
                 {"gossip_state1", r.events.gossip_state1},
                 {"gossip_state2", r.events.gossip_state2},
                 {"switch", r.events.switches}};
  j["invariant_violations"] = r.invariant_violations;
  if (!r.snapshots.empty()) {
    nlohmann::json snaps = nlohmann::json::array();
    for (const auto& s : r.snapshots) snaps.push_back({{"t", s.t}, {"ages", s.ages}});
    j["snapshots"] = std::move(snaps);
  }
  return j;
}

inline SimResult result_from_json(const nlohmann::json& j) {
  SimResult r;
  r.n = j.at("n").get<int>();
  r.horizon = j.at("horizon").get<double>();
  r.warmup = j.at("warmup").get<double>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.network_avg = j.at("network_avg").get<double>();
  r.per_node_avg_age = j.at("per_node_avg_age").get<std::vector<double>>();
  const auto& occ = j.at("occupancy");
  r.occupancy.frac_state1 = occ.at("frac_state1").get<double>();
  r.occupancy.frac_state2 = occ.at("frac_state2").get<double>();
  r.occupancy.switch_count = occ.at("switch_count").get<std::int64_t>();
  r.occupancy.total_time = occ.at("total_time").get<double>();
  r.n0_count = j.at("n0_count").get<std::int64_t>();
  const auto& ev = j.at("events");
  r.events.source_self = ev.at("source_self").get<std::int64_t>();
  r.events.source_to_node = ev.at("source_to_node").get<std::int64_t>();
  r.events.gossip_state1 = ev.at("gossip_state1").get<std::int64_t>();
  r.events.gossip_state2 = ev.at("gossip_state2").get<std::int64_t>();
  r.events.switches = ev.at("switch").get<std::int64_t>();
  r.invariant_violations = j.value("invariant_violations", std::int64_t{0});
  if (j.contains("snapshots")) {
    for (const auto& s : j.at("snapshots")) {
      AgeSnapshot snap;
      snap.t = s.at("t").get<double>();
      snap.ages = s.at("ages").get<std::vector<std::int64_t>>();
      r.snapshots.push_back(std::move(snap));
    }
  }
  return r;
}

inline SimResult load_result(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_result: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return result_from_json(j);
}

inline void write_text_file(const std::string& path, const std::string& body) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << body;
}

inline void write_result_json(const SimResult& r, const std::string& path) {
  write_text_file(path, to_json(r).dump(2) + "\n");
}

// Per-node averages as `node,avg_age` rows.
inline void write_per_node_csv(const SimResult& r, const std::string& path) {
  std::string body = "node,avg_age\n";
  for (int i = 0; i < r.n; ++i)
    body += std::to_string(i) + "," + detail::fmt_double(r.per_node_avg_age[i]) + "\n";
  write_text_file(path, body);
}

}  // namespace vage
