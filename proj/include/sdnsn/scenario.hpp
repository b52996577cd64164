#pragma once

#include <fstream>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sdnsn/core.hpp"
#include "sdnsn/simnet.hpp"

namespace sdnsn {

struct ScenarioError : Error {
  using Error::Error;
};

struct ScenarioRequest {
  TimeMs time = 0;
  AgentId agent;
  std::string head;
  TimeMs executiontime = 0;
  bool expect_unknown = false;
};

struct Scenario {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  TimeMs horizon = 60000;
  AgentId attachment;
  FaceId controller_face = 0;
  TimeMs controller_delay = 1;
  TimeMs monitor_period = 1000;
  TimeMs round_timeout = 500;
  int monitor_rounds = 1;
  Weights weights;
  bool proactive = false;
  Topology topology;
  std::vector<ServiceChart> charts;
  std::vector<ScenarioRequest> requests;
};

namespace detail {

template <typename T>
T get_or(const nlohmann::json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("field '") + key + "': " + e.what());
  }
}

template <typename T>
T need(const nlohmann::json& j, const char* key) {
  if (!j.contains(key)) throw ScenarioError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("field '") + key + "': " + e.what());
  }
}

inline std::string strip_level(std::string label) {
  if (!label.empty() && label[0] == 'S') return label.substr(1);
  return label;
}

}  // namespace detail

inline Scenario parse_scenario(const nlohmann::json& j) {
  using detail::get_or;
  using detail::need;
  if (!j.is_object()) throw ScenarioError("scenario must be a JSON object");
  Scenario s;
  s.name = get_or<std::string>(j, "name", "scenario");
  s.seed = get_or<std::uint64_t>(j, "seed", 1);
  s.horizon = get_or<TimeMs>(j, "horizon_ms", 60000);
  if (j.contains("monitor")) {
    const auto& m = j.at("monitor");
    s.monitor_period = get_or<TimeMs>(m, "period_ms", 1000);
    s.round_timeout = get_or<TimeMs>(m, "round_timeout_ms", 500);
    s.monitor_rounds = get_or<int>(m, "rounds", 1);
  }
  if (j.contains("weights")) {
    const auto& w = j.at("weights");
    s.weights.delay = get_or<double>(w, "delay", 1.0);
    s.weights.data = get_or<double>(w, "data", 1.0);
    s.weights.storage = get_or<double>(w, "storage", 0.5);
    s.weights.energy = get_or<double>(w, "energy", 0.5);
  }
  const auto& c = j.contains("controller") ? j.at("controller") : nlohmann::json::object();
  s.attachment = need<std::string>(c, "attachment");
  s.controller_face = get_or<FaceId>(c, "face", 0);
  s.controller_delay = get_or<TimeMs>(c, "link_delay_ms", 1);
  std::string mode = get_or<std::string>(c, "deploy", "on-retrieve");
  if (mode != "on-retrieve" && mode != "proactive")
    throw ScenarioError("controller.deploy must be 'on-retrieve' or 'proactive'");
  s.proactive = mode == "proactive";
  for (const auto& a : need<nlohmann::json>(j, "agents")) {
    TopologyNode n;
    n.id = need<std::string>(a, "id");
    n.battery = get_or<std::uint32_t>(a, "battery", 100);
    n.storage = get_or<Units>(a, "storage", 0);
    n.compute = get_or<Units>(a, "compute", 0);
    s.topology.nodes.push_back(std::move(n));
  }
  if (j.contains("links")) {
    for (const auto& l : j.at("links")) {
      TopologyLink link;
      link.a = need<std::string>(l, "a");
      link.a_face = need<FaceId>(l, "a_face");
      link.b = need<std::string>(l, "b");
      link.b_face = need<FaceId>(l, "b_face");
      link.delay = get_or<TimeMs>(l, "delay_ms", 1);
      link.loss = get_or<double>(l, "loss", 0.0);
      s.topology.links.push_back(std::move(link));
    }
  }
  if (j.contains("data")) {
    for (const auto& d : j.at("data")) {
      DataSeed seed;
      seed.label = need<std::string>(d, "name");
      seed.agent = need<std::string>(d, "agent");
      seed.payload_seed = get_or<std::uint64_t>(d, "payload_seed", 0);
      seed.freshness = get_or<TimeMs>(d, "freshness_ms", -1);
      s.topology.data.push_back(std::move(seed));
    }
  }
  if (j.contains("charts")) {
    for (const auto& ch : j.at("charts")) {
      ServiceChart chart;
      chart.head.id = need<std::string>(ch, "head");
      chart.head.exec_time = need<TimeMs>(ch, "exec_time_ms");
      chart.head.storage_demand = get_or<Units>(ch, "storage", 0);
      chart.head.compute_demand = get_or<Units>(ch, "compute", 0);
      for (const auto& seg : need<nlohmann::json>(ch, "segments")) {
        ChartSegment cs;
        cs.level = detail::strip_level(need<std::string>(seg, "label"));
        if (seg.contains("microservices")) {
          for (const auto& m : seg.at("microservices")) {
            MicroserviceSpec ms;
            ms.id = need<std::string>(m, "id");
            ms.exec_time = need<TimeMs>(m, "exec_time_ms");
            ms.storage_demand = get_or<Units>(m, "storage", 0);
            ms.compute_demand = get_or<Units>(m, "compute", 0);
            cs.microservices.push_back(std::move(ms));
          }
        }
        cs.data = need<std::string>(seg, "data");
        chart.segments.push_back(std::move(cs));
      }
      s.charts.push_back(std::move(chart));
    }
  }
  if (j.contains("requests")) {
    for (const auto& r : j.at("requests")) {
      ScenarioRequest req;
      req.time = need<TimeMs>(r, "time_ms");
      req.agent = need<std::string>(r, "agent");
      req.head = need<std::string>(r, "head");
      req.executiontime = need<TimeMs>(r, "executiontime_ms");
      req.expect_unknown = get_or<bool>(r, "expect_unknown", false);
      s.requests.push_back(std::move(req));
    }
  }
  return s;
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ScenarioError(std::string("json parse failed: ") + e.what());
  }
  return parse_scenario(j);
}

// Semantic checks; every violation becomes one line.
inline std::vector<std::string> validate_scenario(const Scenario& s) {
  std::vector<std::string> v;
  auto bad = [&v](std::string msg) { v.push_back(std::move(msg)); };
  if (s.horizon < 1) bad("horizon_ms must be positive");
  if (s.monitor_period < 1) bad("monitor.period_ms must be positive");
  if (s.round_timeout < 1) bad("monitor.round_timeout_ms must be positive");
  if (s.monitor_rounds < 0) bad("monitor.rounds must be non-negative");

  std::set<AgentId> ids;
  std::map<AgentId, std::set<FaceId>> faces;
  for (const TopologyNode& n : s.topology.nodes) {
    if (n.id.empty() || !is_label(n.id)) bad("invalid agent id: '" + n.id + "'");
    if (n.id == Engine::kControllerNode) bad("agent id 'controller' is reserved");
    if (!ids.insert(n.id).second) bad("duplicate agent id: " + n.id);
    if (n.battery > 100) bad(n.id + ": battery above 100");
    if (n.storage < 0 || n.compute < 0) bad(n.id + ": negative capacity");
  }
  if (s.topology.nodes.empty()) bad("no agents");
  if (!ids.count(s.attachment)) bad("controller attachment unknown: " + s.attachment);

  auto claim_face = [&faces, &bad](const AgentId& id, FaceId f) {
    if (f == kLocalFace) bad(id + ": face id reserved for local delivery");
    if (!faces[id].insert(f).second)
      bad(id + ": duplicate face " + std::to_string(f));
  };
  if (ids.count(s.attachment)) claim_face(s.attachment, s.controller_face);
  if (s.controller_delay < 1) bad("controller link delay must be at least 1ms");
  for (const TopologyLink& l : s.topology.links) {
    if (!ids.count(l.a)) bad("link references unknown agent: " + l.a);
    if (!ids.count(l.b)) bad("link references unknown agent: " + l.b);
    if (l.a == l.b) bad("self-link at " + l.a);
    if (l.delay < 1) bad("link " + l.a + "-" + l.b + ": delay must be at least 1ms");
    if (l.loss < 0.0 || l.loss > 1.0) bad("link " + l.a + "-" + l.b + ": loss outside [0,1]");
    if (ids.count(l.a)) claim_face(l.a, l.a_face);
    if (ids.count(l.b)) claim_face(l.b, l.b_face);
  }

  std::set<std::string> data_labels;
  for (const DataSeed& d : s.topology.data) {
    if (!is_label(d.label) || is_segment_label(d.label))
      bad("invalid data label: '" + d.label + "'");
    if (!ids.count(d.agent)) bad("data '" + d.label + "' hosted on unknown agent " + d.agent);
    if (!data_labels.insert(d.label).second) bad("duplicate data label: " + d.label);
    if (d.freshness < -1) bad("data '" + d.label + "': bad freshness");
  }

  std::set<std::string> heads;
  for (const ServiceChart& c : s.charts) {
    try {
      validate_chart(c);
    } catch (const InvalidChart& e) {
      bad(std::string("chart '") + c.head.id + "': " + e.what());
      continue;
    }
    if (!heads.insert(c.head.id).second) bad("duplicate chart head: " + c.head.id);
    for (const ChartSegment& seg : c.segments)
      if (!data_labels.count(seg.data))
        bad("chart '" + c.head.id + "' references unseeded data: " + seg.data);
  }

  for (const ScenarioRequest& r : s.requests) {
    if (!ids.count(r.agent)) bad("request from unknown agent: " + r.agent);
    if (r.time < 0) bad("request time before zero");
    if (r.executiontime < 1) bad("request executiontime must be positive");
    bool known = heads.count(r.head) > 0;
    if (!known && !r.expect_unknown)
      bad("request for unknown head '" + r.head + "' (mark expect_unknown to allow)");
    if (known && r.expect_unknown)
      bad("request for '" + r.head + "' marked expect_unknown but the chart exists");
  }
  return v;
}

inline std::unique_ptr<Engine> make_engine(const Scenario& s,
                                           std::optional<std::uint64_t> seed = std::nullopt) {
  EngineOptions opt;
  opt.seed = seed.value_or(s.seed);
  opt.horizon = s.horizon;
  opt.attachment = s.attachment;
  opt.controller_face = s.controller_face;
  opt.controller_delay = s.controller_delay;
  opt.monitor_period = s.monitor_period;
  opt.round_timeout = s.round_timeout;
  opt.monitor_rounds = s.monitor_rounds;
  opt.weights = s.weights;
  opt.proactive = s.proactive;
  auto engine = std::make_unique<Engine>(s.topology, opt);
  for (const ServiceChart& c : s.charts) engine->register_chart(c);
  for (const ScenarioRequest& r : s.requests)
    engine->submit_request_at(r.time, r.agent, r.head, r.executiontime);
  return engine;
}

inline RunResult run_scenario(const Scenario& s,
                              std::optional<std::uint64_t> seed = std::nullopt) {
  return make_engine(s, seed)->run();
}

inline nlohmann::ordered_json metrics_json(const Scenario& s, const RunResult& r,
                                           std::uint64_t seed) {
  nlohmann::ordered_json j;
  j["version"] = 1;
  j["scenario"] = s.name;
  j["seed"] = seed;
  j["quiescent"] = r.metrics.quiescent;
  j["end_time_ms"] = r.metrics.end_time;
  j["pending_events"] = r.metrics.pending_events;
  j["monitor_rounds"] = r.metrics.monitor_rounds;
  j["trace_digest"] = r.metrics.trace_digest;
  j["packets"] = {{"interest_sends", r.metrics.interest_sends},
                  {"data_sends", r.metrics.data_sends},
                  {"deploy_sends", r.metrics.deploy_sends},
                  {"drops", r.metrics.drops}};
  j["cache_hits"] = r.metrics.cache_hits;
  auto installs = nlohmann::ordered_json::array();
  for (const auto& [t, agent, ms] : r.metrics.installs)
    installs.push_back({{"time_ms", t}, {"agent", agent}, {"microservice", ms}});
  j["installs"] = installs;
  auto reqs = nlohmann::ordered_json::array();
  for (const RequestOutcome& o : r.metrics.requests) {
    reqs.push_back({{"agent", o.agent},
                    {"id", o.request},
                    {"head", o.head},
                    {"submitted_ms", o.submitted},
                    {"finished_ms", o.finished},
                    {"latency_ms", o.finished - o.submitted},
                    {"ok", o.ok},
                    {"detail", o.detail}});
  }
  j["requests"] = reqs;
  return j;
}

}  // namespace sdnsn
