#pragma once

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sdnsn/core.hpp"
#include "sdnsn/env.hpp"
#include "sdnsn/name.hpp"
#include "sdnsn/packets.hpp"
#include "sdnsn/service.hpp"

namespace sdnsn {

struct Weights {
  double delay = 1.0;
  double data = 1.0;
  double storage = 0.5;
  double energy = 0.5;
  bool operator==(const Weights&) const = default;
};

// What monitoring has taught the controller.  Adjacency is rebuilt from each
// agent's reported neighbor delays; data locations come from hosted_data.
struct TopologyImage {
  struct AgentInfo {
    AgentStatus status;
    TimeMs observed = 0;
  };
  std::map<AgentId, AgentInfo> agents;
  std::map<std::pair<AgentId, FaceId>, std::pair<AgentId, TimeMs>> adjacency;
  std::map<std::string, AgentId> data_locations;

  static bool plausible(const AgentStatus& s) {
    if (s.agent.empty() || s.battery > 100) return false;
    if (s.storage_free < 0 || s.storage_total < 0 || s.storage_free > s.storage_total)
      return false;
    if (s.compute_free < 0) return false;
    for (const NeighborDelay& nd : s.neighbors)
      if (nd.neighbor.empty() || nd.delay < 0) return false;
    return true;
  }

  // Returns false for records that fail validation; the caller skips them.
  bool ingest(const AgentStatus& s, TimeMs now) {
    if (!plausible(s)) return false;
    agents[s.agent] = AgentInfo{s, now};
    std::erase_if(adjacency,
                  [&s](const auto& kv) { return kv.first.first == s.agent; });
    for (const NeighborDelay& nd : s.neighbors)
      adjacency[{s.agent, nd.face}] = {nd.neighbor, nd.delay};
    for (const std::string& label : s.hosted_data) data_locations[label] = s.agent;
    return true;
  }
};

struct SourceRouteEntry {
  AgentId target;
  std::string microservice;
  std::vector<FaceId> faces;  // popped one per hop, starting at the attachment
  bool operator==(const SourceRouteEntry&) const = default;
};

struct ControllerConfig {
  AgentId attachment;
  TimeMs monitor_period = 1000;
  TimeMs round_timeout = 500;
  int monitor_rounds = 1;
  Weights weights;
  bool proactive = false;  // place and deploy every chart after the first round
};

// SDN management plane: one node behind a single link to the attachment
// agent.  Collects monitor rounds, answers retrieve Interests with freshly
// placed service trees, and pushes Deploy packets along source routes.
class Controller {
 public:
  static constexpr FaceId kUplink = 0;
  static constexpr TimeMs kUnreachable = std::numeric_limits<TimeMs>::max();

  Controller(ControllerConfig cfg, NodeEnv& env) : cfg_(std::move(cfg)), env_(env) {}

  void register_chart(ServiceChart chart) {
    validate_chart(chart);
    if (charts_.count(chart.head.id)) throw DuplicateHead(chart.head.id);
    env_.trace("chart_add", "-", "/" + chart.head.id, std::nullopt,
               "segments=" + std::to_string(chart.segments.size()));
    charts_.emplace(chart.head.id, std::move(chart));
  }

  void start() {
    if (cfg_.monitor_rounds > 0) env_.schedule(0, RoundStart{});
  }

  void on_timer(const TimerPayload& t) {
    if (const auto* rs = std::get_if<RoundStart>(&t)) {
      (void)rs;
      begin_round();
    } else if (const auto* rt = std::get_if<RoundTimeout>(&t)) {
      finish_round(*rt);
    }
  }

  void on_data(FaceId in, const DataPacket& d) {
    if (d.name.command != Command::monitor) {
      env_.trace("drop", "data", serialize_name(d.name), in, "reason=unsolicited");
      return;
    }
    auto round = monitor_round(d);
    for (const AgentStatus& s : d.status_list) {
      if (!image_.ingest(s, env_.now())) {
        env_.trace("drop", "data", "/sd-nsn/monitor", in, "reason=malformed-status");
        continue;
      }
      if (round_open_ && round == round_nonce_) {
        round_agents_.insert(s.agent);
        ++round_arrivals_[s.agent];
      }
    }
  }

  void on_interest(FaceId in, const InterestPacket& i) {
    if (i.name.command != Command::retrieve) {
      env_.trace("drop", "interest", serialize_name(i.name), in, "reason=bad-command");
      return;
    }
    if (!seen_nonces_.insert(i.nonce).second) {
      env_.trace("drop", "interest", serialize_name(i.name), in, "reason=dup-nonce");
      return;
    }
    const std::string& head = *i.name.head;
    if (!charts_.count(head)) {
      env_.send(kUplink, DataPacket{i.name, err_payload("unknown-head"), {}, {}});
      return;
    }
    const ServiceTree* tree = deployed(head);
    if (!tree) {
      try {
        ServiceTree t = place_service(head);
        tree = &deployed_.emplace(head, std::move(t)).first->second;
        env_.trace("tree", "-", serialize_name(tree_to_name(*tree)), std::nullopt,
                   "head=" + head);
      } catch (const Error& e) {
        env_.trace("drop", "interest", serialize_name(i.name), in,
                   std::string("reason=unplaceable;detail=") + e.what());
        env_.send(kUplink, DataPacket{i.name, err_payload("unplaceable"), {}, {}});
        return;
      }
    }
    Bytes reply = to_bytes(serialize_name(tree_to_name(*tree)));
    env_.send(kUplink, DataPacket{i.name, std::move(reply), {}, {}});
    deploy_tree(*tree);
  }

  // Greedy data-gravity placement.  Per segment, microservices are placed
  // from the data end upward; each picks the feasible agent minimizing
  //   w_delay * delay(a, downstream) + w_data * delay(a, data host)
  //   + w_storage * storage_occupancy(a) + w_energy * (1 - battery/100).
  // The head minimizes pure path delay to the requester hint (attachment by
  // default).  Ties break toward the lexicographically smallest agent id.
  // Working storage is debited as the plan grows; compute is checked
  // statically.  Pure function of (charts, image, weights, hint).
  ServiceTree place_service(const std::string& head,
                            std::optional<AgentId> hint = std::nullopt) const {
    auto ci = charts_.find(head);
    if (ci == charts_.end()) throw UnknownHead(head);
    const ServiceChart& chart = ci->second;
    if (image_.agents.empty()) throw Unplaceable("no topology observed");

    std::map<AgentId, Units> working;
    for (const auto& [id, info] : image_.agents) working[id] = info.status.storage_free;

    ServiceTree tree;
    tree.chart = chart;
    std::vector<std::pair<std::string, AgentId>> head_adjacent;  // element, agent

    for (const ChartSegment& seg : chart.segments) {
      auto di = image_.data_locations.find(seg.data);
      if (di == image_.data_locations.end() || !image_.agents.count(di->second))
        throw UnknownData(seg.data);
      AgentId data_host = di->second;
      auto dist_data = sssp(data_host).dist;
      AgentId downstream_agent = data_host;
      std::string downstream_elem = seg.data;
      for (auto mi = seg.microservices.rbegin(); mi != seg.microservices.rend(); ++mi) {
        auto dist_down = downstream_agent == data_host ? dist_data : sssp(downstream_agent).dist;
        std::optional<AgentId> best;
        double best_score = 0;
        for (const auto& [id, info] : image_.agents) {
          const AgentStatus& st = info.status;
          if (working[id] < mi->storage_demand || st.compute_free < mi->compute_demand)
            continue;
          TimeMs dd = dist_down.count(id) ? dist_down.at(id) : kUnreachable;
          TimeMs dh = dist_data.count(id) ? dist_data.at(id) : kUnreachable;
          if (dd == kUnreachable || dh == kUnreachable) continue;
          double score = cfg_.weights.delay * static_cast<double>(dd) +
                         cfg_.weights.data * static_cast<double>(dh) +
                         cfg_.weights.storage * occupancy(st) +
                         cfg_.weights.energy * (1.0 - st.battery / 100.0);
          if (!best || score < best_score) {
            best = id;
            best_score = score;
          }
        }
        if (!best) throw Unplaceable(mi->id);
        tree.placement[mi->id] = *best;
        working[*best] -= mi->storage_demand;
        tree.hops[{mi->id, downstream_elem}] = path_faces(*best, downstream_agent);
        downstream_agent = *best;
        downstream_elem = mi->id;
      }
      head_adjacent.emplace_back(downstream_elem, downstream_agent);
    }

    AgentId anchor = hint.value_or(cfg_.attachment);
    if (!image_.agents.count(anchor)) throw Unplaceable("anchor unseen: " + anchor);
    auto dist_anchor = sssp(anchor).dist;
    std::optional<AgentId> best;
    TimeMs best_delay = 0;
    for (const auto& [id, info] : image_.agents) {
      if (working[id] < chart.head.storage_demand ||
          info.status.compute_free < chart.head.compute_demand)
        continue;
      if (!dist_anchor.count(id)) continue;
      TimeMs d = dist_anchor.at(id);
      if (!best || d < best_delay) {
        best = id;
        best_delay = d;
      }
    }
    if (!best) throw Unplaceable(chart.head.id);
    tree.placement[chart.head.id] = *best;
    for (const auto& [elem, agent] : head_adjacent)
      tree.hops[{chart.head.id, elem}] = path_faces(*best, agent);
    return tree;
  }

  // Emits Deploy packets for every pair not already installed: head first,
  // then each segment from the head side down.  Bookkeeping is
  // fire-and-forget; installs are debited when the agent reports back.
  void deploy_tree(const ServiceTree& tree) {
    std::string tree_text = serialize_name(tree_to_name(tree));
    auto emit = [this, &tree, &tree_text](const MicroserviceSpec& ms, bool is_head) {
      AgentId target = tree.placement.at(ms.id);
      if (!installed_.insert({target, ms.id}).second) return;
      std::vector<FaceId> faces = path_faces(cfg_.attachment, target);
      env_.trace("place", "-", "-", std::nullopt, "ms=" + ms.id + ";agent=" + target);
      routes_.push_back(SourceRouteEntry{target, ms.id, faces});
      DeployPacket dp{std::move(faces), target, to_descriptor(ms),
                      is_head ? std::optional<std::string>(tree_text) : std::nullopt};
      env_.send(kUplink, dp);
    };
    emit(tree.chart.head, true);
    for (const ChartSegment& seg : tree.chart.segments)
      for (const MicroserviceSpec& ms : seg.microservices) emit(ms, false);
  }

  const TopologyImage& image() const { return image_; }
  const std::vector<SourceRouteEntry>& source_routes() const { return routes_; }
  int rounds_completed() const { return rounds_completed_; }

  // Status arrival counts for the most recent round; exactly one per agent
  // when the monitor protocol converges cleanly.
  const std::map<AgentId, int>& round_arrivals() const { return round_arrivals_; }

  const ServiceTree* deployed(const std::string& head) const {
    auto it = deployed_.find(head);
    return it == deployed_.end() ? nullptr : &it->second;
  }

  // Deterministic single-source shortest delay paths over the image.
  // Settling order is (distance, agent id); neighbors relax in face order.
  struct Paths {
    std::map<AgentId, TimeMs> dist;
    std::map<AgentId, std::pair<AgentId, FaceId>> parent;  // via (agent, its face)
  };

  Paths sssp(const AgentId& src) const {
    Paths p;
    std::set<std::pair<TimeMs, AgentId>> frontier;
    p.dist[src] = 0;
    frontier.insert({0, src});
    while (!frontier.empty()) {
      auto [d, u] = *frontier.begin();
      frontier.erase(frontier.begin());
      auto lo = image_.adjacency.lower_bound({u, 0});
      for (auto it = lo; it != image_.adjacency.end() && it->first.first == u; ++it) {
        const auto& [v, w] = it->second;
        if (!image_.agents.count(v)) continue;
        TimeMs nd = d + w;
        auto cur = p.dist.find(v);
        if (cur == p.dist.end() || nd < cur->second) {
          if (cur != p.dist.end()) frontier.erase({cur->second, v});
          p.dist[v] = nd;
          p.parent[v] = {u, it->first.second};
          frontier.insert({nd, v});
        }
      }
    }
    return p;
  }

  // Face chain from src to dst, one face per hop agent, starting at src.
  std::vector<FaceId> path_faces(const AgentId& src, const AgentId& dst) const {
    if (src == dst) return {};
    Paths p = sssp(src);
    if (!p.parent.count(dst)) throw NoRoute(src + " -> " + dst);
    std::vector<FaceId> faces;
    AgentId cur = dst;
    while (cur != src) {
      auto [prev, face] = p.parent.at(cur);
      faces.push_back(face);
      cur = prev;
    }
    std::reverse(faces.begin(), faces.end());
    return faces;
  }

 private:
  static double occupancy(const AgentStatus& st) {
    if (st.storage_total <= 0) return 1.0;
    return 1.0 - static_cast<double>(st.storage_free) / static_cast<double>(st.storage_total);
  }

  void begin_round() {
    ++rounds_started_;
    round_nonce_ = env_.fresh_nonce();
    round_open_ = true;
    round_agents_.clear();
    round_arrivals_.clear();
    env_.trace("monitor_round", "interest", "/sd-nsn/monitor", std::nullopt,
               "round=" + std::to_string(rounds_started_) +
                   ";nonce=" + std::to_string(round_nonce_));
    ServiceName n;
    n.command = Command::monitor;
    env_.send(kUplink, InterestPacket{n, round_nonce_, 0});
    env_.schedule(cfg_.round_timeout, RoundTimeout{round_nonce_});
    if (rounds_started_ < cfg_.monitor_rounds) env_.schedule(cfg_.monitor_period, RoundStart{});
  }

  void finish_round(const RoundTimeout& rt) {
    if (rt.nonce != round_nonce_) return;
    round_open_ = false;
    ++rounds_completed_;
    env_.trace("round_done", "-", "/sd-nsn/monitor", std::nullopt,
               "round=" + std::to_string(rounds_completed_) +
                   ";agents=" + std::to_string(round_agents_.size()));
    if (cfg_.proactive && !proactive_done_) {
      proactive_done_ = true;
      for (const auto& [head, chart] : charts_) {
        if (deployed_.count(head)) continue;
        try {
          ServiceTree t = place_service(head);
          const ServiceTree& tree = deployed_.emplace(head, std::move(t)).first->second;
          env_.trace("tree", "-", serialize_name(tree_to_name(tree)), std::nullopt,
                     "head=" + head);
          deploy_tree(tree);
        } catch (const Error& e) {
          env_.trace("drop", "-", "/" + head, std::nullopt,
                     std::string("reason=unplaceable;detail=") + e.what());
        }
      }
    }
  }

  ControllerConfig cfg_;
  NodeEnv& env_;
  TopologyImage image_;
  std::map<std::string, ServiceChart> charts_;
  std::map<std::string, ServiceTree> deployed_;
  std::set<std::pair<AgentId, std::string>> installed_;
  std::vector<SourceRouteEntry> routes_;
  std::set<std::uint64_t> seen_nonces_;
  std::uint64_t round_nonce_ = 0;
  bool round_open_ = false;
  bool proactive_done_ = false;
  int rounds_started_ = 0;
  int rounds_completed_ = 0;
  std::set<AgentId> round_agents_;
  std::map<AgentId, int> round_arrivals_;
};

}  // namespace sdnsn
