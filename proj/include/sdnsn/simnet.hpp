#pragma once

#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "sdnsn/agent.hpp"
#include "sdnsn/controller.hpp"
#include "sdnsn/core.hpp"
#include "sdnsn/env.hpp"
#include "sdnsn/packets.hpp"

namespace sdnsn {

struct TraceRecord {
  TimeMs time = 0;
  std::string node;
  std::string kind;
  std::string ptype;
  std::string name;
  std::optional<FaceId> face;
  std::string extra;

  std::string line() const {
    auto col = [](const std::string& s) { return s.empty() ? std::string("-") : s; };
    std::string f = "-";
    if (face) f = *face == kLocalFace ? "local" : std::to_string(*face);
    return std::to_string(time) + "\t" + node + "\t" + kind + "\t" + col(ptype) + "\t" +
           col(name) + "\t" + f + "\t" + col(extra);
  }
};

struct DeliverEvent {
  FaceId face = 0;
  Packet packet;
};
struct FireEvent {
  TimerPayload timer;
};
struct SubmitEvent {
  std::string head;
  TimeMs executiontime = 0;
};

struct Event {
  TimeMs time = 0;
  std::uint64_t seq = 0;
  std::string node;
  std::variant<DeliverEvent, FireEvent, SubmitEvent> what;
};

// Total order (time, seq): ties resolve in scheduling order.  seq is stamped
// when the event is scheduled, never reused.
class EventQueue {
 public:
  void schedule(TimeMs at, std::string node, std::variant<DeliverEvent, FireEvent, SubmitEvent> what) {
    if (at < now_) throw TimeTravel("event at " + std::to_string(at) + " before now " +
                                    std::to_string(now_));
    heap_.push(Event{at, next_seq_++, std::move(node), std::move(what)});
  }

  const Event& peek() const { return heap_.top(); }

  Event pop() {
    Event e = heap_.top();
    heap_.pop();
    now_ = e.time;
    return e;
  }

  bool empty() const { return heap_.empty(); }
  std::size_t size() const { return heap_.size(); }
  TimeMs now() const { return now_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return std::tie(a.time, a.seq) > std::tie(b.time, b.seq);
    }
  };
  std::priority_queue<Event, std::vector<Event>, Later> heap_;
  TimeMs now_ = 0;
  std::uint64_t next_seq_ = 0;
};

struct TopologyNode {
  AgentId id;
  std::uint32_t battery = 100;
  Units storage = 0;
  Units compute = 0;
};

struct TopologyLink {
  AgentId a;
  FaceId a_face = 0;
  AgentId b;
  FaceId b_face = 0;
  TimeMs delay = 1;
  double loss = 0.0;
};

struct DataSeed {
  std::string label;
  AgentId agent;
  std::uint64_t payload_seed = 0;
  TimeMs freshness = -1;
};

struct Topology {
  std::vector<TopologyNode> nodes;
  std::vector<TopologyLink> links;
  std::vector<DataSeed> data;
};

struct EngineOptions {
  std::uint64_t seed = 1;
  TimeMs horizon = 60000;
  AgentId attachment;
  FaceId controller_face = 0;  // face id the attachment devotes to the controller
  TimeMs controller_delay = 1;
  TimeMs monitor_period = 1000;
  TimeMs round_timeout = 500;
  int monitor_rounds = 1;
  Weights weights;
  bool proactive = false;
  TimeMs table_lifetime = 0;  // 0: derive from topology and charts
};

struct Metrics {
  std::uint64_t interest_sends = 0;
  std::uint64_t data_sends = 0;
  std::uint64_t deploy_sends = 0;
  std::uint64_t drops = 0;
  std::uint64_t cache_hits = 0;
  std::vector<RequestOutcome> requests;
  std::vector<std::tuple<TimeMs, AgentId, std::string>> installs;
  int monitor_rounds = 0;
  bool quiescent = false;
  TimeMs end_time = 0;
  std::size_t pending_events = 0;
  std::string trace_digest;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  Metrics metrics;
};

inline Bytes seeded_payload(const std::string& label, std::uint64_t seed) {
  return to_bytes("data:" + label + "#" + hex16(Rng(seed).next()));
}

// Discrete-event host for one controller and a set of agents joined by
// fixed-delay links.  All randomness flows from `seed` through one generator
// consumed only for nonces; an independent stream drives link loss so lossless
// runs are bit-stable across loss-probability changes elsewhere.
class Engine {
 public:
  static constexpr const char* kControllerNode = "controller";

  Engine(Topology topo, EngineOptions opt)
      : topo_(std::move(topo)), opt_(std::move(opt)), rng_(opt_.seed),
        loss_rng_(opt_.seed ^ 0x9e3779b97f4a7c15ull) {
    build();
  }

  // Node environments point back here.
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  Controller& controller() { return *controller_; }
  Agent& agent(const AgentId& id) { return *slots_.at(id).agent; }

  void register_chart(ServiceChart chart) {
    exec_budget_ += chart.head.exec_time;
    for (const ChartSegment& s : chart.segments)
      for (const MicroserviceSpec& m : s.microservices) exec_budget_ += m.exec_time;
    controller_->register_chart(std::move(chart));
  }

  void submit_request_at(TimeMs at, const AgentId& agent, const std::string& head,
                         TimeMs executiontime) {
    queue_.schedule(at, agent, SubmitEvent{head, executiontime});
  }

  RunResult run() {
    TimeMs lifetime = opt_.table_lifetime > 0 ? opt_.table_lifetime : derived_lifetime();
    for (auto& [id, slot] : slots_) slot.agent->set_table_lifetime(lifetime);
    controller_->start();
    while (!queue_.empty() && queue_.peek().time <= opt_.horizon) {
      Event e = queue_.pop();
      dispatch(e);
    }
    RunResult out;
    out.metrics = std::move(metrics_);
    out.metrics.monitor_rounds = controller_->rounds_completed();
    out.metrics.quiescent = queue_.empty();
    out.metrics.end_time = queue_.now();
    out.metrics.pending_events = queue_.size();
    std::string all;
    for (const TraceRecord& r : trace_) all += r.line() + "\n";
    out.metrics.trace_digest = hex16(fnv1a64(all));
    out.trace = std::move(trace_);
    return out;
  }

  bool tables_quiescent() const {
    for (const auto& [id, slot] : slots_)
      if (!slot.agent->quiescent()) return false;
    return true;
  }

 private:
  struct LinkEnd {
    std::string peer;
    TimeMs delay = 1;
    double loss = 0.0;
  };

  class NodeEnvImpl : public NodeEnv {
   public:
    NodeEnvImpl(Engine* eng, std::string node) : eng_(eng), node_(std::move(node)) {}
    TimeMs now() const override { return eng_->queue_.now(); }
    std::uint64_t fresh_nonce() override { return eng_->rng_.next(); }
    void send(FaceId face, const Packet& p) override { eng_->send_from(node_, face, p); }
    void schedule(TimeMs delay, TimerPayload t) override {
      eng_->queue_.schedule(eng_->queue_.now() + delay, node_, FireEvent{std::move(t)});
    }
    void trace(std::string_view kind, std::string_view ptype, std::string_view name,
               std::optional<FaceId> face, std::string extra) override {
      eng_->record(TraceRecord{eng_->queue_.now(), node_, std::string(kind), std::string(ptype),
                               std::string(name), face, std::move(extra)});
    }
    void request_outcome(const RequestOutcome& o) override {
      eng_->metrics_.requests.push_back(o);
    }

   private:
    Engine* eng_;
    std::string node_;
  };

  struct Slot {
    std::unique_ptr<NodeEnvImpl> env;
    std::unique_ptr<Agent> agent;
    std::map<FaceId, LinkEnd> links;
  };

  void build() {
    std::map<AgentId, AgentConfig> cfgs;
    for (const TopologyNode& n : topo_.nodes) {
      if (n.id == kControllerNode) throw Error("agent id 'controller' is reserved");
      if (cfgs.count(n.id)) throw Error("duplicate agent id " + n.id);
      AgentConfig c;
      c.id = n.id;
      c.battery = n.battery;
      c.storage_total = n.storage;
      c.compute_total = n.compute;
      c.monitor_timeout = opt_.round_timeout;
      cfgs[n.id] = std::move(c);
    }
    if (!cfgs.count(opt_.attachment)) throw Error("attachment agent missing");
    auto add_face = [this, &cfgs](const AgentId& id, FaceId f, const AgentId& peer, TimeMs delay) {
      AgentConfig& c = cfgs.at(id);
      if (c.neighbors.count(f) || (c.controller_face && *c.controller_face == f))
        throw Error(id + ": duplicate face " + std::to_string(f));
      if (f == kLocalFace) throw Error(id + ": face id reserved");
      c.neighbors[f] = AgentNeighbor{peer, delay};
    };
    for (const TopologyLink& l : topo_.links) {
      if (!cfgs.count(l.a) || !cfgs.count(l.b)) throw Error("link references unknown agent");
      if (l.delay < 1) throw Error("link delay must be at least 1ms");
      add_face(l.a, l.a_face, l.b, l.delay);
      add_face(l.b, l.b_face, l.a, l.delay);
    }
    // Controller link: not an NSN neighbor, so wire it after face checks.
    {
      AgentConfig& att = cfgs.at(opt_.attachment);
      if (att.neighbors.count(opt_.controller_face))
        throw Error("controller face collides with a link face");
      att.controller_face = opt_.controller_face;
    }
    for (auto& [id, cfg] : cfgs) {
      Slot& slot = slots_[id];
      slot.env = std::make_unique<NodeEnvImpl>(this, id);
      slot.agent = std::make_unique<Agent>(std::move(cfg), *slot.env);
    }
    for (const TopologyLink& l : topo_.links) {
      slots_.at(l.a).links[l.a_face] = LinkEnd{l.b, l.delay, l.loss};
      slots_.at(l.b).links[l.b_face] = LinkEnd{l.a, l.delay, l.loss};
    }
    Slot& att = slots_.at(opt_.attachment);
    att.links[opt_.controller_face] =
        LinkEnd{kControllerNode, opt_.controller_delay, 0.0};
    controller_env_ = std::make_unique<NodeEnvImpl>(this, kControllerNode);
    ControllerConfig cc;
    cc.attachment = opt_.attachment;
    cc.monitor_period = opt_.monitor_period;
    cc.round_timeout = opt_.round_timeout;
    cc.monitor_rounds = opt_.monitor_rounds;
    cc.weights = opt_.weights;
    cc.proactive = opt_.proactive;
    controller_ = std::make_unique<Controller>(std::move(cc), *controller_env_);
    controller_links_[Controller::kUplink] =
        LinkEnd{opt_.attachment, opt_.controller_delay, 0.0};
    for (const DataSeed& d : topo_.data) {
      auto it = slots_.find(d.agent);
      if (it == slots_.end()) throw Error("data host unknown: " + d.agent);
      it->second.agent->seed_data(d.label, seeded_payload(d.label, d.payload_seed), d.freshness);
    }
  }

  TimeMs derived_lifetime() const {
    TimeMs sum = opt_.controller_delay;
    for (const TopologyLink& l : topo_.links) sum += l.delay;
    return std::max<TimeMs>(200, 4 * (sum + exec_budget_));
  }

  void send_from(const std::string& node, FaceId face, const Packet& p) {
    const std::map<FaceId, LinkEnd>* links =
        node == kControllerNode ? &controller_links_ : &slots_.at(node).links;
    std::string kind = std::string("send_") + packet_type_name(p);
    auto it = links->find(face);
    if (it == links->end()) {
      record(TraceRecord{queue_.now(), node, "drop", packet_type_name(p), packet_text(p), face,
                         "reason=unknown-face"});
      return;
    }
    record(TraceRecord{queue_.now(), node, kind, packet_type_name(p), packet_text(p), face,
                       packet_extra(p)});
    const LinkEnd& link = it->second;
    if (link.loss > 0.0 && loss_rng_.next_double() < link.loss) {
      record(TraceRecord{queue_.now(), node, "drop", packet_type_name(p), packet_text(p), face,
                         "reason=loss"});
      return;
    }
    FaceId peer_face = peer_face_of(node, face, link);
    queue_.schedule(queue_.now() + link.delay, link.peer, DeliverEvent{peer_face, p});
  }

  FaceId peer_face_of(const std::string& node, FaceId face, const LinkEnd& link) const {
    if (link.peer == kControllerNode) return Controller::kUplink;
    if (node == kControllerNode) return opt_.controller_face;
    for (const TopologyLink& l : topo_.links) {
      if (l.a == node && l.a_face == face && l.b == link.peer) return l.b_face;
      if (l.b == node && l.b_face == face && l.a == link.peer) return l.a_face;
    }
    throw Error("link table inconsistent");
  }

  static std::string packet_text(const Packet& p) {
    if (const ServiceName* n = packet_name(p)) return serialize_name(*n);
    return "-";
  }

  static std::string packet_extra(const Packet& p) {
    if (const auto* i = std::get_if<InterestPacket>(&p))
      return "nonce=" + std::to_string(i->nonce) + ";hops=" + std::to_string(i->hop_count);
    if (const auto* d = std::get_if<DataPacket>(&p)) {
      std::string e = "bytes=" + std::to_string(d->payload.size());
      if (!d->status_list.empty())
        e += ";statuses=" + std::to_string(d->status_list.size());
      return e;
    }
    const auto& dp = std::get<DeployPacket>(p);
    std::string chain;
    for (FaceId f : dp.face_chain) chain += "face" + std::to_string(f) + ",";
    chain += dp.target;
    return "ms=" + dp.microservice.id + ";chain=" + chain;
  }

  void record(TraceRecord r) {
    if (r.kind == "drop") ++metrics_.drops;
    if (r.kind == "cs_hit") ++metrics_.cache_hits;
    if (r.kind == "send_interest") ++metrics_.interest_sends;
    if (r.kind == "send_data") ++metrics_.data_sends;
    if (r.kind == "send_deploy") ++metrics_.deploy_sends;
    if (r.kind == "install") {
      std::string ms = r.extra.substr(r.extra.find("ms=") + 3);
      metrics_.installs.emplace_back(r.time, r.node, ms);
    }
    trace_.push_back(std::move(r));
  }

  void dispatch(const Event& e) {
    if (const auto* d = std::get_if<DeliverEvent>(&e.what)) {
      record(TraceRecord{e.time, e.node,
                         std::string("recv_") + packet_type_name(d->packet),
                         packet_type_name(d->packet), packet_text(d->packet), d->face,
                         packet_extra(d->packet)});
      if (e.node == kControllerNode) {
        if (const auto* i = std::get_if<InterestPacket>(&d->packet))
          controller_->on_interest(d->face, *i);
        else if (const auto* dp = std::get_if<DataPacket>(&d->packet))
          controller_->on_data(d->face, *dp);
        else
          record(TraceRecord{e.time, e.node, "drop", "deploy", "-", d->face,
                             "reason=bad-target"});
        return;
      }
      slots_.at(e.node).agent->handle_packet(d->face, d->packet);
      return;
    }
    if (const auto* f = std::get_if<FireEvent>(&e.what)) {
      if (e.node == kControllerNode)
        controller_->on_timer(f->timer);
      else
        slots_.at(e.node).agent->on_timer(f->timer);
      return;
    }
    const auto& s = std::get<SubmitEvent>(e.what);
    slots_.at(e.node).agent->submit_request(s.head, s.executiontime);
  }

  Topology topo_;
  EngineOptions opt_;
  Rng rng_;
  Rng loss_rng_;
  EventQueue queue_;
  std::map<AgentId, Slot> slots_;
  std::unique_ptr<NodeEnvImpl> controller_env_;
  std::unique_ptr<Controller> controller_;
  std::map<FaceId, LinkEnd> controller_links_;
  std::vector<TraceRecord> trace_;
  Metrics metrics_;
  TimeMs exec_budget_ = 0;
};

}  // namespace sdnsn
