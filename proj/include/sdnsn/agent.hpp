#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sdnsn/core.hpp"
#include "sdnsn/env.hpp"
#include "sdnsn/name.hpp"
#include "sdnsn/packets.hpp"
#include "sdnsn/service.hpp"
#include "sdnsn/tables.hpp"

namespace sdnsn {

struct AgentNeighbor {
  AgentId id;
  TimeMs delay = 0;
};

struct AgentConfig {
  AgentId id;
  std::map<FaceId, AgentNeighbor> neighbors;  // NSN link faces only
  std::optional<FaceId> controller_face;      // next hop for retrieve Interests
  std::uint32_t battery = 100;
  Units storage_total = 0;
  Units compute_total = 0;
  TimeMs table_lifetime = 1000;    // PIT/PST entries outside monitor rounds
  TimeMs monitor_timeout = 500;    // monitor PIT lifetime; self-report at half
};

// NSN agent: forwards by name only (no FIB), executes installed
// microservices, caches Data, and fronts local service requests.
class Agent {
 public:
  Agent(AgentConfig cfg, NodeEnv& env)
      : cfg_(std::move(cfg)), env_(env), storage_free_(cfg_.storage_total) {}

  // -- scenario wiring ------------------------------------------------------

  void seed_data(const std::string& label, Bytes payload, TimeMs freshness = -1) {
    store_.put("/" + label, std::move(payload), env_.now(), freshness);
    hosted_.push_back(label);
  }

  void preinstall(MicroserviceDescriptor ms, std::optional<ServiceName> tree = {}) {
    storage_free_ = std::max<Units>(0, storage_free_ - ms.storage_demand);
    if (tree) repo_.put_tree(ms.id, *tree);
    repo_.install(std::move(ms));
  }

  // Host wiring before the run starts; derived from topology and charts.
  void set_table_lifetime(TimeMs lifetime) { cfg_.table_lifetime = lifetime; }

  // -- packet entry points --------------------------------------------------

  void handle_packet(FaceId in, const Packet& p) {
    if (const auto* i = std::get_if<InterestPacket>(&p))
      on_interest(in, *i);
    else if (const auto* d = std::get_if<DataPacket>(&p))
      on_data(in, *d);
    else
      on_deploy(in, std::get<DeployPacket>(p));
  }

  void on_interest(FaceId in, const InterestPacket& i) {
    if (!seen_nonces_.insert(i.nonce).second) {
      drop("interest", serialize_name(i.name), in, "dup-nonce");
      return;
    }
    switch (i.name.command) {
      case Command::monitor:
        handle_monitor_interest(in, i);
        return;
      case Command::lookup:
        handle_lookup_interest(in, i);
        return;
      case Command::retrieve:
        handle_retrieve_interest(in, i);
        return;
      case Command::exec:
      case Command::none:
        handle_exec_interest(in, i);
        return;
      case Command::deploy:
        drop("interest", serialize_name(i.name), in, "bad-command");
        return;
    }
  }

  void on_data(FaceId in, const DataPacket& d) {
    if (d.name.command == Command::monitor) {
      handle_monitor_data(in, d);
      return;
    }
    std::string key = serialize_name(d.name);
    auto pit_keys = pit_.keys_for_answer(key);
    bool solicited = !pit_keys.empty() || pst_.find(key) || continuations_.count(key);
    if (!solicited) {
      drop("data", key, in, "unsolicited");
      return;
    }
    if (!is_err_payload(d.payload)) {
      store_.put(key, d.payload, env_.now());
      env_.trace("cs_store", "data", key, in, "bytes=" + std::to_string(d.payload.size()));
    }
    // Executions waiting on this input.
    if (PstEntry* pe = pst_.find(key)) {
      auto waiters = pe->waiters;
      pst_.erase(key);
      for (const PstWaiter& w : waiters) feed_job(w.origin, key, d.payload);
    }
    // Reverse paths: every entry this answer discharges, minus the arrival face.
    for (const std::string& k : pit_keys) {
      PitEntry* e = pit_.find(k);
      if (!e) continue;
      auto faces = e->in_faces;
      pit_.erase(k);
      DataPacket out = d;
      for (FaceId f : faces)
        if (f != in) deliver(f, out);
    }
    fire_continuations(key, d.payload);
  }

  void on_deploy(FaceId in, const DeployPacket& dp) {
    if (!dp.face_chain.empty()) {
      DeployPacket next = dp;
      FaceId f = next.face_chain.front();
      next.face_chain.erase(next.face_chain.begin());
      env_.send(f, next);
      return;
    }
    if (dp.target != cfg_.id) {
      drop("deploy", "-", in, "target-mismatch;ms=" + dp.microservice.id);
      return;
    }
    if (repo_.find(dp.microservice.id)) {
      drop("deploy", "-", in, "duplicate-install;ms=" + dp.microservice.id);
      return;
    }
    if (storage_free_ < dp.microservice.storage_demand) {
      ++deploy_failures_;
      drop("deploy", "-", in, "storage;ms=" + dp.microservice.id);
      return;
    }
    storage_free_ -= dp.microservice.storage_demand;
    std::string ms_id = dp.microservice.id;
    repo_.install(dp.microservice);
    env_.trace("install", "deploy", "-", in, "ms=" + ms_id);
    if (dp.tree) learn_tree(*dp.tree, in);
  }

  void on_timer(const TimerPayload& t) {
    std::visit([this](const auto& v) { timer(v); }, t);
  }

  // -- local service requests ----------------------------------------------

  std::uint64_t submit_request(const std::string& head, TimeMs executiontime) {
    std::uint64_t id = next_request_++;
    Request& r = requests_[id];
    r.id = id;
    r.head = head;
    r.executiontime = executiontime;
    r.submitted = env_.now();
    env_.trace("request", "-", "/" + head, std::nullopt,
               "id=" + std::to_string(id) + ";executiontime=" + std::to_string(executiontime));
    try_serve(r);
    return id;
  }

  AgentStatus status() const {
    AgentStatus s;
    s.agent = cfg_.id;
    s.battery = cfg_.battery;
    s.storage_free = storage_free_;
    s.storage_total = cfg_.storage_total;
    s.compute_free = cfg_.compute_total;
    s.deploy_failures = deploy_failures_;
    for (const auto& [f, nb] : cfg_.neighbors) s.neighbors.push_back({f, nb.id, nb.delay});
    s.hosted_data = hosted_;
    std::sort(s.hosted_data.begin(), s.hosted_data.end());
    return s;
  }

  // -- introspection ---------------------------------------------------------

  const AgentConfig& config() const { return cfg_; }
  const Pit& pit() const { return pit_; }
  const Pst& pst() const { return pst_; }
  DataStore& store() { return store_; }
  const Repository& repo() const { return repo_; }
  Units storage_free() const { return storage_free_; }
  std::size_t pending_jobs() const { return jobs_.size(); }

  bool quiescent() const {
    bool requests_done = std::all_of(requests_.begin(), requests_.end(), [](const auto& kv) {
      return kv.second.state == Request::kDone;
    });
    return pit_.empty() && pst_.empty() && jobs_.empty() && requests_done;
  }

 private:
  struct Job {
    std::string ms;
    std::string origin;
    ServiceName result_name;
    std::string result;
    std::vector<std::string> awaited;  // input names in segment order
    std::map<std::string, Bytes> received;
    bool running = false;
  };

  struct Request {
    std::uint64_t id = 0;
    std::string head;
    TimeMs executiontime = 0;
    TimeMs submitted = 0;
    enum State { kLookupWait, kRetrieveWait, kResubmit, kExecWait, kDone } state = kDone;
    std::string awaited;
    bool retrieved = false;
    int lookups = 0;
    std::uint32_t generation = 0;
  };

  // -- helpers ---------------------------------------------------------------

  void drop(std::string_view ptype, std::string_view name, std::optional<FaceId> face,
            std::string reason) {
    env_.trace("drop", ptype, name, face, "reason=" + std::move(reason));
  }

  void deliver(FaceId f, const DataPacket& d) {
    if (f == kLocalFace)
      proxy_data(serialize_name(d.name), d.payload);
    else
      env_.send(f, d);
  }

  // Returns true when a fresh entry was created (caller forwards/executes);
  // false when the Interest was aggregated into an existing entry.
  bool pit_admit(const std::string& key, const ServiceName& n, const std::string& answer,
                 FaceId in, std::uint64_t nonce, TimeMs lifetime) {
    if (PitEntry* e = pit_.find(key)) {
      e->in_faces.insert(in);
      e->nonces.insert(nonce);
      e->expires = std::max(e->expires, env_.now() + lifetime);
      env_.trace("pit_join", "interest", key, in, "nonce=" + std::to_string(nonce));
      return false;
    }
    PitEntry& e = pit_.create(key, n, answer, env_.now(), env_.now() + lifetime);
    e.in_faces.insert(in);
    e.nonces.insert(nonce);
    env_.trace("pit_insert", "interest", key, in, "nonce=" + std::to_string(nonce));
    env_.schedule(lifetime, PitExpiry{key});
    return true;
  }

  void send_interest(FaceId f, const ServiceName& n, std::uint64_t nonce,
                     std::uint32_t hop_count) {
    env_.send(f, InterestPacket{n, nonce, hop_count});
  }

  // Local hand-off: the packet re-enters this agent as if received on the
  // local face, sequenced after everything already scheduled for now.
  void self_deliver(const InterestPacket& i) { env_.schedule(0, SelfDeliver{i}); }

  void learn_tree(const std::string& text, std::optional<FaceId> in) {
    try {
      ServiceName tree = parse_name(text);
      if (!tree.head) throw MalformedName("tree without head");
      repo_.put_tree(*tree.head, tree);
      env_.trace("tree_store", "-", text, in, "head=" + *tree.head);
    } catch (const MalformedName&) {
      drop("deploy", text, in, "bad-tree");
    }
  }

  // -- exec pipeline ----------------------------------------------------------

  void handle_exec_interest(FaceId in, const InterestPacket& i) {
    const ServiceName& n = i.name;
    std::string exact = serialize_name(n);
    ServiceName ans = answer_name(n);
    std::string answer = serialize_name(ans);
    if (const StoredData* d = store_.get(answer, env_.now())) {
      env_.trace("cs_hit", "interest", answer, in, "for=" + exact);
      deliver(in, DataPacket{ans, d->payload, {}, {}});
      return;
    }
    // A leading face token makes this agent a pure relay for the Interest.
    const std::vector<FaceId>* lead = nullptr;
    if (n.head && !n.head_faces.empty()) lead = &n.head_faces;
    if (!n.chain.empty() && !n.chain.front().faces.empty()) lead = &n.chain.front().faces;
    if (lead) {
      if (!pit_admit(exact, n, answer, in, i.nonce, cfg_.table_lifetime)) return;
      ServiceName fwd = n;
      FaceId f = lead->front();
      if (fwd.head)
        fwd.head_faces.erase(fwd.head_faces.begin());
      else
        fwd.chain.front().faces.erase(fwd.chain.front().faces.begin());
      send_interest(f, fwd, i.nonce, i.hop_count + 1);
      return;
    }
    std::string elem = n.head ? *n.head : n.chain.front().element;
    const MicroserviceDescriptor* desc = repo_.find(elem);
    if (!desc) {
      drop("interest", exact, in, "unknown-element");
      return;
    }
    if (!pit_admit(exact, n, answer, in, i.nonce, cfg_.table_lifetime)) return;
    if (jobs_.count(exact)) return;
    start_job(exact, n, elem, ans, answer, i.hop_count);
  }

  void start_job(const std::string& exact, const ServiceName& n, const std::string& elem,
                 ServiceName result_name, const std::string& result, std::uint32_t hops) {
    Job& job = jobs_[exact];
    job.ms = elem;
    job.origin = exact;
    job.result_name = std::move(result_name);
    job.result = result;
    for (const ChildInterest& c : rewrite_for_children(n, elem)) {
      std::string want = serialize_name(answer_name(c.name));
      job.awaited.push_back(want);
      if (const StoredData* d = store_.get(want, env_.now())) {
        env_.trace("cs_hit", "interest", want, std::nullopt, "for=" + exact);
        job.received[want] = d->payload;
        continue;
      }
      bool fresh_pst = pst_.find(want) == nullptr;
      PstEntry& pe = fresh_pst ? pst_.create(want, answer_name(c.name), env_.now(),
                                             env_.now() + cfg_.table_lifetime)
                               : *pst_.find(want);
      bool added = pe.waiters.insert(PstWaiter{elem, exact}).second;
      if (fresh_pst) {
        env_.trace("pst_insert", "-", want, std::nullopt, "ms=" + elem);
        env_.schedule(cfg_.table_lifetime, PstExpiry{want});
      } else if (added) {
        env_.trace("pst_join", "-", want, std::nullopt, "ms=" + elem);
      }
      if (fresh_pst) {
        InterestPacket child{c.name, env_.fresh_nonce(), hops + 1};
        if (c.first_face)
          send_interest(*c.first_face, c.name, child.nonce, child.hop_count);
        else
          self_deliver(child);
      }
    }
    maybe_start_exec(job);
  }

  void feed_job(const std::string& origin, const std::string& input, const Bytes& payload) {
    auto it = jobs_.find(origin);
    if (it == jobs_.end()) return;
    Job& job = it->second;
    if (job.running || job.received.count(input)) return;
    if (std::find(job.awaited.begin(), job.awaited.end(), input) == job.awaited.end()) return;
    job.received[input] = payload;
    maybe_start_exec(job);
  }

  void maybe_start_exec(Job& job) {
    bool ready = std::all_of(job.awaited.begin(), job.awaited.end(),
                             [&job](const std::string& k) { return job.received.count(k); });
    if (job.running || !ready) return;
    const MicroserviceDescriptor* desc = repo_.find(job.ms);
    if (!desc) return;
    job.running = true;
    env_.trace("exec_start", "-", job.result, std::nullopt, "ms=" + job.ms);
    env_.schedule(desc->exec_time, ExecDone{job.origin});
  }

  // -- lookup ------------------------------------------------------------------

  void handle_lookup_interest(FaceId in, const InterestPacket& i) {
    const ServiceName& n = i.name;
    std::string exact = serialize_name(n);
    if (PitEntry* e = pit_.find(exact)) {
      e->in_faces.insert(in);
      e->nonces.insert(i.nonce);
      e->expires = std::max(e->expires, env_.now() + cfg_.table_lifetime);
      env_.trace("pit_join", "interest", exact, in, "nonce=" + std::to_string(i.nonce));
      return;
    }
    if (const MicroserviceDescriptor* desc = repo_.find(*n.head)) {
      TimeMs delay = env_.now() - n.triggering_time;
      // Serve only when the whole execution still fits the caller's budget.
      if (desc->exec_time + delay < n.execution_time) {
        env_.trace("lookup_hit", "interest", exact, in,
                   "slack=" + std::to_string(n.execution_time - desc->exec_time - delay));
        pit_admit(exact, n, exact, in, i.nonce, cfg_.table_lifetime);
        serve_tree(*n.head, exact, i.hop_count);
      } else {
        drop("interest", exact, in, "deadline");
      }
      return;
    }
    std::vector<FaceId> targets;
    for (const auto& [f, nb] : cfg_.neighbors)
      if (f != in) targets.push_back(f);
    if (targets.empty()) {
      drop("interest", exact, in, "dead-end");
      return;
    }
    pit_admit(exact, n, exact, in, i.nonce, cfg_.table_lifetime);
    for (FaceId f : targets) send_interest(f, n, i.nonce, i.hop_count + 1);
  }

  void serve_tree(const std::string& head, const std::string& lookup_key, std::uint32_t hops) {
    const ServiceName* tree = repo_.tree(head);
    if (!tree) {
      drop("interest", lookup_key, std::nullopt, "no-tree");
      return;
    }
    std::string result = serialize_name(answer_name(*tree));
    if (const StoredData* d = store_.get(result, env_.now())) {
      env_.trace("cs_hit", "interest", result, std::nullopt, "for=" + lookup_key);
      reply_via_pit(lookup_key, d->payload);
      return;
    }
    continuations_[result].push_back(lookup_key);
    std::string tree_key = serialize_name(*tree);
    if (!jobs_.count(tree_key)) {
      InterestPacket exec{*tree, env_.fresh_nonce(), hops};
      self_deliver(exec);
    }
  }

  void reply_via_pit(const std::string& key, const Bytes& payload) {
    PitEntry* e = pit_.find(key);
    if (!e) return;
    DataPacket d{e->name, payload, {}, {}};
    auto faces = e->in_faces;
    pit_.erase(key);
    for (FaceId f : faces) deliver(f, d);
  }

  void fire_continuations(const std::string& result, const Bytes& payload) {
    auto it = continuations_.find(result);
    if (it == continuations_.end()) return;
    auto keys = it->second;
    continuations_.erase(it);
    for (const std::string& k : keys) reply_via_pit(k, payload);
  }

  // -- retrieve ------------------------------------------------------------------

  void handle_retrieve_interest(FaceId in, const InterestPacket& i) {
    std::string exact = serialize_name(i.name);
    if (const StoredData* d = store_.get(exact, env_.now())) {
      env_.trace("cs_hit", "interest", exact, in, "");
      deliver(in, DataPacket{i.name, d->payload, {}, {}});
      return;
    }
    if (PitEntry* e = pit_.find(exact)) {
      e->in_faces.insert(in);
      e->nonces.insert(i.nonce);
      e->expires = std::max(e->expires, env_.now() + cfg_.table_lifetime);
      env_.trace("pit_join", "interest", exact, in, "nonce=" + std::to_string(i.nonce));
      return;
    }
    std::vector<FaceId> targets;
    if (cfg_.controller_face && *cfg_.controller_face != in) {
      targets.push_back(*cfg_.controller_face);
    } else {
      for (const auto& [f, nb] : cfg_.neighbors)
        if (f != in) targets.push_back(f);
    }
    if (targets.empty()) {
      drop("interest", exact, in, "dead-end");
      return;
    }
    pit_admit(exact, i.name, exact, in, i.nonce, cfg_.table_lifetime);
    for (FaceId f : targets) send_interest(f, i.name, i.nonce, i.hop_count + 1);
  }

  // -- monitor -----------------------------------------------------------------

  void handle_monitor_interest(FaceId in, const InterestPacket& i) {
    std::string exact = serialize_name(i.name);
    pit_admit(exact, i.name, exact, in, i.nonce, cfg_.monitor_timeout);
    std::vector<FaceId> targets;
    for (const auto& [f, nb] : cfg_.neighbors)
      if (f != in) targets.push_back(f);
    if (targets.empty()) {
      // Leaf: answer immediately with own status.
      contributed_.insert(i.nonce);
      env_.trace("status_add", "data", exact, in, "nonce=" + std::to_string(i.nonce));
      deliver(in, monitor_data(i.nonce, {status()}));
      return;
    }
    for (FaceId f : targets) send_interest(f, i.name, i.nonce, i.hop_count + 1);
    // Interior agents answer for themselves mid-round in case every copy of
    // the flood returning to them is nonce-dropped (cycles).
    if (self_armed_.insert(i.nonce).second)
      env_.schedule(std::max<TimeMs>(1, cfg_.monitor_timeout / 2), MonitorSelfReport{i.nonce});
  }

  DataPacket monitor_data(std::uint64_t round, std::vector<AgentStatus> statuses) const {
    ServiceName n;
    n.command = Command::monitor;
    return DataPacket{std::move(n), monitor_payload(round), std::move(statuses), {}};
  }

  void handle_monitor_data(FaceId in, const DataPacket& d) {
    std::string key = serialize_name(d.name);
    auto round = monitor_round(d);
    if (!round) {
      drop("data", key, in, "bad-round");
      return;
    }
    PitEntry* e = pit_.find(key);
    if (!e) {
      drop("data", key, in, "no-pit");
      return;
    }
    DataPacket out = d;
    if (contributed_.insert(*round).second) {
      out.status_list.push_back(status());
      env_.trace("status_add", "data", key, in, "nonce=" + std::to_string(*round));
    }
    for (FaceId f : e->in_faces)
      if (f != in) deliver(f, out);
    // Entry stays for the round's other branches; expiry reclaims it.
  }

  // -- request proxy -------------------------------------------------------------

  void try_serve(Request& r) {
    if (const ServiceName* tree = repo_.tree(r.head)) {
      std::string result = serialize_name(answer_name(*tree));
      if (const StoredData* d = store_.get(result, env_.now())) {
        env_.trace("cs_hit", "-", result, std::nullopt, "request=" + std::to_string(r.id));
        complete(r, result, d->payload);
        return;
      }
      if (repo_.find(r.head)) {
        r.state = Request::kExecWait;
        r.awaited = result;
        InterestPacket exec{*tree, env_.fresh_nonce(), 0};
        arm_timeout(r, 2 * r.executiontime);
        env_.trace("recv_interest", "interest", serialize_name(*tree), kLocalFace,
                   "nonce=" + std::to_string(exec.nonce));
        on_interest(kLocalFace, exec);
        return;
      }
    }
    do_lookup(r);
  }

  void do_lookup(Request& r) {
    if (r.lookups >= (r.retrieved ? 2 : 1)) {
      fail(r, "no-route");
      return;
    }
    ++r.lookups;
    ServiceName n;
    n.command = Command::lookup;
    n.head = r.head;
    n.execution_time = r.executiontime;
    n.triggering_time = env_.now();
    std::string key = serialize_name(n);
    r.state = Request::kLookupWait;
    r.awaited = key;
    std::uint64_t nonce = env_.fresh_nonce();
    pit_admit(key, n, key, kLocalFace, nonce, cfg_.table_lifetime);
    for (const auto& [f, nb] : cfg_.neighbors) send_interest(f, n, nonce, 0);
    const MicroserviceDescriptor* desc = repo_.find(r.head);
    arm_timeout(r, 2 * (desc ? desc->exec_time : r.executiontime));
  }

  void do_retrieve(Request& r) {
    r.retrieved = true;
    ServiceName n;
    n.command = Command::retrieve;
    n.head = r.head;
    std::string key = serialize_name(n);
    r.state = Request::kRetrieveWait;
    r.awaited = key;
    std::uint64_t nonce = env_.fresh_nonce();
    pit_admit(key, n, key, kLocalFace, nonce, cfg_.table_lifetime);
    if (cfg_.controller_face) {
      send_interest(*cfg_.controller_face, n, nonce, 0);
    } else {
      for (const auto& [f, nb] : cfg_.neighbors) send_interest(f, n, nonce, 0);
    }
    arm_timeout(r, 2 * r.executiontime);
  }

  void arm_timeout(Request& r, TimeMs delay) {
    ++r.generation;
    env_.schedule(std::max<TimeMs>(1, delay), RequestTimeout{r.id, r.generation});
  }

  void complete(Request& r, const std::string& name, const Bytes& payload) {
    (void)payload;
    r.state = Request::kDone;
    ++r.generation;
    TimeMs latency = env_.now() - r.submitted;
    env_.trace("result", "data", name, std::nullopt,
               "id=" + std::to_string(r.id) + ";latency=" + std::to_string(latency));
    env_.request_outcome(
        {r.id, cfg_.id, r.head, r.submitted, env_.now(), true, name});
  }

  void fail(Request& r, const std::string& reason) {
    r.state = Request::kDone;
    ++r.generation;
    env_.trace("fail", "-", "/" + r.head, std::nullopt,
               "id=" + std::to_string(r.id) + ";reason=" + reason);
    env_.request_outcome(
        {r.id, cfg_.id, r.head, r.submitted, env_.now(), false, reason});
  }

  // Data handed to the proxy side: complete or advance any request waiting on
  // this name.  Unmatched deliveries are results of lookup-driven executions
  // and need no local bookkeeping.
  void proxy_data(const std::string& name, const Bytes& payload) {
    for (auto& [id, r] : requests_) {
      if (r.state == Request::kDone || r.state == Request::kResubmit || r.awaited != name)
        continue;
      if (r.state == Request::kRetrieveWait) {
        if (is_err_payload(payload)) {
          fail(r, to_string(payload).substr(kErrPrefix.size()));
          continue;
        }
        ++r.generation;  // cancel retrieve timeout
        learn_tree(to_string(payload), kLocalFace);
        if (!repo_.tree(r.head)) {
          fail(r, "bad-tree");
          continue;
        }
        // Re-enter after this tick's deploys are in.
        r.state = Request::kResubmit;
        env_.schedule(0, ResubmitRequest{r.id});
        continue;
      }
      if (is_err_payload(payload)) {
        fail(r, to_string(payload).substr(kErrPrefix.size()));
        continue;
      }
      complete(r, name, payload);
    }
  }

  // -- timers ---------------------------------------------------------------------

  void timer(const PitExpiry& t) {
    PitEntry* e = pit_.find(t.key);
    if (!e) return;
    if (e->expires > env_.now()) {
      env_.schedule(e->expires - env_.now(), PitExpiry{t.key});
      return;
    }
    for (std::uint64_t n : e->nonces) {
      contributed_.erase(n);
      self_armed_.erase(n);
    }
    pit_.erase(t.key);
    env_.trace("pit_expire", "-", t.key, std::nullopt, "");
  }

  void timer(const PstExpiry& t) {
    PstEntry* e = pst_.find(t.key);
    if (!e) return;
    if (e->expires > env_.now()) {
      env_.schedule(e->expires - env_.now(), PstExpiry{t.key});
      return;
    }
    auto waiters = e->waiters;
    pst_.erase(t.key);
    env_.trace("pst_expire", "-", t.key, std::nullopt, "");
    for (const PstWaiter& w : waiters) {
      auto it = jobs_.find(w.origin);
      if (it != jobs_.end() && !it->second.running) {
        jobs_.erase(it);
        drop("interest", w.origin, std::nullopt, "input-timeout");
      }
    }
  }

  void timer(const MonitorSelfReport& t) {
    if (contributed_.count(t.nonce)) return;
    PitEntry* e = pit_.find("/sd-nsn/monitor");
    if (!e || !e->nonces.count(t.nonce)) return;
    contributed_.insert(t.nonce);
    env_.trace("status_add", "data", "/sd-nsn/monitor", std::nullopt,
               "nonce=" + std::to_string(t.nonce));
    DataPacket d = monitor_data(t.nonce, {status()});
    for (FaceId f : e->in_faces) deliver(f, d);
  }

  void timer(const ExecDone& t) {
    auto it = jobs_.find(t.origin);
    if (it == jobs_.end()) return;
    Job job = std::move(it->second);
    jobs_.erase(it);
    const MicroserviceDescriptor* desc = repo_.find(job.ms);
    if (!desc) return;
    std::vector<std::pair<std::string, Bytes>> inputs;
    for (const std::string& k : job.awaited) inputs.emplace_back(k, job.received.at(k));
    Bytes payload = run_microservice(*desc, inputs);
    store_.put(job.result, payload, env_.now());
    env_.trace("exec_done", "-", job.result, std::nullopt,
               "ms=" + job.ms + ";bytes=" + std::to_string(payload.size()));
    // Co-located executions waiting on this result never see it as Data.
    if (PstEntry* pe = pst_.find(job.result)) {
      auto waiters = pe->waiters;
      pst_.erase(job.result);
      for (const PstWaiter& w : waiters) feed_job(w.origin, job.result, payload);
    }
    DataPacket d{job.result_name, payload, {}, {}};
    for (const std::string& k : pit_.keys_for_answer(job.result)) {
      PitEntry* e = pit_.find(k);
      if (!e) continue;
      auto faces = e->in_faces;
      pit_.erase(k);
      for (FaceId f : faces) deliver(f, d);
    }
    fire_continuations(job.result, payload);
  }

  void timer(const RequestTimeout& t) {
    auto it = requests_.find(t.request);
    if (it == requests_.end()) return;
    Request& r = it->second;
    if (r.state == Request::kDone || r.generation != t.generation) return;
    if (r.state == Request::kLookupWait && !r.retrieved) {
      do_retrieve(r);
      return;
    }
    fail(r, r.state == Request::kLookupWait   ? "lookup-timeout"
            : r.state == Request::kRetrieveWait ? "retrieve-timeout"
                                                : "exec-timeout");
  }

  void timer(const ResubmitRequest& t) {
    auto it = requests_.find(t.request);
    if (it == requests_.end()) return;
    Request& r = it->second;
    if (r.state != Request::kResubmit) return;
    try_serve(r);
  }

  void timer(const SelfDeliver& t) {
    env_.trace("recv_interest", "interest", serialize_name(t.interest.name), kLocalFace,
               "nonce=" + std::to_string(t.interest.nonce));
    on_interest(kLocalFace, t.interest);
  }

  void timer(const RoundStart&) {}
  void timer(const RoundTimeout&) {}

  AgentConfig cfg_;
  NodeEnv& env_;
  Pit pit_;
  Pst pst_;
  DataStore store_;
  Repository repo_;
  Units storage_free_ = 0;
  std::uint32_t deploy_failures_ = 0;
  std::vector<std::string> hosted_;
  std::set<std::uint64_t> seen_nonces_;
  std::set<std::uint64_t> contributed_;
  std::set<std::uint64_t> self_armed_;
  std::map<std::string, Job> jobs_;
  std::map<std::string, std::vector<std::string>> continuations_;
  std::map<std::uint64_t, Request> requests_;
  std::uint64_t next_request_ = 1;
};

}  // namespace sdnsn
