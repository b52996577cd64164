// End-to-end acceptance gate: one PASS/FAIL line per criterion, nonzero exit
// if any fail.  Expected values are frozen here, independently of the library
// where an oracle exists.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <regex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "sdnsn/scenario.hpp"
#include "mock_env.hpp"
#include "name_gen.hpp"
#include "oracles.hpp"

using namespace sdnsn;

#define REQ(cond)                                                            \
  do {                                                                       \
    if (!(cond))                                                             \
      return std::string("line ") + std::to_string(__LINE__) + ": " + #cond; \
  } while (0)

namespace {

Scenario load(const char* file) {
  return load_scenario(std::string(SDNSN_SCENARIO_DIR) + "/" + file);
}

// Ordered scan over one causal chain; events of other chains may interleave.
struct Scan {
  const std::vector<TraceRecord>& t;
  std::size_t pos = 0;
  bool seek(const std::string& node, const std::string& kind, const std::string& name) {
    for (; pos < t.size(); ++pos)
      if (t[pos].node == node && t[pos].kind == kind && t[pos].name == name) {
        ++pos;
        return true;
      }
    return false;
  }
};

// ---------------------------------------------------------------- criterion 1

std::optional<std::string> golden_trace() {
  Scenario s = load("multimedia.scn");
  auto eng = make_engine(s);
  RunResult r = eng->run();

  REQ(r.metrics.quiescent);
  REQ(r.metrics.monitor_rounds == 1);
  REQ(r.metrics.requests.size() == 1);
  const RequestOutcome& o = r.metrics.requests[0];
  const std::string answer =
      "/multimedia/videoanalysis/video-aircraft320/soundanalysis/soundfactory";
  REQ(o.ok);
  REQ(o.submitted == 600);
  REQ(o.finished == 1582);
  REQ(o.detail == answer);

  const std::string tree =
      "/sd-nsn/exec/multimedia/S11/face1/videoanalysis/face30/video-aircraft320"
      "/S12/face2/soundanalysis/face10/soundfactory";

  std::set<std::pair<std::string, std::string>> where;
  for (const auto& [time, agent, ms] : r.metrics.installs) where.insert({agent, ms});
  std::set<std::pair<std::string, std::string>> want{
      {"nsn1", "multimedia"}, {"nsn3", "videoanalysis"}, {"nsn2", "soundanalysis"}};
  REQ(where == want);
  REQ(r.metrics.installs.size() == 3);

  {  // control chain: lookup dead-ends, retrieve fetches the tree
    Scan c{r.trace};
    REQ(c.seek("nsn1", "send_interest", "/sd-nsn/lookup/multimedia/400/600"));
    REQ(c.seek("nsn1", "send_interest", "/sd-nsn/retrieve/multimedia"));
    REQ(c.seek("controller", "recv_interest", "/sd-nsn/retrieve/multimedia"));
    REQ(c.seek("controller", "tree", tree));
    REQ(c.seek("controller", "send_data", "/sd-nsn/retrieve/multimedia"));
    REQ(c.seek("nsn1", "recv_data", "/sd-nsn/retrieve/multimedia"));
    REQ(c.seek("nsn1", "recv_interest", tree));
  }
  {  // video branch
    Scan c{r.trace};
    REQ(c.seek("nsn1", "send_interest", "/videoanalysis/face30/video-aircraft320"));
    REQ(c.seek("nsn3", "recv_interest", "/videoanalysis/face30/video-aircraft320"));
    REQ(c.seek("nsn3", "send_interest", "/video-aircraft320"));
    REQ(c.seek("nsn4", "recv_interest", "/video-aircraft320"));
    REQ(c.seek("nsn4", "cs_hit", "/video-aircraft320"));
    REQ(c.seek("nsn4", "send_data", "/video-aircraft320"));
    REQ(c.seek("nsn3", "recv_data", "/video-aircraft320"));
    REQ(c.seek("nsn3", "exec_done", "/videoanalysis/video-aircraft320"));
    REQ(c.seek("nsn3", "send_data", "/videoanalysis/video-aircraft320"));
    REQ(c.seek("nsn1", "recv_data", "/videoanalysis/video-aircraft320"));
  }
  {  // sound branch
    Scan c{r.trace};
    REQ(c.seek("nsn1", "send_interest", "/soundanalysis/face10/soundfactory"));
    REQ(c.seek("nsn2", "recv_interest", "/soundanalysis/face10/soundfactory"));
    REQ(c.seek("nsn2", "send_interest", "/soundfactory"));
    REQ(c.seek("nsn5", "cs_hit", "/soundfactory"));
    REQ(c.seek("nsn5", "send_data", "/soundfactory"));
    REQ(c.seek("nsn2", "exec_done", "/soundanalysis/soundfactory"));
    REQ(c.seek("nsn1", "recv_data", "/soundanalysis/soundfactory"));
  }
  {  // join at the head
    Scan c{r.trace};
    REQ(c.seek("nsn1", "exec_done", answer));
    REQ(c.seek("nsn1", "result", answer));
  }

  // End-to-end payload, recomputed from first principles.
  std::string video_data = "data:video-aircraft320#" + oracle::hex(Rng(7).next());
  std::string sound_data = "data:soundfactory#" + oracle::hex(Rng(9).next());
  std::string video_out =
      "videoanalysis(/video-aircraft320)#" + oracle::hex(oracle::fnv64(video_data));
  std::string sound_out =
      "soundanalysis(/soundfactory)#" + oracle::hex(oracle::fnv64(sound_data));
  std::string head_out =
      "multimedia(/videoanalysis/video-aircraft320,/soundanalysis/soundfactory)#" +
      oracle::hex(oracle::fnv64(video_out + sound_out));
  const StoredData* d = eng->agent("nsn1").store().get(answer, r.metrics.end_time);
  REQ(d != nullptr);
  REQ(to_string(d->payload) == head_out);
  return std::nullopt;
}

// ---------------------------------------------------------------- criterion 2

std::optional<std::string> name_conservation() {
  std::mt19937_64 rng(99);
  int trips = 0;
  for (int iter = 0; iter < 1500; ++iter) {
    ServiceName n = testgen::random_name(rng);
    std::string text = serialize_name(n);
    ServiceName back = parse_name(text);
    if (!(back == n)) return "round-trip mismatch on " + text;
    if (serialize_name(back) != text) return "serialization unstable on " + text;
    ++trips;

    std::string body = text;
    if (n.command == Command::exec) body = text.substr(std::string("/sd-nsn/exec").size());
    bool leading = n.head ? !n.head_faces.empty() : !n.chain.front().faces.empty();
    if (!leading) {
      std::string elem = n.head ? *n.head : n.chain.front().element;
      auto kids = rewrite_for_children(n, elem);
      auto want = oracle::children_of(body, elem);
      if (kids.size() != want.size()) return "child count diverges on " + text;
      for (std::size_t i = 0; i < kids.size(); ++i) {
        std::string face =
            kids[i].first_face ? "face" + std::to_string(*kids[i].first_face) : "";
        if (face != want[i].first) return "first hop diverges on " + text;
        if (serialize_name(kids[i].name) != want[i].second)
          return "child body diverges on " + text;
      }
    }
    if (!n.head && serialize_name(answer_name(n)) != oracle::strip_text(body))
      return "answer stripping diverges on " + text;
  }
  if (trips < 1000) return "too few round-trips: " + std::to_string(trips);
  return std::nullopt;
}

// ---------------------------------------------------------------- criterion 3

RunResult run_pair(TimeMs budget, bool proactive, TimeMs at) {
  Topology t;
  t.nodes = {{"h1", 100, 10, 4}, {"h2", 100, 1, 4}};
  t.links = {{"h1", 1, "h2", 1, 10, 0.0}};
  t.data = {{"cam", "h1", 5, -1}};
  EngineOptions o;
  o.seed = 1;
  o.horizon = 20000;
  o.attachment = "h1";
  o.round_timeout = 300;
  o.proactive = proactive;
  Engine eng(t, o);
  ServiceChart chart;
  chart.head = {"alert", 100, 2, 1};
  chart.segments.push_back({"11", {{"filter", 50, 2, 1}}, "cam"});
  eng.register_chart(chart);
  eng.submit_request_at(at, "h2", "alert", budget);
  return eng.run();
}

std::optional<std::string> lookup_window() {
  // Head 100ms, one 10ms hop: a 111ms budget squeaks in, 110 must not.
  RunResult hit = run_pair(111, true, 5000);
  REQ(hit.metrics.requests.size() == 1);
  REQ(hit.metrics.requests[0].ok);
  REQ(hit.metrics.requests[0].detail == "/sd-nsn/lookup/alert/111/5000");
  REQ(hit.metrics.requests[0].finished == 5170);
  int lookups = 0, retrieves = 0, serves = 0;
  for (const TraceRecord& t : hit.trace) {
    if (t.node == "h2" && t.kind == "send_interest" && t.name.rfind("/sd-nsn/lookup/", 0) == 0)
      ++lookups;
    if (t.kind == "send_interest" && t.name.rfind("/sd-nsn/retrieve/", 0) == 0) ++retrieves;
    if (t.kind == "lookup_hit") ++serves;
  }
  REQ(lookups == 1);
  REQ(retrieves == 0);
  REQ(serves == 1);

  RunResult miss = run_pair(110, true, 5000);
  REQ(miss.metrics.requests.size() == 1);
  REQ(!miss.metrics.requests[0].ok);
  bool deadline = false;
  for (const TraceRecord& t : miss.trace) {
    if (t.kind == "drop" && t.extra.find("reason=deadline") != std::string::npos)
      deadline = true;
    if (t.kind == "lookup_hit") return "budget 110 was served";
    if (t.kind == "send_data" && t.name.rfind("/sd-nsn/lookup/", 0) == 0)
      return "refused lookup still produced data";
  }
  REQ(deadline);

  // Cold start without proactive deploys: exactly one retrieve, at 2x budget.
  RunResult cold = run_pair(300, false, 600);
  REQ(cold.metrics.requests.size() == 1);
  REQ(cold.metrics.requests[0].ok);
  REQ(cold.metrics.requests[0].finished == 1392);
  std::vector<TimeMs> rts;
  int lateral = 0;
  for (const TraceRecord& t : cold.trace) {
    if (t.node == "h2" && t.kind == "send_interest" && t.name == "/sd-nsn/retrieve/alert")
      rts.push_back(t.time);
    if (t.node == "h2" && t.kind == "send_interest" && t.name.rfind("/sd-nsn/lookup/", 0) == 0)
      ++lateral;
  }
  REQ(rts.size() == 1);
  REQ(rts[0] == 1200);
  REQ(lateral == 2);
  return std::nullopt;
}

// ------------------------------------------------------- criteria 4 and 5

struct NetSpec {
  Topology topo;
  std::map<std::pair<std::string, FaceId>, std::pair<std::string, TimeMs>> truth;
  std::vector<std::string> ids;
  std::string attachment;
};

NetSpec random_net(std::mt19937_64& gen, int n, Units storage, std::uint32_t battery_lo) {
  NetSpec s;
  std::map<std::string, FaceId> next_face;
  for (int i = 1; i <= n; ++i) {
    std::string id = "a" + std::to_string(i);
    s.ids.push_back(id);
    auto batt = battery_lo + static_cast<std::uint32_t>(gen() % (101 - battery_lo));
    s.topo.nodes.push_back({id, batt, storage, 8});
    next_face[id] = 1;
  }
  auto add_link = [&s, &gen, &next_face](int u, int v) {
    TimeMs d = 1 + static_cast<TimeMs>(gen() % 9);
    FaceId fu = next_face[s.ids[static_cast<std::size_t>(u)]]++;
    FaceId fv = next_face[s.ids[static_cast<std::size_t>(v)]]++;
    const std::string &a = s.ids[static_cast<std::size_t>(u)],
                      &b = s.ids[static_cast<std::size_t>(v)];
    s.topo.links.push_back({a, fu, b, fv, d, 0.0});
    s.truth[{a, fu}] = {b, d};
    s.truth[{b, fv}] = {a, d};
  };
  for (int i = 1; i < n; ++i) add_link(static_cast<int>(gen() % static_cast<std::uint64_t>(i)), i);
  int extras = static_cast<int>(gen() % static_cast<std::uint64_t>(n));
  for (int e = 0; e < extras; ++e) {
    int u = static_cast<int>(gen() % static_cast<std::uint64_t>(n));
    int v = static_cast<int>(gen() % static_cast<std::uint64_t>(n));
    if (u == v) continue;
    bool dup = false;
    for (const TopologyLink& l : s.topo.links)
      if ((l.a == s.ids[static_cast<std::size_t>(u)] && l.b == s.ids[static_cast<std::size_t>(v)]) ||
          (l.a == s.ids[static_cast<std::size_t>(v)] && l.b == s.ids[static_cast<std::size_t>(u)]))
        dup = true;
    if (!dup) add_link(u, v);
  }
  s.attachment = s.ids[gen() % static_cast<std::uint64_t>(n)];
  return s;
}

std::optional<std::string> deploy_routing() {
  std::mt19937_64 gen(1234);
  for (int trial = 0; trial < 100; ++trial) {
    std::string tag = "trial " + std::to_string(trial) + ": ";
    int n = 2 + static_cast<int>(gen() % 7);
    NetSpec net = random_net(gen, n, 40, 100);
    net.topo.data.push_back({"cam", net.ids[gen() % static_cast<std::uint64_t>(n)], gen(), -1});
    bool two = n >= 3 && (gen() % 2) == 0;
    if (two)
      net.topo.data.push_back({"mic", net.ids[gen() % static_cast<std::uint64_t>(n)], gen(), -1});

    EngineOptions o;
    o.seed = static_cast<std::uint64_t>(trial) + 1;
    o.horizon = 10000;
    o.attachment = net.attachment;
    o.round_timeout = 300;
    o.proactive = true;
    Engine eng(net.topo, o);

    auto dur = [&gen]() { return 10 + static_cast<TimeMs>(gen() % 40); };
    auto space = [&gen]() { return 1 + static_cast<Units>(gen() % 3); };
    ServiceChart chart;
    chart.head = {"alert", dur(), space(), 1};
    chart.segments.push_back({"11", {{"f1", dur(), space(), 1}, {"f2", dur(), space(), 1}}, "cam"});
    if (two) chart.segments.push_back({"12", {{"g1", dur(), space(), 1}}, "mic"});
    eng.register_chart(chart);
    RunResult r = eng.run();

    std::size_t expected = two ? 4 : 3;
    const auto& routes = eng.controller().source_routes();
    if (routes.size() != expected) return tag + "route count " + std::to_string(routes.size());
    if (r.metrics.installs.size() != expected)
      return tag + "install count " + std::to_string(r.metrics.installs.size());

    for (const SourceRouteEntry& e : routes) {
      std::string cur = net.attachment;
      for (FaceId f : e.faces) {
        auto it = net.truth.find({cur, f});
        if (it == net.truth.end()) return tag + "chain leaves " + cur + " by an unknown face";
        cur = it->second.first;
      }
      if (cur != e.target) return tag + "chain for " + e.microservice + " lands on " + cur;
      bool found = false;
      for (const auto& [time, agent, ms] : r.metrics.installs)
        if (ms == e.microservice && agent == e.target) found = true;
      if (!found) return tag + e.microservice + " never installed at " + e.target;
      if (!eng.agent(e.target).repo().find(e.microservice))
        return tag + e.microservice + " missing from the repository at " + e.target;
    }
    std::set<std::string> once;
    for (const auto& [time, agent, ms] : r.metrics.installs)
      if (!once.insert(ms).second) return tag + "duplicate install of " + ms;
    if (!r.metrics.quiescent) return tag + "not quiescent";
  }
  return std::nullopt;
}

std::optional<std::string> monitor_census() {
  std::mt19937_64 gen(777);
  for (int trial = 0; trial < 50; ++trial) {
    std::string tag = "trial " + std::to_string(trial) + ": ";
    int n = 2 + static_cast<int>(gen() % 7);
    NetSpec net = random_net(gen, n, 10, 40);
    EngineOptions o;
    o.seed = static_cast<std::uint64_t>(trial) + 1;
    o.horizon = 5000;
    o.attachment = net.attachment;
    o.round_timeout = 400;
    Engine eng(net.topo, o);
    RunResult r = eng.run();

    if (r.metrics.monitor_rounds != 1) return tag + "round did not complete";
    const auto& arrivals = eng.controller().round_arrivals();
    if (arrivals.size() != static_cast<std::size_t>(n))
      return tag + std::to_string(arrivals.size()) + " of " + std::to_string(n) + " reported";
    for (const auto& [agent, count] : arrivals)
      if (count != 1)
        return tag + agent + " reported " + std::to_string(count) + " times";

    const TopologyImage& img = eng.controller().image();
    if (img.agents.size() != static_cast<std::size_t>(n)) return tag + "image is missing agents";
    if (img.adjacency.size() != net.truth.size())
      return tag + "adjacency size " + std::to_string(img.adjacency.size()) + " vs " +
             std::to_string(net.truth.size());
    for (const auto& [key, val] : net.truth) {
      auto it = img.adjacency.find(key);
      if (it == img.adjacency.end() || it->second != val)
        return tag + "adjacency wrong at " + key.first + "/face" + std::to_string(key.second);
    }
    for (const TopologyNode& node : net.topo.nodes)
      if (img.agents.at(node.id).status.battery != node.battery)
        return tag + "battery mismatch at " + node.id;
    if (!r.metrics.quiescent) return tag + "not quiescent";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- criterion 6

std::optional<std::string> placement_reference() {
  std::mt19937_64 gen(31337);
  for (int trial = 0; trial < 200; ++trial) {
    std::string tag = "trial " + std::to_string(trial) + ": ";
    int n = 2 + static_cast<int>(gen() % 4);

    std::vector<std::string> ids;
    std::map<std::string, oracle::AgentStat> stats;
    for (int i = 1; i <= n; ++i) {
      std::string id = "p" + std::to_string(i);
      ids.push_back(id);
      oracle::AgentStat st;
      st.storage_total = 4 + static_cast<std::int64_t>(gen() % 9);
      st.storage_free = static_cast<std::int64_t>(
          gen() % static_cast<std::uint64_t>(st.storage_total + 1));
      st.battery = 20 + static_cast<std::uint32_t>(5 * (gen() % 17));
      st.compute_free = static_cast<std::int64_t>(gen() % 4);
      stats[id] = st;
    }

    // Random connected graph, tracked for both the oracle and the statuses.
    oracle::Graph graph;
    std::map<std::string, std::vector<NeighborDelay>> nbs;
    std::map<std::string, FaceId> next_face;
    for (const std::string& id : ids) next_face[id] = 1;
    auto link = [&](int u, int v) {
      TimeMs d = 1 + static_cast<TimeMs>(gen() % 9);
      graph.add(ids[static_cast<std::size_t>(u)], ids[static_cast<std::size_t>(v)], d);
      nbs[ids[static_cast<std::size_t>(u)]].push_back(
          {next_face[ids[static_cast<std::size_t>(u)]]++, ids[static_cast<std::size_t>(v)], d});
      nbs[ids[static_cast<std::size_t>(v)]].push_back(
          {next_face[ids[static_cast<std::size_t>(v)]]++, ids[static_cast<std::size_t>(u)], d});
    };
    for (int i = 1; i < n; ++i) link(static_cast<int>(gen() % static_cast<std::uint64_t>(i)), i);
    if (n > 2 && gen() % 2 == 0) link(0, n - 1);

    std::map<std::string, std::string> data_at{{"cam", ids[gen() % static_cast<std::uint64_t>(n)]}};
    if (gen() % 2 == 0) data_at["mic"] = ids[gen() % static_cast<std::uint64_t>(n)];

    auto space = [&gen]() { return 1 + static_cast<Units>(gen() % 4); };
    auto cpu = [&gen]() { return static_cast<Units>(gen() % 3); };
    ServiceChart chart;
    chart.head = {"alert", 50, space(), cpu()};
    std::vector<oracle::SegReq> osegs;
    {
      ChartSegment seg{"11", {}, "cam"};
      oracle::SegReq oseg{{}, "cam"};
      int len = static_cast<int>(gen() % 3);
      for (int i = 0; i < len; ++i) {
        MicroserviceSpec ms{"m1" + std::to_string(i), 20, space(), cpu()};
        seg.microservices.push_back(ms);
        oseg.microservices.push_back({ms.id, ms.storage_demand, ms.compute_demand});
      }
      chart.segments.push_back(seg);
      osegs.push_back(oseg);
    }
    if (data_at.count("mic")) {
      ChartSegment seg{"12", {}, "mic"};
      oracle::SegReq oseg{{}, "mic"};
      if (gen() % 2 == 0) {
        MicroserviceSpec ms{"m20", 20, space(), cpu()};
        seg.microservices.push_back(ms);
        oseg.microservices.push_back({ms.id, ms.storage_demand, ms.compute_demand});
      }
      chart.segments.push_back(seg);
      osegs.push_back(oseg);
    }

    mock::Env env;
    ControllerConfig cc;
    cc.attachment = ids[gen() % static_cast<std::uint64_t>(n)];
    Controller ctl(cc, env);
    ctl.register_chart(chart);

    std::vector<AgentStatus> statuses;
    for (const std::string& id : ids) {
      AgentStatus st;
      st.agent = id;
      st.battery = stats[id].battery;
      st.storage_free = stats[id].storage_free;
      st.storage_total = stats[id].storage_total;
      st.compute_free = stats[id].compute_free;
      st.neighbors = nbs[id];
      for (const auto& [label, host] : data_at)
        if (host == id) st.hosted_data.push_back(label);
      statuses.push_back(std::move(st));
    }
    ServiceName mon;
    mon.command = Command::monitor;
    ctl.on_data(Controller::kUplink, DataPacket{mon, monitor_payload(0), statuses, {}});

    oracle::PlaceWorld world{stats, graph, data_at};
    oracle::MsReq ohead{"alert", chart.head.storage_demand, chart.head.compute_demand};
    auto want =
        oracle::greedy_place(world, ohead, osegs, 1.0, 1.0, 0.5, 0.5, cc.attachment);

    if (!want.ok) {
      try {
        ctl.place_service("alert");
        return tag + "placed a service the reference deems infeasible at " + want.stuck;
      } catch (const Unplaceable&) {
        continue;
      }
    }
    ServiceTree tree = ctl.place_service("alert");
    if (tree.placement.size() != want.placement.size())
      return tag + "placement cardinality diverges";
    for (const auto& [ms, agent] : want.placement) {
      auto it = tree.placement.find(ms);
      if (it == tree.placement.end() || it->second != agent)
        return tag + ms + " placed at " +
               (it == tree.placement.end() ? std::string("nowhere") : it->second) +
               ", reference says " + agent;
    }
    for (int k = 0; k < 5; ++k)
      if (!(ctl.place_service("alert") == tree)) return tag + "placement not deterministic";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------- criterion 7

std::optional<std::string> warm_replay() {
  Scenario s = load("line3.scn");
  RunResult r = run_scenario(s);
  REQ(r.metrics.quiescent);
  REQ(r.metrics.requests.size() == 2);
  const RequestOutcome& a = r.metrics.requests[0];
  const RequestOutcome& b = r.metrics.requests[1];
  REQ(a.ok);
  REQ(b.ok);
  TimeMs la = a.finished - a.submitted;
  TimeMs lb = b.finished - b.submitted;
  REQ(lb < la);
  REQ(lb == 0);
  for (const TraceRecord& t : r.trace)
    if (t.kind == "send_interest" && t.time >= b.submitted)
      return "interest sent at " + std::to_string(t.time) + " after the warm submit";
  return std::nullopt;
}

// ---------------------------------------------------------------- criterion 8

std::optional<std::string> seed_stability() {
  Scenario s = load("multimedia.scn");
  RunResult r1 = run_scenario(s, 1);
  RunResult r2 = run_scenario(s, 1);
  REQ(r1.trace.size() == r2.trace.size());
  for (std::size_t i = 0; i < r1.trace.size(); ++i)
    if (r1.trace[i].line() != r2.trace[i].line())
      return "same-seed divergence at line " + std::to_string(i);
  REQ(r1.metrics.trace_digest == r2.metrics.trace_digest);

  RunResult r3 = run_scenario(s, 2);
  REQ(r3.metrics.trace_digest != r1.metrics.trace_digest);
  REQ(r3.trace.size() == r1.trace.size());
  std::regex nonce_re("nonce=[0-9]+");
  bool any_diff = false;
  for (std::size_t i = 0; i < r1.trace.size(); ++i) {
    std::string x = r1.trace[i].line();
    std::string y = r3.trace[i].line();
    if (x != y) any_diff = true;
    if (std::regex_replace(x, nonce_re, "nonce=#") !=
        std::regex_replace(y, nonce_re, "nonce=#"))
      return "seed change altered more than nonces at line " + std::to_string(i) + ": " + y;
  }
  REQ(any_diff);
  return std::nullopt;
}

}  // namespace

int main() {
  struct Entry {
    const char* label;
    std::optional<std::string> (*fn)();
  };
  const Entry entries[] = {
      {"criterion-1 golden-multimedia-trace", golden_trace},
      {"criterion-2 name-rewrite-conservation", name_conservation},
      {"criterion-3 lookup-window-and-single-retrieve", lookup_window},
      {"criterion-4 deploy-route-replay", deploy_routing},
      {"criterion-5 monitor-census", monitor_census},
      {"criterion-6 placement-reference", placement_reference},
      {"criterion-7 warm-cache-replay", warm_replay},
      {"criterion-8 seed-stability", seed_stability},
  };
  int failed = 0;
  for (const Entry& e : entries) {
    std::optional<std::string> err;
    try {
      err = e.fn();
    } catch (const std::exception& ex) {
      err = std::string("unexpected exception: ") + ex.what();
    }
    if (err) {
      ++failed;
      std::cout << "FAIL " << e.label << " (" << *err << ")\n";
    } else {
      std::cout << "PASS " << e.label << "\n";
    }
  }
  return failed == 0 ? 0 : 1;
}
