#pragma once

// Test-side reference implementations, kept independent of the library code
// they check.  Everything here works on plain strings and maps so a defect in
// the production data structures cannot hide in the oracle.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

inline std::uint64_t fnv64(const std::string& s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline std::vector<std::string> split(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 1;
  while (i <= text.size()) {
    std::size_t j = text.find('/', i);
    if (j == std::string::npos) j = text.size();
    out.push_back(text.substr(i, j - i));
    i = j + 1;
  }
  return out;
}

inline std::string join(const std::vector<std::string>& comps, std::size_t from = 0) {
  std::string out;
  for (std::size_t i = from; i < comps.size(); ++i) out += "/" + comps[i];
  return out;
}

inline bool face_tok(const std::string& c) {
  if (c.size() < 5 || c.compare(0, 4, "face") != 0) return false;
  return c.find_first_not_of("0123456789", 4) == std::string::npos;
}

inline bool seg_tok(const std::string& c) {
  if (c.size() < 2 || c[0] != 'S') return false;
  return c.find_first_not_of("0123456789", 1) == std::string::npos;
}

// Children of an executable name, computed purely on the canonical text.
// Returns (first face or empty string, child body text) pairs.
inline std::vector<std::pair<std::string, std::string>> children_of(
    const std::string& body_text, const std::string& element) {
  auto comps = split(body_text);
  std::vector<std::pair<std::string, std::string>> out;
  auto emit = [&out](std::vector<std::string> toks) {
    std::string face;
    if (!toks.empty() && face_tok(toks[0])) {
      face = toks[0];
      toks.erase(toks.begin());
    }
    out.emplace_back(face, join(toks));
  };
  // Head form: element, then S-labelled groups.
  if (comps.size() >= 2 && comps[0] == element && seg_tok(comps[1])) {
    std::vector<std::pair<std::string, std::vector<std::string>>> groups;
    std::size_t i = 1;
    while (i < comps.size()) {
      std::string label = comps[i++];
      std::vector<std::string> toks;
      while (i < comps.size() && !seg_tok(comps[i])) toks.push_back(comps[i++]);
      groups.emplace_back(label.substr(1), toks);
    }
    for (std::size_t g = 0; g < groups.size(); ++g) {
      bool leaf = true;
      for (std::size_t h = 0; h < groups.size(); ++h)
        if (h != g && groups[h].first.size() > groups[g].first.size() &&
            groups[h].first.compare(0, groups[g].first.size(), groups[g].first) == 0)
          leaf = false;
      if (leaf) emit(groups[g].second);
    }
    return out;
  }
  // Plain chain: drop the first element, the rest is the single child.
  if (comps.empty() || comps[0] != element) return out;
  if (comps.size() == 1) return out;
  emit(std::vector<std::string>(comps.begin() + 1, comps.end()));
  return out;
}

// Answer name by pure text stripping: remove every face token and segment
// label from the body.
inline std::string strip_text(const std::string& body_text) {
  std::string out;
  for (const std::string& c : split(body_text))
    if (!face_tok(c) && !seg_tok(c)) out += "/" + c;
  return out;
}

// Reference all-pairs shortest delay over an undirected edge list.
struct Graph {
  std::set<std::string> nodes;
  // (a, b) -> delay, both directions present
  std::map<std::pair<std::string, std::string>, std::int64_t> edges;

  void add(const std::string& a, const std::string& b, std::int64_t d) {
    nodes.insert(a);
    nodes.insert(b);
    auto it = edges.find({a, b});
    if (it == edges.end() || d < it->second) {
      edges[{a, b}] = d;
      edges[{b, a}] = d;
    }
  }
};

inline std::map<std::string, std::int64_t> dijkstra(const Graph& g, const std::string& src) {
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  std::map<std::string, std::int64_t> dist;
  std::set<std::string> done;
  for (const auto& n : g.nodes) dist[n] = inf;
  dist[src] = 0;
  while (true) {
    std::string best;
    std::int64_t bd = inf;
    for (const auto& [n, d] : dist)
      if (!done.count(n) && d < bd) {
        bd = d;
        best = n;
      }
    if (best.empty()) break;
    done.insert(best);
    for (const auto& [key, w] : g.edges) {
      if (key.first != best) continue;
      if (bd + w < dist[key.second]) dist[key.second] = bd + w;
    }
  }
  return dist;
}

// Reference placement: enumerates every agent per microservice and takes the
// feasible score minimum, ties to the smallest id.  Mirrors the documented
// selection rule with none of the production data structures.
struct AgentStat {
  std::int64_t battery = 100;
  std::int64_t storage_free = 0;
  std::int64_t storage_total = 0;
  std::int64_t compute_free = 0;
};

struct PlaceWorld {
  std::map<std::string, AgentStat> agents;
  Graph graph;
  std::map<std::string, std::string> data_at;  // label -> hosting agent
};

struct MsReq {
  std::string id;
  std::int64_t storage = 0;
  std::int64_t compute = 0;
};

struct SegReq {
  std::vector<MsReq> microservices;  // head-side first
  std::string data;
};

struct PlaceResult {
  bool ok = false;
  std::string stuck;  // first microservice with no feasible agent
  std::map<std::string, std::string> placement;
  std::map<std::string, double> score;  // chosen score per segment microservice
};

inline PlaceResult greedy_place(const PlaceWorld& w, const MsReq& head,
                                const std::vector<SegReq>& segs, double w_delay, double w_data,
                                double w_storage, double w_energy, const std::string& anchor) {
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  PlaceResult r;
  std::map<std::string, std::int64_t> working;
  for (const auto& [id, st] : w.agents) working[id] = st.storage_free;
  auto occupancy = [](const AgentStat& st) {
    if (st.storage_total <= 0) return 1.0;
    return 1.0 - static_cast<double>(st.storage_free) / static_cast<double>(st.storage_total);
  };
  for (const SegReq& seg : segs) {
    auto di = w.data_at.find(seg.data);
    if (di == w.data_at.end()) {
      r.stuck = seg.data;
      return r;
    }
    auto dist_data = dijkstra(w.graph, di->second);
    std::string downstream = di->second;
    for (auto mi = seg.microservices.rbegin(); mi != seg.microservices.rend(); ++mi) {
      auto dist_down = dijkstra(w.graph, downstream);
      std::string best;
      double best_score = 0;
      for (const auto& [id, st] : w.agents) {
        if (working[id] < mi->storage || st.compute_free < mi->compute) continue;
        std::int64_t dd = dist_down.count(id) ? dist_down.at(id) : inf;
        std::int64_t dh = dist_data.count(id) ? dist_data.at(id) : inf;
        if (dd == inf || dh == inf) continue;
        double s = w_delay * static_cast<double>(dd) + w_data * static_cast<double>(dh) +
                   w_storage * occupancy(st) +
                   w_energy * (1.0 - static_cast<double>(st.battery) / 100.0);
        if (best.empty() || s < best_score) {
          best = id;
          best_score = s;
        }
      }
      if (best.empty()) {
        r.stuck = mi->id;
        return r;
      }
      r.placement[mi->id] = best;
      r.score[mi->id] = best_score;
      working[best] -= mi->storage;
      downstream = best;
    }
  }
  auto dist_anchor = dijkstra(w.graph, anchor);
  std::string best;
  std::int64_t best_delay = 0;
  for (const auto& [id, st] : w.agents) {
    if (working[id] < head.storage || st.compute_free < head.compute) continue;
    std::int64_t d = dist_anchor.count(id) ? dist_anchor.at(id) : inf;
    if (d == inf) continue;
    if (best.empty() || d < best_delay) {
      best = id;
      best_delay = d;
    }
  }
  if (best.empty()) {
    r.stuck = head.id;
    return r;
  }
  r.placement[head.id] = best;
  r.ok = true;
  return r;
}

}  // namespace oracle
