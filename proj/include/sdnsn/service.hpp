#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sdnsn/core.hpp"
#include "sdnsn/name.hpp"

namespace sdnsn {

struct MicroserviceSpec {
  std::string id;
  TimeMs exec_time = 0;
  Units storage_demand = 0;
  Units compute_demand = 0;
  bool operator==(const MicroserviceSpec&) const = default;
};

struct ChartSegment {
  std::string level;                          // digit string, as in segment labels
  std::vector<MicroserviceSpec> microservices;  // head-side first; may be empty
  std::string data;                           // terminal data label
  bool operator==(const ChartSegment&) const = default;
};

// Placement-free description of a service: the head microservice and the
// processing chain per input segment, each ending in a named data object.
struct ServiceChart {
  MicroserviceSpec head;
  std::vector<ChartSegment> segments;
  bool operator==(const ServiceChart&) const = default;
};

inline void validate_chart(const ServiceChart& c) {
  auto check_ms = [](const MicroserviceSpec& m) {
    if (!is_label(m.id) || is_segment_label(m.id)) throw InvalidChart("invalid id: " + m.id);
    if (m.exec_time <= 0) throw InvalidChart(m.id + ": exec_time must be positive");
    if (m.storage_demand < 0 || m.compute_demand < 0)
      throw InvalidChart(m.id + ": negative demand");
  };
  check_ms(c.head);
  if (c.segments.empty()) throw InvalidChart(c.head.id + ": chart needs at least one segment");
  std::set<std::string> ids{c.head.id};
  std::set<std::string> levels;
  for (const ChartSegment& s : c.segments) {
    if (s.level.empty() || !is_numeric(s.level)) throw InvalidChart("invalid segment level");
    if (!levels.insert(s.level).second) throw InvalidChart("duplicate segment S" + s.level);
    for (const MicroserviceSpec& m : s.microservices) {
      check_ms(m);
      if (!ids.insert(m.id).second) throw InvalidChart("duplicate microservice " + m.id);
    }
    if (!is_label(s.data) || is_segment_label(s.data))
      throw InvalidChart("invalid data label: " + s.data);
    if (ids.count(s.data)) throw InvalidChart("data label collides with microservice: " + s.data);
  }
}

// Chart plus the controller's placement choices.  Hops are keyed by the
// (upstream, downstream) element pair; the downstream end of a segment is its
// data label.  Hop face chains are read at the upstream element's agent.
struct ServiceTree {
  ServiceChart chart;
  std::map<std::string, AgentId> placement;  // microservice id (incl. head) -> agent
  std::map<std::pair<std::string, std::string>, std::vector<FaceId>> hops;
  bool operator==(const ServiceTree&) const = default;
};

inline ServiceName tree_to_name(const ServiceTree& t, Command command = Command::exec) {
  ServiceName n;
  n.command = command;
  n.head = t.chart.head.id;
  for (const ChartSegment& seg : t.chart.segments) {
    Segment s{seg.level, {}};
    std::string prev = t.chart.head.id;
    auto hop = [&t, &prev](const std::string& next) {
      auto it = t.hops.find({prev, next});
      if (it == t.hops.end()) throw MissingHop(prev + " -> " + next);
      prev = next;
      return it->second;
    };
    for (const MicroserviceSpec& m : seg.microservices) s.steps.push_back(Step{hop(m.id), m.id});
    s.steps.push_back(Step{hop(seg.data), seg.data});
    n.segments.push_back(std::move(s));
  }
  return n;
}

// What a deployed microservice knows about itself.
struct MicroserviceDescriptor {
  std::string id;
  TimeMs exec_time = 0;
  Units storage_demand = 0;
  Units compute_demand = 0;
  std::string transform_tag;  // stamped into result payloads
  bool operator==(const MicroserviceDescriptor&) const = default;
};

inline MicroserviceDescriptor to_descriptor(const MicroserviceSpec& m) {
  return MicroserviceDescriptor{m.id, m.exec_time, m.storage_demand, m.compute_demand, m.id};
}

// Deterministic stand-in for real computation: the result encodes the
// transform tag, the input names in processing order, and a digest over the
// concatenated input payloads.  Reordering inputs changes the result.
inline Bytes run_microservice(const MicroserviceDescriptor& ms,
                              const std::vector<std::pair<std::string, Bytes>>& inputs) {
  std::string names;
  Bytes concat;
  for (const auto& [name, payload] : inputs) {
    if (!names.empty()) names += ",";
    names += name;
    concat.insert(concat.end(), payload.begin(), payload.end());
  }
  return to_bytes(ms.transform_tag + "(" + names + ")#" + hex16(fnv1a64(concat)));
}

}  // namespace sdnsn
