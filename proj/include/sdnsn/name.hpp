#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdnsn/core.hpp"

namespace sdnsn {

// Hierarchical service names.
//
//   /sd-nsn/exec/multimedia/S11/face1/videoanalysis/face30/video-aircraft320/...
//   /sd-nsn/lookup/<head>/<executiontime>/<triggeringtime>
//   /sd-nsn/retrieve/<head>
//   /sd-nsn/monitor
//   /videoanalysis/face30/video-aircraft320          (no command: child form)
//
// A name body is either a head element followed by labelled segments, or a
// plain chain of steps.  A step is zero or more source-route face tokens
// followed by one element label.  Face tokens are transport directives for
// the agent that consumes them; stripping every face token and segment label
// from an executable name yields the name of the Data packet that answers it.

enum class Command { none, exec, lookup, retrieve, monitor, deploy };

struct Step {
  std::vector<FaceId> faces;
  std::string element;
  bool operator==(const Step&) const = default;
};

struct Segment {
  std::string level;  // digit string after 'S'; "11" and "12" are siblings under "1"
  std::vector<Step> steps;
  bool operator==(const Segment&) const = default;
  std::string label() const { return "S" + level; }
};

struct ServiceName {
  Command command = Command::none;
  std::optional<std::string> head;
  std::vector<FaceId> head_faces;
  std::vector<Segment> segments;
  std::vector<Step> chain;
  TimeMs execution_time = 0;   // lookup metadata
  TimeMs triggering_time = 0;  // lookup metadata
  bool operator==(const ServiceName&) const = default;
};

inline bool is_face_token(std::string_view c) {
  if (c.size() < 5 || c.substr(0, 4) != "face") return false;
  return std::all_of(c.begin() + 4, c.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

inline bool is_segment_label(std::string_view c) {
  if (c.size() < 2 || c[0] != 'S') return false;
  return std::all_of(c.begin() + 1, c.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

// Element labels: [a-z0-9-]+, minus the face-token pattern.
inline bool is_label(std::string_view c) {
  if (c.empty()) return false;
  bool charset = std::all_of(c.begin(), c.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= '0' && ch <= '9') || ch == '-';
  });
  return charset && !is_face_token(c);
}

inline bool is_numeric(std::string_view c) {
  return !c.empty() && std::all_of(c.begin(), c.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

namespace detail {

inline FaceId parse_face_token(std::string_view c) {
  std::uint64_t v = 0;
  for (char ch : c.substr(4)) {
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    if (v > 0xfffffffeull) throw MalformedName("face token out of range: " + std::string(c));
  }
  return static_cast<FaceId>(v);
}

inline TimeMs parse_time(std::string_view c) {
  if (!is_numeric(c)) throw MalformedName("expected numeric component: " + std::string(c));
  std::uint64_t v = 0;
  for (char ch : c) {
    v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    if (v > 0x7fffffffffffffull) throw MalformedName("time component out of range");
  }
  return static_cast<TimeMs>(v);
}

inline std::vector<std::string> split_components(std::string_view text) {
  if (text.empty() || text[0] != '/') throw MalformedName("name must start with '/'");
  std::vector<std::string> out;
  std::size_t i = 1;
  while (i <= text.size()) {
    std::size_t j = text.find('/', i);
    if (j == std::string_view::npos) j = text.size();
    if (j == i) throw MalformedName("empty name component");
    out.emplace_back(text.substr(i, j - i));
    i = j + 1;
  }
  if (out.empty()) throw MalformedName("empty name");
  return out;
}

// Body grammar shared by exec/deploy/plain names.
inline void parse_body(const std::vector<std::string>& comps, std::size_t from, ServiceName& n) {
  std::vector<FaceId> faces;
  std::vector<Step> lead;  // steps before the first segment label
  for (std::size_t i = from; i < comps.size(); ++i) {
    const std::string& c = comps[i];
    if (is_face_token(c)) {
      faces.push_back(parse_face_token(c));
    } else if (is_segment_label(c)) {
      if (!faces.empty()) throw MalformedName("face token directly before segment label");
      if (n.segments.empty()) {
        if (lead.size() != 1) throw MalformedName("segments require a single head element");
        n.head = lead[0].element;
        n.head_faces = lead[0].faces;
        lead.clear();
      } else if (n.segments.back().steps.empty()) {
        throw MalformedName("empty segment " + n.segments.back().label());
      }
      std::string level = c.substr(1);
      for (const Segment& s : n.segments)
        if (s.level == level) throw MalformedName("duplicate segment label " + c);
      n.segments.push_back(Segment{std::move(level), {}});
    } else if (is_label(c)) {
      Step st{std::move(faces), c};
      faces.clear();
      if (n.segments.empty())
        lead.push_back(std::move(st));
      else
        n.segments.back().steps.push_back(std::move(st));
    } else {
      throw MalformedName("invalid name component: " + c);
    }
  }
  if (!faces.empty()) throw MalformedName("trailing face token");
  if (!n.segments.empty()) {
    if (n.segments.back().steps.empty())
      throw MalformedName("empty segment " + n.segments.back().label());
  } else {
    if (lead.empty()) throw MalformedName("empty name body");
    n.chain = std::move(lead);
  }
}

}  // namespace detail

inline ServiceName parse_name(std::string_view text) {
  auto comps = detail::split_components(text);
  ServiceName n;
  const std::string& first = comps[0];
  // Canonical marker plus the two spellings that circulate in deployments.
  if (first == "sd-nsn" || first == "sdn-nsn" || first == "sdn-ndn") {
    if (comps.size() < 2) throw MalformedName("command missing after /" + first);
    const std::string& cmd = comps[1];
    if (cmd == "monitor") {
      if (comps.size() != 2) throw MalformedName("monitor name takes no body");
      n.command = Command::monitor;
    } else if (cmd == "lookup") {
      if (comps.size() != 5) throw MalformedName("lookup name needs head and two times");
      if (!is_label(comps[2]) || is_segment_label(comps[2]))
        throw MalformedName("invalid lookup head: " + comps[2]);
      n.command = Command::lookup;
      n.head = comps[2];
      n.execution_time = detail::parse_time(comps[3]);
      n.triggering_time = detail::parse_time(comps[4]);
    } else if (cmd == "retrieve") {
      if (comps.size() != 3) throw MalformedName("retrieve name needs exactly a head");
      if (!is_label(comps[2]) || is_segment_label(comps[2]))
        throw MalformedName("invalid retrieve head: " + comps[2]);
      n.command = Command::retrieve;
      n.head = comps[2];
    } else if (cmd == "exec" || cmd == "deploy") {
      n.command = cmd == "exec" ? Command::exec : Command::deploy;
      if (comps.size() < 3) throw MalformedName(cmd + " name needs a body");
      detail::parse_body(comps, 2, n);
    } else {
      throw MalformedName("unknown command: " + cmd);
    }
  } else {
    detail::parse_body(comps, 0, n);
  }
  return n;
}

namespace detail {

inline void check_label(const std::string& s) {
  if (!is_label(s) || is_segment_label(s)) throw MalformedName("invalid label: " + s);
}

inline void append_step(std::string& out, const Step& st) {
  check_label(st.element);
  for (FaceId f : st.faces) out += "/face" + std::to_string(f);
  out += "/" + st.element;
}

}  // namespace detail

inline std::string serialize_name(const ServiceName& n) {
  std::string out;
  switch (n.command) {
    case Command::monitor:
      if (n.head || !n.segments.empty() || !n.chain.empty())
        throw MalformedName("monitor name takes no body");
      return "/sd-nsn/monitor";
    case Command::lookup:
    case Command::retrieve: {
      if (!n.head || !n.segments.empty() || !n.chain.empty() || !n.head_faces.empty())
        throw MalformedName("lookup/retrieve name is head-only");
      detail::check_label(*n.head);
      out = n.command == Command::lookup ? "/sd-nsn/lookup/" : "/sd-nsn/retrieve/";
      out += *n.head;
      if (n.command == Command::lookup) {
        if (n.execution_time < 0 || n.triggering_time < 0)
          throw MalformedName("negative lookup time");
        out += "/" + std::to_string(n.execution_time) + "/" + std::to_string(n.triggering_time);
      }
      return out;
    }
    case Command::exec:
      out = "/sd-nsn/exec";
      break;
    case Command::deploy:
      out = "/sd-nsn/deploy";
      break;
    case Command::none:
      break;
  }
  bool head_form = n.head.has_value();
  if (head_form == !n.chain.empty())
    throw MalformedName("name body must be either head+segments or a plain chain");
  if (head_form) {
    if (n.segments.empty()) throw MalformedName("head requires at least one segment");
    detail::append_step(out, Step{n.head_faces, *n.head});
    for (const Segment& seg : n.segments) {
      if (seg.level.empty() || !is_numeric(seg.level))
        throw MalformedName("invalid segment level: " + seg.level);
      if (seg.steps.empty()) throw MalformedName("empty segment " + seg.label());
      out += "/" + seg.label();
      for (const Step& st : seg.steps) detail::append_step(out, st);
    }
  } else {
    if (!n.segments.empty()) throw MalformedName("segments without head");
    for (const Step& st : n.chain) detail::append_step(out, st);
  }
  return out;
}

// Leaf segments: no other segment extends their level path.  Only leaves
// execute; interior segments group their children.
inline bool is_leaf_segment(const ServiceName& n, std::size_t idx) {
  const std::string& lv = n.segments[idx].level;
  for (std::size_t j = 0; j < n.segments.size(); ++j) {
    if (j == idx) continue;
    const std::string& other = n.segments[j].level;
    if (other.size() > lv.size() && other.compare(0, lv.size(), lv) == 0) return false;
  }
  return true;
}

// Name of the Data packet that answers an executable Interest: every face
// token and segment label stripped, commands dropped.  Names of lookup,
// retrieve and monitor Interests answer under their own name.
inline ServiceName answer_name(const ServiceName& n) {
  if (n.command == Command::lookup || n.command == Command::retrieve ||
      n.command == Command::monitor)
    return n;
  ServiceName out;
  out.command = Command::none;
  auto push = [&out](const std::string& e) { out.chain.push_back(Step{{}, e}); };
  if (n.head) {
    push(*n.head);
    for (std::size_t i = 0; i < n.segments.size(); ++i) {
      if (!is_leaf_segment(n, i)) continue;
      for (const Step& st : n.segments[i].steps) push(st.element);
    }
  } else {
    for (const Step& st : n.chain) push(st.element);
  }
  return out;
}

struct ChildInterest {
  std::optional<FaceId> first_face;  // absent: child is served on this agent
  ServiceName name;
  bool operator==(const ChildInterest&) const = default;
};

// Consumes the local element from an executable name and yields the Interests
// for its inputs.  Plain chains yield at most one child (the rest of the
// chain); a head yields one child per leaf segment.  The leading face of each
// child, when present, is popped off the name and returned as the send face.
inline std::vector<ChildInterest> rewrite_for_children(const ServiceName& n,
                                                       const std::string& local_element) {
  auto make_child = [](std::vector<Step> steps) {
    ChildInterest c;
    if (!steps.front().faces.empty()) {
      c.first_face = steps.front().faces.front();
      steps.front().faces.erase(steps.front().faces.begin());
    }
    c.name.command = Command::none;
    c.name.chain = std::move(steps);
    return c;
  };
  if (n.command != Command::exec && n.command != Command::none)
    throw ElementNotFirst("not an executable name");
  std::vector<ChildInterest> out;
  if (n.head) {
    if (*n.head != local_element || !n.head_faces.empty())
      throw ElementNotFirst(local_element + " is not first in name");
    for (std::size_t i = 0; i < n.segments.size(); ++i) {
      if (!is_leaf_segment(n, i)) continue;
      out.push_back(make_child(n.segments[i].steps));
    }
  } else {
    if (n.chain.empty()) throw ElementNotFirst("no consumable element");
    const Step& st = n.chain.front();
    if (st.element != local_element || !st.faces.empty())
      throw ElementNotFirst(local_element + " is not first in name");
    if (n.chain.size() > 1)
      out.push_back(make_child(std::vector<Step>(n.chain.begin() + 1, n.chain.end())));
  }
  return out;
}

}  // namespace sdnsn
