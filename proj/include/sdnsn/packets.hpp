#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sdnsn/core.hpp"
#include "sdnsn/name.hpp"
#include "sdnsn/service.hpp"

namespace sdnsn {

// Error marker for Data payloads that answer a request negatively.
inline constexpr std::string_view kErrPrefix = "ERR:";

inline Bytes err_payload(std::string_view reason) {
  return to_bytes(std::string(kErrPrefix) + std::string(reason));
}

inline bool is_err_payload(const Bytes& payload) {
  return payload.size() >= kErrPrefix.size() &&
         std::equal(kErrPrefix.begin(), kErrPrefix.end(), payload.begin());
}

struct NeighborDelay {
  FaceId face = 0;
  AgentId neighbor;
  TimeMs delay = 0;
  bool operator==(const NeighborDelay&) const = default;
};

// One agent's self-report, appended to monitor Data on the way back to the
// controller.  storage_total rides along so the controller can compute
// occupancy without remembering initial capacities.
struct AgentStatus {
  AgentId agent;
  std::uint32_t battery = 0;  // percent
  Units storage_free = 0;
  Units storage_total = 0;
  Units compute_free = 0;
  std::uint32_t deploy_failures = 0;
  std::vector<NeighborDelay> neighbors;
  std::vector<std::string> hosted_data;
  bool operator==(const AgentStatus&) const = default;
};

struct InterestPacket {
  ServiceName name;
  std::uint64_t nonce = 0;
  std::uint32_t hop_count = 0;
  bool operator==(const InterestPacket&) const = default;
};

struct DataPacket {
  ServiceName name;
  Bytes payload;
  std::vector<AgentStatus> status_list;  // monitor names only
  std::array<std::uint8_t, 8> signature{};
  bool operator==(const DataPacket&) const = default;
};

// Source-routed install order: forwarders pop faces off the chain; the agent
// that finds the chain empty must be `target`.  Head deploys carry the tree
// name so the hosting agent can expand the whole service on a lookup hit.
struct DeployPacket {
  std::vector<FaceId> face_chain;
  AgentId target;
  MicroserviceDescriptor microservice;
  std::optional<std::string> tree;
  bool operator==(const DeployPacket&) const = default;
};

using Packet = std::variant<InterestPacket, DataPacket, DeployPacket>;

namespace tlv {

enum Type : std::uint8_t {
  kInterest = 0x05,
  kData = 0x06,
  kDeploy = 0x44,
  kName = 0x07,
  kComponent = 0x08,
  kNonce = 0x0a,
  kHopCount = 0x0c,
  kPayload = 0x15,
  kStatusList = 0x16,
  kStatus = 0x17,
  kAgentId = 0x18,
  kBattery = 0x19,
  kStorageFree = 0x1a,
  kStorageTotal = 0x1b,
  kComputeFree = 0x1c,
  kDeployFailures = 0x1d,
  kNeighborDelay = 0x1e,
  kFaceId = 0x1f,
  kDelay = 0x20,
  kHostedData = 0x21,
  kSignature = 0x22,
  kFaceChain = 0x23,
  kFaceElem = 0x24,
  kTargetElem = 0x25,
  kMicroservice = 0x26,
  kMsId = 0x27,
  kMsExecTime = 0x28,
  kMsStorage = 0x29,
  kMsCompute = 0x2a,
  kMsTag = 0x2b,
  kTreeName = 0x2c,
};

// Unsigned little-endian base-128 varint, 7 bits per octet, high bit set on
// all but the last octet.
inline void put_varint(Bytes& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v) | 0x80);
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

class Writer {
 public:
  void raw(const Bytes& b) { buf_.insert(buf_.end(), b.begin(), b.end()); }

  void block(std::uint8_t type, const Bytes& value) {
    buf_.push_back(type);
    put_varint(buf_, value.size());
    raw(value);
  }

  void str(std::uint8_t type, std::string_view s) {
    buf_.push_back(type);
    put_varint(buf_, s.size());
    buf_.insert(buf_.end(), s.begin(), s.end());
  }

  void num(std::uint8_t type, std::uint64_t v) {
    Bytes tmp;
    put_varint(tmp, v);
    block(type, tmp);
  }

  void nonneg(std::uint8_t type, std::int64_t v) {
    if (v < 0) throw MalformedTlv("negative value for type " + std::to_string(type));
    num(type, static_cast<std::uint64_t>(v));
  }

  Bytes take() { return std::move(buf_); }

 private:
  Bytes buf_;
};

// Bounded cursor.  Running off the end of the whole buffer means the packet
// was cut short; running off a container boundary means its length field lied.
class Reader {
 public:
  Reader(const std::uint8_t* p, std::size_t len, bool nested)
      : p_(p), end_(p + len), nested_(nested) {}

  bool done() const { return p_ == end_; }

  std::uint8_t type() {
    need(1);
    return *p_++;
  }

  std::uint64_t varint() {
    std::uint64_t v = 0;
    int shift = 0;
    while (true) {
      need(1);
      std::uint8_t b = *p_++;
      if (shift == 63 && (b & 0xfe)) throw MalformedTlv("varint overflow");
      if (shift > 63) throw MalformedTlv("varint overflow");
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
      shift += 7;
    }
  }

  Reader value() {
    std::uint64_t len = varint();
    need(len);
    Reader r(p_, static_cast<std::size_t>(len), true);
    p_ += len;
    return r;
  }

  Bytes bytes() {
    std::uint64_t len = varint();
    need(len);
    Bytes out(p_, p_ + len);
    p_ += len;
    return out;
  }

  std::string text() {
    Bytes b = bytes();
    return std::string(b.begin(), b.end());
  }

  std::uint64_t num_value() {
    Reader r = value();
    std::uint64_t v = r.varint();
    if (!r.done()) throw MalformedTlv("trailing bytes in numeric value");
    return v;
  }

 private:
  void need(std::uint64_t n) const {
    if (static_cast<std::uint64_t>(end_ - p_) < n) {
      if (nested_) throw MalformedTlv("container length exceeds enclosing value");
      throw TruncatedPacket("packet ends mid-field");
    }
  }

  const std::uint8_t* p_;
  const std::uint8_t* end_;
  bool nested_;
};

inline Bytes encode_name(const ServiceName& n) {
  std::string text = serialize_name(n);
  Writer w;
  std::size_t i = 1;
  while (i <= text.size()) {
    std::size_t j = text.find('/', i);
    if (j == std::string::npos) j = text.size();
    w.str(kComponent, std::string_view(text).substr(i, j - i));
    i = j + 1;
  }
  return w.take();
}

inline ServiceName decode_name(Reader r) {
  std::string text;
  while (!r.done()) {
    if (r.type() != kComponent) throw MalformedTlv("name holds non-component");
    text += "/" + r.text();
  }
  try {
    return parse_name(text);
  } catch (const MalformedName& e) {
    throw MalformedTlv(std::string("bad name on wire: ") + e.what());
  }
}

inline Bytes encode_status(const AgentStatus& s) {
  Writer w;
  w.str(kAgentId, s.agent);
  w.num(kBattery, s.battery);
  w.nonneg(kStorageFree, s.storage_free);
  w.nonneg(kStorageTotal, s.storage_total);
  w.nonneg(kComputeFree, s.compute_free);
  w.num(kDeployFailures, s.deploy_failures);
  for (const NeighborDelay& nd : s.neighbors) {
    Writer nw;
    nw.num(kFaceId, nd.face);
    nw.str(kAgentId, nd.neighbor);
    nw.nonneg(kDelay, nd.delay);
    w.block(kNeighborDelay, nw.take());
  }
  for (const std::string& d : s.hosted_data) w.str(kHostedData, d);
  return w.take();
}

inline AgentStatus decode_status(Reader r) {
  AgentStatus s;
  bool have_id = false;
  while (!r.done()) {
    switch (r.type()) {
      case kAgentId:
        s.agent = r.text();
        have_id = true;
        break;
      case kBattery:
        s.battery = static_cast<std::uint32_t>(r.num_value());
        break;
      case kStorageFree:
        s.storage_free = static_cast<Units>(r.num_value());
        break;
      case kStorageTotal:
        s.storage_total = static_cast<Units>(r.num_value());
        break;
      case kComputeFree:
        s.compute_free = static_cast<Units>(r.num_value());
        break;
      case kDeployFailures:
        s.deploy_failures = static_cast<std::uint32_t>(r.num_value());
        break;
      case kNeighborDelay: {
        Reader nr = r.value();
        NeighborDelay nd;
        bool f = false, a = false, d = false;
        while (!nr.done()) {
          switch (nr.type()) {
            case kFaceId:
              nd.face = static_cast<FaceId>(nr.num_value());
              f = true;
              break;
            case kAgentId:
              nd.neighbor = nr.text();
              a = true;
              break;
            case kDelay:
              nd.delay = static_cast<TimeMs>(nr.num_value());
              d = true;
              break;
            default:
              throw MalformedTlv("unknown field in neighbor delay");
          }
        }
        if (!f || !a || !d) throw MalformedTlv("incomplete neighbor delay");
        s.neighbors.push_back(std::move(nd));
        break;
      }
      case kHostedData:
        s.hosted_data.push_back(r.text());
        break;
      default:
        throw MalformedTlv("unknown field in status");
    }
  }
  if (!have_id) throw MalformedTlv("status without agent id");
  return s;
}

}  // namespace tlv

inline Bytes encode_packet(const Packet& p) {
  using namespace tlv;
  Writer body;
  std::uint8_t top;
  if (const auto* i = std::get_if<InterestPacket>(&p)) {
    top = kInterest;
    body.block(kName, encode_name(i->name));
    body.num(kNonce, i->nonce);
    body.num(kHopCount, i->hop_count);
  } else if (const auto* d = std::get_if<DataPacket>(&p)) {
    top = kData;
    bool monitor = d->name.command == Command::monitor;
    if (monitor == d->status_list.empty())
      throw MalformedTlv("status list present iff monitor data");
    body.block(kName, encode_name(d->name));
    body.str(kPayload, std::string_view(reinterpret_cast<const char*>(d->payload.data()),
                                        d->payload.size()));
    if (monitor) {
      Writer lw;
      for (const AgentStatus& s : d->status_list) lw.block(kStatus, encode_status(s));
      body.block(kStatusList, lw.take());
    }
    body.str(kSignature,
             std::string_view(reinterpret_cast<const char*>(d->signature.data()), 8));
  } else {
    const auto& dp = std::get<DeployPacket>(p);
    top = kDeploy;
    Writer cw;
    for (FaceId f : dp.face_chain) cw.num(kFaceElem, f);
    cw.str(kTargetElem, dp.target);
    body.block(kFaceChain, cw.take());
    Writer mw;
    mw.str(kMsId, dp.microservice.id);
    mw.nonneg(kMsExecTime, dp.microservice.exec_time);
    mw.nonneg(kMsStorage, dp.microservice.storage_demand);
    mw.nonneg(kMsCompute, dp.microservice.compute_demand);
    mw.str(kMsTag, dp.microservice.transform_tag);
    body.block(kMicroservice, mw.take());
    if (dp.tree) body.str(kTreeName, *dp.tree);
  }
  Writer out;
  out.block(top, body.take());
  return out.take();
}

inline Packet decode_packet(const Bytes& buf) {
  using namespace tlv;
  Reader top(buf.data(), buf.size(), false);
  if (top.done()) throw TruncatedPacket("empty buffer");
  std::uint8_t type = top.type();
  if (type != kInterest && type != kData && type != kDeploy)
    throw UnknownType("unknown packet type " + std::to_string(type));
  Reader body = top.value();
  if (!top.done()) throw MalformedTlv("trailing bytes after packet");
  if (type == kInterest) {
    InterestPacket i;
    bool name = false, nonce = false;
    while (!body.done()) {
      switch (body.type()) {
        case kName:
          i.name = decode_name(body.value());
          name = true;
          break;
        case kNonce:
          i.nonce = body.num_value();
          nonce = true;
          break;
        case kHopCount:
          i.hop_count = static_cast<std::uint32_t>(body.num_value());
          break;
        default:
          throw MalformedTlv("unknown field in interest");
      }
    }
    if (!name || !nonce) throw MalformedTlv("interest missing name or nonce");
    return i;
  }
  if (type == kData) {
    DataPacket d;
    bool name = false, sig = false;
    while (!body.done()) {
      switch (body.type()) {
        case kName:
          d.name = decode_name(body.value());
          name = true;
          break;
        case kPayload:
          d.payload = body.bytes();
          break;
        case kStatusList: {
          Reader lr = body.value();
          while (!lr.done()) {
            if (lr.type() != kStatus) throw MalformedTlv("status list holds non-status");
            d.status_list.push_back(decode_status(lr.value()));
          }
          break;
        }
        case kSignature: {
          Bytes b = body.bytes();
          if (b.size() != 8) throw MalformedTlv("signature must be 8 bytes");
          std::copy(b.begin(), b.end(), d.signature.begin());
          sig = true;
          break;
        }
        default:
          throw MalformedTlv("unknown field in data");
      }
    }
    if (!name || !sig) throw MalformedTlv("data missing name or signature");
    if ((d.name.command == Command::monitor) == d.status_list.empty())
      throw MalformedTlv("status list present iff monitor data");
    return d;
  }
  DeployPacket dp;
  bool chain = false, ms = false;
  while (!body.done()) {
    switch (body.type()) {
      case kFaceChain: {
        Reader cr = body.value();
        bool target = false;
        while (!cr.done()) {
          std::uint8_t t = cr.type();
          if (t == kFaceElem) {
            if (target) throw MalformedTlv("face after chain target");
            dp.face_chain.push_back(static_cast<FaceId>(cr.num_value()));
          } else if (t == kTargetElem) {
            if (target) throw MalformedTlv("duplicate chain target");
            dp.target = cr.text();
            target = true;
          } else {
            throw MalformedTlv("unknown element in face chain");
          }
        }
        if (!target) throw MalformedTlv("face chain without target");
        chain = true;
        break;
      }
      case kMicroservice: {
        Reader mr = body.value();
        while (!mr.done()) {
          switch (mr.type()) {
            case kMsId:
              dp.microservice.id = mr.text();
              break;
            case kMsExecTime:
              dp.microservice.exec_time = static_cast<TimeMs>(mr.num_value());
              break;
            case kMsStorage:
              dp.microservice.storage_demand = static_cast<Units>(mr.num_value());
              break;
            case kMsCompute:
              dp.microservice.compute_demand = static_cast<Units>(mr.num_value());
              break;
            case kMsTag:
              dp.microservice.transform_tag = mr.text();
              break;
            default:
              throw MalformedTlv("unknown field in microservice");
          }
        }
        if (dp.microservice.id.empty()) throw MalformedTlv("microservice without id");
        ms = true;
        break;
      }
      case kTreeName:
        dp.tree = body.text();
        break;
      default:
        throw MalformedTlv("unknown field in deploy");
    }
  }
  if (!chain || !ms) throw MalformedTlv("deploy missing chain or microservice");
  return dp;
}

// Monitor Data payloads carry the round's Interest nonce so agents can tell
// rounds apart when appending their status.  Fixed 8-byte little-endian: the
// payload size must not depend on the nonce value.
inline Bytes monitor_payload(std::uint64_t round) {
  Bytes b(8);
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = (round >> (8 * i)) & 0xff;
  return b;
}

inline std::optional<std::uint64_t> monitor_round(const DataPacket& d) {
  if (d.payload.size() != 8) return std::nullopt;
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | d.payload[static_cast<std::size_t>(i)];
  return v;
}

inline const char* packet_type_name(const Packet& p) {
  if (std::holds_alternative<InterestPacket>(p)) return "interest";
  if (std::holds_alternative<DataPacket>(p)) return "data";
  return "deploy";
}

inline const ServiceName* packet_name(const Packet& p) {
  if (const auto* i = std::get_if<InterestPacket>(&p)) return &i->name;
  if (const auto* d = std::get_if<DataPacket>(&p)) return &d->name;
  return nullptr;
}

}  // namespace sdnsn
