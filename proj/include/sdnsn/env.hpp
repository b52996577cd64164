#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "sdnsn/core.hpp"
#include "sdnsn/packets.hpp"

namespace sdnsn {

// Timer payloads delivered back to the node that scheduled them.
struct PitExpiry {
  std::string key;
};
struct PstExpiry {
  std::string key;
};
struct MonitorSelfReport {
  std::uint64_t nonce = 0;
};
struct ExecDone {
  std::string origin;
};
struct RequestTimeout {
  std::uint64_t request = 0;
  std::uint32_t generation = 0;
};
struct ResubmitRequest {
  std::uint64_t request = 0;
};
struct SelfDeliver {
  InterestPacket interest;
};
struct RoundStart {};
struct RoundTimeout {
  std::uint64_t nonce = 0;
};

using TimerPayload = std::variant<PitExpiry, PstExpiry, MonitorSelfReport, ExecDone,
                                  RequestTimeout, ResubmitRequest, SelfDeliver, RoundStart,
                                  RoundTimeout>;

struct RequestOutcome {
  std::uint64_t request = 0;
  AgentId agent;
  std::string head;
  TimeMs submitted = 0;
  TimeMs finished = 0;
  bool ok = false;
  std::string detail;  // delivered name or failure reason
};

// Services a node receives from its host (simulation engine or test double).
// send() emits onto a link face and traces the send; packet receptions are
// traced by the host on delivery.
struct NodeEnv {
  virtual ~NodeEnv() = default;
  virtual TimeMs now() const = 0;
  virtual std::uint64_t fresh_nonce() = 0;
  virtual void send(FaceId face, const Packet& packet) = 0;
  virtual void schedule(TimeMs delay, TimerPayload timer) = 0;
  virtual void trace(std::string_view kind, std::string_view packet_type, std::string_view name,
                     std::optional<FaceId> face, std::string extra) = 0;
  virtual void request_outcome(const RequestOutcome& outcome) = 0;
};

}  // namespace sdnsn
