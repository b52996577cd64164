#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sdnsn {

using FaceId = std::uint32_t;
using AgentId = std::string;
using TimeMs = std::int64_t;
using Units = std::int64_t;
using Bytes = std::vector<std::uint8_t>;

// Delivery face used for packets an agent hands to itself (local proxy,
// co-located children).  Never a valid link face.
inline constexpr FaceId kLocalFace = 0xffffffffu;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// name grammar
struct MalformedName : Error {
  using Error::Error;
};
struct ElementNotFirst : Error {
  using Error::Error;
};
struct MissingHop : Error {
  using Error::Error;
};

// wire codec
struct TlvError : Error {
  using Error::Error;
};
struct TruncatedPacket : TlvError {
  using TlvError::TlvError;
};
struct UnknownType : TlvError {
  using TlvError::TlvError;
};
struct MalformedTlv : TlvError {
  using TlvError::TlvError;
};

// controller
struct UnknownHead : Error {
  using Error::Error;
};
struct DuplicateHead : Error {
  using Error::Error;
};
struct InvalidChart : Error {
  using Error::Error;
};
struct UnknownData : Error {
  using Error::Error;
};
struct Unplaceable : Error {
  using Error::Error;
};
struct NoRoute : Error {
  using Error::Error;
};

// engine
struct TimeTravel : Error {
  using Error::Error;
};
struct UnknownFace : Error {
  using Error::Error;
};

inline std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const std::uint8_t*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(std::string_view s) { return fnv1a64(s.data(), s.size()); }
inline std::uint64_t fnv1a64(const Bytes& b) { return fnv1a64(b.data(), b.size()); }

inline std::string hex16(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline std::string to_string(const Bytes& b) { return std::string(b.begin(), b.end()); }

// Deterministic 64-bit generator (splitmix64).  Seeds all nonce draws; no
// other component may consume randomness.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0,1); used only by lossy links.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace sdnsn
