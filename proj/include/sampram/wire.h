// Copyright 2026 The sampram Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Wire format of protocol messages.
//
//   offset  size  field
//   0       1     kind tag (MessageKind)
//   1       1     sender (Role)
//   2       4     payload length, big-endian
//   6       len   payload
//
// Payloads, all integers big-endian:
//   CipherColumn   u16[m]                   padded symbols of one curator
//   KeyRelease     u32 m, u16[m]            pad residues
//   SamplingSeed   u64 seed, u32 n, u32 m
//   SanitizedData  u16[m] x, then u16[m] y  perturbed padded joint rows
//   ChannelParams  u16 x_card, u16 y_card, u64 IEEE-754 bits of gamma

#ifndef SAMPRAM_WIRE_H_
#define SAMPRAM_WIRE_H_

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sampram/domain.h"

namespace sampram {

enum class MessageKind : uint8_t {
  kCipherColumn = 1,
  kKeyRelease = 2,
  kSamplingSeed = 3,
  kSanitizedData = 4,
  kChannelParams = 5,
};

enum class Role : uint8_t {
  kAlice = 1,
  kBob = 2,
  kServer = 3,
  kResearcher = 4,
};

inline const char* RoleName(Role r) {
  switch (r) {
    case Role::kAlice: return "alice";
    case Role::kBob: return "bob";
    case Role::kServer: return "server";
    case Role::kResearcher: return "researcher";
  }
  return "unknown";
}

inline const char* KindName(MessageKind k) {
  switch (k) {
    case MessageKind::kCipherColumn: return "CipherColumn";
    case MessageKind::kKeyRelease: return "KeyRelease";
    case MessageKind::kSamplingSeed: return "SamplingSeed";
    case MessageKind::kSanitizedData: return "SanitizedData";
    case MessageKind::kChannelParams: return "ChannelParams";
  }
  return "unknown";
}

inline constexpr size_t kHeaderSize = 6;

struct ProtocolMessage {
  MessageKind kind;
  Role sender;
  std::vector<uint8_t> payload;

  friend bool operator==(const ProtocolMessage&,
                         const ProtocolMessage&) = default;
};

namespace wire {

class Writer {
 public:
  void U8(uint8_t v) { bytes_.push_back(v); }
  void U16(uint16_t v) {
    bytes_.push_back(static_cast<uint8_t>(v >> 8));
    bytes_.push_back(static_cast<uint8_t>(v));
  }
  void U32(uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) {
      bytes_.push_back(static_cast<uint8_t>(v >> shift));
    }
  }
  void U64(uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) {
      bytes_.push_back(static_cast<uint8_t>(v >> shift));
    }
  }
  void Bytes(std::span<const uint8_t> b) {
    bytes_.insert(bytes_.end(), b.begin(), b.end());
  }
  std::vector<uint8_t> Take() && { return std::move(bytes_); }

 private:
  std::vector<uint8_t> bytes_;
};

class Reader {
 public:
  explicit Reader(std::span<const uint8_t> bytes) : bytes_(bytes) {}

  size_t remaining() const { return bytes_.size() - pos_; }

  absl::StatusOr<uint64_t> Uint(size_t width) {
    if (remaining() < width) {
      return absl::DataLossError(absl::StrFormat(
          "truncated message: need %d bytes at offset %d, have %d", width,
          pos_, remaining()));
    }
    uint64_t v = 0;
    for (size_t i = 0; i < width; ++i) v = (v << 8) | bytes_[pos_ + i];
    pos_ += width;
    return v;
  }

 private:
  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
};

}  // namespace wire

inline std::vector<uint8_t> EncodeMessage(const ProtocolMessage& msg) {
  wire::Writer w;
  w.U8(static_cast<uint8_t>(msg.kind));
  w.U8(static_cast<uint8_t>(msg.sender));
  w.U32(static_cast<uint32_t>(msg.payload.size()));
  w.Bytes(msg.payload);
  return std::move(w).Take();
}

inline absl::StatusOr<ProtocolMessage> DecodeMessage(
    std::span<const uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) {
    return absl::DataLossError("message shorter than its header");
  }
  const uint8_t kind = bytes[0];
  const uint8_t sender = bytes[1];
  if (kind < 1 || kind > 5) {
    return absl::DataLossError(absl::StrFormat("unknown kind tag %d", kind));
  }
  if (sender < 1 || sender > 4) {
    return absl::DataLossError(absl::StrFormat("unknown sender %d", sender));
  }
  const uint32_t len = (uint32_t{bytes[2]} << 24) | (uint32_t{bytes[3]} << 16) |
                       (uint32_t{bytes[4]} << 8) | uint32_t{bytes[5]};
  if (bytes.size() != kHeaderSize + len) {
    return absl::DataLossError(absl::StrFormat(
        "payload length field says %d, message carries %d", len,
        bytes.size() - kHeaderSize));
  }
  return ProtocolMessage{
      static_cast<MessageKind>(kind), static_cast<Role>(sender),
      std::vector<uint8_t>(bytes.begin() + kHeaderSize, bytes.end())};
}

// --- payload codecs ---------------------------------------------------------

inline std::vector<uint8_t> EncodeColumn(std::span<const Symbol> column) {
  wire::Writer w;
  for (Symbol s : column) w.U16(s);
  return std::move(w).Take();
}

inline absl::StatusOr<std::vector<Symbol>> DecodeColumn(
    std::span<const uint8_t> payload) {
  if (payload.size() % 2 != 0) {
    return absl::DataLossError("column payload has odd length");
  }
  wire::Reader r(payload);
  std::vector<Symbol> out(payload.size() / 2);
  for (Symbol& s : out) s = static_cast<Symbol>(*r.Uint(2));
  return out;
}

inline std::vector<uint8_t> EncodeKey(std::span<const Symbol> pad) {
  wire::Writer w;
  w.U32(static_cast<uint32_t>(pad.size()));
  for (Symbol s : pad) w.U16(s);
  return std::move(w).Take();
}

inline absl::StatusOr<std::vector<Symbol>> DecodeKey(
    std::span<const uint8_t> payload) {
  wire::Reader r(payload);
  absl::StatusOr<uint64_t> count = r.Uint(4);
  if (!count.ok()) return count.status();
  if (r.remaining() != 2 * *count) {
    return absl::DataLossError(absl::StrFormat(
        "key payload declares %d residues but carries %d bytes", *count,
        r.remaining()));
  }
  std::vector<Symbol> out(*count);
  for (Symbol& s : out) s = static_cast<Symbol>(*r.Uint(2));
  return out;
}

struct SamplingSeedPayload {
  uint64_t seed = 0;
  uint32_t n = 0;
  uint32_t m = 0;

  friend bool operator==(const SamplingSeedPayload&,
                         const SamplingSeedPayload&) = default;
};

inline std::vector<uint8_t> EncodeSamplingSeed(const SamplingSeedPayload& p) {
  wire::Writer w;
  w.U64(p.seed);
  w.U32(p.n);
  w.U32(p.m);
  return std::move(w).Take();
}

inline absl::StatusOr<SamplingSeedPayload> DecodeSamplingSeed(
    std::span<const uint8_t> payload) {
  if (payload.size() != 16) {
    return absl::DataLossError("sampling seed payload must be 16 bytes");
  }
  wire::Reader r(payload);
  SamplingSeedPayload p;
  p.seed = *r.Uint(8);
  p.n = static_cast<uint32_t>(*r.Uint(4));
  p.m = static_cast<uint32_t>(*r.Uint(4));
  return p;
}

struct SanitizedPayload {
  std::vector<Symbol> x;
  std::vector<Symbol> y;
};

inline std::vector<uint8_t> EncodeSanitized(std::span<const Symbol> x,
                                            std::span<const Symbol> y) {
  wire::Writer w;
  for (Symbol s : x) w.U16(s);
  for (Symbol s : y) w.U16(s);
  return std::move(w).Take();
}

inline absl::StatusOr<SanitizedPayload> DecodeSanitized(
    std::span<const uint8_t> payload) {
  if (payload.size() % 4 != 0) {
    return absl::DataLossError(
        "sanitized payload length is not a multiple of 4");
  }
  const size_t m = payload.size() / 4;
  wire::Reader r(payload);
  SanitizedPayload p;
  p.x.resize(m);
  p.y.resize(m);
  for (Symbol& s : p.x) s = static_cast<Symbol>(*r.Uint(2));
  for (Symbol& s : p.y) s = static_cast<Symbol>(*r.Uint(2));
  return p;
}

struct ChannelParamsPayload {
  uint16_t x_card = 0;
  uint16_t y_card = 0;
  double gamma = 0.0;
};

inline std::vector<uint8_t> EncodeChannelParams(const ChannelParamsPayload& p) {
  wire::Writer w;
  w.U16(p.x_card);
  w.U16(p.y_card);
  w.U64(std::bit_cast<uint64_t>(p.gamma));
  return std::move(w).Take();
}

inline absl::StatusOr<ChannelParamsPayload> DecodeChannelParams(
    std::span<const uint8_t> payload) {
  if (payload.size() != 12) {
    return absl::DataLossError("channel params payload must be 12 bytes");
  }
  wire::Reader r(payload);
  ChannelParamsPayload p;
  p.x_card = static_cast<uint16_t>(*r.Uint(2));
  p.y_card = static_cast<uint16_t>(*r.Uint(2));
  p.gamma = std::bit_cast<double>(*r.Uint(8));
  return p;
}

}  // namespace sampram

#endif  // SAMPRAM_WIRE_H_
