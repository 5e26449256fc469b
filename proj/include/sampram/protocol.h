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

// The four-role release protocol.
//
//   1. Alice and Bob agree on a sampling seed (Alice sends SamplingSeed to
//      Bob) and both sample the same m row positions.
//   2. Each curator pads its sampled column with a fresh one-time pad, sends
//      the ciphertext to the server and the key to the researcher.
//   3. The server joins the two cipher columns into joint symbols, runs each
//      row through the PRAM channel and sends SanitizedData plus the channel
//      parameters to the researcher.
//   4. The researcher strips both pads, takes the joint type of the result
//      and inverts the channel.
//
// Roles only interact through serialized messages on a MessageBus. Because
// the channel is gamma-diagonal and the pads are group translations, PRAM on
// ciphertext followed by decryption has the same law as PRAM on plaintext.

#ifndef SAMPRAM_PROTOCOL_H_
#define SAMPRAM_PROTOCOL_H_

#include <cstddef>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sampram/domain.h"
#include "sampram/otp.h"
#include "sampram/pram.h"
#include "sampram/rng.h"
#include "sampram/sampling.h"
#include "sampram/status_macros.h"
#include "sampram/type_stats.h"
#include "sampram/wire.h"

namespace sampram {

inline bool IsCurator(Role r) { return r == Role::kAlice || r == Role::kBob; }

// Destination of a message, fixed by its kind. Keys only ever go to the
// researcher; ciphertext only ever goes to the server.
inline absl::StatusOr<Role> RecipientOf(const ProtocolMessage& msg) {
  switch (msg.kind) {
    case MessageKind::kCipherColumn:
      if (!IsCurator(msg.sender)) break;
      return Role::kServer;
    case MessageKind::kKeyRelease:
      if (!IsCurator(msg.sender)) break;
      return Role::kResearcher;
    case MessageKind::kSamplingSeed:
      if (!IsCurator(msg.sender)) break;
      return msg.sender == Role::kAlice ? Role::kBob : Role::kAlice;
    case MessageKind::kSanitizedData:
    case MessageKind::kChannelParams:
      if (msg.sender != Role::kServer) break;
      return Role::kResearcher;
  }
  return absl::FailedPreconditionError(
      absl::StrFormat("%s may not send %s", RoleName(msg.sender),
                      KindName(msg.kind)));
}

// In-process transport. Messages are stored serialized, so every role sees
// exactly the bytes that would cross a socket.
class MessageBus {
 public:
  absl::Status Post(const ProtocolMessage& msg) {
    ASSIGN_OR_RETURN(Role to, RecipientOf(msg));
    std::vector<uint8_t> bytes = EncodeMessage(msg);
    bytes_on_wire_ += bytes.size();
    inboxes_[to].push_back(std::move(bytes));
    return absl::OkStatus();
  }

  absl::StatusOr<std::vector<ProtocolMessage>> Drain(Role role) {
    std::vector<ProtocolMessage> out;
    auto it = inboxes_.find(role);
    if (it == inboxes_.end()) return out;
    for (const std::vector<uint8_t>& bytes : it->second) {
      ASSIGN_OR_RETURN(ProtocolMessage msg, DecodeMessage(bytes));
      out.push_back(std::move(msg));
    }
    it->second.clear();
    return out;
  }

  size_t bytes_on_wire() const { return bytes_on_wire_; }

 private:
  std::map<Role, std::deque<std::vector<uint8_t>>> inboxes_;
  size_t bytes_on_wire_ = 0;
};

// --- curators ---------------------------------------------------------------

struct CuratorRelease {
  ProtocolMessage cipher;  // to the server
  ProtocolMessage key;     // to the researcher
};

// Samples m of the n rows with the shared plan, pads them with a fresh key
// drawn from `key_seed`, and emits ciphertext and key messages.
inline absl::StatusOr<CuratorRelease> CuratorReleaseColumn(
    Role role, size_t card, std::span<const Symbol> column, size_t n,
    size_t m, uint64_t shared_seed, uint64_t key_seed) {
  if (!IsCurator(role)) {
    return absl::InvalidArgumentError("only alice or bob can release data");
  }
  if (column.size() != n) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "curator column has %d rows, expected n=%d", column.size(), n));
  }
  ASSIGN_OR_RETURN(SamplingPlan plan, DrawPlan(n, m, shared_seed));
  ASSIGN_OR_RETURN(std::vector<Symbol> sampled, ApplyPlan(column, plan));
  ASSIGN_OR_RETURN(PadKey key, GenerateKey(card, m, key_seed));
  ASSIGN_OR_RETURN(std::vector<Symbol> cipher, Encrypt(sampled, key));
  return CuratorRelease{
      ProtocolMessage{MessageKind::kCipherColumn, role, EncodeColumn(cipher)},
      ProtocolMessage{MessageKind::kKeyRelease, role, EncodeKey(key.pad())}};
}

class Curator {
 public:
  enum class State { kAwaitingSeed, kSeeded, kReleased };

  static absl::StatusOr<Curator> Create(Role role, size_t card,
                                        std::vector<Symbol> column) {
    if (!IsCurator(role)) {
      return absl::InvalidArgumentError("curator role must be alice or bob");
    }
    if (card < 1 || card > kMaxCardinality) {
      return absl::InvalidArgumentError("curator cardinality out of range");
    }
    for (Symbol s : column) {
      if (s >= card) {
        return absl::OutOfRangeError(absl::StrFormat(
            "curator symbol %d not below cardinality %d", s, card));
      }
    }
    return Curator(role, card, std::move(column));
  }

  Role role() const { return role_; }
  State state() const { return state_; }

  // Picks the sampling seed and returns the message that shares it with the
  // other curator.
  absl::StatusOr<ProtocolMessage> ShareSamplingSeed(uint64_t seed, size_t m) {
    if (state_ != State::kAwaitingSeed) {
      return absl::FailedPreconditionError("sampling seed already set");
    }
    if (m < 1 || m > column_.size()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "sample size m=%d must lie in [1, n=%d]", m, column_.size()));
    }
    shared_ = SamplingSeedPayload{seed, static_cast<uint32_t>(column_.size()),
                                  static_cast<uint32_t>(m)};
    state_ = State::kSeeded;
    return ProtocolMessage{MessageKind::kSamplingSeed, role_,
                           EncodeSamplingSeed(shared_)};
  }

  absl::Status Receive(const ProtocolMessage& msg) {
    if (msg.kind != MessageKind::kSamplingSeed || !IsCurator(msg.sender) ||
        msg.sender == role_) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "%s cannot accept %s from %s", RoleName(role_), KindName(msg.kind),
          RoleName(msg.sender)));
    }
    if (state_ != State::kAwaitingSeed) {
      return absl::FailedPreconditionError("sampling seed already set");
    }
    ASSIGN_OR_RETURN(SamplingSeedPayload p, DecodeSamplingSeed(msg.payload));
    if (p.n != column_.size()) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "peer has n=%d rows, %s has %d", p.n, RoleName(role_),
          column_.size()));
    }
    shared_ = p;
    state_ = State::kSeeded;
    return absl::OkStatus();
  }

  absl::StatusOr<CuratorRelease> Release(uint64_t key_seed) {
    if (state_ != State::kSeeded) {
      return absl::FailedPreconditionError(
          state_ == State::kReleased ? "curator already released"
                                     : "curator has no sampling seed");
    }
    ASSIGN_OR_RETURN(CuratorRelease out,
                     CuratorReleaseColumn(role_, card_, column_, column_.size(),
                                          shared_.m, shared_.seed, key_seed));
    state_ = State::kReleased;
    return out;
  }

 private:
  Curator(Role role, size_t card, std::vector<Symbol> column)
      : role_(role), card_(card), column_(std::move(column)) {}

  Role role_;
  size_t card_;
  std::vector<Symbol> column_;
  State state_ = State::kAwaitingSeed;
  SamplingSeedPayload shared_;
};

// --- server -----------------------------------------------------------------

// Joins two cipher columns row by row and perturbs each joint symbol once.
inline absl::StatusOr<ProtocolMessage> ServerProcess(
    const ProtocolMessage& cipher_a, const ProtocolMessage& cipher_b,
    const PramChannel& ch, uint64_t seed) {
  if (cipher_a.kind != MessageKind::kCipherColumn ||
      cipher_b.kind != MessageKind::kCipherColumn ||
      cipher_a.sender != Role::kAlice || cipher_b.sender != Role::kBob) {
    return absl::FailedPreconditionError(
        "server expects CipherColumn from alice and from bob");
  }
  ASSIGN_OR_RETURN(std::vector<Symbol> xs, DecodeColumn(cipher_a.payload));
  ASSIGN_OR_RETURN(std::vector<Symbol> ys, DecodeColumn(cipher_b.payload));
  if (xs.size() != ys.size()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "cipher column lengths differ: %d vs %d", xs.size(), ys.size()));
  }
  if (xs.empty()) {
    return absl::FailedPreconditionError("empty cipher columns");
  }
  const size_t x_card = ch.alphabet().x_card();
  const size_t y_card = ch.alphabet().y_card();
  std::vector<size_t> joint(xs.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    if (xs[i] >= x_card || ys[i] >= y_card) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "cipher row %d (%d, %d) outside %d x %d alphabet", i, xs[i], ys[i],
          x_card, y_card));
    }
    joint[i] = size_t{xs[i]} * y_card + ys[i];
  }
  RETURN_IF_ERROR(PerturbJoint(ch, joint, seed));
  for (size_t i = 0; i < joint.size(); ++i) {
    xs[i] = static_cast<Symbol>(joint[i] / y_card);
    ys[i] = static_cast<Symbol>(joint[i] % y_card);
  }
  return ProtocolMessage{MessageKind::kSanitizedData, Role::kServer,
                         EncodeSanitized(xs, ys)};
}

// Holds the two cipher columns and the channel. Never holds keys or
// plaintext: Receive() rejects anything but CipherColumn.
class Server {
 public:
  enum class State { kAwaitingColumns, kReady, kDone };

  static absl::StatusOr<Server> Create(size_t x_card, size_t y_card,
                                       double gamma) {
    ASSIGN_OR_RETURN(Alphabet alphabet, Alphabet::Create(x_card, y_card));
    ASSIGN_OR_RETURN(PramChannel ch, PramChannel::Create(alphabet, gamma));
    return Server(std::move(ch));
  }

  State state() const { return state_; }
  const PramChannel& channel() const { return channel_; }

  absl::Status Receive(const ProtocolMessage& msg) {
    if (msg.kind != MessageKind::kCipherColumn || !IsCurator(msg.sender)) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "server refuses %s from %s", KindName(msg.kind),
          RoleName(msg.sender)));
    }
    if (state_ == State::kDone) {
      return absl::FailedPreconditionError("server already processed");
    }
    std::optional<ProtocolMessage>& slot =
        msg.sender == Role::kAlice ? from_alice_ : from_bob_;
    if (slot.has_value()) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "duplicate cipher column from %s", RoleName(msg.sender)));
    }
    slot = msg;
    if (from_alice_.has_value() && from_bob_.has_value()) {
      state_ = State::kReady;
    }
    return absl::OkStatus();
  }

  // Returns {SanitizedData, ChannelParams}.
  absl::StatusOr<std::vector<ProtocolMessage>> Process(uint64_t seed) {
    if (state_ != State::kReady) {
      return absl::FailedPreconditionError(
          state_ == State::kDone ? "server already processed"
                                 : "server is missing a cipher column");
    }
    ASSIGN_OR_RETURN(ProtocolMessage sanitized,
                     ServerProcess(*from_alice_, *from_bob_, channel_, seed));
    const ChannelParamsPayload params{
        static_cast<uint16_t>(channel_.alphabet().x_card()),
        static_cast<uint16_t>(channel_.alphabet().y_card()), channel_.gamma()};
    state_ = State::kDone;
    return std::vector<ProtocolMessage>{
        std::move(sanitized),
        ProtocolMessage{MessageKind::kChannelParams, Role::kServer,
                        EncodeChannelParams(params)}};
  }

 private:
  explicit Server(PramChannel ch) : channel_(std::move(ch)) {}

  PramChannel channel_;
  std::optional<ProtocolMessage> from_alice_;
  std::optional<ProtocolMessage> from_bob_;
  State state_ = State::kAwaitingColumns;
};

// --- researcher -------------------------------------------------------------

// Removes both pads from the sanitized rows.
inline absl::StatusOr<Database> DecryptSanitized(
    const ProtocolMessage& sanitized, const ProtocolMessage& key_a,
    const ProtocolMessage& key_b, const PramChannel& ch) {
  if (sanitized.kind != MessageKind::kSanitizedData ||
      sanitized.sender != Role::kServer) {
    return absl::FailedPreconditionError("expected SanitizedData from server");
  }
  if (key_a.kind != MessageKind::kKeyRelease || key_a.sender != Role::kAlice ||
      key_b.kind != MessageKind::kKeyRelease || key_b.sender != Role::kBob) {
    return absl::FailedPreconditionError(
        "expected KeyRelease from alice and from bob");
  }
  ASSIGN_OR_RETURN(SanitizedPayload data, DecodeSanitized(sanitized.payload));
  ASSIGN_OR_RETURN(std::vector<Symbol> pad_a, DecodeKey(key_a.payload));
  ASSIGN_OR_RETURN(std::vector<Symbol> pad_b, DecodeKey(key_b.payload));
  if (pad_a.size() != data.x.size() || pad_b.size() != data.y.size()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "sample size mismatch: data m=%d, keys %d and %d", data.x.size(),
        pad_a.size(), pad_b.size()));
  }
  const Alphabet& alphabet = ch.alphabet();
  ASSIGN_OR_RETURN(PadKey ka, PadKey::Create(alphabet.x_card(), pad_a));
  ASSIGN_OR_RETURN(PadKey kb, PadKey::Create(alphabet.y_card(), pad_b));
  ASSIGN_OR_RETURN(std::vector<Symbol> xs, Decrypt(data.x, ka));
  ASSIGN_OR_RETURN(std::vector<Symbol> ys, Decrypt(data.y, kb));
  return Database::Create(alphabet, std::move(xs), std::move(ys));
}

// Decrypts, takes the joint type and inverts the channel.
inline absl::StatusOr<TypeVector> ResearcherEstimate(
    const ProtocolMessage& sanitized, const ProtocolMessage& key_a,
    const ProtocolMessage& key_b, const PramChannel& ch) {
  ASSIGN_OR_RETURN(Database sample,
                   DecryptSanitized(sanitized, key_a, key_b, ch));
  ASSIGN_OR_RETURN(TypeVector observed, JointType(sample));
  return ChannelInvert(ch, observed);
}

class Researcher {
 public:
  absl::Status Receive(const ProtocolMessage& msg) {
    switch (msg.kind) {
      case MessageKind::kKeyRelease:
        if (msg.sender == Role::kAlice) return Store(key_a_, msg);
        if (msg.sender == Role::kBob) return Store(key_b_, msg);
        break;
      case MessageKind::kSanitizedData:
        if (msg.sender == Role::kServer) return Store(sanitized_, msg);
        break;
      case MessageKind::kChannelParams:
        if (msg.sender == Role::kServer) {
          ASSIGN_OR_RETURN(ChannelParamsPayload p,
                           DecodeChannelParams(msg.payload));
          ASSIGN_OR_RETURN(Alphabet alphabet,
                           Alphabet::Create(p.x_card, p.y_card));
          ASSIGN_OR_RETURN(PramChannel ch,
                           PramChannel::Create(alphabet, p.gamma));
          channel_ = std::move(ch);
          return absl::OkStatus();
        }
        break;
      default:
        break;
    }
    return absl::FailedPreconditionError(absl::StrFormat(
        "researcher refuses %s from %s", KindName(msg.kind),
        RoleName(msg.sender)));
  }

  bool ready() const {
    return key_a_ && key_b_ && sanitized_ && channel_.has_value();
  }

  absl::StatusOr<Database> DecryptedSample() const {
    RETURN_IF_ERROR(CheckReady());
    return DecryptSanitized(*sanitized_, *key_a_, *key_b_, *channel_);
  }

  absl::StatusOr<TypeVector> Estimate() const {
    RETURN_IF_ERROR(CheckReady());
    return ResearcherEstimate(*sanitized_, *key_a_, *key_b_, *channel_);
  }

 private:
  static absl::Status Store(std::optional<ProtocolMessage>& slot,
                            const ProtocolMessage& msg) {
    if (slot.has_value()) {
      return absl::FailedPreconditionError(
          absl::StrFormat("duplicate %s from %s", KindName(msg.kind),
                          RoleName(msg.sender)));
    }
    slot = msg;
    return absl::OkStatus();
  }

  absl::Status CheckReady() const {
    if (!key_a_) return absl::FailedPreconditionError("missing key from alice");
    if (!key_b_) return absl::FailedPreconditionError("missing key from bob");
    if (!sanitized_) {
      return absl::FailedPreconditionError("missing sanitized data");
    }
    if (!channel_) {
      return absl::FailedPreconditionError("missing channel parameters");
    }
    return absl::OkStatus();
  }

  std::optional<ProtocolMessage> key_a_;
  std::optional<ProtocolMessage> key_b_;
  std::optional<ProtocolMessage> sanitized_;
  std::optional<PramChannel> channel_;
};

// --- end to end -------------------------------------------------------------

struct ProtocolConfig {
  size_t m = 1;
  double gamma = 2.0;
  // Every random choice of one run (sampling seed, both pads, PRAM noise) is
  // derived from this value.
  uint64_t seed = 0;
};

struct ProtocolRun {
  Database sanitized;  // (X_hat, Y_hat), as decrypted by the researcher
  TypeVector estimate;
  size_t bytes_on_wire = 0;
};

namespace seed_tag {
inline constexpr uint64_t kSampling = 1;
inline constexpr uint64_t kAlicePad = 2;
inline constexpr uint64_t kBobPad = 3;
inline constexpr uint64_t kServerNoise = 4;
}  // namespace seed_tag

inline absl::StatusOr<ProtocolRun> RunProtocol(const Database& db,
                                               const ProtocolConfig& cfg) {
  const Alphabet& alphabet = db.alphabet();
  MessageBus bus;
  ASSIGN_OR_RETURN(
      Curator alice,
      Curator::Create(Role::kAlice, alphabet.x_card(),
                      std::vector<Symbol>(db.x_col().begin(), db.x_col().end())));
  ASSIGN_OR_RETURN(
      Curator bob,
      Curator::Create(Role::kBob, alphabet.y_card(),
                      std::vector<Symbol>(db.y_col().begin(), db.y_col().end())));
  ASSIGN_OR_RETURN(Server server,
                   Server::Create(alphabet.x_card(), alphabet.y_card(),
                                  cfg.gamma));
  Researcher researcher;

  ASSIGN_OR_RETURN(
      ProtocolMessage seed_msg,
      alice.ShareSamplingSeed(DeriveSeed(cfg.seed, {seed_tag::kSampling}),
                              cfg.m));
  RETURN_IF_ERROR(bus.Post(seed_msg));
  ASSIGN_OR_RETURN(std::vector<ProtocolMessage> bob_inbox,
                   bus.Drain(Role::kBob));
  for (const ProtocolMessage& msg : bob_inbox) RETURN_IF_ERROR(bob.Receive(msg));

  ASSIGN_OR_RETURN(CuratorRelease from_alice,
                   alice.Release(DeriveSeed(cfg.seed, {seed_tag::kAlicePad})));
  ASSIGN_OR_RETURN(CuratorRelease from_bob,
                   bob.Release(DeriveSeed(cfg.seed, {seed_tag::kBobPad})));
  RETURN_IF_ERROR(bus.Post(from_alice.cipher));
  RETURN_IF_ERROR(bus.Post(from_bob.cipher));
  RETURN_IF_ERROR(bus.Post(from_alice.key));
  RETURN_IF_ERROR(bus.Post(from_bob.key));

  ASSIGN_OR_RETURN(std::vector<ProtocolMessage> server_inbox,
                   bus.Drain(Role::kServer));
  for (const ProtocolMessage& msg : server_inbox) {
    RETURN_IF_ERROR(server.Receive(msg));
  }
  ASSIGN_OR_RETURN(
      std::vector<ProtocolMessage> released,
      server.Process(DeriveSeed(cfg.seed, {seed_tag::kServerNoise})));
  for (const ProtocolMessage& msg : released) RETURN_IF_ERROR(bus.Post(msg));

  ASSIGN_OR_RETURN(std::vector<ProtocolMessage> researcher_inbox,
                   bus.Drain(Role::kResearcher));
  for (const ProtocolMessage& msg : researcher_inbox) {
    RETURN_IF_ERROR(researcher.Receive(msg));
  }
  ASSIGN_OR_RETURN(Database sanitized, researcher.DecryptedSample());
  ASSIGN_OR_RETURN(TypeVector estimate, researcher.Estimate());
  return ProtocolRun{std::move(sanitized), std::move(estimate),
                     bus.bytes_on_wire()};
}

}  // namespace sampram

#endif  // SAMPRAM_PROTOCOL_H_
