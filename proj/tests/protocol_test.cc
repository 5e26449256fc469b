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

#include "sampram/protocol.h"

#include <cmath>
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "moments.h"
#include "sampram/wire.h"

namespace sampram {
namespace {

Database SmallDb() {
  const Alphabet a = Alphabet::Create(3, 2).value();
  std::vector<size_t> joint;
  for (size_t i = 0; i < 60; ++i) joint.push_back((i * i + i / 7) % 6);
  return Database::FromJoint(a, joint).value();
}

TEST(WireTest, MessageRoundTrip) {
  const ProtocolMessage msg{MessageKind::kKeyRelease, Role::kBob,
                            EncodeKey(std::vector<Symbol>{1, 65535, 0})};
  const std::vector<uint8_t> bytes = EncodeMessage(msg);
  ASSERT_EQ(bytes.size(), kHeaderSize + 4 + 6);
  EXPECT_EQ(bytes[0], 2);
  EXPECT_EQ(bytes[1], 2);
  EXPECT_EQ(bytes[5], 10);
  EXPECT_EQ(DecodeMessage(bytes).value(), msg);
  EXPECT_EQ(DecodeKey(msg.payload).value(),
            (std::vector<Symbol>{1, 65535, 0}));
}

TEST(WireTest, BigEndianColumn) {
  const std::vector<uint8_t> p = EncodeColumn(std::vector<Symbol>{0x0102, 3});
  EXPECT_EQ(p, (std::vector<uint8_t>{1, 2, 0, 3}));
}

TEST(WireTest, CorruptMessagesRejected) {
  const ProtocolMessage msg{MessageKind::kCipherColumn, Role::kAlice,
                            EncodeColumn(std::vector<Symbol>{4, 5})};
  std::vector<uint8_t> bytes = EncodeMessage(msg);
  std::vector<uint8_t> truncated(bytes.begin(), bytes.end() - 1);
  EXPECT_EQ(DecodeMessage(truncated).status().code(),
            absl::StatusCode::kDataLoss);
  EXPECT_EQ(DecodeMessage(std::vector<uint8_t>{1, 1}).status().code(),
            absl::StatusCode::kDataLoss);
  std::vector<uint8_t> bad_kind = bytes;
  bad_kind[0] = 9;
  EXPECT_EQ(DecodeMessage(bad_kind).status().code(),
            absl::StatusCode::kDataLoss);
  std::vector<uint8_t> bad_sender = bytes;
  bad_sender[1] = 0;
  EXPECT_EQ(DecodeMessage(bad_sender).status().code(),
            absl::StatusCode::kDataLoss);
  EXPECT_FALSE(DecodeColumn(std::vector<uint8_t>{1, 2, 3}).ok());
  EXPECT_FALSE(DecodeKey(std::vector<uint8_t>{0, 0, 0, 2, 0, 1}).ok());
  EXPECT_FALSE(DecodeSamplingSeed(std::vector<uint8_t>(15)).ok());
  EXPECT_FALSE(DecodeChannelParams(std::vector<uint8_t>(13)).ok());
  EXPECT_FALSE(DecodeSanitized(std::vector<uint8_t>(6)).ok());
}

TEST(WireTest, PayloadCodecs) {
  const SamplingSeedPayload seed{0x0123456789ABCDEFULL, 45222, 239};
  EXPECT_EQ(DecodeSamplingSeed(EncodeSamplingSeed(seed)).value(), seed);
  const ChannelParamsPayload params{6, 4, 30.336473302};
  const ChannelParamsPayload back =
      DecodeChannelParams(EncodeChannelParams(params)).value();
  EXPECT_EQ(back.x_card, 6);
  EXPECT_EQ(back.y_card, 4);
  EXPECT_EQ(back.gamma, params.gamma);
  const std::vector<Symbol> x = {1, 2, 3}, y = {4, 5, 6};
  const SanitizedPayload s = DecodeSanitized(EncodeSanitized(x, y)).value();
  EXPECT_EQ(s.x, x);
  EXPECT_EQ(s.y, y);
}

TEST(RoutingTest, RecipientsFollowTheProtocol) {
  auto to = [](MessageKind k, Role from) {
    return RecipientOf(ProtocolMessage{k, from, {}});
  };
  EXPECT_EQ(to(MessageKind::kCipherColumn, Role::kAlice).value(),
            Role::kServer);
  EXPECT_EQ(to(MessageKind::kKeyRelease, Role::kBob).value(),
            Role::kResearcher);
  EXPECT_EQ(to(MessageKind::kSamplingSeed, Role::kAlice).value(), Role::kBob);
  EXPECT_EQ(to(MessageKind::kSamplingSeed, Role::kBob).value(), Role::kAlice);
  EXPECT_EQ(to(MessageKind::kSanitizedData, Role::kServer).value(),
            Role::kResearcher);
  EXPECT_EQ(to(MessageKind::kChannelParams, Role::kServer).value(),
            Role::kResearcher);
  EXPECT_FALSE(to(MessageKind::kKeyRelease, Role::kServer).ok());
  EXPECT_FALSE(to(MessageKind::kSanitizedData, Role::kAlice).ok());
  EXPECT_FALSE(to(MessageKind::kCipherColumn, Role::kResearcher).ok());
}

TEST(CuratorReleaseTest, SharedSeedSynchronizesRows) {
  // Both columns hold the row number, so decrypted samples must agree.
  constexpr size_t kN = 500, kM = 40;
  std::vector<Symbol> rows(kN);
  for (size_t i = 0; i < kN; ++i) rows[i] = static_cast<Symbol>(i);
  const CuratorRelease a =
      CuratorReleaseColumn(Role::kAlice, kN, rows, kN, kM, 17, 1).value();
  const CuratorRelease b =
      CuratorReleaseColumn(Role::kBob, kN, rows, kN, kM, 17, 2).value();
  auto open = [](const CuratorRelease& r) {
    const std::vector<Symbol> cipher = DecodeColumn(r.cipher.payload).value();
    const PadKey key =
        PadKey::Create(kN, DecodeKey(r.key.payload).value()).value();
    return Decrypt(cipher, key).value();
  };
  const std::vector<Symbol> xa = open(a), xb = open(b);
  EXPECT_EQ(xa, xb);
  const SamplingPlan plan = DrawPlan(kN, kM, 17).value();
  for (size_t i = 0; i < kM; ++i) EXPECT_EQ(xa[i], plan.indices()[i]);
  EXPECT_NE(DecodeColumn(a.cipher.payload).value(),
            DecodeColumn(b.cipher.payload).value());
}

TEST(CuratorReleaseTest, Errors) {
  const std::vector<Symbol> col = {0, 1, 0};
  EXPECT_EQ(CuratorReleaseColumn(Role::kAlice, 2, col, 3, 4, 1, 1)
                .status()
                .code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_FALSE(CuratorReleaseColumn(Role::kServer, 2, col, 3, 2, 1, 1).ok());
  EXPECT_FALSE(CuratorReleaseColumn(Role::kAlice, 2, col, 4, 2, 1, 1).ok());
}

TEST(CuratorTest, StateMachine) {
  Curator alice = Curator::Create(Role::kAlice, 2, {0, 1, 1, 0}).value();
  Curator bob = Curator::Create(Role::kBob, 3, {2, 1, 0, 0}).value();
  EXPECT_FALSE(alice.Release(1).ok());
  EXPECT_FALSE(alice.ShareSamplingSeed(5, 5).ok());
  const ProtocolMessage seed = alice.ShareSamplingSeed(5, 2).value();
  EXPECT_EQ(alice.state(), Curator::State::kSeeded);
  EXPECT_FALSE(alice.Receive(seed).ok());
  ASSERT_TRUE(bob.Receive(seed).ok());
  EXPECT_FALSE(bob.Receive(seed).ok());
  EXPECT_TRUE(alice.Release(1).ok());
  EXPECT_EQ(alice.state(), Curator::State::kReleased);
  EXPECT_FALSE(alice.Release(1).ok());
  EXPECT_TRUE(bob.Release(2).ok());

  Curator short_bob = Curator::Create(Role::kBob, 3, {2, 1, 0}).value();
  EXPECT_FALSE(short_bob.Receive(seed).ok());
  EXPECT_FALSE(Curator::Create(Role::kAlice, 2, {0, 2}).ok());
}

TEST(ServerTest, RefusesKeysAndMismatchedColumns) {
  Server server = Server::Create(2, 2, 3.0).value();
  EXPECT_FALSE(server.Process(1).ok());
  const ProtocolMessage key{MessageKind::kKeyRelease, Role::kAlice,
                            EncodeKey(std::vector<Symbol>{1})};
  EXPECT_FALSE(server.Receive(key).ok());
  const ProtocolMessage ca{MessageKind::kCipherColumn, Role::kAlice,
                           EncodeColumn(std::vector<Symbol>{1, 0})};
  const ProtocolMessage cb{MessageKind::kCipherColumn, Role::kBob,
                           EncodeColumn(std::vector<Symbol>{1})};
  ASSERT_TRUE(server.Receive(ca).ok());
  EXPECT_FALSE(server.Receive(ca).ok());
  ASSERT_TRUE(server.Receive(cb).ok());
  EXPECT_EQ(server.Process(1).status().code(),
            absl::StatusCode::kFailedPrecondition);

  const PramChannel ch =
      PramChannel::Create(Alphabet::Create(2, 2).value(), 3.0).value();
  EXPECT_FALSE(ServerProcess(cb, ca, ch, 1).ok());
}

TEST(ResearcherTest, MissingOrMismatchedKeys) {
  const PramChannel ch =
      PramChannel::Create(Alphabet::Create(2, 2).value(), 3.0).value();
  const ProtocolMessage data{MessageKind::kSanitizedData, Role::kServer,
                             EncodeSanitized(std::vector<Symbol>{1, 0},
                                             std::vector<Symbol>{0, 1})};
  const ProtocolMessage params{
      MessageKind::kChannelParams, Role::kServer,
      EncodeChannelParams({2, 2, 3.0})};
  const ProtocolMessage ka{MessageKind::kKeyRelease, Role::kAlice,
                           EncodeKey(std::vector<Symbol>{1, 1})};
  const ProtocolMessage kb_short{MessageKind::kKeyRelease, Role::kBob,
                                 EncodeKey(std::vector<Symbol>{1})};

  Researcher r;
  ASSERT_TRUE(r.Receive(data).ok());
  ASSERT_TRUE(r.Receive(params).ok());
  ASSERT_TRUE(r.Receive(ka).ok());
  EXPECT_FALSE(r.ready());
  const absl::Status missing = r.Estimate().status();
  EXPECT_EQ(missing.code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(missing.message().find("bob"), absl::string_view::npos);
  ASSERT_TRUE(r.Receive(kb_short).ok());
  EXPECT_EQ(r.Estimate().status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_FALSE(r.Receive(ka).ok());
  EXPECT_FALSE(r.Receive(ProtocolMessage{MessageKind::kCipherColumn,
                                         Role::kAlice, {}})
                   .ok());
  EXPECT_FALSE(ResearcherEstimate(data, ka, kb_short, ch).ok());
}

TEST(RunProtocolTest, NoiselessPipelineRecoversType) {
  const Database db = SmallDb();
  const TypeVector truth = JointType(db).value();
  const ProtocolRun run =
      RunProtocol(db, ProtocolConfig{db.size(), 1e9, 3}).value();
  for (size_t f = 0; f < truth.size(); ++f) {
    EXPECT_NEAR(run.estimate[f], truth[f], 1e-9);
  }
  // The full sample is a permutation of the database.
  EXPECT_EQ(JointType(run.sanitized).value().values().size(), truth.size());
  for (size_t f = 0; f < truth.size(); ++f) {
    EXPECT_EQ(JointType(run.sanitized).value()[f], truth[f]);
  }
}

TEST(RunProtocolTest, BytesOnWire) {
  const Database db = SmallDb();
  const size_t m = 11;
  const ProtocolRun run = RunProtocol(db, ProtocolConfig{m, 4.0, 9}).value();
  const size_t expected = (kHeaderSize + 16) + 2 * (kHeaderSize + 2 * m) +
                          2 * (kHeaderSize + 4 + 2 * m) +
                          (kHeaderSize + 4 * m) + (kHeaderSize + 12);
  EXPECT_EQ(run.bytes_on_wire, expected);
  EXPECT_EQ(run.sanitized.size(), m);
}

TEST(RunProtocolTest, DeterministicPerSeed) {
  const Database db = SmallDb();
  const ProtocolRun a = RunProtocol(db, ProtocolConfig{20, 3.0, 5}).value();
  const ProtocolRun b = RunProtocol(db, ProtocolConfig{20, 3.0, 5}).value();
  const ProtocolRun c = RunProtocol(db, ProtocolConfig{20, 3.0, 6}).value();
  EXPECT_EQ(a.sanitized, b.sanitized);
  EXPECT_FALSE(a.sanitized == c.sanitized);
  EXPECT_FALSE(RunProtocol(db, ProtocolConfig{61, 3.0, 5}).ok());
}

// The server sees only CipherColumn messages; keys go to the researcher.
TEST(RunProtocolTest, ServerNeverReceivesKeys) {
  const Database db = SmallDb();
  MessageBus bus;
  const CuratorRelease a = CuratorReleaseColumn(
      Role::kAlice, 3, db.x_col(), db.size(), 10, 4, 5).value();
  const CuratorRelease b = CuratorReleaseColumn(
      Role::kBob, 2, db.y_col(), db.size(), 10, 4, 6).value();
  for (const auto* m : {&a.cipher, &a.key, &b.cipher, &b.key}) {
    ASSERT_TRUE(bus.Post(*m).ok());
  }
  const std::vector<ProtocolMessage> server = bus.Drain(Role::kServer).value();
  ASSERT_EQ(server.size(), 2u);
  for (const ProtocolMessage& m : server) {
    EXPECT_EQ(m.kind, MessageKind::kCipherColumn);
  }
  const std::vector<ProtocolMessage> researcher =
      bus.Drain(Role::kResearcher).value();
  ASSERT_EQ(researcher.size(), 2u);
  for (const ProtocolMessage& m : researcher) {
    EXPECT_EQ(m.kind, MessageKind::kKeyRelease);
  }
  EXPECT_TRUE(bus.Drain(Role::kServer).value().empty());
}

// Exact law of the researcher's decrypted row, for one plaintext row and one
// key pair, obtained by feeding every possible server output through the
// researcher's decryption path and weighting it by the channel entry.
std::vector<double> PlaintextLaw(const PramChannel& ch, size_t in, Symbol v,
                                 Symbol w) {
  const size_t yc = ch.alphabet().y_card();
  const size_t xc = ch.alphabet().x_card();
  const ProtocolMessage ka{MessageKind::kKeyRelease, Role::kAlice,
                           EncodeKey(std::vector<Symbol>{v})};
  const ProtocolMessage kb{MessageKind::kKeyRelease, Role::kBob,
                           EncodeKey(std::vector<Symbol>{w})};
  const size_t padded = ((in / yc + v) % xc) * yc + (in % yc + w) % yc;
  std::vector<double> law(ch.dimension(), 0.0);
  for (size_t out = 0; out < ch.dimension(); ++out) {
    const ProtocolMessage data{
        MessageKind::kSanitizedData, Role::kServer,
        EncodeSanitized(std::vector<Symbol>{static_cast<Symbol>(out / yc)},
                        std::vector<Symbol>{static_cast<Symbol>(out % yc)})};
    const Database row = DecryptSanitized(data, ka, kb, ch).value();
    law[row.joint(0)] += ch.Entry(out, padded);
  }
  return law;
}

TEST(CommutationTest, SanitizedChannelEqualsPlaintextChannel) {
  for (double gamma : {1.5, 3.0, 10.0}) {
    const PramChannel ch =
        PramChannel::Create(Alphabet::Create(2, 2).value(), gamma).value();
    int cases = 0;
    for (Symbol v = 0; v < 2; ++v) {
      for (Symbol w = 0; w < 2; ++w) {
        for (size_t in = 0; in < 4; ++in) {
          const std::vector<double> law = PlaintextLaw(ch, in, v, w);
          for (size_t out = 0; out < 4; ++out) {
            EXPECT_NEAR(law[out], ch.Entry(out, in), 1e-12);
          }
          ++cases;
        }
      }
    }
    EXPECT_EQ(cases, 16);
  }
}

// Checks the production server against the channel: the empirical law of
// decrypt(server(encrypt(row))) for a fixed key pair.
TEST(CommutationTest, ServerProcessMatchesChannelEmpirically) {
  const PramChannel ch =
      PramChannel::Create(Alphabet::Create(2, 2).value(), 3.0).value();
  const ProtocolMessage ka{MessageKind::kKeyRelease, Role::kAlice,
                           EncodeKey(std::vector<Symbol>{1})};
  const ProtocolMessage kb{MessageKind::kKeyRelease, Role::kBob,
                           EncodeKey(std::vector<Symbol>{1})};
  // Plaintext (0, 1) padded with (1, 1) is (1, 0).
  const ProtocolMessage ca{MessageKind::kCipherColumn, Role::kAlice,
                           EncodeColumn(std::vector<Symbol>{1})};
  const ProtocolMessage cb{MessageKind::kCipherColumn, Role::kBob,
                           EncodeColumn(std::vector<Symbol>{0})};
  constexpr int kRuns = 40000;
  std::vector<double> freq(4, 0.0);
  for (int t = 0; t < kRuns; ++t) {
    const ProtocolMessage s = ServerProcess(ca, cb, ch, DeriveSeed(8, {uint64_t(t)})).value();
    freq[DecryptSanitized(s, ka, kb, ch).value().joint(0)] += 1.0 / kRuns;
  }
  for (size_t out = 0; out < 4; ++out) {
    const double p = ch.Entry(out, 1);
    EXPECT_NEAR(freq[out], p, 4.0 * std::sqrt(p * (1 - p) / kRuns));
  }
}

// I(plaintext; ciphertext) = 0 under a uniform pad, for a skewed prior on
// the plaintext.
TEST(ServerBlindnessTest, ZeroMutualInformation) {
  for (size_t card = 2; card <= 3; ++card) {
    for (size_t m = 1; m <= 2; ++m) {
      size_t count = 1;
      for (size_t i = 0; i < m; ++i) count *= card;
      auto seq = [&](size_t code) {
        std::vector<Symbol> s(m);
        for (size_t i = m; i-- > 0;) {
          s[i] = static_cast<Symbol>(code % card);
          code /= card;
        }
        return s;
      };
      std::vector<double> prior(count);
      double z = 0.0;
      for (size_t p = 0; p < count; ++p) z += (prior[p] = 1.0 + p * p);
      for (double& p : prior) p /= z;
      std::vector<std::vector<double>> joint(count,
                                             std::vector<double>(count, 0.0));
      for (size_t p = 0; p < count; ++p) {
        for (size_t k = 0; k < count; ++k) {
          const PadKey key = PadKey::Create(card, seq(k)).value();
          const std::vector<Symbol> c = Encrypt(seq(p), key).value();
          size_t code = 0;
          for (Symbol s : c) code = code * card + s;
          joint[p][code] += prior[p] / static_cast<double>(count);
        }
      }
      double mi = 0.0;
      for (size_t p = 0; p < count; ++p) {
        for (size_t c = 0; c < count; ++c) {
          double pc = 0.0;
          for (size_t q = 0; q < count; ++q) pc += joint[q][c];
          if (joint[p][c] > 0) {
            mi += joint[p][c] * std::log(joint[p][c] / (prior[p] * pc));
          }
        }
      }
      EXPECT_NEAR(mi, 0.0, 1e-12) << "card=" << card << " m=" << m;
    }
  }
}

// E[estimate | sample] = type of the sample, over server randomness only.
TEST(ResearcherEstimateTest, ConditionallyUnbiased) {
  const Database db = SmallDb();
  const PramChannel ch = PramChannel::Create(db.alphabet(), 5.0).value();
  const CuratorRelease a = CuratorReleaseColumn(
      Role::kAlice, 3, db.x_col(), db.size(), 25, 12, 13).value();
  const CuratorRelease b = CuratorReleaseColumn(
      Role::kBob, 2, db.y_col(), db.size(), 25, 12, 14).value();
  const SamplingPlan plan = DrawPlan(db.size(), 25, 12).value();
  const TypeVector sampled = JointType(ApplyPlan(db, plan).value()).value();
  constexpr int kTrials = 20000;
  std::vector<testing_util::Moments> cells(ch.dimension());
  for (int t = 0; t < kTrials; ++t) {
    const ProtocolMessage s =
        ServerProcess(a.cipher, b.cipher, ch, DeriveSeed(99, {uint64_t(t)})).value();
    const TypeVector est = ResearcherEstimate(s, a.key, b.key, ch).value();
    for (size_t f = 0; f < cells.size(); ++f) cells[f].Add(est[f]);
  }
  for (size_t f = 0; f < cells.size(); ++f) {
    EXPECT_NEAR(cells[f].mean(), sampled[f], 3.0 * cells[f].stderr_mean())
        << "cell " << f;
  }
}

}  // namespace
}  // namespace sampram
