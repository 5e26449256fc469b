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

// Gamma-diagonal post-randomization (PRAM) channel.
//
// Over a joint alphabet of size d, the channel keeps a symbol with
// probability gamma/q and moves it to each other symbol with probability 1/q,
// where q = gamma + d - 1. As a matrix, A = ((gamma - 1) I + J) / q with J the
// all-ones matrix, so A t and A^{-1} t have O(d) closed forms:
//
//   (A t)_i      = ((gamma - 1) t_i + sum(t)) / q
//   (A^{-1} y)_i = (q y_i - sum(y)) / (gamma - 1)
//
// A is symmetric with eigenvalue 1 (on the all-ones vector) and (gamma-1)/q
// (multiplicity d-1), hence condition number 1 + d/(gamma-1).

#ifndef SAMPRAM_PRAM_H_
#define SAMPRAM_PRAM_H_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sampram/domain.h"
#include "sampram/rng.h"
#include "sampram/type_stats.h"

namespace sampram {

class PramChannel {
 public:
  static absl::StatusOr<PramChannel> Create(Alphabet alphabet, double gamma) {
    if (!std::isfinite(gamma) || !(gamma > 1.0)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("PRAM gamma must be finite and > 1, got %g", gamma));
    }
    return PramChannel(std::move(alphabet), gamma);
  }

  const Alphabet& alphabet() const { return alphabet_; }
  double gamma() const { return gamma_; }
  double q() const { return q_; }
  size_t dimension() const { return alphabet_.size(); }

  double keep_probability() const { return gamma_ / q_; }
  double move_probability() const { return 1.0 / q_; }

  // A[out, in].
  double Entry(size_t out, size_t in) const {
    return out == in ? keep_probability() : move_probability();
  }

  // Explicit d x d matrix, row-major A[out * d + in]. Test oracles only; the
  // estimator path uses the closed forms.
  std::vector<double> DenseMatrix() const {
    const size_t d = dimension();
    std::vector<double> a(d * d, move_probability());
    for (size_t i = 0; i < d; ++i) a[i * d + i] = keep_probability();
    return a;
  }

  // Draws the channel output for one input symbol. Rejection-free: a move
  // picks r uniformly in [0, d-1) and skips over the input symbol.
  size_t PerturbSymbol(size_t in, Prng& rng) const {
    if (rng.UniformDouble() < keep_probability()) return in;
    const size_t r = static_cast<size_t>(rng.UniformInt(dimension() - 1));
    return r < in ? r : r + 1;
  }

 private:
  PramChannel(Alphabet alphabet, double gamma)
      : alphabet_(std::move(alphabet)),
        gamma_(gamma),
        q_(gamma + static_cast<double>(alphabet_.size()) - 1.0) {}

  Alphabet alphabet_;
  double gamma_;
  double q_;
};

// Perturbs each flat joint symbol independently, in place.
inline absl::Status PerturbJoint(const PramChannel& ch,
                                 std::span<size_t> joint, uint64_t seed) {
  Prng rng(seed);
  for (size_t& s : joint) {
    if (s >= ch.dimension()) {
      return absl::OutOfRangeError(absl::StrFormat(
          "joint symbol %d outside channel dimension %d", s, ch.dimension()));
    }
    s = ch.PerturbSymbol(s, rng);
  }
  return absl::OkStatus();
}

inline absl::StatusOr<Database> Perturb(const Database& db,
                                        const PramChannel& ch, uint64_t seed) {
  if (!(db.alphabet() == ch.alphabet())) {
    return absl::FailedPreconditionError(
        "database alphabet does not match the channel");
  }
  std::vector<size_t> joint(db.size());
  for (size_t i = 0; i < db.size(); ++i) joint[i] = db.joint(i);
  if (absl::Status s = PerturbJoint(ch, joint, seed); !s.ok()) return s;
  return Database::FromJoint(db.alphabet(), joint);
}

// A t. Proper types map to proper types.
inline absl::StatusOr<TypeVector> ChannelApply(const PramChannel& ch,
                                               const TypeVector& t) {
  if (!(t.alphabet() == ch.alphabet())) {
    return absl::FailedPreconditionError(
        "type alphabet does not match the channel");
  }
  const double total = std::accumulate(t.values().begin(), t.values().end(),
                                       0.0);
  const double scale = (ch.gamma() - 1.0) / ch.q();
  const double shift = total / ch.q();
  std::vector<double> out(t.size());
  for (size_t i = 0; i < t.size(); ++i) out[i] = scale * t[i] + shift;
  return TypeVector::Create(t.alphabet(), std::move(out), t.kind());
}

// A^{-1} t_hat. The result is a raw estimate: it sums to one but can have
// negative entries.
inline absl::StatusOr<TypeVector> ChannelInvert(const PramChannel& ch,
                                                const TypeVector& t_hat) {
  if (!(t_hat.alphabet() == ch.alphabet())) {
    return absl::FailedPreconditionError(
        "type alphabet does not match the channel");
  }
  const double total =
      std::accumulate(t_hat.values().begin(), t_hat.values().end(), 0.0);
  const double inv = 1.0 / (ch.gamma() - 1.0);
  std::vector<double> out(t_hat.size());
  for (size_t i = 0; i < t_hat.size(); ++i) {
    out[i] = (ch.q() * t_hat[i] - total) * inv;
  }
  return TypeVector::Create(t_hat.alphabet(), std::move(out),
                            TypeVector::Kind::kRawEstimate);
}

inline double ConditionNumber(const PramChannel& ch) {
  return 1.0 + static_cast<double>(ch.dimension()) / (ch.gamma() - 1.0);
}

}  // namespace sampram

#endif  // SAMPRAM_PRAM_H_
