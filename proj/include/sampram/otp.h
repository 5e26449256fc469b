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

// Additive one-time pad over the cyclic group Z_card.
//
// Each curator pads its own column modulo its own cardinality (Alice mod |X|,
// Bob mod |Y|). Decryption subtracts the pad; for card = 2 that coincides
// with adding it.

#ifndef SAMPRAM_OTP_H_
#define SAMPRAM_OTP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sampram/domain.h"
#include "sampram/rng.h"

namespace sampram {

class PadKey {
 public:
  static absl::StatusOr<PadKey> Create(size_t card, std::vector<Symbol> pad) {
    if (card < 1 || card > kMaxCardinality) {
      return absl::InvalidArgumentError(
          absl::StrFormat("pad modulus %d outside [1, %d]", card,
                          kMaxCardinality));
    }
    for (Symbol v : pad) {
      if (v >= card) {
        return absl::OutOfRangeError(
            absl::StrFormat("pad residue %d not below modulus %d", v, card));
      }
    }
    return PadKey(card, std::move(pad));
  }

  size_t card() const { return card_; }
  size_t size() const { return pad_.size(); }
  std::span<const Symbol> pad() const { return pad_; }

  friend bool operator==(const PadKey&, const PadKey&) = default;

 private:
  PadKey(size_t card, std::vector<Symbol> pad)
      : card_(card), pad_(std::move(pad)) {}

  size_t card_;
  std::vector<Symbol> pad_;
};

// Fresh key of m independent uniform residues mod card.
inline absl::StatusOr<PadKey> GenerateKey(size_t card, size_t m,
                                          uint64_t seed) {
  if (card < 1) return absl::InvalidArgumentError("pad modulus must be >= 1");
  if (m < 1) return absl::InvalidArgumentError("pad length must be >= 1");
  if (card > kMaxCardinality) {
    return absl::InvalidArgumentError("pad modulus too large");
  }
  Prng rng(seed);
  std::vector<Symbol> pad(m);
  for (Symbol& v : pad) v = static_cast<Symbol>(rng.UniformInt(card));
  return PadKey::Create(card, std::move(pad));
}

namespace internal {

inline absl::Status CheckPadShape(std::span<const Symbol> col,
                                  const PadKey& key) {
  if (col.size() != key.size()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "column has %d entries, key has %d", col.size(), key.size()));
  }
  for (Symbol v : col) {
    if (v >= key.card()) {
      return absl::OutOfRangeError(
          absl::StrFormat("symbol %d not below modulus %d", v, key.card()));
    }
  }
  return absl::OkStatus();
}

}  // namespace internal

inline absl::StatusOr<std::vector<Symbol>> Encrypt(
    std::span<const Symbol> col, const PadKey& key) {
  if (absl::Status s = internal::CheckPadShape(col, key); !s.ok()) return s;
  const uint32_t card = static_cast<uint32_t>(key.card());
  std::vector<Symbol> out(col.size());
  for (size_t i = 0; i < col.size(); ++i) {
    out[i] = static_cast<Symbol>((uint32_t{col[i]} + key.pad()[i]) % card);
  }
  return out;
}

inline absl::StatusOr<std::vector<Symbol>> Decrypt(
    std::span<const Symbol> col, const PadKey& key) {
  if (absl::Status s = internal::CheckPadShape(col, key); !s.ok()) return s;
  const uint32_t card = static_cast<uint32_t>(key.card());
  std::vector<Symbol> out(col.size());
  for (size_t i = 0; i < col.size(); ++i) {
    out[i] =
        static_cast<Symbol>((uint32_t{col[i]} + card - key.pad()[i]) % card);
  }
  return out;
}

}  // namespace sampram

#endif  // SAMPRAM_OTP_H_
