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

// Finite-alphabet data model for a vertically partitioned database.
//
// Alice holds the X column, Bob the Y column; row i of both columns belongs to
// the same respondent. Attribute values are dense indices. Joint symbols
// (x, y) are flattened row-major, x major: f = x * y_card + y. Every module
// that indexes a joint distribution uses this ordering.

#ifndef SAMPRAM_DOMAIN_H_
#define SAMPRAM_DOMAIN_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace sampram {

// Index of one attribute value within a curator's alphabet.
using Symbol = uint16_t;

// Largest per-curator cardinality; symbols travel as 16-bit words.
inline constexpr size_t kMaxCardinality = 65535;

class Alphabet {
 public:
  static absl::StatusOr<Alphabet> Create(
      size_t x_card, size_t y_card,
      std::optional<std::vector<std::string>> labels = std::nullopt) {
    if (x_card < 1 || y_card < 1) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "alphabet cardinalities must be positive, got %d x %d", x_card,
          y_card));
    }
    if (x_card > kMaxCardinality || y_card > kMaxCardinality) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "alphabet cardinality exceeds %d", kMaxCardinality));
    }
    if (x_card * y_card < 2) {
      return absl::InvalidArgumentError(
          "joint alphabet must have at least 2 symbols");
    }
    if (labels.has_value()) {
      if (labels->size() != x_card * y_card) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "expected %d labels, got %d", x_card * y_card, labels->size()));
      }
      std::set<std::string> seen(labels->begin(), labels->end());
      if (seen.size() != labels->size()) {
        return absl::InvalidArgumentError("alphabet labels must be unique");
      }
    }
    return Alphabet(x_card, y_card, std::move(labels));
  }

  size_t x_card() const { return x_card_; }
  size_t y_card() const { return y_card_; }
  // Joint cardinality |X||Y|.
  size_t size() const { return x_card_ * y_card_; }
  const std::optional<std::vector<std::string>>& labels() const {
    return labels_;
  }

  // Labels are descriptive only and do not take part in equality.
  friend bool operator==(const Alphabet& a, const Alphabet& b) {
    return a.x_card_ == b.x_card_ && a.y_card_ == b.y_card_;
  }

 private:
  Alphabet(size_t x_card, size_t y_card,
           std::optional<std::vector<std::string>> labels)
      : x_card_(x_card), y_card_(y_card), labels_(std::move(labels)) {}

  size_t x_card_;
  size_t y_card_;
  std::optional<std::vector<std::string>> labels_;
};

struct JointSymbol {
  size_t x = 0;
  size_t y = 0;

  friend bool operator==(const JointSymbol&, const JointSymbol&) = default;
};

inline absl::StatusOr<size_t> FlatIndex(const JointSymbol& s,
                                        const Alphabet& a) {
  if (s.x >= a.x_card() || s.y >= a.y_card()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "symbol (%d, %d) outside %d x %d alphabet", s.x, s.y, a.x_card(),
        a.y_card()));
  }
  return s.x * a.y_card() + s.y;
}

inline absl::StatusOr<JointSymbol> Unflatten(size_t flat, const Alphabet& a) {
  if (flat >= a.size()) {
    return absl::OutOfRangeError(absl::StrFormat(
        "flat index %d outside joint alphabet of size %d", flat, a.size()));
  }
  return JointSymbol{flat / a.y_card(), flat % a.y_card()};
}

// Two aligned columns over a joint alphabet. Immutable after construction.
class Database {
 public:
  static absl::StatusOr<Database> Create(Alphabet alphabet,
                                         std::vector<Symbol> x_col,
                                         std::vector<Symbol> y_col) {
    if (x_col.size() != y_col.size()) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "column lengths differ: %d vs %d", x_col.size(), y_col.size()));
    }
    if (x_col.empty()) {
      return absl::InvalidArgumentError("database must have at least 1 row");
    }
    for (size_t i = 0; i < x_col.size(); ++i) {
      if (x_col[i] >= alphabet.x_card() || y_col[i] >= alphabet.y_card()) {
        return absl::OutOfRangeError(absl::StrFormat(
            "row %d: (%d, %d) outside %d x %d alphabet", i, x_col[i],
            y_col[i], alphabet.x_card(), alphabet.y_card()));
      }
    }
    return Database(std::move(alphabet), std::move(x_col), std::move(y_col));
  }

  // Builds a database from flat joint indices.
  static absl::StatusOr<Database> FromJoint(Alphabet alphabet,
                                            std::span<const size_t> joint) {
    std::vector<Symbol> xs(joint.size());
    std::vector<Symbol> ys(joint.size());
    for (size_t i = 0; i < joint.size(); ++i) {
      if (joint[i] >= alphabet.size()) {
        return absl::OutOfRangeError(absl::StrFormat(
            "row %d: flat index %d outside joint alphabet of size %d", i,
            joint[i], alphabet.size()));
      }
      xs[i] = static_cast<Symbol>(joint[i] / alphabet.y_card());
      ys[i] = static_cast<Symbol>(joint[i] % alphabet.y_card());
    }
    return Create(std::move(alphabet), std::move(xs), std::move(ys));
  }

  const Alphabet& alphabet() const { return alphabet_; }
  size_t size() const { return x_col_.size(); }
  std::span<const Symbol> x_col() const { return x_col_; }
  std::span<const Symbol> y_col() const { return y_col_; }

  JointSymbol row(size_t i) const { return {x_col_[i], y_col_[i]}; }
  size_t joint(size_t i) const {
    return static_cast<size_t>(x_col_[i]) * alphabet_.y_card() + y_col_[i];
  }

  friend bool operator==(const Database& a, const Database& b) {
    return a.alphabet_ == b.alphabet_ && a.x_col_ == b.x_col_ &&
           a.y_col_ == b.y_col_;
  }

 private:
  Database(Alphabet alphabet, std::vector<Symbol> x_col,
           std::vector<Symbol> y_col)
      : alphabet_(std::move(alphabet)),
        x_col_(std::move(x_col)),
        y_col_(std::move(y_col)) {}

  Alphabet alphabet_;
  std::vector<Symbol> x_col_;
  std::vector<Symbol> y_col_;
};

// Number of rows whose joint symbol differs (replace-one adjacency is
// distance 1).
inline absl::StatusOr<size_t> HammingDistance(const Database& a,
                                              const Database& b) {
  if (!(a.alphabet() == b.alphabet())) {
    return absl::FailedPreconditionError("databases use different alphabets");
  }
  if (a.size() != b.size()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "database lengths differ: %d vs %d", a.size(), b.size()));
  }
  size_t distance = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a.x_col()[i] != b.x_col()[i] || a.y_col()[i] != b.y_col()[i]) {
      ++distance;
    }
  }
  return distance;
}

}  // namespace sampram

#endif  // SAMPRAM_DOMAIN_H_
