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

// Synchronized sampling of m row positions out of n, without replacement.
//
// Both curators call DrawPlan() with the same (n, m, seed) and obtain the same
// ordered index tuple, so their sampled columns stay row-aligned.

#ifndef SAMPRAM_SAMPLING_H_
#define SAMPRAM_SAMPLING_H_

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

namespace sampram {

class SamplingPlan {
 public:
  // Wraps an explicit index tuple (e.g. indices shared directly by the
  // curators instead of a seed). Seed is recorded as 0.
  static absl::StatusOr<SamplingPlan> FromIndices(
      size_t n, std::vector<uint32_t> indices) {
    if (indices.empty() || indices.size() > n) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "sample size m=%d must lie in [1, n=%d]", indices.size(), n));
    }
    std::vector<bool> used(n, false);
    for (uint32_t idx : indices) {
      if (idx >= n) {
        return absl::OutOfRangeError(
            absl::StrFormat("index %d outside [0, %d)", idx, n));
      }
      if (used[idx]) {
        return absl::InvalidArgumentError(
            absl::StrFormat("index %d sampled twice", idx));
      }
      used[idx] = true;
    }
    return SamplingPlan(n, 0, std::move(indices));
  }

  size_t n() const { return n_; }
  size_t m() const { return indices_.size(); }
  uint64_t seed() const { return seed_; }
  // Distinct positions in [0, n), in draw order.
  std::span<const uint32_t> indices() const { return indices_; }

 private:
  friend absl::StatusOr<SamplingPlan> DrawPlan(size_t, size_t, uint64_t);

  SamplingPlan(size_t n, uint64_t seed, std::vector<uint32_t> indices)
      : n_(n), seed_(seed), indices_(std::move(indices)) {}

  size_t n_;
  uint64_t seed_;
  std::vector<uint32_t> indices_;
};

// Partial Fisher-Yates shuffle: the first m slots of a uniformly shuffled
// [0, n) form an ordered injective m-tuple, uniform over all n!/(n-m)! tuples.
inline absl::StatusOr<SamplingPlan> DrawPlan(size_t n, size_t m,
                                             uint64_t seed) {
  if (m == 0 || m > n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample size m=%d must lie in [1, n=%d]", m, n));
  }
  if (n > UINT32_MAX) {
    return absl::InvalidArgumentError("population too large");
  }
  std::vector<uint32_t> slots(n);
  std::iota(slots.begin(), slots.end(), 0u);
  Prng rng(seed);
  for (size_t i = 0; i < m; ++i) {
    const size_t j = i + static_cast<size_t>(rng.UniformInt(n - i));
    std::swap(slots[i], slots[j]);
  }
  slots.resize(m);
  return SamplingPlan(n, seed, std::move(slots));
}

// Gathers the rows of one column at the plan's positions.
inline absl::StatusOr<std::vector<Symbol>> ApplyPlan(
    std::span<const Symbol> column, const SamplingPlan& plan) {
  if (column.size() != plan.n()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "column has %d rows, plan expects %d", column.size(), plan.n()));
  }
  std::vector<Symbol> out;
  out.reserve(plan.m());
  for (uint32_t idx : plan.indices()) out.push_back(column[idx]);
  return out;
}

inline absl::StatusOr<Database> ApplyPlan(const Database& db,
                                          const SamplingPlan& plan) {
  if (db.size() != plan.n()) {
    return absl::FailedPreconditionError(absl::StrFormat(
        "database has %d rows, plan expects %d", db.size(), plan.n()));
  }
  std::vector<Symbol> xs = ApplyPlan(db.x_col(), plan).value();
  std::vector<Symbol> ys = ApplyPlan(db.y_col(), plan).value();
  return Database::Create(db.alphabet(), std::move(xs), std::move(ys));
}

}  // namespace sampram

#endif  // SAMPRAM_SAMPLING_H_
