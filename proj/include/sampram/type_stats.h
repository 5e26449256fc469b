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

// Empirical distributions ("types") over the joint alphabet.

#ifndef SAMPRAM_TYPE_STATS_H_
#define SAMPRAM_TYPE_STATS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <span>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sampram/domain.h"

namespace sampram {

inline constexpr double kProperSumTolerance = 1e-12;
inline constexpr double kRawSumTolerance = 1e-9;

// A vector indexed by flat joint index. A proper type is a probability
// vector; a raw estimate (the output of channel inversion) still sums to one
// but may have negative entries.
class TypeVector {
 public:
  enum class Kind { kProper, kRawEstimate };

  static absl::StatusOr<TypeVector> Create(Alphabet alphabet,
                                           std::vector<double> values,
                                           Kind kind) {
    if (values.size() != alphabet.size()) {
      return absl::FailedPreconditionError(absl::StrFormat(
          "type vector has %d entries, alphabet has %d", values.size(),
          alphabet.size()));
    }
    double sum = 0.0;
    for (double v : values) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError("type vector entry is not finite");
      }
      if (kind == Kind::kProper && (v < 0.0 || v > 1.0)) {
        return absl::InvalidArgumentError(
            absl::StrFormat("proper type entry %g outside [0, 1]", v));
      }
      sum += v;
    }
    const double tol =
        kind == Kind::kProper ? kProperSumTolerance : kRawSumTolerance;
    if (std::abs(sum - 1.0) > tol) {
      return absl::InvalidArgumentError(
          absl::StrFormat("type vector sums to %.17g, not 1", sum));
    }
    return TypeVector(std::move(alphabet), std::move(values), kind);
  }

  const Alphabet& alphabet() const { return alphabet_; }
  std::span<const double> values() const { return values_; }
  double operator[](size_t flat) const { return values_[flat]; }
  size_t size() const { return values_.size(); }
  Kind kind() const { return kind_; }
  bool is_proper() const { return kind_ == Kind::kProper; }

 private:
  TypeVector(Alphabet alphabet, std::vector<double> values, Kind kind)
      : alphabet_(std::move(alphabet)), values_(std::move(values)), kind_(kind) {}

  Alphabet alphabet_;
  std::vector<double> values_;
  Kind kind_;
};

// Joint type: fraction of rows equal to each joint symbol.
inline absl::StatusOr<TypeVector> JointType(const Database& db) {
  const size_t n = db.size();
  if (n == 0) return absl::InvalidArgumentError("empty database");
  std::vector<size_t> counts(db.alphabet().size(), 0);
  for (size_t i = 0; i < n; ++i) ++counts[db.joint(i)];
  std::vector<double> values(counts.size());
  for (size_t f = 0; f < counts.size(); ++f) {
    values[f] = static_cast<double>(counts[f]) / static_cast<double>(n);
  }
  return TypeVector::Create(db.alphabet(), std::move(values),
                            TypeVector::Kind::kProper);
}

inline double L1Norm(const TypeVector& t) {
  double s = 0.0;
  for (double v : t.values()) s += std::abs(v);
  return s;
}

inline double L2Norm(const TypeVector& t) {
  double s = 0.0;
  for (double v : t.values()) s += v * v;
  return std::sqrt(s);
}

inline absl::StatusOr<double> L2Error(const TypeVector& estimate,
                                      const TypeVector& truth) {
  if (!(estimate.alphabet() == truth.alphabet())) {
    return absl::FailedPreconditionError(
        "estimate and truth use different alphabets");
  }
  double s = 0.0;
  for (size_t f = 0; f < truth.size(); ++f) {
    const double diff = estimate[f] - truth[f];
    s += diff * diff;
  }
  return std::sqrt(s);
}

// Euclidean projection of a raw estimate onto the probability simplex
// (sort-and-threshold). Optional post-processing; the experiment harness
// reports errors of the unprojected estimate.
inline TypeVector ProjectToSimplex(const TypeVector& raw) {
  std::vector<double> sorted(raw.values().begin(), raw.values().end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double cumulative = 0.0;
  double theta = 0.0;
  for (size_t k = 0; k < sorted.size(); ++k) {
    cumulative += sorted[k];
    const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) theta = candidate;
  }
  std::vector<double> out(raw.size());
  for (size_t f = 0; f < raw.size(); ++f) {
    out[f] = std::max(raw[f] - theta, 0.0);
  }
  const double total = std::accumulate(out.begin(), out.end(), 0.0);
  for (double& v : out) v = std::min(v / total, 1.0);
  return TypeVector::Create(raw.alphabet(), std::move(out),
                            TypeVector::Kind::kProper)
      .value();
}

}  // namespace sampram

#endif  // SAMPRAM_TYPE_STATS_H_
