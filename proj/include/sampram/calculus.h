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

// Privacy/utility arithmetic for sampling m of n rows followed by a
// gamma-diagonal PRAM channel over d joint symbols.
//
//   epsilon(n, m, gamma) = ln((n + m (gamma - 1)) / n)
//   gamma(n, m, epsilon) = 1 + (n / m) (e^epsilon - 1)
//   c                    = 1 + d / (gamma - 1)
//   E||T_hat - T||_2    <= (c sqrt(d) + 1) / sqrt(m)
//   m*                   = n (1 + sqrt(d)) (e^epsilon - 1) / d^{3/2}
//
// m* minimizes the error bound over m once gamma is tied to m through the
// privacy target.

#ifndef SAMPRAM_CALCULUS_H_
#define SAMPRAM_CALCULUS_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"

namespace sampram {

namespace internal {

inline absl::Status CheckSampleSize(double n, double m) {
  if (!(n >= 1.0) || !(m >= 1.0) || m > n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("need 1 <= m <= n, got n=%g m=%g", n, m));
  }
  return absl::OkStatus();
}

}  // namespace internal

inline absl::StatusOr<double> EpsilonOf(double n, double m, double gamma) {
  if (absl::Status s = internal::CheckSampleSize(n, m); !s.ok()) return s;
  if (!std::isfinite(gamma) || !(gamma > 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("gamma must be finite and > 1, got %g", gamma));
  }
  return std::log1p(m * (gamma - 1.0) / n);
}

inline absl::StatusOr<double> GammaFor(double n, double m, double epsilon) {
  if (absl::Status s = internal::CheckSampleSize(n, m); !s.ok()) return s;
  if (!std::isfinite(epsilon) || !(epsilon > 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("epsilon must be finite and > 0, got %g", epsilon));
  }
  return 1.0 + (n / m) * std::expm1(epsilon);
}

inline double ConditionNumberOf(double gamma, double d) {
  return 1.0 + d / (gamma - 1.0);
}

// (c sqrt(d) + 1) / sqrt(m).
inline double UtilityBound(double m, double gamma, double d) {
  return (ConditionNumberOf(gamma, d) * std::sqrt(d) + 1.0) / std::sqrt(m);
}

// (c + 1) / sqrt(m): the bound with the l2-norm ratio of the PRAM term
// replaced by one. Heuristic, not a proven bound; it tracks the empirical
// error about a factor sqrt(d) below UtilityBound().
inline double TightUtilityBound(double m, double gamma, double d) {
  return (ConditionNumberOf(gamma, d) + 1.0) / std::sqrt(m);
}

struct OptimalSampleSize {
  double real = 0.0;     // closed-form, unclamped
  int64_t rounded = 1;   // nearest integer clamped to [1, n]
};

inline OptimalSampleSize OptimalM(double n, double epsilon, double d) {
  OptimalSampleSize out;
  out.real = n * (1.0 + std::sqrt(d)) * std::expm1(epsilon) / std::pow(d, 1.5);
  const double clamped = std::clamp(std::round(out.real), 1.0, n);
  out.rounded = static_cast<int64_t>(clamped);
  return out;
}

// The (n, m, gamma, epsilon, d) tuple tied together by EpsilonOf().
class PrivacySpec {
 public:
  static absl::StatusOr<PrivacySpec> FromGamma(double n, double m,
                                               double gamma, double d) {
    absl::StatusOr<double> eps = EpsilonOf(n, m, gamma);
    if (!eps.ok()) return eps.status();
    if (!(d >= 2.0)) {
      return absl::InvalidArgumentError("joint cardinality must be >= 2");
    }
    return PrivacySpec(n, m, gamma, *eps, d);
  }

  static absl::StatusOr<PrivacySpec> FromEpsilon(double n, double m,
                                                 double epsilon, double d) {
    absl::StatusOr<double> gamma = GammaFor(n, m, epsilon);
    if (!gamma.ok()) return gamma.status();
    if (!(d >= 2.0)) {
      return absl::InvalidArgumentError("joint cardinality must be >= 2");
    }
    return PrivacySpec(n, m, *gamma, epsilon, d);
  }

  double n() const { return n_; }
  double m() const { return m_; }
  double gamma() const { return gamma_; }
  double epsilon() const { return epsilon_; }
  double d() const { return d_; }
  double condition_number() const { return ConditionNumberOf(gamma_, d_); }
  double bound() const { return UtilityBound(m_, gamma_, d_); }
  double tight_bound() const { return TightUtilityBound(m_, gamma_, d_); }

 private:
  PrivacySpec(double n, double m, double gamma, double epsilon, double d)
      : n_(n), m_(m), gamma_(gamma), epsilon_(epsilon), d_(d) {}

  double n_;
  double m_;
  double gamma_;
  double epsilon_;
  double d_;
};

}  // namespace sampram

#endif  // SAMPRAM_CALCULUS_H_
