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

// Brute-force privacy verifier for toy instances.
//
// The released sample of the protocol is distributed as a uniform mixture,
// over every ordered injective sampling tuple pi in Theta (|Theta| =
// n!/(n-m)!), of the product channel law prod_i A[out_i, db[pi_i]]. This
// header enumerates that mixture exactly and scans every pair of databases at
// Hamming distance one for the largest likelihood ratio. It shares no code
// with the sampling or PRAM implementations it is meant to check.

#ifndef SAMPRAM_ORACLE_H_
#define SAMPRAM_ORACLE_H_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sampram/domain.h"

namespace sampram::oracle {

inline constexpr size_t kMaxRows = 6;
inline constexpr size_t kMaxSymbols = 4;
// Cap on (#databases) x |Theta| x (#outputs) for the exhaustive ratio scan.
inline constexpr double kMaxScanWork = 1e8;

// Exact law of the released length-m sequence. Outputs are indexed as base-d
// numbers, first element most significant.
struct OutputDistribution {
  size_t d = 0;
  size_t m = 0;
  std::vector<long double> probability;

  size_t Index(std::span<const size_t> output) const {
    size_t idx = 0;
    for (size_t s : output) idx = idx * d + s;
    return idx;
  }
};

namespace internal {

inline size_t IntPow(size_t base, size_t exp) {
  size_t r = 1;
  for (size_t i = 0; i < exp; ++i) r *= base;
  return r;
}

inline size_t FallingFactorial(size_t n, size_t m) {
  size_t r = 1;
  for (size_t i = 0; i < m; ++i) r *= n - i;
  return r;
}

// Calls visit(tuple) for every ordered injective m-tuple over [0, n).
inline void ForEachSampling(size_t n, size_t m,
                            const std::function<void(std::span<const size_t>)>&
                                visit) {
  std::vector<size_t> tuple(m);
  std::vector<bool> used(n, false);
  std::function<void(size_t)> rec = [&](size_t depth) {
    if (depth == m) {
      visit(tuple);
      return;
    }
    for (size_t i = 0; i < n; ++i) {
      if (used[i]) continue;
      used[i] = true;
      tuple[depth] = i;
      rec(depth + 1);
      used[i] = false;
    }
  };
  rec(0);
}

// rows: flat joint symbols of the database.
inline OutputDistribution Enumerate(std::span<const size_t> rows, size_t d,
                                    size_t m, long double gamma) {
  const size_t n = rows.size();
  const size_t outputs = IntPow(d, m);
  const long double q = gamma + static_cast<long double>(d) - 1.0L;
  // Probability of a fixed output given k agreeing positions: gamma^k / q^m.
  std::vector<long double> by_matches(m + 1);
  for (size_t k = 0; k <= m; ++k) {
    by_matches[k] = std::pow(gamma, static_cast<long double>(k)) /
                    std::pow(q, static_cast<long double>(m));
  }
  OutputDistribution dist{d, m, std::vector<long double>(outputs, 0.0L)};
  std::vector<size_t> digits(m);
  const long double weight =
      1.0L / static_cast<long double>(FallingFactorial(n, m));
  ForEachSampling(n, m, [&](std::span<const size_t> pi) {
    for (size_t o = 0; o < outputs; ++o) {
      size_t rest = o;
      size_t matches = 0;
      for (size_t i = m; i-- > 0;) {
        if (rest % d == rows[pi[i]]) ++matches;
        rest /= d;
      }
      dist.probability[o] += weight * by_matches[matches];
    }
  });
  return dist;
}

}  // namespace internal

inline absl::StatusOr<OutputDistribution> ExactOutputDistribution(
    const Database& db, size_t m, double gamma) {
  const size_t n = db.size();
  const size_t d = db.alphabet().size();
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError("gamma must be finite and > 1");
  }
  if (m < 1 || m > n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample size m=%d must lie in [1, n=%d]", m, n));
  }
  if (n > kMaxRows || d > kMaxSymbols) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "exact enumeration limited to n <= %d rows and d <= %d symbols "
        "(got n=%d, d=%d)",
        kMaxRows, kMaxSymbols, n, d));
  }
  std::vector<size_t> rows(n);
  for (size_t i = 0; i < n; ++i) rows[i] = db.joint(i);
  return internal::Enumerate(rows, d, m, gamma);
}

struct RatioReport {
  size_t n = 0;
  size_t m = 0;
  size_t d = 0;
  double gamma = 0.0;
  long double max_ratio = 0.0L;
  // (n + m (gamma - 1)) / n
  long double bound = 0.0L;
  // Witness of the maximum, as flat symbols.
  std::vector<size_t> db_numerator;
  std::vector<size_t> db_denominator;
  std::vector<size_t> output;
};

inline long double TheoremBound(size_t n, size_t m, long double gamma) {
  return (static_cast<long double>(n) +
          static_cast<long double>(m) * (gamma - 1.0L)) /
         static_cast<long double>(n);
}

// Max over databases at Hamming distance 1 and over outputs of
// P(out | db) / P(out | db').
inline absl::StatusOr<RatioReport> WorstCaseRatio(size_t n, size_t m,
                                                  double gamma, size_t d) {
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError("gamma must be finite and > 1");
  }
  if (d < 2) return absl::InvalidArgumentError("need d >= 2");
  if (m < 1 || m > n) {
    return absl::InvalidArgumentError(
        absl::StrFormat("sample size m=%d must lie in [1, n=%d]", m, n));
  }
  if (n > kMaxRows || d > kMaxSymbols) {
    return absl::ResourceExhaustedError(absl::StrFormat(
        "exact enumeration limited to n <= %d rows and d <= %d symbols",
        kMaxRows, kMaxSymbols));
  }
  const size_t databases = internal::IntPow(d, n);
  const double work = static_cast<double>(databases) *
                      static_cast<double>(internal::FallingFactorial(n, m)) *
                      static_cast<double>(internal::IntPow(d, m));
  if (work > kMaxScanWork) {
    return absl::ResourceExhaustedError(
        absl::StrFormat("ratio scan for n=%d m=%d d=%d too large", n, m, d));
  }

  auto decode = [&](size_t code) {
    std::vector<size_t> rows(n);
    for (size_t i = n; i-- > 0;) {
      rows[i] = code % d;
      code /= d;
    }
    return rows;
  };

  std::vector<OutputDistribution> dists;
  dists.reserve(databases);
  for (size_t code = 0; code < databases; ++code) {
    dists.push_back(internal::Enumerate(decode(code), d, m, gamma));
  }

  RatioReport report;
  report.n = n;
  report.m = m;
  report.d = d;
  report.gamma = gamma;
  report.bound = TheoremBound(n, m, gamma);
  size_t best_a = 0, best_b = 0, best_out = 0;
  for (size_t code = 0; code < databases; ++code) {
    size_t place = 1;
    const std::vector<size_t> rows = decode(code);
    for (size_t k = n; k-- > 0;) {
      for (size_t s = 0; s < d; ++s) {
        if (s == rows[k]) continue;
        const size_t neighbor = code - rows[k] * place + s * place;
        const auto& pa = dists[code].probability;
        const auto& pb = dists[neighbor].probability;
        for (size_t o = 0; o < pa.size(); ++o) {
          const long double r = pa[o] / pb[o];
          if (r > report.max_ratio) {
            report.max_ratio = r;
            best_a = code;
            best_b = neighbor;
            best_out = o;
          }
        }
      }
      place *= d;
    }
  }
  report.db_numerator = decode(best_a);
  report.db_denominator = decode(best_b);
  report.output.resize(m);
  for (size_t i = m; i-- > 0;) {
    report.output[i] = best_out % d;
    best_out /= d;
  }
  return report;
}

// Likelihood ratio on the tight configuration: db = (b, a, ..., a) against
// db' = (a, ..., a), output (b, ..., b), with a = 0 and b = 1.
inline absl::StatusOr<long double> TightExampleRatio(size_t n, size_t m,
                                                     double gamma, size_t d) {
  if (d < 2 || d > kMaxSymbols || n > kMaxRows || m < 1 || m > n) {
    return absl::InvalidArgumentError("tight example outside oracle range");
  }
  if (!(gamma > 1.0) || !std::isfinite(gamma)) {
    return absl::InvalidArgumentError("gamma must be finite and > 1");
  }
  std::vector<size_t> with_b(n, 0);
  with_b[0] = 1;
  const std::vector<size_t> all_a(n, 0);
  const OutputDistribution p = internal::Enumerate(with_b, d, m, gamma);
  const OutputDistribution p_dot = internal::Enumerate(all_a, d, m, gamma);
  const std::vector<size_t> out(m, 1);
  const size_t idx = p.Index(out);
  return p.probability[idx] / p_dot.probability[idx];
}

}  // namespace sampram::oracle

#endif  // SAMPRAM_ORACLE_H_
