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

// Monte-Carlo sweeps of the full protocol over (epsilon, m) grids.
//
// At each point gamma is set from the privacy target via GammaFor(), the
// protocol runs `trials` times, and the l2 error of the researcher's raw
// estimate against the joint type of the full database is averaged. Trial t
// of point (i, j) always uses seed DeriveSeed(master, {i, j, t}), so output
// does not depend on thread count or scheduling.

#ifndef SAMPRAM_EXPERIMENTS_H_
#define SAMPRAM_EXPERIMENTS_H_

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "sampram/calculus.h"
#include "sampram/domain.h"
#include "sampram/protocol.h"
#include "sampram/rng.h"
#include "sampram/status_macros.h"
#include "sampram/type_stats.h"

namespace sampram {

// One entry of an explicit m grid: a fixed count or the m* token.
struct OptimalToken {};
using MGridEntry = std::variant<size_t, OptimalToken>;

struct ExperimentPlan {
  std::string dataset;  // descriptive
  std::vector<double> epsilons;
  // Empty means the automatic grid: `auto_points` log-spaced values spanning
  // [m*/auto_span, m* * auto_span] for each epsilon.
  std::vector<MGridEntry> m_grid;
  size_t auto_points = 24;
  double auto_span = 32.0;
  size_t trials = 1000;
  uint64_t master_seed = 0;
  size_t threads = 0;  // 0: hardware concurrency
};

struct TrialResult {
  size_t m = 0;
  double epsilon = 0.0;
  double gamma = 0.0;
  size_t trial = 0;
  double l2_error = 0.0;
};

struct PointResult {
  double epsilon = 0.0;
  size_t m = 0;
  double gamma = 0.0;
  double c = 0.0;
  double mean_l2 = 0.0;
  double stderr_l2 = 0.0;
  double bound = 0.0;
  double bound_over_sqrt_d = 0.0;
  double tight_bound = 0.0;
  size_t trials = 0;
};

struct SweepResult {
  std::vector<PointResult> points;
  std::vector<std::string> warnings;
};

inline std::vector<size_t> AutoMGrid(double m_star, size_t points,
                                     double span) {
  std::vector<size_t> grid;
  for (size_t k = 0; k < points; ++k) {
    const double t =
        points == 1 ? 0.0 : 2.0 * static_cast<double>(k) / (points - 1) - 1.0;
    const double m = std::max(1.0, std::round(m_star * std::pow(span, t)));
    const size_t mi = static_cast<size_t>(m);
    if (grid.empty() || grid.back() != mi) grid.push_back(mi);
  }
  return grid;
}

namespace internal {

// Runs fn(i) for i in [0, count) on up to `threads` workers. Returns the
// error of the lowest failing index, if any.
template <typename Fn>
absl::Status ParallelFor(size_t count, size_t threads, Fn fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, std::max<size_t>(count, 1));
  std::vector<absl::Status> status(count);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < count; i = next++) status[i] = fn(i);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  for (const absl::Status& s : status) {
    if (!s.ok()) return s;
  }
  return absl::OkStatus();
}

inline PointResult Summarize(double epsilon, size_t m, double gamma, double d,
                             const std::vector<double>& errors) {
  PointResult p;
  p.epsilon = epsilon;
  p.m = m;
  p.gamma = gamma;
  p.c = ConditionNumberOf(gamma, d);
  p.trials = errors.size();
  double sum = 0.0;
  for (double e : errors) sum += e;
  p.mean_l2 = sum / static_cast<double>(errors.size());
  if (errors.size() > 1) {
    double ss = 0.0;
    for (double e : errors) ss += (e - p.mean_l2) * (e - p.mean_l2);
    const double var = ss / static_cast<double>(errors.size() - 1);
    p.stderr_l2 = std::sqrt(var / static_cast<double>(errors.size()));
  }
  p.bound = UtilityBound(static_cast<double>(m), gamma, d);
  p.bound_over_sqrt_d = p.bound / std::sqrt(d);
  p.tight_bound = TightUtilityBound(static_cast<double>(m), gamma, d);
  return p;
}

}  // namespace internal

// Runs the protocol `trials` times at one (epsilon, m) point. Trial t uses
// DeriveSeed(point_seed, {t}).
inline absl::StatusOr<std::vector<TrialResult>> RunTrials(
    const Database& db, const TypeVector& truth, double epsilon, size_t m,
    size_t trials, uint64_t point_seed, size_t threads = 0) {
  ASSIGN_OR_RETURN(double gamma,
                   GammaFor(static_cast<double>(db.size()),
                            static_cast<double>(m), epsilon));
  std::vector<TrialResult> out(trials);
  RETURN_IF_ERROR(internal::ParallelFor(trials, threads, [&](size_t t) {
    ProtocolConfig cfg{m, gamma, DeriveSeed(point_seed, {t})};
    absl::StatusOr<ProtocolRun> run = RunProtocol(db, cfg);
    if (!run.ok()) return run.status();
    absl::StatusOr<double> err = L2Error(run->estimate, truth);
    if (!err.ok()) return err.status();
    out[t] = TrialResult{m, epsilon, gamma, t, *err};
    return absl::OkStatus();
  }));
  return out;
}

inline absl::StatusOr<PointResult> RunPoint(const Database& db,
                                            const TypeVector& truth,
                                            double epsilon, size_t m,
                                            size_t trials, uint64_t point_seed,
                                            size_t threads = 0) {
  if (trials < 1) return absl::InvalidArgumentError("need trials >= 1");
  ASSIGN_OR_RETURN(std::vector<TrialResult> results,
                   RunTrials(db, truth, epsilon, m, trials, point_seed,
                             threads));
  std::vector<double> errors;
  errors.reserve(results.size());
  for (const TrialResult& r : results) errors.push_back(r.l2_error);
  return internal::Summarize(epsilon, m, results.front().gamma,
                             static_cast<double>(db.alphabet().size()),
                             errors);
}

inline absl::StatusOr<SweepResult> RunSweep(const Database& db,
                                            const ExperimentPlan& plan) {
  if (plan.epsilons.empty()) {
    return absl::InvalidArgumentError("epsilon grid is empty");
  }
  if (plan.trials < 1) return absl::InvalidArgumentError("need trials >= 1");
  ASSIGN_OR_RETURN(TypeVector truth, JointType(db));
  const double n = static_cast<double>(db.size());
  const double d = static_cast<double>(db.alphabet().size());

  SweepResult result;
  for (size_t ei = 0; ei < plan.epsilons.size(); ++ei) {
    const double eps = plan.epsilons[ei];
    if (!(eps > 0.0) || !std::isfinite(eps)) {
      return absl::InvalidArgumentError(
          absl::StrFormat("epsilon must be > 0, got %g", eps));
    }
    const OptimalSampleSize m_star = OptimalM(n, eps, d);
    std::vector<size_t> grid;
    if (plan.m_grid.empty()) {
      grid = AutoMGrid(m_star.real, plan.auto_points, plan.auto_span);
    } else {
      for (const MGridEntry& e : plan.m_grid) {
        grid.push_back(std::holds_alternative<OptimalToken>(e)
                           ? static_cast<size_t>(m_star.rounded)
                           : std::get<size_t>(e));
      }
    }
    for (size_t mi = 0; mi < grid.size(); ++mi) {
      const size_t m = grid[mi];
      if (m < 1 || m > db.size()) {
        result.warnings.push_back(absl::StrFormat(
            "skipping epsilon=%g m=%d: need 1 <= m <= n=%d", eps, m,
            db.size()));
        continue;
      }
      ASSIGN_OR_RETURN(PointResult p,
                       RunPoint(db, truth, eps, m, plan.trials,
                                DeriveSeed(plan.master_seed, {ei, mi}),
                                plan.threads));
      if (p.stderr_l2 > p.mean_l2 / 10.0) {
        result.warnings.push_back(absl::StrFormat(
            "epsilon=%g m=%d: stderr %.3g exceeds a tenth of the mean %.3g",
            eps, m, p.stderr_l2, p.mean_l2));
      }
      result.points.push_back(p);
    }
  }
  return result;
}

inline void WriteSweepCsv(const SweepResult& result, std::ostream& out) {
  out << "epsilon,m,gamma,c,mean_l2,stderr_l2,bound,bound_over_sqrt_d,"
         "tight_bound,trials\n";
  for (const PointResult& p : result.points) {
    out << absl::StrFormat("%.10g,%d,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%.10g,%d\n",
                           p.epsilon, p.m, p.gamma, p.c, p.mean_l2,
                           p.stderr_l2, p.bound, p.bound_over_sqrt_d,
                           p.tight_bound, p.trials);
  }
}

// --- errors at the predicted optimum ----------------------------------------

struct OptimalPointRow {
  double epsilon = 0.0;
  double m_star = 0.0;   // closed form, unclamped
  std::string label;     // "m*/8", "m*", "8m*"
  PointResult point;
};

inline constexpr uint64_t kOptimalPointTag = 0x6F7074;

// For each epsilon, error at the rounded m* and at the flanks m*/8 and 8 m*
// (flanks that fall outside [1, n] are skipped).
inline absl::StatusOr<std::vector<OptimalPointRow>> RunOptimalPoint(
    const Database& db, const std::vector<double>& epsilons, size_t trials,
    uint64_t master_seed, size_t threads = 0) {
  ASSIGN_OR_RETURN(TypeVector truth, JointType(db));
  const double n = static_cast<double>(db.size());
  const double d = static_cast<double>(db.alphabet().size());
  std::vector<OptimalPointRow> rows;
  struct Flank {
    const char* label;
    double factor;
  };
  constexpr Flank kFlanks[] = {{"m*/8", 0.125}, {"m*", 1.0}, {"8m*", 8.0}};
  for (size_t ei = 0; ei < epsilons.size(); ++ei) {
    const OptimalSampleSize m_star = OptimalM(n, epsilons[ei], d);
    for (size_t fi = 0; fi < 3; ++fi) {
      const double target =
          std::round(static_cast<double>(m_star.rounded) * kFlanks[fi].factor);
      if (target < 1.0 || target > n) continue;
      const size_t m = static_cast<size_t>(target);
      ASSIGN_OR_RETURN(
          PointResult p,
          RunPoint(db, truth, epsilons[ei], m, trials,
                   DeriveSeed(master_seed, {kOptimalPointTag, ei, fi}),
                   threads));
      rows.push_back({epsilons[ei], m_star.real, kFlanks[fi].label, p});
    }
  }
  return rows;
}

inline void WriteOptimalCsv(const std::vector<OptimalPointRow>& rows,
                            std::ostream& out) {
  out << "epsilon,m_star,label,m,gamma,mean_l2,stderr_l2,bound,trials\n";
  for (const OptimalPointRow& r : rows) {
    out << absl::StrFormat("%.10g,%.10g,%s,%d,%.10g,%.10g,%.10g,%.10g,%d\n",
                           r.epsilon, r.m_star, r.label, r.point.m,
                           r.point.gamma, r.point.mean_l2, r.point.stderr_l2,
                           r.point.bound, r.point.trials);
  }
}

}  // namespace sampram

#endif  // SAMPRAM_EXPERIMENTS_H_
