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

// End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
// exits non-zero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "Eigen/Dense"
#include "absl/strings/str_format.h"
#include "moments.h"
#include "sampram/sampram.h"

namespace sampram {
namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void Report(int id, const std::string& name,
            const std::function<Outcome()>& check) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o = check();
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  if (!o.pass) ++failures;
  std::printf("[%s] %d. %s (%.2fs): %s\n", o.pass ? "PASS" : "FAIL", id,
              name.c_str(), secs, o.detail.c_str());
  std::fflush(stdout);
}

Outcome Fail(const absl::Status& s) { return {false, std::string(s.message())}; }

// --- 1 ----------------------------------------------------------------------

Outcome PrivacyOracle() {
  const auto start = std::chrono::steady_clock::now();
  long double worst_slack = -1e300L;
  long double worst_tight_gap = 0.0L;
  int configs = 0;
  for (size_t n = 2; n <= 4; ++n) {
    for (size_t m = 1; m <= n; ++m) {
      for (double gamma : {1.5, 3.0, 10.0}) {
        for (size_t d = 2; d <= 4; ++d) {
          absl::StatusOr<oracle::RatioReport> r =
              oracle::WorstCaseRatio(n, m, gamma, d);
          if (!r.ok()) return Fail(r.status());
          worst_slack = std::max(worst_slack, r->max_ratio - r->bound);
          absl::StatusOr<long double> tight =
              oracle::TightExampleRatio(n, m, gamma, d);
          if (!tight.ok()) return Fail(tight.status());
          worst_tight_gap =
              std::max(worst_tight_gap, std::fabs(*tight - r->bound));
          ++configs;
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  const bool pass = worst_slack <= 1e-9L && worst_tight_gap <= 1e-9L &&
                    secs < 60.0;
  return {pass,
          absl::StrFormat("%d configs, max(ratio - bound) = %.3Le, "
                          "|tight - bound| <= %.3Le",
                          configs, worst_slack, worst_tight_gap)};
}

// --- 2 ----------------------------------------------------------------------

Outcome Commutation() {
  const auto start = std::chrono::steady_clock::now();
  absl::StatusOr<Alphabet> a = Alphabet::Create(2, 2);
  double worst = 0.0;
  int cases = 0;
  for (double gamma : {1.5, 3.0, 10.0}) {
    absl::StatusOr<PramChannel> ch = PramChannel::Create(*a, gamma);
    if (!ch.ok()) return Fail(ch.status());
    for (Symbol v = 0; v < 2; ++v) {
      for (Symbol w = 0; w < 2; ++w) {
        const ProtocolMessage ka{MessageKind::kKeyRelease, Role::kAlice,
                                 EncodeKey(std::vector<Symbol>{v})};
        const ProtocolMessage kb{MessageKind::kKeyRelease, Role::kBob,
                                 EncodeKey(std::vector<Symbol>{w})};
        const PadKey pv = PadKey::Create(2, {v}).value();
        const PadKey pw = PadKey::Create(2, {w}).value();
        for (size_t in = 0; in < 4; ++in) {
          const std::vector<Symbol> x = {static_cast<Symbol>(in / 2)};
          const std::vector<Symbol> y = {static_cast<Symbol>(in % 2)};
          const size_t padded =
              Encrypt(x, pv).value()[0] * 2 + Encrypt(y, pw).value()[0];
          std::vector<double> law(4, 0.0);
          for (size_t out = 0; out < 4; ++out) {
            const ProtocolMessage data{
                MessageKind::kSanitizedData, Role::kServer,
                EncodeSanitized(
                    std::vector<Symbol>{static_cast<Symbol>(out / 2)},
                    std::vector<Symbol>{static_cast<Symbol>(out % 2)})};
            absl::StatusOr<Database> row = DecryptSanitized(data, ka, kb, *ch);
            if (!row.ok()) return Fail(row.status());
            law[row->joint(0)] += ch->Entry(out, padded);
          }
          for (size_t out = 0; out < 4; ++out) {
            worst = std::max(worst, std::abs(law[out] - ch->Entry(out, in)));
          }
          ++cases;
        }
      }
    }
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return {worst <= 1e-12 && secs < 1.0,
          absl::StrFormat("%d key/input cases over 3 gammas, max deviation "
                          "%.3e",
                          cases, worst)};
}

// --- 3 ----------------------------------------------------------------------

Outcome EstimatorAlgebra() {
  Prng rng(3);
  double worst_solve = 0.0, worst_cond = 0.0;
  for (size_t d : {2, 6, 24, 96}) {
    const Alphabet a = Alphabet::Create(d, 1).value();
    for (double gamma : {1.5, 5.0, 100.0}) {
      const PramChannel ch = PramChannel::Create(a, gamma).value();
      const std::vector<double> flat = ch.DenseMatrix();
      Eigen::MatrixXd dense(d, d);
      for (size_t r = 0; r < d; ++r) {
        for (size_t c = 0; c < d; ++c) dense(r, c) = flat[r * d + c];
      }
      std::vector<double> t(d);
      double s = 0.0;
      for (double& v : t) s += (v = rng.UniformDouble());
      for (double& v : t) v /= s;
      double head = 0.0;
      for (size_t i = 0; i + 1 < d; ++i) head += t[i];
      t.back() = 1.0 - head;
      const TypeVector t_hat =
          TypeVector::Create(a, t, TypeVector::Kind::kProper).value();
      const TypeVector est = ChannelInvert(ch, t_hat).value();
      const Eigen::VectorXd x = dense.partialPivLu().solve(
          Eigen::Map<const Eigen::VectorXd>(t.data(), d));
      for (size_t i = 0; i < d; ++i) {
        worst_solve = std::max(worst_solve, std::abs(est[i] - x(i)));
      }
      const Eigen::VectorXd sv =
          Eigen::JacobiSVD<Eigen::MatrixXd>(dense).singularValues();
      worst_cond = std::max(
          worst_cond, std::abs(ConditionNumber(ch) - sv(0) / sv(d - 1)));
    }
  }
  return {worst_solve <= 1e-10 && worst_cond <= 1e-8,
          absl::StrFormat("max |A^-1 closed form - LU solve| = %.3e, "
                          "max |c - sigma_max/sigma_min| = %.3e",
                          worst_solve, worst_cond)};
}

// --- 4, 5, 6 ----------------------------------------------------------------

constexpr size_t kSweepTrials = 200;
const std::vector<double> kEpsilons = {0.1, 0.5, 1.0};

struct DatasetRun {
  std::string name;
  Database db;
  SweepResult sweep;
  std::vector<OptimalPointRow> optimal;
};

absl::StatusOr<DatasetRun> RunDataset(const std::string& name, Database db,
                                      uint64_t seed) {
  ExperimentPlan plan;
  plan.dataset = name;
  plan.epsilons = kEpsilons;
  plan.trials = kSweepTrials;
  plan.master_seed = seed;
  ASSIGN_OR_RETURN(SweepResult sweep, RunSweep(db, plan));
  ASSIGN_OR_RETURN(std::vector<OptimalPointRow> optimal,
                   RunOptimalPoint(db, kEpsilons, kSweepTrials, seed));
  return DatasetRun{name, std::move(db), std::move(sweep), std::move(optimal)};
}

Outcome BoundHolds(const std::vector<DatasetRun>& runs) {
  int points = 0, violations = 0;
  double max_ratio = 0.0;
  for (const DatasetRun& r : runs) {
    for (const PointResult& p : r.sweep.points) {
      ++points;
      if (!(p.mean_l2 <= p.bound)) ++violations;
      max_ratio = std::max(max_ratio, p.mean_l2 / p.bound);
    }
  }
  return {points > 0 && violations == 0,
          absl::StrFormat("%d points (%d trials each), %d above the bound, "
                          "max mean/bound = %.3f",
                          points, kSweepTrials, violations, max_ratio)};
}

Outcome OptimalAgreement(const std::vector<DatasetRun>& runs) {
  bool pass = true;
  std::string detail;
  for (const DatasetRun& r : runs) {
    const double n = static_cast<double>(r.db.size());
    const double d = static_cast<double>(r.db.alphabet().size());
    for (double eps : kEpsilons) {
      const double m_star = OptimalM(n, eps, d).real;
      const PointResult* best = nullptr;
      for (const PointResult& p : r.sweep.points) {
        if (p.epsilon != eps) continue;
        if (best == nullptr || p.mean_l2 < best->mean_l2) best = &p;
      }
      if (best == nullptr) return {false, "no sweep points"};
      const double factor = static_cast<double>(best->m) / m_star;
      const bool grid_ok = factor >= 0.5 && factor <= 2.0;

      std::map<std::string, const PointResult*> flank;
      for (const OptimalPointRow& row : r.optimal) {
        if (row.epsilon == eps) flank[row.label] = &row.point;
      }
      bool flank_ok = flank.size() == 3;
      double z_min = 0.0;
      if (flank_ok) {
        const PointResult& mid = *flank["m*"];
        z_min = 1e300;
        for (const char* side : {"m*/8", "8m*"}) {
          const PointResult& f = *flank[side];
          const double se = std::hypot(mid.stderr_l2, f.stderr_l2);
          const double z = (f.mean_l2 - mid.mean_l2) / se;
          z_min = std::min(z_min, z);
        }
        flank_ok = z_min > 3.0;
      }
      pass = pass && grid_ok && flank_ok;
      detail += absl::StrFormat(
          "%s eps=%.1f: argmin m=%d vs m*=%.1f (x%.2f), flank z>=%.1f; ",
          r.name, eps, best->m, m_star, factor, z_min);
    }
  }
  return {pass, detail};
}

Outcome Looseness(const std::vector<DatasetRun>& runs) {
  bool pass = true;
  std::string detail;
  for (const DatasetRun& r : runs) {
    const double sqrt_d = std::sqrt(static_cast<double>(r.db.alphabet().size()));
    for (const OptimalPointRow& row : r.optimal) {
      if (row.label != "m*") continue;
      const double ratio = row.point.bound / row.point.mean_l2;
      const bool ok = ratio >= sqrt_d / 3.0 && ratio <= 3.0 * sqrt_d;
      pass = pass && ok;
      detail += absl::StrFormat("%s eps=%.1f: bound/error=%.2f; ", r.name,
                                row.epsilon, ratio);
    }
  }
  detail += absl::StrFormat("window [%.2f, %.2f]", std::sqrt(24.0) / 3,
                            3 * std::sqrt(24.0));
  return {pass, detail};
}

// --- 7 ----------------------------------------------------------------------

Outcome DatasetFidelity(const Database& adult) {
  absl::StatusOr<Database> peaky =
      GenerateSynthetic({Shape::kPeaky, 45222, 24, DeriveSeed(7, {1})});
  if (!peaky.ok()) return Fail(peaky.status());
  const TypeVector t = JointType(*peaky).value();
  double top = 0.0;
  for (double v : t.values()) top = std::max(top, v);
  const bool pass = adult.size() == 45222 && adult.alphabet().size() == 24 &&
                    std::abs(top - 0.90) <= 0.005;
  return {pass, absl::StrFormat("Adult n=%d d=%d; peaky top cell %.4f",
                                adult.size(), adult.alphabet().size(), top)};
}

// --- 8 ----------------------------------------------------------------------

Outcome SamplingMoments() {
  const auto start = std::chrono::steady_clock::now();
  const Alphabet a = Alphabet::Create(3, 2).value();
  std::vector<size_t> joint(200);
  Prng rng(8);
  for (size_t& s : joint) s = rng.UniformDouble() < 0.4 ? 5 : rng.UniformInt(6);
  const Database db = Database::FromJoint(a, joint).value();
  const TypeVector truth = JointType(db).value();
  constexpr size_t kM = 20;
  std::vector<testing_util::Moments> cells(a.size());
  for (uint64_t t = 0; t < 20000; ++t) {
    const SamplingPlan plan = DrawPlan(db.size(), kM, DeriveSeed(80, {t})).value();
    const TypeVector s = JointType(ApplyPlan(db, plan).value()).value();
    for (size_t f = 0; f < a.size(); ++f) cells[f].Add(s[f]);
  }
  double worst_bias = 0.0, worst_var = -1e300;
  for (size_t f = 0; f < a.size(); ++f) {
    worst_bias = std::max(
        worst_bias, std::abs(cells[f].mean() - truth[f]) / cells[f].stderr_mean());
    worst_var = std::max(worst_var, (cells[f].variance() - truth[f] / kM) /
                                        cells[f].stderr_variance());
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return {worst_bias <= 3.0 && worst_var <= 3.0 && secs < 60.0,
          absl::StrFormat("max |bias|/se = %.2f, max (var - T/m)/se = %.2f",
                          worst_bias, worst_var)};
}

Outcome PramMoments() {
  const auto start = std::chrono::steady_clock::now();
  const PramChannel ch =
      PramChannel::Create(Alphabet::Create(3, 2).value(), 4.0).value();
  const size_t d = ch.dimension();
  std::vector<size_t> sample;
  for (size_t i = 0; i < 30; ++i) sample.push_back((i * 7 + i / 4) % d);
  const double m = static_cast<double>(sample.size());
  const Database db = Database::FromJoint(ch.alphabet(), sample).value();
  const TypeVector sampled = JointType(db).value();
  std::vector<testing_util::Moments> observed(d), estimate(d);
  for (uint64_t t = 0; t < 20000; ++t) {
    const Database out = Perturb(db, ch, DeriveSeed(81, {t})).value();
    const TypeVector obs = JointType(out).value();
    const TypeVector est = ChannelInvert(ch, obs).value();
    for (size_t f = 0; f < d; ++f) {
      observed[f].Add(obs[f]);
      estimate[f].Add(est[f]);
    }
  }
  double worst_bias = 0.0, worst_var = -1e300;
  for (size_t f = 0; f < d; ++f) {
    double bound = 0.0;
    for (size_t g = 0; g < d; ++g) {
      const double a = ch.Entry(f, g);
      bound += sampled[g] * a * (1.0 - a);
    }
    bound /= m;
    worst_bias =
        std::max(worst_bias, std::abs(estimate[f].mean() - sampled[f]) /
                                 estimate[f].stderr_mean());
    worst_var = std::max(worst_var, (observed[f].variance() - bound) /
                                        observed[f].stderr_variance());
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start)
                          .count();
  return {worst_bias <= 3.0 && worst_var <= 3.0 && secs < 60.0,
          absl::StrFormat("max |bias|/se = %.2f, max (var - bound)/se = %.2f",
                          worst_bias, worst_var)};
}

// --- 9 ----------------------------------------------------------------------

Outcome Reproducibility(const Database& adult) {
  ExperimentPlan plan;
  plan.epsilons = kEpsilons;
  plan.auto_points = 8;
  plan.trials = 20;
  plan.master_seed = 0x5EED;
  std::vector<std::string> outputs;
  for (size_t threads : {1, 1, 3}) {
    plan.threads = threads;
    absl::StatusOr<SweepResult> r = RunSweep(adult, plan);
    if (!r.ok()) return Fail(r.status());
    std::ostringstream out;
    WriteSweepCsv(*r, out);
    outputs.push_back(out.str());
  }
  const bool pass = outputs[0] == outputs[1] && outputs[0] == outputs[2];
  return {pass, absl::StrFormat("3 runs (threads 1, 1, 3), %d CSV bytes each, "
                                "identical=%s",
                                outputs[0].size(), pass ? "yes" : "no")};
}

int Main() {
  absl::StatusOr<IngestResult> adult = IngestAdultDir(SAMPRAM_ADULT_DIR);
  if (!adult.ok()) {
    std::printf("[FAIL] cannot load Adult data: %s\n",
                std::string(adult.status().message()).c_str());
    return 1;
  }
  Report(1, "privacy bound exact on the enumeration grid", PrivacyOracle);
  Report(2, "pad/perturb/unpad commutation", Commutation);
  Report(3, "estimator algebra vs dense oracle", EstimatorAlgebra);

  const auto sweep_start = std::chrono::steady_clock::now();
  std::vector<DatasetRun> runs;
  absl::StatusOr<Database> uniform =
      GenerateSynthetic({Shape::kUniform, 45222, 24, DeriveSeed(4, {0}), 6, 4});
  for (auto& [name, db] :
       std::vector<std::pair<std::string, absl::StatusOr<Database>>>{
           {"uci", adult->db}, {"uniform", uniform}}) {
    absl::StatusOr<DatasetRun> run =
        db.ok() ? RunDataset(name, *db, 2024) : db.status();
    if (!run.ok()) {
      std::printf("[FAIL] sweep on %s: %s\n", name.c_str(),
                  std::string(run.status().message()).c_str());
      return 1;
    }
    runs.push_back(*std::move(run));
  }
  std::printf("sweeps over uci and uniform, eps 0.1/0.5/1.0, %d trials per "
              "point: %.2fs\n",
              static_cast<int>(kSweepTrials),
              std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            sweep_start)
                  .count());
  Report(4, "utility bound holds empirically",
         [&] { return BoundHolds(runs); });
  Report(5, "empirical optimum agrees with m*",
         [&] { return OptimalAgreement(runs); });
  Report(6, "bound looseness about sqrt(d) at m*",
         [&] { return Looseness(runs); });
  Report(7, "dataset fidelity", [&] { return DatasetFidelity(adult->db); });
  Report(8, "sampling moments (20000 trials)", SamplingMoments);
  Report(8, "pram moments (20000 trials)", PramMoments);
  Report(9, "sweep CSV reproducible", [&] { return Reproducibility(adult->db); });
  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED",
              failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace
}  // namespace sampram

int main() { return sampram::Main(); }
