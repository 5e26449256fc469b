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

// Command-line front end:
//
//   sampram calc           privacy/utility arithmetic for one configuration
//   sampram verify-privacy exhaustive likelihood-ratio check on toy sizes
//   sampram sweep          Monte-Carlo error sweep over (epsilon, m)
//   sampram optimal        errors at m* and its flanks m*/8, 8 m*
//   sampram ingest         quantize UCI Adult and dump x_index,y_index CSV

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "absl/strings/numbers.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "sampram/sampram.h"

namespace {

using ::sampram::Database;

absl::StatusOr<uint64_t> ParseSeed(const std::string& text) {
  uint64_t v = 0;
  if (text.size() > 2 && (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0)) {
    const char* begin = text.data() + 2;
    const char* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, v, 16);
    if (ec == std::errc() && ptr == end) return v;
  } else if (absl::SimpleAtoi(text, &v)) {
    return v;
  }
  return absl::InvalidArgumentError("bad seed: " + text);
}

absl::StatusOr<std::vector<double>> ParseDoubles(const std::string& text) {
  std::vector<double> out;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    double v;
    if (!absl::SimpleAtod(part, &v)) {
      return absl::InvalidArgumentError(absl::StrFormat("bad number: %s", part));
    }
    out.push_back(v);
  }
  if (out.empty()) return absl::InvalidArgumentError("empty list: " + text);
  return out;
}

absl::StatusOr<std::vector<sampram::MGridEntry>> ParseMGrid(
    const std::string& text) {
  std::vector<sampram::MGridEntry> grid;
  if (text == "auto") return grid;
  for (absl::string_view part : absl::StrSplit(text, ',', absl::SkipEmpty())) {
    if (part == "m*") {
      grid.emplace_back(sampram::OptimalToken{});
      continue;
    }
    size_t v;
    if (!absl::SimpleAtoi(part, &v) || v == 0) {
      return absl::InvalidArgumentError(
          absl::StrFormat("bad m grid entry: %s", part));
    }
    grid.emplace_back(v);
  }
  if (grid.empty()) return absl::InvalidArgumentError("empty m grid");
  return grid;
}

struct DatasetArgs {
  std::string dataset = "uniform";
  size_t n = 45222;
  size_t d = 24;
  size_t x_card = 0;
  size_t y_card = 0;
  std::string ingest_config;
};

void AddDatasetOptions(CLI::App* app, DatasetArgs& args) {
  app->add_option("--dataset", args.dataset,
                  "uniform|linear|peaky, or a UCI Adult directory/file list")
      ->required();
  app->add_option("--n", args.n, "rows for synthetic data");
  app->add_option("--d", args.d, "joint cardinality for synthetic data");
  app->add_option("--x-card", args.x_card, "synthetic |X| (default d)");
  app->add_option("--y-card", args.y_card, "synthetic |Y| (default 1)");
  app->add_option("--ingest-config", args.ingest_config,
                  "JSON quantization config for Adult ingestion");
}

absl::StatusOr<Database> LoadDataset(const DatasetArgs& args, uint64_t seed) {
  absl::StatusOr<sampram::Shape> shape = sampram::ParseShape(args.dataset);
  if (shape.ok()) {
    sampram::SyntheticSpec spec;
    spec.shape = *shape;
    spec.n = args.n;
    spec.d = args.d;
    spec.seed = sampram::DeriveSeed(seed, {0x64617461});
    spec.x_card = args.x_card;
    spec.y_card = args.y_card;
    return sampram::GenerateSynthetic(spec);
  }
  std::vector<std::string> paths;
  if (std::filesystem::is_directory(args.dataset)) {
    paths = {args.dataset + "/adult.data", args.dataset + "/adult.test"};
  } else {
    paths = absl::StrSplit(args.dataset, ',', absl::SkipEmpty());
  }
  sampram::IngestSpec spec = sampram::DefaultAdultSpec(paths);
  if (!args.ingest_config.empty()) {
    std::ifstream in(args.ingest_config);
    if (!in) return absl::NotFoundError("cannot open " + args.ingest_config);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      return absl::InvalidArgumentError(e.what());
    }
    absl::StatusOr<sampram::IngestSpec> parsed =
        sampram::IngestSpecFromJson(j, paths);
    if (!parsed.ok()) return parsed.status();
    spec = *std::move(parsed);
  }
  absl::StatusOr<sampram::IngestResult> result = sampram::IngestAdult(spec);
  if (!result.ok()) return result.status();
  std::cerr << absl::StrFormat(
      "ingested %d rows (read %d, missing %d, malformed %d), |X|=%d |Y|=%d\n",
      result->stats.rows_kept, result->stats.rows_read,
      result->stats.rows_missing, result->stats.rows_malformed,
      result->db.alphabet().x_card(), result->db.alphabet().y_card());
  return std::move(result->db);
}

int Fail(const absl::Status& s) {
  std::cerr << "error: " << s << "\n";
  return 1;
}

// --- calc -------------------------------------------------------------------

struct CalcArgs {
  double n = 0;
  double d = 0;
  std::optional<double> m;
  std::optional<double> gamma;
  std::optional<double> eps;
  bool json = false;
};

int RunCalc(const CalcArgs& a) {
  const sampram::OptimalSampleSize m_star =
      a.eps ? sampram::OptimalM(a.n, *a.eps, a.d)
            : sampram::OptimalSampleSize{};
  double m = a.m ? *a.m : static_cast<double>(m_star.rounded);
  absl::StatusOr<sampram::PrivacySpec> spec =
      absl::InvalidArgumentError("give --gamma or --eps");
  if (a.gamma && a.eps) {
    return Fail(absl::InvalidArgumentError("give only one of --gamma/--eps"));
  }
  if (a.gamma) {
    if (!a.m) return Fail(absl::InvalidArgumentError("--gamma needs --m"));
    spec = sampram::PrivacySpec::FromGamma(a.n, m, *a.gamma, a.d);
  } else if (a.eps) {
    spec = sampram::PrivacySpec::FromEpsilon(a.n, m, *a.eps, a.d);
  }
  if (!spec.ok()) return Fail(spec.status());
  const sampram::OptimalSampleSize opt =
      sampram::OptimalM(a.n, spec->epsilon(), a.d);
  if (a.json) {
    nlohmann::json j = {{"n", spec->n()},
                        {"m", spec->m()},
                        {"d", spec->d()},
                        {"epsilon", spec->epsilon()},
                        {"gamma", spec->gamma()},
                        {"c", spec->condition_number()},
                        {"bound", spec->bound()},
                        {"tight_bound", spec->tight_bound()},
                        {"m_star", opt.real},
                        {"m_star_rounded", opt.rounded}};
    std::cout << j.dump() << "\n";
  } else {
    std::cout << absl::StrFormat(
        "n            %.10g\n"
        "m            %.10g\n"
        "d            %.10g\n"
        "epsilon      %.10g\n"
        "gamma        %.10g\n"
        "c            %.10g\n"
        "bound        %.10g\n"
        "tight_bound  %.10g\n"
        "m_star       %.10g (rounded %d)\n",
        spec->n(), spec->m(), spec->d(), spec->epsilon(), spec->gamma(),
        spec->condition_number(), spec->bound(), spec->tight_bound(), opt.real,
        opt.rounded);
  }
  return 0;
}

// --- verify-privacy ---------------------------------------------------------

struct VerifyArgs {
  size_t n_max = 4;
  std::string gammas = "1.5,3,10";
  std::string ds = "2,3,4";
};

int RunVerify(const VerifyArgs& a) {
  absl::StatusOr<std::vector<double>> gammas = ParseDoubles(a.gammas);
  if (!gammas.ok()) return Fail(gammas.status());
  absl::StatusOr<std::vector<double>> ds = ParseDoubles(a.ds);
  if (!ds.ok()) return Fail(ds.status());
  std::cout << "n,m,gamma,d,bound,max_ratio,tight_example_ratio,holds\n";
  bool all = true;
  for (size_t n = 2; n <= a.n_max; ++n) {
    for (size_t m = 1; m <= n; ++m) {
      for (double g : *gammas) {
        for (double dd : *ds) {
          const size_t d = static_cast<size_t>(dd);
          absl::StatusOr<sampram::oracle::RatioReport> r =
              sampram::oracle::WorstCaseRatio(n, m, g, d);
          if (!r.ok()) return Fail(r.status());
          absl::StatusOr<long double> tight =
              sampram::oracle::TightExampleRatio(n, m, g, d);
          if (!tight.ok()) return Fail(tight.status());
          const bool holds = r->max_ratio <= r->bound + 1e-9L;
          all = all && holds;
          std::cout << absl::StrFormat(
              "%d,%d,%.6g,%d,%.12Lg,%.12Lg,%.12Lg,%s\n", n, m, g, d, r->bound,
              r->max_ratio, *tight, holds ? "yes" : "NO");
        }
      }
    }
  }
  return all ? 0 : 2;
}

// --- sweep / optimal --------------------------------------------------------

struct SweepArgs {
  DatasetArgs data;
  std::string eps = "0.1,0.5,1.0";
  std::string m = "auto";
  size_t trials = 1000;
  std::string seed = "1";
  std::string out;
  size_t threads = 0;
};

int RunSweepCommand(const SweepArgs& a) {
  absl::StatusOr<uint64_t> seed = ParseSeed(a.seed);
  if (!seed.ok()) return Fail(seed.status());
  absl::StatusOr<std::vector<double>> eps = ParseDoubles(a.eps);
  if (!eps.ok()) return Fail(eps.status());
  absl::StatusOr<std::vector<sampram::MGridEntry>> grid = ParseMGrid(a.m);
  if (!grid.ok()) return Fail(grid.status());
  absl::StatusOr<Database> db = LoadDataset(a.data, *seed);
  if (!db.ok()) return Fail(db.status());

  sampram::ExperimentPlan plan;
  plan.dataset = a.data.dataset;
  plan.epsilons = *eps;
  plan.m_grid = *grid;
  plan.trials = a.trials;
  plan.master_seed = *seed;
  plan.threads = a.threads;
  absl::StatusOr<sampram::SweepResult> result = sampram::RunSweep(*db, plan);
  if (!result.ok()) return Fail(result.status());
  for (const std::string& w : result->warnings) {
    std::cerr << "warning: " << w << "\n";
  }
  if (a.out.empty() || a.out == "-") {
    sampram::WriteSweepCsv(*result, std::cout);
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) return Fail(absl::NotFoundError("cannot write " + a.out));
    sampram::WriteSweepCsv(*result, out);
  }
  return 0;
}

int RunOptimalCommand(const SweepArgs& a) {
  absl::StatusOr<uint64_t> seed = ParseSeed(a.seed);
  if (!seed.ok()) return Fail(seed.status());
  absl::StatusOr<std::vector<double>> eps = ParseDoubles(a.eps);
  if (!eps.ok()) return Fail(eps.status());
  absl::StatusOr<Database> db = LoadDataset(a.data, *seed);
  if (!db.ok()) return Fail(db.status());
  absl::StatusOr<std::vector<sampram::OptimalPointRow>> rows =
      sampram::RunOptimalPoint(*db, *eps, a.trials, *seed, a.threads);
  if (!rows.ok()) return Fail(rows.status());
  if (a.out.empty() || a.out == "-") {
    sampram::WriteOptimalCsv(*rows, std::cout);
  } else {
    std::ofstream out(a.out, std::ios::binary);
    if (!out) return Fail(absl::NotFoundError("cannot write " + a.out));
    sampram::WriteOptimalCsv(*rows, out);
  }
  return 0;
}

// --- ingest -----------------------------------------------------------------

int RunIngest(const DatasetArgs& a, const std::string& out_path) {
  absl::StatusOr<Database> db = LoadDataset(a, 0);
  if (!db.ok()) return Fail(db.status());
  if (out_path.empty() || out_path == "-") {
    sampram::WriteDatabaseCsv(*db, std::cout);
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) return Fail(absl::NotFoundError("cannot write " + out_path));
  sampram::WriteDatabaseCsv(*db, out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling + PRAM private release of vertically partitioned data"};
  app.require_subcommand(1);

  CalcArgs calc;
  CLI::App* calc_cmd = app.add_subcommand("calc", "privacy/utility arithmetic");
  calc_cmd->add_option("--n", calc.n, "population size")->required();
  calc_cmd->add_option("--d", calc.d, "joint cardinality |X||Y|")->required();
  calc_cmd->add_option("--m", calc.m, "sample size (default m*)");
  calc_cmd->add_option("--gamma", calc.gamma, "PRAM gamma");
  calc_cmd->add_option("--eps", calc.eps, "target epsilon");
  calc_cmd->add_flag("--json", calc.json, "print one JSON record");

  VerifyArgs verify;
  CLI::App* verify_cmd = app.add_subcommand(
      "verify-privacy", "exhaustive worst-case likelihood ratios");
  verify_cmd->add_option("--n-max", verify.n_max, "largest n (from 2)");
  verify_cmd->add_option("--gammas", verify.gammas, "comma-separated gammas");
  verify_cmd->add_option("--d", verify.ds, "comma-separated joint sizes");

  SweepArgs sweep;
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "error sweep over (eps, m)");
  AddDatasetOptions(sweep_cmd, sweep.data);
  sweep_cmd->add_option("--eps", sweep.eps, "comma-separated epsilons");
  sweep_cmd->add_option("--m", sweep.m, "auto, or a list that may use m*");
  sweep_cmd->add_option("--trials", sweep.trials, "trials per point");
  sweep_cmd->add_option("--seed", sweep.seed, "master seed (decimal or 0x)");
  sweep_cmd->add_option("--out", sweep.out, "output CSV (default stdout)");
  sweep_cmd->add_option("--threads", sweep.threads, "worker threads");

  SweepArgs optimal;
  CLI::App* optimal_cmd =
      app.add_subcommand("optimal", "errors at m*, m*/8 and 8 m*");
  AddDatasetOptions(optimal_cmd, optimal.data);
  optimal_cmd->add_option("--eps", optimal.eps, "comma-separated epsilons");
  optimal_cmd->add_option("--trials", optimal.trials, "trials per point");
  optimal_cmd->add_option("--seed", optimal.seed, "master seed");
  optimal_cmd->add_option("--out", optimal.out, "output CSV (default stdout)");
  optimal_cmd->add_option("--threads", optimal.threads, "worker threads");

  DatasetArgs ingest;
  std::string ingest_out;
  CLI::App* ingest_cmd =
      app.add_subcommand("ingest", "dump a dataset as x_index,y_index CSV");
  AddDatasetOptions(ingest_cmd, ingest);
  ingest_cmd->add_option("--out", ingest_out, "output CSV (default stdout)");

  CLI11_PARSE(app, argc, argv);

  if (calc_cmd->parsed()) return RunCalc(calc);
  if (verify_cmd->parsed()) return RunVerify(verify);
  if (sweep_cmd->parsed()) return RunSweepCommand(sweep);
  if (optimal_cmd->parsed()) return RunOptimalCommand(optimal);
  if (ingest_cmd->parsed()) return RunIngest(ingest, ingest_out);
  return 1;
}
