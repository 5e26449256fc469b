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

// Dataset sources: UCI Adult ingestion with categorical quantization, and
// synthetic generators (uniform, linear, peaky).
//
// Default Adult quantization, Alice = (education, marital), Bob = (sex,
// income), giving |X| = 6, |Y| = 4, d = 24:
//
//   education  no college     Preschool .. 12th, HS-grad
//              some college   Some-college, Assoc-acdm, Assoc-voc, Bachelors
//              post-graduate  Masters, Prof-school, Doctorate
//   marital    married        Married-civ-spouse, Married-spouse-absent,
//                             Married-AF-spouse
//              single         Never-married, Divorced, Separated, Widowed
//   sex        Male, Female
//   income     <=50K, >50K    (a trailing '.' as in adult.test is accepted)
//
// Rows with "?" in any field are dropped by default, which leaves 45222 of
// the 48842 rows in adult.data + adult.test.

#ifndef SAMPRAM_DATA_H_
#define SAMPRAM_DATA_H_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/ascii.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "json.hpp"
#include "sampram/domain.h"
#include "sampram/rng.h"
#include "sampram/status_macros.h"

namespace sampram {

// --- UCI Adult --------------------------------------------------------------

struct QuantizationLevel {
  std::string name;
  std::vector<std::string> values;  // source category strings
};

struct AttributeRule {
  std::string name;
  size_t column = 0;  // 0-based field index in the source row
  std::vector<QuantizationLevel> levels;
};

enum class MissingPolicy {
  kDropIfAnyFieldMissing,   // "?" anywhere in the row
  kDropIfUsedFieldMissing,  // "?" in one of the quantized fields
};

struct IngestSpec {
  std::vector<std::string> paths;
  // Attributes of each curator; the curator's symbol is the mixed-radix
  // combination with the first rule most significant.
  std::vector<AttributeRule> alice;
  std::vector<AttributeRule> bob;
  MissingPolicy missing = MissingPolicy::kDropIfAnyFieldMissing;
  size_t fields_per_row = 15;
};

struct IngestStats {
  size_t rows_read = 0;       // non-empty lines
  size_t rows_kept = 0;
  size_t rows_missing = 0;    // dropped under the missing-value policy
  size_t rows_malformed = 0;  // wrong field count, skipped
};

struct IngestResult {
  Database db;
  IngestStats stats;
};

inline IngestSpec DefaultAdultSpec(std::vector<std::string> paths) {
  IngestSpec spec;
  spec.paths = std::move(paths);
  spec.alice = {
      {"education",
       3,
       {{"no college",
         {"Preschool", "1st-4th", "5th-6th", "7th-8th", "9th", "10th", "11th",
          "12th", "HS-grad"}},
        {"some college",
         {"Some-college", "Assoc-acdm", "Assoc-voc", "Bachelors"}},
        {"post-graduate degree", {"Masters", "Prof-school", "Doctorate"}}}},
      {"marital-status",
       5,
       {{"married",
         {"Married-civ-spouse", "Married-spouse-absent", "Married-AF-spouse"}},
        {"single/divorced/widowed",
         {"Never-married", "Divorced", "Separated", "Widowed"}}}},
  };
  spec.bob = {
      {"sex", 9, {{"male", {"Male"}}, {"female", {"Female"}}}},
      {"income", 14, {{"50K or less", {"<=50K"}}, {"over 50K", {">50K"}}}},
  };
  return spec;
}

// Reads an ingest spec from JSON:
//
//   {
//     "paths": ["adult.data", "adult.test"],
//     "missing_policy": "any_field" | "used_fields",
//     "alice": [{"name": "education", "column": 3,
//                "levels": [{"name": "no college", "values": [...]}, ...]}],
//     "bob": [...]
//   }
//
// Omitted keys fall back to DefaultAdultSpec().
inline absl::StatusOr<IngestSpec> IngestSpecFromJson(
    const nlohmann::json& j, std::vector<std::string> default_paths = {}) {
  IngestSpec spec = DefaultAdultSpec(std::move(default_paths));
  try {
    if (j.contains("paths")) {
      spec.paths = j.at("paths").get<std::vector<std::string>>();
    }
    if (j.contains("missing_policy")) {
      const std::string p = j.at("missing_policy").get<std::string>();
      if (p == "any_field") {
        spec.missing = MissingPolicy::kDropIfAnyFieldMissing;
      } else if (p == "used_fields") {
        spec.missing = MissingPolicy::kDropIfUsedFieldMissing;
      } else {
        return absl::InvalidArgumentError("unknown missing_policy: " + p);
      }
    }
    if (j.contains("fields_per_row")) {
      spec.fields_per_row = j.at("fields_per_row").get<size_t>();
    }
    auto rules = [](const nlohmann::json& arr) {
      std::vector<AttributeRule> out;
      for (const auto& r : arr) {
        AttributeRule rule;
        rule.name = r.at("name").get<std::string>();
        rule.column = r.at("column").get<size_t>();
        for (const auto& lvl : r.at("levels")) {
          rule.levels.push_back(
              {lvl.at("name").get<std::string>(),
               lvl.at("values").get<std::vector<std::string>>()});
        }
        out.push_back(std::move(rule));
      }
      return out;
    };
    if (j.contains("alice")) spec.alice = rules(j.at("alice"));
    if (j.contains("bob")) spec.bob = rules(j.at("bob"));
  } catch (const nlohmann::json::exception& e) {
    return absl::InvalidArgumentError(
        absl::StrFormat("bad ingest config: %s", e.what()));
  }
  return spec;
}

namespace internal {

struct CompiledSide {
  std::vector<size_t> columns;
  std::vector<size_t> radices;
  std::vector<std::map<std::string, size_t>> lookup;
  std::vector<std::vector<std::string>> level_names;
  size_t card = 1;
};

inline absl::StatusOr<CompiledSide> Compile(
    const std::vector<AttributeRule>& rules, size_t fields) {
  CompiledSide side;
  if (rules.empty()) {
    return absl::InvalidArgumentError("each curator needs an attribute");
  }
  for (const AttributeRule& rule : rules) {
    if (rule.column >= fields) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "attribute %s reads column %d of %d", rule.name, rule.column,
          fields));
    }
    if (rule.levels.empty()) {
      return absl::InvalidArgumentError("attribute " + rule.name +
                                        " has no levels");
    }
    std::map<std::string, size_t> lookup;
    std::vector<std::string> names;
    for (size_t l = 0; l < rule.levels.size(); ++l) {
      names.push_back(rule.levels[l].name);
      for (const std::string& v : rule.levels[l].values) {
        if (!lookup.emplace(v, l).second) {
          return absl::InvalidArgumentError(absl::StrFormat(
              "value %s mapped twice in attribute %s", v, rule.name));
        }
      }
    }
    side.columns.push_back(rule.column);
    side.radices.push_back(rule.levels.size());
    side.lookup.push_back(std::move(lookup));
    side.level_names.push_back(std::move(names));
    side.card *= rule.levels.size();
  }
  if (side.card > kMaxCardinality) {
    return absl::InvalidArgumentError("curator cardinality too large");
  }
  return side;
}

// Labels of a curator's symbols in index order, e.g. "no college,married".
inline std::vector<std::string> SideLabels(const CompiledSide& side) {
  std::vector<std::string> labels(1, "");
  for (const auto& names : side.level_names) {
    std::vector<std::string> next;
    for (const std::string& prefix : labels) {
      for (const std::string& n : names) {
        next.push_back(prefix.empty() ? n : prefix + "," + n);
      }
    }
    labels = std::move(next);
  }
  return labels;
}

inline absl::StatusOr<Symbol> MapRow(const CompiledSide& side,
                                     const std::vector<std::string>& f,
                                     const std::string& where) {
  size_t symbol = 0;
  for (size_t a = 0; a < side.columns.size(); ++a) {
    std::string value = f[side.columns[a]];
    auto it = side.lookup[a].find(value);
    if (it == side.lookup[a].end() && !value.empty() && value.back() == '.') {
      value.pop_back();
      it = side.lookup[a].find(value);
    }
    if (it == side.lookup[a].end()) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "%s: unknown category \"%s\" in column %d", where, f[side.columns[a]],
          side.columns[a]));
    }
    symbol = symbol * side.radices[a] + it->second;
  }
  return static_cast<Symbol>(symbol);
}

}  // namespace internal

inline absl::StatusOr<IngestResult> IngestAdult(const IngestSpec& spec) {
  ASSIGN_OR_RETURN(internal::CompiledSide alice,
                   internal::Compile(spec.alice, spec.fields_per_row));
  ASSIGN_OR_RETURN(internal::CompiledSide bob,
                   internal::Compile(spec.bob, spec.fields_per_row));
  if (spec.paths.empty()) {
    return absl::InvalidArgumentError("no input files given");
  }

  std::vector<size_t> used = alice.columns;
  used.insert(used.end(), bob.columns.begin(), bob.columns.end());

  IngestStats stats;
  std::vector<Symbol> xs;
  std::vector<Symbol> ys;
  for (const std::string& path : spec.paths) {
    std::ifstream in(path);
    if (!in) return absl::NotFoundError("cannot open " + path);
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      absl::string_view trimmed = absl::StripAsciiWhitespace(line);
      if (trimmed.empty()) continue;
      ++stats.rows_read;
      std::vector<std::string> fields = absl::StrSplit(trimmed, ',');
      if (fields.size() != spec.fields_per_row) {
        ++stats.rows_malformed;
        continue;
      }
      for (std::string& f : fields) absl::StripAsciiWhitespace(&f);
      bool missing = false;
      if (spec.missing == MissingPolicy::kDropIfAnyFieldMissing) {
        missing = std::find(fields.begin(), fields.end(), "?") != fields.end();
      } else {
        for (size_t c : used) missing = missing || fields[c] == "?";
      }
      if (missing) {
        ++stats.rows_missing;
        continue;
      }
      const std::string where = absl::StrFormat("%s:%d", path, line_no);
      ASSIGN_OR_RETURN(Symbol x, internal::MapRow(alice, fields, where));
      ASSIGN_OR_RETURN(Symbol y, internal::MapRow(bob, fields, where));
      xs.push_back(x);
      ys.push_back(y);
    }
  }
  stats.rows_kept = xs.size();

  std::vector<std::string> labels;
  for (const std::string& xl : internal::SideLabels(alice)) {
    for (const std::string& yl : internal::SideLabels(bob)) {
      labels.push_back(xl + " | " + yl);
    }
  }
  ASSIGN_OR_RETURN(Alphabet alphabet,
                   Alphabet::Create(alice.card, bob.card, std::move(labels)));
  ASSIGN_OR_RETURN(Database db, Database::Create(std::move(alphabet),
                                                 std::move(xs), std::move(ys)));
  return IngestResult{std::move(db), stats};
}

// adult.data followed by adult.test from `dir`, default quantization.
inline absl::StatusOr<IngestResult> IngestAdultDir(const std::string& dir) {
  return IngestAdult(
      DefaultAdultSpec({dir + "/adult.data", dir + "/adult.test"}));
}

// Normalized dump, one row per respondent: "x_index,y_index".
inline void WriteDatabaseCsv(const Database& db, std::ostream& out) {
  out << "x_index,y_index\n";
  for (size_t i = 0; i < db.size(); ++i) {
    out << db.x_col()[i] << ',' << db.y_col()[i] << '\n';
  }
}

// --- synthetic --------------------------------------------------------------

enum class Shape { kUniform, kLinear, kPeaky };

inline absl::StatusOr<Shape> ParseShape(const std::string& name) {
  if (name == "uniform") return Shape::kUniform;
  if (name == "linear") return Shape::kLinear;
  if (name == "peaky") return Shape::kPeaky;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown synthetic shape \"%s\"", name));
}

inline const char* ShapeName(Shape s) {
  switch (s) {
    case Shape::kUniform: return "uniform";
    case Shape::kLinear: return "linear";
    case Shape::kPeaky: return "peaky";
  }
  return "unknown";
}

inline constexpr double kPeakMass = 0.90;

// Cell probabilities by flat index. Linear: (i + 1) / (1 + ... + d). Peaky:
// the last cell holds 0.90, the others share 0.10 equally.
inline absl::StatusOr<std::vector<double>> ShapeDistribution(Shape shape,
                                                             size_t d) {
  if (d < 2) return absl::InvalidArgumentError("need d >= 2");
  std::vector<double> p(d);
  switch (shape) {
    case Shape::kUniform:
      std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(d));
      break;
    case Shape::kLinear: {
      const double total = static_cast<double>(d) * (d + 1) / 2.0;
      for (size_t i = 0; i < d; ++i) p[i] = static_cast<double>(i + 1) / total;
      break;
    }
    case Shape::kPeaky:
      std::fill(p.begin(), p.end(),
                (1.0 - kPeakMass) / static_cast<double>(d - 1));
      p[d - 1] = kPeakMass;
      break;
    default:
      return absl::InvalidArgumentError("unknown synthetic shape");
  }
  return p;
}

struct SyntheticSpec {
  Shape shape = Shape::kUniform;
  size_t n = 0;
  size_t d = 0;
  uint64_t seed = 0;
  // Curator split; 0 means |X| = d, |Y| = 1.
  size_t x_card = 0;
  size_t y_card = 0;
};

// n i.i.d. rows from the shape's distribution (inverse-CDF draws).
inline absl::StatusOr<Database> GenerateSynthetic(const SyntheticSpec& spec) {
  ASSIGN_OR_RETURN(std::vector<double> p, ShapeDistribution(spec.shape, spec.d));
  if (spec.n < 1) return absl::InvalidArgumentError("need n >= 1");
  size_t x_card = spec.x_card;
  size_t y_card = spec.y_card;
  if (x_card == 0 && y_card == 0) {
    x_card = spec.d;
    y_card = 1;
  }
  if (x_card * y_card != spec.d) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "curator split %d x %d does not multiply to d=%d", x_card, y_card,
        spec.d));
  }
  ASSIGN_OR_RETURN(Alphabet alphabet, Alphabet::Create(x_card, y_card));
  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  Prng rng(spec.seed);
  std::vector<size_t> joint(spec.n);
  for (size_t& s : joint) {
    const double u = rng.UniformDouble() * acc;
    s = static_cast<size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) -
                            cdf.begin());
    s = std::min(s, spec.d - 1);
  }
  return Database::FromJoint(std::move(alphabet), joint);
}

}  // namespace sampram

#endif  // SAMPRAM_DATA_H_
