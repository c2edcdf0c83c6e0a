// Copyright 2026 The Frugal UFL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FRUGAL_UFL_EXPERIMENT_H_
#define FRUGAL_UFL_EXPERIMENT_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "frugal_ufl/analysis.h"
#include "frugal_ufl/auctions.h"
#include "frugal_ufl/instance.h"
#include "frugal_ufl/rational.h"

namespace frugal_ufl {

// Corpus, auction and parameter grid of a sweep or verification run.
struct ExperimentConfig {
  std::string generator = "euclidean";  // "euclidean" or "star"
  // Star corpus: one instance per size.
  std::vector<int> star_sizes;
  // Euclidean corpus: instance i uses seed + i; sizes are drawn uniformly.
  int count = 10;
  std::uint64_t seed = 1;
  int min_users = 1;
  int max_users = 30;
  int min_facilities = 2;
  int max_facilities = 10;
  Rational cost_min = Rational(1, 10);
  Rational cost_max = Rational(1);

  std::vector<AuctionKind> auctions = {AuctionKind::kVcg};
  std::vector<Rational> epsilons = {Rational(1)};
  std::vector<Rational> lambdas = {Rational(3, 2)};
  // 1 means exact predictions; larger values perturb the true costs.
  std::vector<Rational> eta_targets = {Rational(1)};

  // Worker threads for sweeps and suites; 0 uses the hardware count.
  int jobs = 0;

  // Throws InvalidArgumentError on any out-of-range parameter.
  void Validate() const;
};

struct CorpusEntry {
  std::string id;
  std::string generator;
  std::uint64_t seed = 0;
  Instance instance;
};

std::vector<CorpusEntry> BuildCorpus(const ExperimentConfig& config);

// Predictions for a cell: the true costs for eta_target 1, otherwise a
// perturbation seeded from the instance seed and the target.
Prediction CellPredictions(const CorpusEntry& entry, const Rational& eta_target);

// One CSV row; every field is already rendered.
struct CsvRow {
  std::string instance_id;
  std::string generator;
  std::string seed;
  std::string k_users;
  std::string k_facilities;
  std::string auction;
  std::string epsilon;
  std::string lambda;
  std::string eta_target;
  std::string eta_realized;
  std::string winners;
  std::string sum_payments;
  std::string connection_cost;
  std::string total_cost;
  std::string frugal_cost;
  std::string ratio_rational;
  std::string ratio_decimal;
  std::string bound;
  std::string bound_satisfied;

  // Identity of the cell: instance, auction and parameters.
  std::string Key() const;
  std::vector<std::string> Fields() const;
  static CsvRow FromFields(const std::vector<std::string>& fields);
};

const std::vector<std::string>& CsvHeader();
std::string FormatCsvLine(const std::vector<std::string>& fields);
// Splits one line, honoring double-quoted fields.
std::vector<std::string> ParseCsvLine(const std::string& line);

CsvRow MakeRow(const CorpusEntry& entry, const RatioReport& report,
               const std::optional<Rational>& epsilon,
               const std::optional<Rational>& lambda,
               const std::optional<Rational>& eta_target);

// A single sweep cell: one auction with one parameter choice.
struct Cell {
  AuctionKind auction;
  std::optional<Rational> epsilon;
  std::optional<Rational> lambda;
  std::optional<Rational> eta_target;
};

// Cells of the parameter grid; parameters an auction ignores are left empty.
std::vector<Cell> ExpandCells(const ExperimentConfig& config);

struct SweepSummary {
  int rows_written = 0;
  int rows_skipped = 0;          // already present in the output file
  int instances_without_benchmark = 0;
};

// Runs every cell on every corpus instance and writes the CSV at `path`.
// Rows already in the file are kept and not recomputed. Each new row is
// flushed as soon as it is computed; at the end the file is rewritten
// sorted by key.
SweepSummary RunSweep(const ExperimentConfig& config, const std::string& path);

// Result of one verification suite over a corpus.
struct SuiteResult {
  std::string name;
  int checks = 0;
  int failures = 0;
  std::string first_failure;    // human-readable description
  std::string reproducer_json;  // instance, predictions and bids
  bool passed() const { return failures == 0; }
};

// Suites: vcg-frugality, consistency, robustness, error-tolerance,
// truthfulness, monotonicity, payment-bound.
const std::vector<std::string>& SuiteNames();
SuiteResult RunSuite(const std::string& name, const ExperimentConfig& config,
                     int search_budget = 200);

}  // namespace frugal_ufl

#endif  // FRUGAL_UFL_EXPERIMENT_H_
