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

#include "frugal_ufl/experiment.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>
#include <utility>

#include "frugal_ufl/errors.h"
#include "frugal_ufl/generators.h"
#include "frugal_ufl/instance_io.h"
#include "json.hpp"

namespace frugal_ufl {
namespace {

using Json = nlohmann::ordered_json;

std::uint64_t Fnv1a(std::uint64_t seed, const std::string& text) {
  std::uint64_t h = 1469598103934665603ull ^ seed;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string Opt(const std::optional<Rational>& r) {
  return r ? r->ToExactString() : std::string();
}

// Orders "euclid-9" before "euclid-10": digit runs compare numerically.
bool NaturalLess(const std::string& a, const std::string& b) {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) &&
        std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t ie = i;
      std::size_t je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      const std::string_view da = std::string_view(a).substr(i, ie - i);
      const std::string_view db = std::string_view(b).substr(j, je - j);
      if (da.size() != db.size()) return da.size() < db.size();
      if (da != db) return da < db;
      i = ie;
      j = je;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

int WorkerCount(const ExperimentConfig& config, std::size_t tasks) {
  int jobs = config.jobs;
  if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(jobs, 1);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(jobs),
                                                std::max<std::size_t>(tasks, 1)));
}

// Runs fn(i) for i in [0, n) on the configured number of threads.
void ParallelFor(const ExperimentConfig& config, std::size_t n,
                 const std::function<void(std::size_t)>& fn) {
  const int workers = WorkerCount(config, n);
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

std::optional<Prediction> PredictionsFor(const CorpusEntry& entry,
                                         const Cell& cell) {
  if (!UsesPredictions(cell.auction)) return std::nullopt;
  return CellPredictions(entry, cell.eta_target.value_or(Rational(1)));
}

AuctionConfig ConfigFor(const Cell& cell) {
  return {cell.epsilon.value_or(Rational(1)), cell.lambda.value_or(Rational(1))};
}

std::string Reproducer(const std::string& suite, const CorpusEntry& entry,
                       const Cell& cell,
                       const std::optional<Prediction>& predictions,
                       const BidProfile& bids, const std::string& detail) {
  Json j;
  j["suite"] = suite;
  j["instance_id"] = entry.id;
  j["seed"] = entry.seed;
  j["auction"] = std::string(AuctionName(cell.auction));
  j["epsilon"] = Opt(cell.epsilon);
  j["lambda"] = Opt(cell.lambda);
  j["eta_target"] = Opt(cell.eta_target);
  j["detail"] = detail;
  Json b = Json::object();
  for (int f = 0; f < bids.size(); ++f) {
    b[entry.instance.facilities()[static_cast<std::size_t>(f)]] =
        bids[f].ToExactString();
  }
  j["bids"] = b;
  j["instance"] = Json::parse(InstanceToJson(entry.instance, predictions));
  return j.dump(2) + "\n";
}

std::string CellLabel(const CorpusEntry& entry, const Cell& cell) {
  std::string s = entry.id + " " + std::string(AuctionName(cell.auction));
  if (cell.epsilon) s += " eps=" + cell.epsilon->ToExactString();
  if (cell.lambda) s += " lambda=" + cell.lambda->ToExactString();
  if (cell.eta_target) s += " eta_target=" + cell.eta_target->ToExactString();
  return s;
}

struct Tally {
  int checks = 0;
  int failures = 0;
  std::string first_failure;
  std::string reproducer;

  void Check(bool ok, const std::function<std::string()>& describe,
             const std::function<std::string(const std::string&)>& repro) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) {
      first_failure = describe();
      reproducer = repro(first_failure);
    }
  }
};

}  // namespace

void ExperimentConfig::Validate() const {
  auto fail = [](const std::string& m) { throw InvalidArgumentError(m); };
  if (generator == "star") {
    if (star_sizes.empty()) fail("star corpus needs at least one size");
    for (int k : star_sizes) {
      if (k < 1) fail("star sizes must be positive");
    }
  } else if (generator == "euclidean") {
    if (count < 1) fail("corpus count must be positive");
    if (min_users < 1 || min_users > max_users) fail("bad user range");
    if (min_facilities < 1 || min_facilities > max_facilities) {
      fail("bad facility range");
    }
    if (cost_min.IsNegative() || cost_max < cost_min) fail("bad cost range");
  } else {
    fail("unknown generator '" + generator + "'");
  }
  if (auctions.empty()) fail("no auction selected");
  if (epsilons.empty() || lambdas.empty() || eta_targets.empty()) {
    fail("parameter lists must be nonempty");
  }
  for (const Rational& e : epsilons) AuctionConfig{e, Rational(1)}.Validate();
  for (const Rational& l : lambdas) AuctionConfig{Rational(1), l}.Validate();
  for (const Rational& t : eta_targets) {
    if (t < Rational(1)) fail("eta targets must be at least 1");
  }
  if (jobs < 0) fail("jobs must be nonnegative");
}

std::vector<CorpusEntry> BuildCorpus(const ExperimentConfig& config) {
  config.Validate();
  std::vector<CorpusEntry> out;
  if (config.generator == "star") {
    for (int k : config.star_sizes) {
      out.push_back({"star-" + std::to_string(k), "star",
                     static_cast<std::uint64_t>(k), GenerateStar(k)});
    }
    return out;
  }
  for (int i = 0; i < config.count; ++i) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
    std::mt19937_64 rng(seed);
    EuclideanSpec spec;
    spec.num_users =
        static_cast<int>(UniformInt(rng, config.min_users, config.max_users));
    spec.num_facilities = static_cast<int>(
        UniformInt(rng, config.min_facilities, config.max_facilities));
    spec.cost_min = config.cost_min;
    spec.cost_max = config.cost_max;
    spec.seed = seed;
    out.push_back({"euclid-" + std::to_string(seed), "euclidean", seed,
                   GenerateEuclidean(spec)});
  }
  return out;
}

Prediction CellPredictions(const CorpusEntry& entry, const Rational& eta_target) {
  const BidProfile costs = entry.instance.TrueCosts();
  if (eta_target == Rational(1)) return Prediction(costs.values());
  return PerturbPredictions(costs, eta_target,
                            Fnv1a(entry.seed, eta_target.ToExactString()));
}

std::string CsvRow::Key() const {
  return instance_id + "\x1f" + auction + "\x1f" + epsilon + "\x1f" + lambda +
         "\x1f" + eta_target;
}

std::vector<std::string> CsvRow::Fields() const {
  return {instance_id,  generator,       seed,           k_users,
          k_facilities, auction,         epsilon,        lambda,
          eta_target,   eta_realized,    winners,        sum_payments,
          connection_cost, total_cost,   frugal_cost,    ratio_rational,
          ratio_decimal, bound,          bound_satisfied};
}

CsvRow CsvRow::FromFields(const std::vector<std::string>& f) {
  if (f.size() != CsvHeader().size()) {
    throw SchemaError("CSV row has " + std::to_string(f.size()) + " fields");
  }
  return {f[0],  f[1],  f[2],  f[3],  f[4],  f[5],  f[6],
          f[7],  f[8],  f[9],  f[10], f[11], f[12], f[13],
          f[14], f[15], f[16], f[17], f[18]};
}

const std::vector<std::string>& CsvHeader() {
  static const std::vector<std::string> header = {
      "instance_id",  "generator",      "seed",          "k_users",
      "k_facilities", "auction",        "epsilon",       "lambda",
      "eta_target",   "eta_realized",   "winners",       "sum_payments",
      "connection_cost", "total_cost",  "frugal_cost",   "ratio_rational",
      "ratio_decimal", "bound",         "bound_satisfied"};
  return header;
}

std::string FormatCsvLine(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) line += ',';
    const std::string& f = fields[i];
    if (f.find_first_of(",\"\n") == std::string::npos) {
      line += f;
      continue;
    }
    line += '"';
    for (char c : f) {
      if (c == '"') line += '"';
      line += c;
    }
    line += '"';
  }
  return line;
}

std::vector<std::string> ParseCsvLine(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

CsvRow MakeRow(const CorpusEntry& entry, const RatioReport& report,
               const std::optional<Rational>& epsilon,
               const std::optional<Rational>& lambda,
               const std::optional<Rational>& eta_target) {
  CsvRow row;
  row.instance_id = entry.id;
  row.generator = entry.generator;
  row.seed = std::to_string(entry.seed);
  row.k_users = std::to_string(entry.instance.num_users());
  row.k_facilities = std::to_string(entry.instance.num_facilities());
  row.auction = report.auction;
  row.epsilon = Opt(epsilon);
  row.lambda = Opt(lambda);
  row.eta_target = Opt(eta_target);
  row.eta_realized = Opt(report.eta);
  const std::vector<std::string> ids =
      FacilityIds(entry.instance, report.outcome.winners);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (i > 0) row.winners += ';';
    row.winners += ids[i];
  }
  row.sum_payments = report.outcome.SumPayments().ToExactString();
  row.connection_cost = report.outcome.connection.ToExactString();
  row.total_cost = report.outcome.total_payment_cost.ToExactString();
  row.frugal_cost = report.frugal_cost.ToExactString();
  row.ratio_rational = report.ratio.ToFraction();
  row.ratio_decimal = report.RatioDecimal();
  row.bound = Opt(report.bound);
  row.bound_satisfied = report.bound ? (report.bound_satisfied ? "true" : "false")
                                     : "";
  return row;
}

std::vector<Cell> ExpandCells(const ExperimentConfig& config) {
  std::vector<Cell> cells;
  for (AuctionKind kind : config.auctions) {
    switch (kind) {
      case AuctionKind::kVcg:
      case AuctionKind::kFirstPrice:
        cells.push_back({kind, std::nullopt, std::nullopt, std::nullopt});
        break;
      case AuctionKind::kPredictedLimits:
        for (const Rational& e : config.epsilons) {
          for (const Rational& t : config.eta_targets) {
            cells.push_back({kind, e, std::nullopt, t});
          }
        }
        break;
      case AuctionKind::kErrorTolerant:
        for (const Rational& e : config.epsilons) {
          for (const Rational& l : config.lambdas) {
            for (const Rational& t : config.eta_targets) {
              cells.push_back({kind, e, l, t});
            }
          }
        }
        break;
    }
  }
  return cells;
}

SweepSummary RunSweep(const ExperimentConfig& config, const std::string& path) {
  const std::vector<CorpusEntry> corpus = BuildCorpus(config);
  const std::vector<Cell> cells = ExpandCells(config);
  SweepSummary summary;

  std::map<std::string, CsvRow> rows;
  {
    std::ifstream in(path);
    std::string line;
    if (in && std::getline(in, line)) {
      if (ParseCsvLine(line) != CsvHeader()) {
        throw SchemaError(path + ": existing file has a different header");
      }
      while (std::getline(in, line)) {
        const std::vector<std::string> fields = ParseCsvLine(line);
        if (fields.size() != CsvHeader().size()) continue;  // torn last line
        CsvRow row = CsvRow::FromFields(fields);
        rows.emplace(row.Key(), std::move(row));
      }
    }
  }

  std::ofstream append;
  const bool fresh = rows.empty();
  append.open(path, fresh ? std::ios::trunc : std::ios::app);
  if (!append) throw std::runtime_error("cannot write " + path);
  if (fresh) append << FormatCsvLine(CsvHeader()) << '\n' << std::flush;

  std::mutex mu;
  ParallelFor(config, corpus.size(), [&](std::size_t i) {
    const CorpusEntry& entry = corpus[i];
    const Solver solver(entry.instance);
    std::optional<FrugalBenchmark> bench;
    for (const Cell& cell : cells) {
      CsvRow probe;
      probe.instance_id = entry.id;
      probe.auction = std::string(AuctionName(cell.auction));
      probe.epsilon = Opt(cell.epsilon);
      probe.lambda = Opt(cell.lambda);
      probe.eta_target = Opt(cell.eta_target);
      {
        std::lock_guard<std::mutex> lock(mu);
        if (rows.count(probe.Key()) > 0) {
          ++summary.rows_skipped;
          continue;
        }
      }
      if (!bench) {
        try {
          bench = ComputeBenchmark(solver, entry.instance.TrueCosts());
        } catch (const DomainError&) {
          std::lock_guard<std::mutex> lock(mu);
          ++summary.instances_without_benchmark;
          return;
        }
      }
      const RatioReport report =
          Evaluate(cell.auction, solver, PredictionsFor(entry, cell),
                   ConfigFor(cell), &*bench);
      CsvRow row = MakeRow(entry, report, cell.epsilon, cell.lambda,
                           cell.eta_target);
      std::lock_guard<std::mutex> lock(mu);
      append << FormatCsvLine(row.Fields()) << '\n' << std::flush;
      rows.emplace(row.Key(), std::move(row));
      ++summary.rows_written;
    }
  });
  append.close();

  std::vector<const CsvRow*> sorted;
  for (const auto& [key, row] : rows) sorted.push_back(&row);
  std::sort(sorted.begin(), sorted.end(), [](const CsvRow* a, const CsvRow* b) {
    if (a->instance_id != b->instance_id) {
      return NaturalLess(a->instance_id, b->instance_id);
    }
    return a->Key() < b->Key();
  });
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    out << FormatCsvLine(CsvHeader()) << '\n';
    for (const CsvRow* r : sorted) out << FormatCsvLine(r->Fields()) << '\n';
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
  return summary;
}

const std::vector<std::string>& SuiteNames() {
  static const std::vector<std::string> names = {
      "vcg-frugality", "consistency",  "robustness",   "error-tolerance",
      "truthfulness",  "monotonicity", "payment-bound"};
  return names;
}

SuiteResult RunSuite(const std::string& name, const ExperimentConfig& config,
                     int search_budget) {
  if (std::find(SuiteNames().begin(), SuiteNames().end(), name) ==
      SuiteNames().end()) {
    throw InvalidArgumentError("unknown suite '" + name + "'");
  }
  const std::vector<CorpusEntry> corpus = BuildCorpus(config);
  std::vector<Cell> cells = ExpandCells(config);
  std::vector<Tally> tallies(corpus.size());

  ParallelFor(config, corpus.size(), [&](std::size_t i) {
    const CorpusEntry& entry = corpus[i];
    Tally& tally = tallies[i];
    const Solver solver(entry.instance);
    const BidProfile costs = entry.instance.TrueCosts();
    FrugalBenchmark bench;
    try {
      bench = ComputeBenchmark(solver, costs);
    } catch (const DomainError&) {
      return;  // no frugal benchmark; every suite is ratio- or payment-based
    }
    auto repro = [&](const Cell& cell, const std::optional<Prediction>& p,
                     const BidProfile& bids) {
      return [&, cell, p, bids](const std::string& detail) {
        return Reproducer(name, entry, cell, p, bids, detail);
      };
    };

    if (name == "vcg-frugality") {
      const Cell cell{AuctionKind::kVcg, {}, {}, {}};
      const RatioReport r =
          Evaluate(AuctionKind::kVcg, solver, std::nullopt, {}, &bench);
      tally.Check(r.ratio <= Rational(3),
                  [&] { return entry.id + " vcg ratio " + r.RatioDecimal(); },
                  repro(cell, std::nullopt, costs));
    } else if (name == "consistency") {
      for (const Rational& eps : config.epsilons) {
        const Cell cell{AuctionKind::kPredictedLimits, eps, {}, Rational(1)};
        const Prediction p(costs.values());
        const RatioReport r = Evaluate(cell.auction, solver, p,
                                       {eps, Rational(1)}, &bench);
        tally.Check(r.ratio <= Rational(1) + eps,
                    [&] {
                      return CellLabel(entry, cell) + ": ratio " +
                             r.RatioDecimal() + " > 1+eps";
                    },
                    repro(cell, p, costs));
      }
    } else if (name == "robustness") {
      for (const Cell& cell : cells) {
        if (!UsesPredictions(cell.auction) ||
            cell.eta_target != std::optional<Rational>(Rational(1))) {
          continue;  // one search per (auction, eps, lambda)
        }
        const AuctionConfig cfg = ConfigFor(cell);
        const Rational robust = *RobustBound(cell.auction, cfg);
        AdversarialSearch(
            cell.auction, solver, cfg, search_budget,
            Fnv1a(entry.seed, CellLabel(entry, cell)),
            [&](const Prediction& p, const RatioReport& r) {
              tally.Check(r.ratio <= robust,
                          [&] {
                            return CellLabel(entry, cell) + ": ratio " +
                                   r.RatioDecimal() + " > robust bound " +
                                   robust.ToExactString();
                          },
                          repro(cell, p, costs));
            });
      }
    } else if (name == "error-tolerance") {
      for (const Cell& cell : cells) {
        if (cell.auction != AuctionKind::kErrorTolerant) continue;
        const Prediction p = CellPredictions(entry, *cell.eta_target);
        const std::optional<Rational> eta = RealizedEta(costs, p);
        if (!eta || *eta > *cell.lambda) continue;
        const RatioReport r =
            Evaluate(cell.auction, solver, p, ConfigFor(cell), &bench);
        tally.Check(r.outcome.winners == *r.predicted_opt,
                    [&] {
                      return CellLabel(entry, cell) +
                             ": winners differ from the predicted optimum";
                    },
                    repro(cell, p, costs));
        tally.Check(r.bound_satisfied,
                    [&] {
                      return CellLabel(entry, cell) + ": ratio " +
                             r.RatioDecimal() + " > " + Opt(r.bound);
                    },
                    repro(cell, p, costs));
      }
    } else if (name == "truthfulness") {
      for (const Cell& cell : cells) {
        const std::optional<Prediction> p = PredictionsFor(entry, cell);
        const auto violations =
            CheckTruthfulness(cell.auction, solver, p, ConfigFor(cell),
                              {.seed = entry.seed});
        for (int f = 0; f < entry.instance.num_facilities(); ++f) {
          const auto it = std::find_if(
              violations.begin(), violations.end(),
              [f](const TruthfulnessViolation& v) { return v.facility == f; });
          if (it == violations.end()) {
            tally.Check(true, nullptr, nullptr);
            continue;
          }
          const TruthfulnessViolation& v = *it;
          tally.Check(false,
                      [&] {
                        return CellLabel(entry, cell) + ": facility " +
                               entry.instance.facilities()[f] +
                               " gains by bidding " +
                               v.misreport.ToExactString() + " (utility " +
                               v.misreport_utility.ToExactString() + " vs " +
                               v.truthful_utility.ToExactString() + ")";
                      },
                      repro(cell, p, costs.WithBid(f, v.misreport)));
        }
      }
    } else if (name == "monotonicity") {
      for (const Cell& cell : cells) {
        const std::optional<Prediction> p = PredictionsFor(entry, cell);
        const auto rule = MakeRule(cell.auction, solver, p, ConfigFor(cell));
        for (int f = 0; f < entry.instance.num_facilities(); ++f) {
          const std::vector<Rational> grid =
              BidGrid(*rule, solver, costs, f, {.seed = entry.seed});
          tally.Check(
              CheckMonotonicity(cell.auction, solver, p, ConfigFor(cell), f,
                                grid),
              [&] {
                return CellLabel(entry, cell) + ": facility " +
                       entry.instance.facilities()[f] +
                       " wins again after losing at a lower bid";
              },
              repro(cell, p, costs));
        }
      }
    } else {  // payment-bound
      for (const Cell& cell : cells) {
        if (cell.auction == AuctionKind::kFirstPrice) continue;
        const std::optional<Prediction> p = PredictionsFor(entry, cell);
        const AuctionConfig cfg = ConfigFor(cell);
        const RatioReport r = Evaluate(cell.auction, solver, p, cfg, &bench);
        for (const PaymentBoundConfig& c : ProofConfigurations(
                 cell.auction, solver, costs, p, cfg, r.outcome, bench)) {
          const BoundCheck b =
              CheckPaymentBound(solver, costs, r.outcome, c.subset,
                                c.reference, c.alpha, c.alpha_ref_max);
          tally.Check(b.holds,
                      [&] {
                        return CellLabel(entry, cell) + " [" + c.name +
                               "]: " + b.lhs.ToDecimal() + " > " +
                               b.rhs.ToDecimal();
                      },
                      repro(cell, p, costs));
        }
      }
    }
  });

  SuiteResult result;
  result.name = name;
  for (Tally& t : tallies) {
    result.checks += t.checks;
    if (t.failures > 0 && result.failures == 0) {
      result.first_failure = t.first_failure;
      result.reproducer_json = t.reproducer;
    }
    result.failures += t.failures;
  }
  return result;
}

}  // namespace frugal_ufl
