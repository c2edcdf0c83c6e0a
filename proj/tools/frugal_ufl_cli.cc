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

// Command-line front end: gen | run | sweep | verify.
//
// Exit codes: 0 success, 1 usage or parameter error, 2 domain error
// (monopoly, non-metric input), 3 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "frugal_ufl/analysis.h"
#include "frugal_ufl/auctions.h"
#include "frugal_ufl/errors.h"
#include "frugal_ufl/experiment.h"
#include "frugal_ufl/generators.h"
#include "frugal_ufl/instance_io.h"
#include "frugal_ufl/solver.h"
#include "json.hpp"

namespace {

using frugal_ufl::Rational;
using Json = nlohmann::ordered_json;

constexpr int kExitUsage = 1;
constexpr int kExitDomain = 2;
constexpr int kExitVerification = 3;

std::vector<std::string> SplitList(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<Rational> ParseRationals(const std::string& text) {
  std::vector<Rational> out;
  for (const std::string& s : SplitList(text)) out.push_back(Rational::Parse(s));
  return out;
}

// "2..10" or "2,3,5".
std::vector<int> ParseSizes(const std::string& text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = std::stoi(text.substr(0, dots));
    const int hi = std::stoi(text.substr(dots + 2));
    for (int k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  }
  for (const std::string& s : SplitList(text)) out.push_back(std::stoi(s));
  return out;
}

std::vector<frugal_ufl::AuctionKind> ParseAuctions(const std::string& text) {
  std::vector<frugal_ufl::AuctionKind> out;
  for (const std::string& s : SplitList(text)) {
    out.push_back(frugal_ufl::ParseAuctionKind(s));
  }
  return out;
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

Json IdList(const frugal_ufl::Instance& inst, frugal_ufl::FacilitySet s) {
  Json a = Json::array();
  for (const std::string& id : frugal_ufl::FacilityIds(inst, s)) a.push_back(id);
  return a;
}

struct CorpusOptions {
  std::string generator = "euclidean";
  std::string star_sizes = "2..10";
  int count = 10;
  std::uint64_t seed = 1;
  int min_users = 1;
  int max_users = 30;
  int min_facilities = 2;
  int max_facilities = 10;
  std::string cost_min = "0.1";
  std::string cost_max = "1";
  std::string auctions = "vcg";
  std::string epsilons = "1";
  std::string lambdas = "1.5";
  std::string etas = "1";
  int jobs = 0;

  void Register(CLI::App* app) {
    app->add_option("--generator", generator, "euclidean or star")
        ->capture_default_str();
    app->add_option("--star-sizes", star_sizes, "e.g. 2..10 or 2,4,6")
        ->capture_default_str();
    app->add_option("--count", count, "Euclidean instances")
        ->capture_default_str();
    app->add_option("--seed", seed, "first Euclidean seed")
        ->capture_default_str();
    app->add_option("--min-users", min_users)->capture_default_str();
    app->add_option("--max-users", max_users)->capture_default_str();
    app->add_option("--min-facilities", min_facilities)->capture_default_str();
    app->add_option("--max-facilities", max_facilities)->capture_default_str();
    app->add_option("--cost-min", cost_min)->capture_default_str();
    app->add_option("--cost-max", cost_max)->capture_default_str();
    app->add_option("--auctions", auctions,
                    "comma list: vcg, predicted-limits, error-tolerant, "
                    "first-price")
        ->capture_default_str();
    app->add_option("--epsilons", epsilons)->capture_default_str();
    app->add_option("--lambdas", lambdas)->capture_default_str();
    app->add_option("--etas", etas, "eta targets; 1 = exact predictions")
        ->capture_default_str();
    app->add_option("--jobs", jobs, "worker threads (0 = all cores)")
        ->capture_default_str();
  }

  frugal_ufl::ExperimentConfig Build() const {
    frugal_ufl::ExperimentConfig c;
    c.generator = generator;
    if (generator == "star") c.star_sizes = ParseSizes(star_sizes);
    c.count = count;
    c.seed = seed;
    c.min_users = min_users;
    c.max_users = max_users;
    c.min_facilities = min_facilities;
    c.max_facilities = max_facilities;
    c.cost_min = Rational::Parse(cost_min);
    c.cost_max = Rational::Parse(cost_max);
    c.auctions = ParseAuctions(auctions);
    c.epsilons = ParseRationals(epsilons);
    c.lambdas = ParseRationals(lambdas);
    c.eta_targets = ParseRationals(etas);
    c.jobs = jobs;
    c.Validate();
    return c;
  }
};

struct GenOptions {
  std::optional<int> star;
  std::vector<int> euclidean;
  std::uint64_t seed = 1;
  std::string cost_min = "0.1";
  std::string cost_max = "1";
  std::optional<std::string> eta;
  std::string out = "-";
};

int RunGen(const GenOptions& o) {
  frugal_ufl::Instance inst;
  if (o.star && !o.euclidean.empty()) {
    throw frugal_ufl::InvalidArgumentError("choose one of --star/--euclidean");
  }
  if (o.star) {
    inst = frugal_ufl::GenerateStar(*o.star);
  } else if (o.euclidean.size() == 2) {
    frugal_ufl::EuclideanSpec spec;
    spec.num_users = o.euclidean[0];
    spec.num_facilities = o.euclidean[1];
    spec.cost_min = Rational::Parse(o.cost_min);
    spec.cost_max = Rational::Parse(o.cost_max);
    spec.seed = o.seed;
    inst = frugal_ufl::GenerateEuclidean(spec);
  } else {
    throw frugal_ufl::InvalidArgumentError(
        "gen needs --star K or --euclidean USERS FACILITIES");
  }
  std::optional<frugal_ufl::Prediction> pred;
  if (o.eta) {
    pred = frugal_ufl::PerturbPredictions(inst.TrueCosts(),
                                          Rational::Parse(*o.eta), o.seed);
  }
  WriteText(o.out, frugal_ufl::InstanceToJson(inst, pred));
  return 0;
}

struct RunOptions {
  std::string instance;
  std::string auction = "vcg";
  std::string epsilon = "1";
  std::string lambda = "1.5";
  std::string pred = "exact";
  std::string eta = "1";
  std::uint64_t pred_seed = 1;
  bool allow_non_metric = false;
  std::string csv;
};

int RunRun(const RunOptions& o) {
  const frugal_ufl::AuctionKind kind = frugal_ufl::ParseAuctionKind(o.auction);
  const frugal_ufl::AuctionConfig cfg{Rational::Parse(o.epsilon),
                                      Rational::Parse(o.lambda)};
  cfg.Validate();
  frugal_ufl::InstanceFile file =
      frugal_ufl::LoadInstance(o.instance, {.allow_non_metric = o.allow_non_metric});
  const frugal_ufl::Instance& inst = file.instance;
  const frugal_ufl::BidProfile costs = inst.TrueCosts();

  std::optional<frugal_ufl::Prediction> pred;
  std::optional<Rational> eta_target;
  if (frugal_ufl::UsesPredictions(kind)) {
    if (o.pred == "exact") {
      pred = frugal_ufl::Prediction(costs.values());
      eta_target = Rational(1);
    } else if (o.pred == "file") {
      if (!file.predictions) {
        throw frugal_ufl::InvalidArgumentError(o.instance +
                                               " carries no predictions");
      }
      pred = file.predictions;
    } else if (o.pred == "perturb") {
      eta_target = Rational::Parse(o.eta);
      pred = frugal_ufl::PerturbPredictions(costs, *eta_target, o.pred_seed);
    } else {
      throw frugal_ufl::InvalidArgumentError("--pred must be exact, file or perturb");
    }
  }

  const frugal_ufl::Solver solver(inst);
  frugal_ufl::FrugalBenchmark bench;
  try {
    bench = frugal_ufl::ComputeBenchmark(solver, costs);
  } catch (const frugal_ufl::MonopolyError& e) {
    throw frugal_ufl::MonopolyError(
        std::string("monopoly: frugal benchmark undefined (") + e.what() + ")");
  }
  const frugal_ufl::RatioReport r =
      frugal_ufl::Evaluate(kind, solver, pred, cfg, &bench);

  Json j;
  j["instance"] = o.instance;
  j["auction"] = r.auction;
  if (frugal_ufl::UsesPredictions(kind)) j["epsilon"] = cfg.epsilon.ToExactString();
  if (kind == frugal_ufl::AuctionKind::kErrorTolerant) {
    j["lambda"] = cfg.lambda.ToExactString();
  }
  j["winners"] = IdList(inst, r.outcome.winners);
  Json pay = Json::object();
  for (const auto& [f, p] : r.outcome.payments) {
    pay[inst.facilities()[static_cast<std::size_t>(f)]] = p.ToExactString();
  }
  j["payments"] = pay;
  j["sum_payments"] = r.outcome.SumPayments().ToExactString();
  j["connection_cost"] = r.outcome.connection.ToExactString();
  j["total_cost"] = r.outcome.total_payment_cost.ToExactString();
  j["frugal_set"] = IdList(inst, r.frugal_set);
  j["frugal_cost"] = r.frugal_cost.ToExactString();
  j["ratio"] = r.ratio.ToExactString();
  j["ratio_decimal"] = r.RatioDecimal();
  j["eta"] = r.eta ? Json(r.eta->ToExactString()) : Json(nullptr);
  j["bound"] = r.bound ? Json(r.bound->ToExactString()) : Json(nullptr);
  j["bound_satisfied"] = r.bound_satisfied;
  std::cout << j.dump(2) << "\n";

  if (!o.csv.empty()) {
    frugal_ufl::CorpusEntry entry{
        std::filesystem::path(o.instance).stem().string(), "file", 0, inst};
    const bool uses = frugal_ufl::UsesPredictions(kind);
    frugal_ufl::CsvRow row = frugal_ufl::MakeRow(
        entry, r, uses ? std::optional(cfg.epsilon) : std::nullopt,
        kind == frugal_ufl::AuctionKind::kErrorTolerant
            ? std::optional(cfg.lambda)
            : std::nullopt,
        eta_target);
    row.seed = o.pred == "perturb" ? std::to_string(o.pred_seed) : "";
    const bool fresh = !std::filesystem::exists(o.csv);
    std::ofstream out(o.csv, std::ios::app);
    if (fresh) out << frugal_ufl::FormatCsvLine(frugal_ufl::CsvHeader()) << "\n";
    out << frugal_ufl::FormatCsvLine(row.Fields()) << "\n";
    if (!out) throw std::runtime_error("cannot write " + o.csv);
  }
  return 0;
}

int RunSweepCommand(const CorpusOptions& corpus, const std::string& out) {
  const frugal_ufl::SweepSummary s = frugal_ufl::RunSweep(corpus.Build(), out);
  std::cerr << "sweep: " << s.rows_written << " rows written, "
            << s.rows_skipped << " already present";
  if (s.instances_without_benchmark > 0) {
    std::cerr << ", " << s.instances_without_benchmark
              << " instances skipped (no frugal benchmark)";
  }
  std::cerr << "\n";
  return 0;
}

int RunVerify(const std::string& suite, const CorpusOptions& corpus, int budget,
              const std::string& reproducer) {
  const frugal_ufl::ExperimentConfig config = corpus.Build();
  std::vector<std::string> suites;
  if (suite == "all") {
    suites = frugal_ufl::SuiteNames();
  } else {
    suites = SplitList(suite);
  }
  bool ok = true;
  for (const std::string& name : suites) {
    const frugal_ufl::SuiteResult r = frugal_ufl::RunSuite(name, config, budget);
    if (r.passed()) {
      std::cout << "PASS " << name << " (" << r.checks << " checks)\n";
      continue;
    }
    ok = false;
    std::cout << "FAIL " << name << " (" << r.failures << " of " << r.checks
              << " checks): " << r.first_failure << "\n";
    if (!reproducer.empty() && !r.reproducer_json.empty()) {
      std::string path = reproducer;
      if (suites.size() > 1) {
        const std::filesystem::path p(reproducer);
        path = (p.parent_path() / (p.stem().string() + "-" + name +
                                   p.extension().string()))
                   .string();
      }
      WriteText(path, r.reproducer_json);
      std::cout << "  reproducer: " << path << "\n";
    }
  }
  return ok ? 0 : kExitVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frugal procurement auctions for facility location"};
  app.require_subcommand(1);

  GenOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "write an instance file");
  gen_cmd->add_option("--star", gen.star, "star lower-bound instance of size K");
  gen_cmd->add_option("--euclidean", gen.euclidean,
                      "random Euclidean instance: USERS FACILITIES")
      ->expected(2);
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--cost-min", gen.cost_min)->capture_default_str();
  gen_cmd->add_option("--cost-max", gen.cost_max)->capture_default_str();
  gen_cmd->add_option("--eta", gen.eta,
                      "embed predictions perturbed to this error");
  gen_cmd->add_option("-o,--out", gen.out, "output path (- for stdout)")
      ->capture_default_str();

  RunOptions run;
  CLI::App* run_cmd = app.add_subcommand("run", "run one auction on a file");
  run_cmd->add_option("instance", run.instance)->required();
  run_cmd->add_option("auction", run.auction)->capture_default_str();
  run_cmd->add_option("--epsilon", run.epsilon)->capture_default_str();
  run_cmd->add_option("--lambda", run.lambda)->capture_default_str();
  run_cmd->add_option("--pred", run.pred, "exact, file or perturb")
      ->capture_default_str();
  run_cmd->add_option("--eta", run.eta, "error target for --pred perturb")
      ->capture_default_str();
  run_cmd->add_option("--pred-seed", run.pred_seed)->capture_default_str();
  run_cmd->add_flag("--allow-non-metric", run.allow_non_metric);
  run_cmd->add_option("--csv", run.csv, "append a CSV row to this file");

  CorpusOptions sweep_corpus;
  std::string sweep_out = "sweep.csv";
  CLI::App* sweep_cmd =
      app.add_subcommand("sweep", "corpus x auctions x parameters to CSV");
  sweep_corpus.Register(sweep_cmd);
  sweep_cmd->add_option("-o,--out", sweep_out)->capture_default_str();

  CorpusOptions verify_corpus;
  verify_corpus.auctions = "vcg,predicted-limits,error-tolerant";
  verify_corpus.epsilons = "0.5,1";
  std::string suite = "all";
  int budget = 200;
  std::string reproducer = "reproducer.json";
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "run invariant suites over a corpus");
  verify_cmd->add_option("suite", suite, "suite name, comma list, or all")
      ->capture_default_str();
  verify_corpus.Register(verify_cmd);
  verify_cmd->add_option("--budget", budget, "adversarial probes per search")
      ->capture_default_str();
  verify_cmd->add_option("--reproducer", reproducer,
                         "where to dump a failing case")
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen_cmd) return RunGen(gen);
    if (*run_cmd) return RunRun(run);
    if (*sweep_cmd) return RunSweepCommand(sweep_corpus, sweep_out);
    return RunVerify(suite, verify_corpus, budget, reproducer);
  } catch (const frugal_ufl::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const frugal_ufl::NonMonotoneError& e) {
    std::cerr << "verification error: " << e.what() << "\n";
    return kExitVerification;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
