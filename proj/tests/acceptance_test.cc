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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits with
// the number of failed criteria. Every count is reported as measured; a
// FAIL line carries the first counterexample found.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "frugal_ufl/analysis.h"
#include "frugal_ufl/auctions.h"
#include "frugal_ufl/errors.h"
#include "frugal_ufl/experiment.h"
#include "frugal_ufl/generators.h"
#include "frugal_ufl/solver.h"
#include "oracle.h"
#include "random_instances.h"
#include "random_models.h"

namespace frugal_ufl {
namespace {

const std::vector<Rational> kEpsilons = {Rational(1, 10), Rational(1, 2),
                                         Rational(1), Rational(2)};
const std::vector<Rational> kLambdas = {Rational(6, 5), Rational(3, 2),
                                        Rational(2)};

struct Verdict {
  bool pass = true;
  long checks = 0;
  long failures = 0;
  std::string note;
  std::string first_failure;

  void Check(bool ok, const std::function<std::string()>& describe) {
    ++checks;
    if (ok) return;
    pass = false;
    if (failures++ == 0) first_failure = describe();
  }
};

// The shared random corpus: 500 Euclidean instances, 2..10 facilities,
// 1..30 users, opening costs in [0.1, 1].
ExperimentConfig CorpusConfig() {
  ExperimentConfig c;
  c.count = 500;
  c.seed = 1;
  c.min_users = 1;
  c.max_users = 30;
  c.min_facilities = 2;
  c.max_facilities = 10;
  c.jobs = 0;
  return c;
}

struct Scored {
  CorpusEntry entry;
  FrugalBenchmark bench;
};

// Corpus instances whose frugal benchmark exists (no facility is a monopolist
// and c(F) > 0); the others cannot be scored and are counted separately.
std::vector<Scored> ScoredCorpus(int* skipped) {
  std::vector<Scored> out;
  *skipped = 0;
  for (CorpusEntry& e : BuildCorpus(CorpusConfig())) {
    try {
      const Solver solver(e.instance);
      FrugalBenchmark b = ComputeBenchmark(solver, e.instance.TrueCosts());
      out.push_back({std::move(e), std::move(b)});
    } catch (const DomainError&) {
      ++*skipped;
    }
  }
  return out;
}

void Absorb(Verdict& v, const SuiteResult& r) {
  v.checks += r.checks;
  if (r.failures > 0) {
    v.pass = false;
    if (v.failures == 0) v.first_failure = r.first_failure;
    v.failures += r.failures;
  }
}

Verdict StarFamily() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  for (int k = 1; k <= 10; ++k) {
    const Solver solver(GenerateStar(k));
    const BidProfile o = solver.instance().TrueCosts();
    const Outcome out = Vcg(solver, o);
    FacilitySet peripherals;
    for (int j = 1; j <= k; ++j) peripherals = peripherals.With(j);
    const std::string tag = "k=" + std::to_string(k);
    v.Check(out.winners == peripherals, [&] { return tag + ": winners"; });
    for (const auto& [f, p] : out.payments) {
      v.Check(p == Rational(2), [&] {
        return tag + ": payment " + p.ToExactString() + " to facility " +
               std::to_string(f);
      });
    }
    v.Check(out.total_payment_cost == Rational(3 * k),
            [&] { return tag + ": total " + out.total_payment_cost.ToExactString(); });
    const FrugalBenchmark b = ComputeBenchmark(solver, o);
    v.Check(b.cost == Rational(k + 2),
            [&] { return tag + ": frugal cost " + b.cost.ToExactString(); });
    const Rational ratio = out.total_payment_cost / b.cost;
    v.Check(ratio == Rational(3) - Rational(6, k + 2),
            [&] { return tag + ": ratio " + ratio.ToExactString(); });
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start).count();
  v.Check(secs < 1.0, [&] { return "took " + std::to_string(secs) + " s"; });
  return v;
}

Verdict VcgUpperBound(int scored, int skipped) {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  Absorb(v, RunSuite("vcg-frugality", CorpusConfig()));
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start).count();
  v.Check(secs <= 120.0, [&] { return "took " + std::to_string(secs) + " s"; });
  v.note = std::to_string(scored) + " scored, " + std::to_string(skipped) +
           " without a frugal benchmark";
  return v;
}

// Star k = 6 under PredictedLimits with exact predictions and epsilon 1,
// recomputed with bisection thresholds over the brute-force allocation.
Rational StarConsistencyByOracle() {
  const Instance star = GenerateStar(6);
  const std::vector<Rational> o = star.opening();
  const oracle::Rule rule = oracle::MakeRule(
      star, oracle::Rule::kPredictedLimits, o, Rational(1), Rational(1));
  const std::uint32_t winners = oracle::Winners(star, rule, o);
  Rational total = *oracle::Connection(star, winners);
  for (int f = 0; f < star.num_facilities(); ++f) {
    if (oracle::Has(winners, f)) total += *oracle::Threshold(star, rule, o, f);
  }
  const auto opt = oracle::Minimize(star, o, oracle::Model{});
  oracle::Constraints disjoint;
  disjoint.disjoint_from = {opt->mask};
  return total / oracle::Minimize(star, o, oracle::Model{}, disjoint)->cost;
}

Verdict Consistency() {
  Verdict v;
  ExperimentConfig c = CorpusConfig();
  c.auctions = {AuctionKind::kPredictedLimits};
  c.epsilons = kEpsilons;
  Absorb(v, RunSuite("consistency", c));
  const Rational by_oracle = StarConsistencyByOracle();
  const Solver star(GenerateStar(6));
  const RatioReport r =
      Evaluate(AuctionKind::kPredictedLimits, star,
               Prediction(star.instance().TrueCosts().values()), {Rational(1), Rational(1)});
  v.Check(by_oracle == Rational(3, 2) && r.ratio == by_oracle, [&] {
    return "star k=6 eps=1: library " + r.ratio.ToExactString() + ", oracle " +
           by_oracle.ToExactString();
  });
  return v;
}

// Criteria 4 and 5 share the adversarial probes: every probe is checked
// against the robust bound, and error-tolerant probes with eta <= lambda
// also against the error-dependent guarantee.
void RobustnessAndTolerance(const std::vector<Scored>& corpus, Verdict& robust,
                            Verdict& tolerant) {
  constexpr int kInstances = 50;
  constexpr int kBudget = 2000;
  for (int i = 0; i < kInstances && i < static_cast<int>(corpus.size()); ++i) {
    const CorpusEntry& e = corpus[i].entry;
    const Solver solver(e.instance);
    const AuctionConfig cfg{kEpsilons[i % kEpsilons.size()],
                            kLambdas[i % kLambdas.size()]};
    for (AuctionKind kind :
         {AuctionKind::kPredictedLimits, AuctionKind::kErrorTolerant}) {
      const Rational bound = *RobustBound(kind, cfg);
      const std::string tag = e.id + " " + std::string(AuctionName(kind)) +
                              " eps=" + cfg.epsilon.ToExactString() +
                              " lambda=" + cfg.lambda.ToExactString();
      AdversarialSearch(
          kind, solver, cfg, kBudget,
          e.seed * 4 + static_cast<std::uint64_t>(kind),
          [&](const Prediction&, const RatioReport& r) {
            robust.Check(r.ratio <= bound, [&] {
              return tag + ": ratio " + r.RatioDecimal() + " > " +
                     bound.ToExactString();
            });
            if (kind != AuctionKind::kErrorTolerant || !r.eta ||
                *r.eta > cfg.lambda) {
              return;
            }
            tolerant.Check(r.outcome.winners == *r.predicted_opt, [&] {
              return tag + " eta=" + r.eta->ToDecimal(6) +
                     ": winners differ from the predicted optimum";
            });
            const Rational g =
                *r.eta * (Rational(1) + cfg.lambda) + Rational(2) * cfg.epsilon;
            tolerant.Check(r.ratio <= g, [&] {
              return tag + " eta=" + r.eta->ToDecimal(6) + ": ratio " +
                     r.RatioDecimal() + " > " + g.ToDecimal(6);
            });
          });
    }
  }
  robust.note = std::to_string(kInstances) + " instances x " +
                std::to_string(kBudget) + " probes x 2 auctions";
  // Perturbed predictions at fixed error targets on the whole corpus.
  ExperimentConfig c = CorpusConfig();
  c.auctions = {AuctionKind::kErrorTolerant};
  c.epsilons = kEpsilons;
  c.lambdas = kLambdas;
  c.eta_targets = {Rational(1), Rational(11, 10), Rational(6, 5),
                   Rational(3, 2), Rational(2)};
  Absorb(tolerant, RunSuite("error-tolerance", c));
}

Verdict Incentives() {
  Verdict v;
  ExperimentConfig c = CorpusConfig();
  c.auctions = {AuctionKind::kVcg, AuctionKind::kPredictedLimits,
                AuctionKind::kErrorTolerant};
  c.epsilons = kEpsilons;
  c.lambdas = kLambdas;
  c.eta_targets = {Rational(1), Rational(3, 2)};
  Absorb(v, RunSuite("truthfulness", c));
  Absorb(v, RunSuite("monotonicity", c));
  ExperimentConfig control = CorpusConfig();
  control.count = 20;
  control.auctions = {AuctionKind::kFirstPrice};
  const SuiteResult broken = RunSuite("truthfulness", control);
  v.Check(!broken.passed(),
          [] { return "first-price control passed the truthfulness suite"; });
  v.note = "first-price control caught on " + std::to_string(broken.failures) +
           " of " + std::to_string(broken.checks) + " facilities";
  return v;
}

Verdict OracleEquivalence() {
  Verdict v;
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 1000; ++trial) {
    const int nf = static_cast<int>(UniformInt(rng, 1, 8));
    const int nu = static_cast<int>(UniformInt(rng, 0, 10));
    const bool huge = trial % 5 == 4;
    const Instance inst = testing_util::RandomInstance(rng, nu, nf, huge);
    const std::vector<Rational> bids = testing_util::RandomBids(rng, nf, huge);
    const testing_util::ModelPair model = testing_util::RandomModel(rng, nf);
    const testing_util::ConstraintPair cons =
        testing_util::RandomConstraints(rng, nf);
    const auto expected = oracle::Minimize(inst, bids, model.ref, cons.ref);
    for (bool exact_only : {false, true}) {
      Solver solver(inst);
      solver.set_exact_only(exact_only);
      const auto got = solver.TryMinimize(BidProfile(bids), model.lib, cons.lib);
      const bool same =
          expected.has_value() == got.has_value() &&
          (!expected || (got->argmin_set.mask() == expected->mask &&
                         got->scaled_cost == expected->cost));
      v.Check(same, [&] {
        return "triple " + std::to_string(trial) +
               (exact_only ? " (exact path)" : " (fast path)");
      });
    }
  }
  v.note = "1000 triples, both arithmetic paths";
  return v;
}

Verdict PaymentBound(const std::vector<Scored>& corpus) {
  Verdict v;
  std::map<std::string, std::pair<long, long>> by_config;  // failures, checks
  struct Cell {
    AuctionKind kind;
    Rational eps;
    Rational lambda;
    Rational eta;
  };
  std::vector<Cell> cells = {{AuctionKind::kVcg, 1, 1, 1}};
  for (const Rational& eps : kEpsilons) {
    for (const Rational& eta : {Rational(1), Rational(3, 2)}) {
      cells.push_back({AuctionKind::kPredictedLimits, eps, 1, eta});
      for (const Rational& lam : kLambdas) {
        cells.push_back({AuctionKind::kErrorTolerant, eps, lam, eta});
      }
    }
  }
  for (const Scored& s : corpus) {
    const Solver solver(s.entry.instance);
    const BidProfile o = s.entry.instance.TrueCosts();
    for (const Cell& cell : cells) {
      std::optional<Prediction> p;
      if (UsesPredictions(cell.kind)) p = CellPredictions(s.entry, cell.eta);
      const AuctionConfig cfg{cell.eps, cell.lambda};
      const RatioReport r = Evaluate(cell.kind, solver, p, cfg, &s.bench);
      for (const PaymentBoundConfig& c : ProofConfigurations(
               cell.kind, solver, o, p, cfg, r.outcome, s.bench)) {
        const BoundCheck b = CheckPaymentBound(solver, o, r.outcome, c.subset,
                                               c.reference, c.alpha,
                                               c.alpha_ref_max);
        auto& [fails, checks] = by_config[std::string(AuctionName(cell.kind)) +
                                          "/" + c.name];
        ++checks;
        if (!b.holds) ++fails;
        v.Check(b.holds, [&] {
          return s.entry.id + " " + std::string(AuctionName(cell.kind)) +
                 " eps=" + cell.eps.ToExactString() + " [" + c.name +
                 "]: " + b.lhs.ToDecimal(6) + " > " + b.rhs.ToDecimal(6);
        });
      }
    }
  }
  for (const auto& [name, counts] : by_config) {
    if (!v.note.empty()) v.note += ", ";
    v.note += name + " " + std::to_string(counts.first) + "/" +
              std::to_string(counts.second);
  }
  v.note = "failures by configuration: " + v.note;
  return v;
}

int Print(int n, const std::string& title, const Verdict& v, double secs) {
  std::printf("%s %d %s: %ld checks, %ld violations, %.1f s", v.pass ? "PASS" : "FAIL",
              n, title.c_str(), v.checks, v.failures, secs);
  if (!v.note.empty()) std::printf("; %s", v.note.c_str());
  if (!v.first_failure.empty()) std::printf("; first: %s", v.first_failure.c_str());
  std::printf("\n");
  std::fflush(stdout);
  return v.pass ? 0 : 1;
}

template <typename F>
int Timed(int n, const std::string& title, F&& run) {
  const auto start = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = run();
  } catch (const std::exception& e) {
    v.pass = false;
    v.first_failure = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start).count();
  return Print(n, title, v, secs);
}

int Main() {
  int failed = 0;
  int skipped = 0;
  const std::vector<Scored> corpus = ScoredCorpus(&skipped);
  const int scored = static_cast<int>(corpus.size());

  failed += Timed(1, "star-family exactness", StarFamily);
  failed += Timed(2, "VCG ratio at most 3",
                  [&] { return VcgUpperBound(scored, skipped); });
  failed += Timed(3, "consistency with exact predictions", Consistency);

  Verdict robust;
  Verdict tolerant;
  const auto start = std::chrono::steady_clock::now();
  try {
    RobustnessAndTolerance(corpus, robust, tolerant);
  } catch (const std::exception& e) {
    robust.pass = tolerant.pass = false;
    robust.first_failure = tolerant.first_failure =
        std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - start).count();
  robust.Check(secs <= 600.0,
               [&] { return "took " + std::to_string(secs) + " s"; });
  tolerant.note = "probes shared with criterion 4, plus fixed error targets";
  failed += Print(4, "robustness falsification", robust, secs);
  failed += Print(5, "error tolerance", tolerant, 0.0);

  failed += Timed(6, "truthfulness and monotonicity", Incentives);
  failed += Timed(7, "solver matches subset enumeration", OracleEquivalence);
  failed += Timed(8, "payment bound", [&] { return PaymentBound(corpus); });
  return failed;
}

}  // namespace
}  // namespace frugal_ufl

int main() { return frugal_ufl::Main(); }
