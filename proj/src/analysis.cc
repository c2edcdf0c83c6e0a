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

#include "frugal_ufl/analysis.h"

#include <algorithm>
#include <random>
#include <string>
#include <utility>

#include "frugal_ufl/errors.h"
#include "frugal_ufl/generators.h"

namespace frugal_ufl {
namespace {

const Rational kCostFloor(1, 100);

std::map<int, Rational> UniformAlpha(FacilitySet s, const Rational& value) {
  std::map<int, Rational> alpha;
  for (int f : s.Indices()) alpha.emplace(f, value);
  return alpha;
}

// alpha_l(W) evaluated at the payment: the multiplier the rule would apply
// to l inside W had l reported exactly p_l.
std::map<int, Rational> AlphaAtPayment(const AllocationRule& rule,
                                       const BidProfile& costs,
                                       const Outcome& outcome,
                                       FacilitySet subset) {
  std::map<int, Rational> alpha;
  for (int f : subset.Indices()) {
    const Rational& p = outcome.payments.at(f);
    const CostModel model = rule.ModelFor(costs.WithBid(f, p));
    alpha.emplace(f, model.Multiplier(f, outcome.winners, p));
  }
  return alpha;
}

FacilitySet Minus(FacilitySet a, FacilitySet b) {
  return FacilitySet::FromMask(a.mask() & ~b.mask());
}

Rational RandomOnGrid(std::mt19937_64& rng, const Rational& hi, int steps) {
  return hi * Rational(UniformInt(rng, 0, steps), steps);
}

}  // namespace

Rational PredictionError(const BidProfile& costs, const Prediction& predictions) {
  if (costs.size() != predictions.size()) {
    throw InvalidArgumentError("costs and predictions differ in length");
  }
  Rational eta(1);
  for (int f = 0; f < costs.size(); ++f) {
    const Rational& o = costs[f];
    const Rational& p = predictions[f];
    if (!o.IsPositive() || !p.IsPositive()) {
      throw InvalidArgumentError(
          "prediction error needs positive costs and predictions");
    }
    eta = Max(eta, Max(p / o, o / p));
  }
  return eta;
}

std::optional<Rational> RealizedEta(const BidProfile& costs,
                                    const Prediction& predictions) {
  if (costs.values() == predictions.values()) return Rational(1);
  for (int f = 0; f < costs.size(); ++f) {
    if (!costs[f].IsPositive() || !predictions[f].IsPositive()) {
      return std::nullopt;
    }
  }
  return PredictionError(costs, predictions);
}

std::optional<Rational> RobustBound(AuctionKind kind,
                                    const AuctionConfig& config) {
  const Rational& eps = config.epsilon;
  const Rational& lam = config.lambda;
  switch (kind) {
    case AuctionKind::kVcg:
      return Rational(3);
    case AuctionKind::kPredictedLimits:
      return Max(Rational(5), Rational(3) + Rational(2) / eps);
    case AuctionKind::kErrorTolerant: {
      const Rational lam2 = lam * lam;
      return Max(Rational(2) * lam2 * lam2 + Rational(3) * lam2,
                 Rational(3) + Rational(2) / eps);
    }
    case AuctionKind::kFirstPrice:
      break;
  }
  return std::nullopt;
}

std::optional<Rational> TheoreticalBound(AuctionKind kind,
                                         const AuctionConfig& config,
                                         const std::optional<Rational>& eta) {
  std::optional<Rational> bound = RobustBound(kind, config);
  if (!bound || !eta) return bound;
  if (kind == AuctionKind::kPredictedLimits && *eta == Rational(1)) {
    return Min(*bound, Rational(1) + config.epsilon);
  }
  if (kind == AuctionKind::kErrorTolerant && *eta <= config.lambda) {
    return Min(*bound, *eta * (Rational(1) + config.lambda) +
                           Rational(2) * config.epsilon);
  }
  return bound;
}

FrugalBenchmark ComputeBenchmark(const Solver& solver, const BidProfile& costs) {
  SolveResult f = solver.FrugalSet(costs);
  if (!f.scaled_cost.IsPositive()) {
    throw DomainError("frugal benchmark has zero cost; ratio undefined");
  }
  return {f.argmin_set, std::move(f.scaled_cost)};
}

RatioReport FrugalityRatio(const Solver& solver, const BidProfile& true_costs,
                           const Outcome& outcome) {
  const FrugalBenchmark bench = ComputeBenchmark(solver, true_costs);
  RatioReport r;
  r.outcome = outcome;
  r.frugal_set = bench.set;
  r.frugal_cost = bench.cost;
  r.ratio = outcome.total_payment_cost / bench.cost;
  return r;
}

RatioReport Evaluate(AuctionKind kind, const Solver& solver,
                     const std::optional<Prediction>& predictions,
                     const AuctionConfig& config,
                     const FrugalBenchmark* benchmark) {
  const BidProfile costs = solver.instance().TrueCosts();
  std::optional<FrugalBenchmark> own;
  if (benchmark == nullptr) {
    own = ComputeBenchmark(solver, costs);
    benchmark = &*own;
  }
  RatioReport r;
  r.auction = std::string(AuctionName(kind));
  r.outcome = RunAuction(kind, solver, costs, predictions, config);
  r.frugal_set = benchmark->set;
  r.frugal_cost = benchmark->cost;
  r.ratio = r.outcome.total_payment_cost / benchmark->cost;
  if (UsesPredictions(kind)) {
    r.eta = RealizedEta(costs, *predictions);
    r.predicted_opt = solver.OptSet(predictions->AsCosts()).argmin_set;
  }
  r.bound = TheoreticalBound(kind, config, r.eta);
  r.bound_satisfied = !r.bound || r.ratio <= *r.bound;
  return r;
}

BoundCheck CheckPaymentBound(const Solver& solver, const BidProfile& true_costs,
                             const Outcome& outcome, FacilitySet subset,
                             FacilitySet reference,
                             const std::map<int, Rational>& alpha,
                             const Rational& alpha_ref_max) {
  if (!subset.IsSubsetOf(outcome.winners)) {
    throw InvalidArgumentError("payment-bound subset is not within the winners");
  }
  if (reference.empty() ||
      !reference.IsSubsetOf(solver.instance().AllFacilities())) {
    throw InvalidArgumentError("reference set must be a nonempty facility set");
  }
  BoundCheck c;
  c.subset = subset;
  c.reference = reference;
  c.alpha = alpha;
  c.alpha_ref_max = alpha_ref_max;
  for (int f : subset.Indices()) {
    const auto it = alpha.find(f);
    if (it == alpha.end()) {
      throw InvalidArgumentError("no multiplier given for facility " +
                                 solver.instance().facilities()[f]);
    }
    c.lhs += it->second * outcome.payments.at(f);
  }
  Rational opening;
  for (int f : reference.Indices()) opening += true_costs[f];
  c.rhs = alpha_ref_max * opening +
          Rational(2) * solver.Connection(reference).value();
  c.holds = c.lhs <= c.rhs;
  return c;
}

std::vector<PaymentBoundConfig> ProofConfigurations(
    AuctionKind kind, const Solver& solver, const BidProfile& true_costs,
    const std::optional<Prediction>& predictions, const AuctionConfig& config,
    const Outcome& outcome, const FrugalBenchmark& benchmark) {
  std::vector<PaymentBoundConfig> out;
  const FacilitySet w = outcome.winners;
  const FacilitySet f = benchmark.set;
  const FacilitySet opt = solver.OptSet(true_costs).argmin_set;
  const Rational one(1);
  const Rational inflate = Rational(2) / config.epsilon;
  // A multiplier supremum always includes the unscaled sets.
  const Rational inflate_sup = Max(one, inflate);

  switch (kind) {
    case AuctionKind::kFirstPrice:
      break;
    case AuctionKind::kVcg:
      out.push_back({"optimum-vs-frugal", w, f, UniformAlpha(w, one), one});
      break;
    case AuctionKind::kPredictedLimits: {
      const PredictedLimitsRule rule(solver, *predictions, config.epsilon);
      const FacilitySet t = rule.predicted_opt();
      if (w == opt) {
        if (predictions->values() == true_costs.values()) {
          out.push_back({"consistency", w, f,
                         AlphaAtPayment(rule, true_costs, outcome, w), one});
        } else if (t != opt) {
          out.push_back({"optimum-output-unscaled", w, f,
                         UniformAlpha(w, one), inflate_sup});
        } else {
          out.push_back({"optimum-output-predicted", w, f,
                         AlphaAtPayment(rule, true_costs, outcome, w), one});
        }
      } else {
        const FacilitySet nonfrugal = Minus(w, f);
        const FacilitySet frugal = w & f;
        out.push_back({"nonfrugal-winners", nonfrugal, f,
                       UniformAlpha(nonfrugal, one), one});
        out.push_back({"frugal-winners", frugal, opt, UniformAlpha(frugal, one),
                       inflate_sup});
      }
      break;
    }
    case AuctionKind::kErrorTolerant: {
      const std::optional<Rational> eta = RealizedEta(true_costs, *predictions);
      if (!eta || *eta > config.lambda) break;
      FacilitySet high_nonfrugal;
      FacilitySet high_frugal;
      for (const auto& [l, p] : outcome.payments) {
        if (p <= config.lambda * (*predictions)[l]) continue;
        if (f.Contains(l)) {
          high_frugal = high_frugal.With(l);
        } else {
          high_nonfrugal = high_nonfrugal.With(l);
        }
      }
      out.push_back({"tolerant-high-nonfrugal", high_nonfrugal, f,
                     UniformAlpha(high_nonfrugal, inflate), one});
      out.push_back({"tolerant-high-frugal", high_frugal, opt,
                     UniformAlpha(high_frugal, inflate), one});
      break;
    }
  }
  return out;
}

std::vector<Rational> BidGrid(const AllocationRule& rule, const Solver& solver,
                              const BidProfile& costs, int facility,
                              const GridSpec& spec) {
  std::vector<Rational> grid;
  auto around = [&](const Rational& x) {
    const Rational step = spec.relative_step * Max(Rational(1), x);
    grid.push_back(x);
    grid.push_back(x + step);
    if (x >= step) grid.push_back(x - step);
  };
  const Rational& o = costs[facility];
  Rational top = o;
  grid.push_back(Rational(0));
  grid.push_back(o / Rational(2));
  grid.push_back(o * Rational(2));
  around(o);
  for (const Rational& b : rule.Breakpoints(facility)) {
    around(b);
    top = Max(top, b);
  }
  try {
    if (std::optional<Rational> tau =
            ThresholdPayment(rule, solver, costs, facility)) {
      around(*tau);
      grid.push_back(*tau / Rational(2));
      grid.push_back(*tau * Rational(2));
      top = Max(top, *tau);
    }
  } catch (const MonopolyError&) {
    // No threshold exists; the structural points still apply.
  }
  std::mt19937_64 rng(spec.seed ^ (0x9e3779b97f4a7c15ull * (facility + 1)));
  const Rational hi = top * Rational(2) + Rational(1);
  for (int i = 0; i < spec.random_points; ++i) {
    grid.push_back(RandomOnGrid(rng, hi, 10000));
  }
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

std::vector<TruthfulnessViolation> CheckTruthfulness(
    AuctionKind kind, const Solver& solver,
    const std::optional<Prediction>& predictions, const AuctionConfig& config,
    const GridSpec& spec) {
  const auto rule = MakeRule(kind, solver, predictions, config);
  const BidProfile costs = solver.instance().TrueCosts();
  std::vector<TruthfulnessViolation> out;
  for (int l = 0; l < solver.num_facilities(); ++l) {
    const Rational& o = costs[l];
    auto utility = [&](const Rational& b) -> Rational {
      const BidProfile bids = costs.WithBid(l, b);
      if (!rule->Winners(solver, bids).Contains(l)) return Rational(0);
      if (kind == AuctionKind::kFirstPrice) return b - o;
      const std::optional<Rational> p = ThresholdPayment(
          *rule, solver, bids, l, {.verify_by_sampling = false});
      return *p - o;
    };
    try {
      const Rational truthful = utility(o);
      for (const Rational& b : BidGrid(*rule, solver, costs, l, spec)) {
        Rational u = utility(b);
        if (u > truthful) out.push_back({l, b, truthful, std::move(u)});
      }
    } catch (const MonopolyError&) {
      continue;  // the facility is indispensable; payments are undefined
    }
  }
  return out;
}

bool CheckMonotonicity(AuctionKind kind, const Solver& solver,
                       const std::optional<Prediction>& predictions,
                       const AuctionConfig& config, int facility,
                       std::span<const Rational> grid) {
  const auto rule = MakeRule(kind, solver, predictions, config);
  const BidProfile costs = solver.instance().TrueCosts();
  std::vector<Rational> sorted(grid.begin(), grid.end());
  std::sort(sorted.begin(), sorted.end());
  bool lost = false;
  for (const Rational& b : sorted) {
    const bool wins =
        rule->Winners(solver, costs.WithBid(facility, b)).Contains(facility);
    if (wins && lost) return false;
    lost = lost || !wins;
  }
  return true;
}

SearchResult AdversarialSearch(AuctionKind kind, const Solver& solver,
                               const AuctionConfig& config, int budget,
                               std::uint64_t seed,
                               const ProbeCallback& on_probe) {
  if (budget < 1) throw InvalidArgumentError("search budget must be >= 1");
  config.Validate();
  const BidProfile costs = solver.instance().TrueCosts();
  const FrugalBenchmark bench = ComputeBenchmark(solver, costs);
  const int n = solver.num_facilities();
  const std::vector<Rational>& o = costs.values();
  const FacilitySet opt = solver.OptSet(costs).argmin_set;

  SearchResult result;
  auto probe = [&](std::vector<Rational> values) {
    Prediction pred(std::move(values));
    RatioReport r = Evaluate(kind, solver, pred, config, &bench);
    if (on_probe) on_probe(pred, r);
    if (result.probes == 0 || r.ratio > result.worst.ratio) {
      result.worst = r;
      result.worst_predictions = pred;
    }
    if (!r.bound_satisfied) {
      result.violations.push_back(std::move(r));
      result.violating_predictions.push_back(std::move(pred));
    }
    ++result.probes;
  };
  if (!UsesPredictions(kind)) {
    probe(o);
    return result;
  }

  Rational big = kCostFloor;
  for (const Rational& c : o) big = Max(big, c);
  big *= Rational(1000);
  auto map_members = [&](FacilitySet s, auto fn) {
    std::vector<Rational> v = o;
    for (int f : s.Indices()) v[static_cast<std::size_t>(f)] = fn(f);
    return v;
  };
  const FacilitySet all = solver.instance().AllFacilities();
  const Rational thousand(1000);

  std::vector<std::vector<Rational>> structured;
  structured.push_back(o);
  {
    // Swap the cost profiles of the optimum and the frugal set.
    const std::vector<int> a = opt.Indices();
    const std::vector<int> b = bench.set.Indices();
    std::vector<Rational> v = o;
    for (std::size_t i = 0; i < a.size(); ++i) {
      v[static_cast<std::size_t>(a[i])] = o[static_cast<std::size_t>(b[i % b.size()])];
    }
    for (std::size_t i = 0; i < b.size(); ++i) {
      v[static_cast<std::size_t>(b[i])] = o[static_cast<std::size_t>(a[i % a.size()])];
    }
    structured.push_back(std::move(v));
  }
  structured.push_back(map_members(opt, [&](int f) {
    return Max(o[static_cast<std::size_t>(f)], kCostFloor) * thousand;
  }));
  structured.push_back(map_members(
      opt, [&](int f) { return o[static_cast<std::size_t>(f)] / thousand; }));
  structured.push_back(map_members(all, [&](int f) {
    return Max(o[static_cast<std::size_t>(f)], kCostFloor) * thousand;
  }));
  structured.push_back(map_members(
      all, [&](int f) { return o[static_cast<std::size_t>(f)] / thousand; }));
  structured.push_back(map_members(all, [](int) { return Rational(0); }));
  structured.push_back(map_members(bench.set, [](int) { return Rational(0); }));
  {
    std::vector<Rational> v(o.size(), big);
    for (int f : bench.set.Indices()) v[static_cast<std::size_t>(f)] = Rational(0);
    structured.push_back(std::move(v));
  }
  // Errors at and just past the tolerance boundary.
  const Rational& lam = config.lambda;
  const Rational past = lam * Rational(1001, 1000);
  for (const Rational& r : {lam, past}) {
    structured.push_back(map_members(
        all, [&](int f) { return o[static_cast<std::size_t>(f)] / r; }));
    structured.push_back(map_members(
        all, [&](int f) { return o[static_cast<std::size_t>(f)] * r; }));
    structured.push_back(map_members(
        opt, [&](int f) { return o[static_cast<std::size_t>(f)] / r; }));
  }
  for (int l = 0; l < n; ++l) {
    std::vector<Rational> v(o.size(), big);
    v[static_cast<std::size_t>(l)] = Rational(0);
    structured.push_back(std::move(v));
  }
  for (auto& v : structured) {
    if (result.probes >= budget) return result;
    probe(std::move(v));
  }

  std::mt19937_64 rng(seed);
  const std::vector<Rational> factors = {
      Rational(0), Rational(1, 1000), Rational(1, 10), Rational(1, 2),
      Rational(1) / lam, Rational(1), lam, Rational(2), Rational(10),
      Rational(1000)};
  Rational total(0);
  for (const Rational& c : o) total += c;
  total = Max(total, kCostFloor);
  while (result.probes < budget) {
    std::vector<Rational> v = o;
    switch (UniformInt(rng, 0, 3)) {
      case 0: {  // random subset forced to look optimal
        const auto mask = static_cast<std::uint32_t>(
            UniformInt(rng, 1, static_cast<std::int64_t>(all.mask())));
        for (int f = 0; f < n; ++f) {
          const Rational base = Max(o[static_cast<std::size_t>(f)], kCostFloor);
          v[static_cast<std::size_t>(f)] =
              ((mask >> f) & 1u)
                  ? base * RandomOnGrid(rng, Rational(1), 1000)
                  : base * (Rational(1) + RandomOnGrid(rng, Rational(10), 1000));
        }
        break;
      }
      case 1:
        for (int f = 0; f < n; ++f) {
          const auto pick = static_cast<std::size_t>(
              UniformInt(rng, 0, static_cast<std::int64_t>(factors.size()) - 1));
          v[static_cast<std::size_t>(f)] =
              Max(o[static_cast<std::size_t>(f)], kCostFloor) * factors[pick];
        }
        break;
      case 2: {
        const Rational eta =
            Rational(1) + RandomOnGrid(rng, Rational(2), 1000);
        v = PerturbPredictions(costs, eta, rng(), kCostFloor).values();
        break;
      }
      default:
        for (int f = 0; f < n; ++f) {
          v[static_cast<std::size_t>(f)] =
              RandomOnGrid(rng, total * Rational(2), 10000);
        }
        break;
    }
    probe(std::move(v));
  }
  return result;
}

}  // namespace frugal_ufl
