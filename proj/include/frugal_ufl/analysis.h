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

#ifndef FRUGAL_UFL_ANALYSIS_H_
#define FRUGAL_UFL_ANALYSIS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "frugal_ufl/auctions.h"
#include "frugal_ufl/instance.h"
#include "frugal_ufl/rational.h"
#include "frugal_ufl/solver.h"

namespace frugal_ufl {

// max over facilities of max(pred/cost, cost/pred). Every entry of both
// vectors must be positive.
Rational PredictionError(const BidProfile& costs, const Prediction& predictions);

// The prediction error where it is defined: 1 when the vectors are equal
// (zeros included), PredictionError when all entries are positive, and
// nullopt otherwise.
std::optional<Rational> RealizedEta(const BidProfile& costs,
                                    const Prediction& predictions);

// Worst-case ratio bound that holds regardless of prediction quality;
// nullopt for the first-price control.
std::optional<Rational> RobustBound(AuctionKind kind, const AuctionConfig& config);

// Tightest proven bound for the given realized error: the robust bound,
// improved to 1+epsilon for exact predictions and to eta(1+lambda)+2 epsilon
// for the error-tolerant auction when eta <= lambda.
std::optional<Rational> TheoreticalBound(AuctionKind kind,
                                         const AuctionConfig& config,
                                         const std::optional<Rational>& eta);

// The frugal set F (cheapest set disjoint from the optimum) and c(F).
struct FrugalBenchmark {
  FacilitySet set;
  Rational cost;
};
// Throws MonopolyError when F does not exist and DomainError when c(F) = 0.
FrugalBenchmark ComputeBenchmark(const Solver& solver, const BidProfile& costs);

struct RatioReport {
  std::string auction;
  Outcome outcome;
  FacilitySet frugal_set;
  Rational frugal_cost;
  Rational ratio;  // outcome.total_payment_cost / frugal_cost
  std::optional<Rational> eta;
  std::optional<Rational> bound;
  bool bound_satisfied = true;
  // Set for the prediction-based auctions.
  std::optional<FacilitySet> predicted_opt;

  std::string RatioDecimal() const { return ratio.ToDecimal(12); }
};

// Ratio of an outcome against the frugal benchmark on the true costs. The
// bound fields are left empty.
RatioReport FrugalityRatio(const Solver& solver, const BidProfile& true_costs,
                           const Outcome& outcome);

// Runs `kind` at truthful bids and fills in eta and the theoretical bound.
RatioReport Evaluate(AuctionKind kind, const Solver& solver,
                     const std::optional<Prediction>& predictions,
                     const AuctionConfig& config,
                     const FrugalBenchmark* benchmark = nullptr);

// Both sides of the unified payment bound
//   sum_{l in subset} alpha_l p_l <= alpha_ref * sum_{f in R} o_f + 2 d(U, R).
struct BoundCheck {
  std::string name;
  FacilitySet subset;
  FacilitySet reference;
  std::map<int, Rational> alpha;
  Rational alpha_ref_max;
  Rational lhs;
  Rational rhs;
  bool holds = false;
};

BoundCheck CheckPaymentBound(const Solver& solver, const BidProfile& true_costs,
                             const Outcome& outcome, FacilitySet subset,
                             FacilitySet reference,
                             const std::map<int, Rational>& alpha,
                             const Rational& alpha_ref_max);

// A (subset, reference, alpha) instantiation of the payment bound.
struct PaymentBoundConfig {
  std::string name;
  FacilitySet subset;
  FacilitySet reference;
  std::map<int, Rational> alpha;
  Rational alpha_ref_max;
};

// The instantiations the ratio proofs use for this outcome (which ones apply
// depends on whether the output is the optimum, the predicted optimum, and
// on the prediction error). First-price has none.
std::vector<PaymentBoundConfig> ProofConfigurations(
    AuctionKind kind, const Solver& solver, const BidProfile& true_costs,
    const std::optional<Prediction>& predictions, const AuctionConfig& config,
    const Outcome& outcome, const FrugalBenchmark& benchmark);

struct GridSpec {
  // Offsets around every breakpoint, relative to max(1, breakpoint).
  Rational relative_step = Rational(1, 1000000);
  // Extra uniformly random bids in [0, 2 * largest structural bid + 1].
  int random_points = 4;
  std::uint64_t seed = 0;
};

// Misreports to try for `facility`, others truthful: zero, fractions and
// multiples of the true cost, every rule breakpoint, and the facility's
// threshold, each with a step either side. Sorted and deduplicated.
std::vector<Rational> BidGrid(const AllocationRule& rule, const Solver& solver,
                              const BidProfile& costs, int facility,
                              const GridSpec& spec);

struct TruthfulnessViolation {
  int facility = 0;
  Rational misreport;
  Rational truthful_utility;
  Rational misreport_utility;
};

// Every profitable unilateral misreport found on the grid.
std::vector<TruthfulnessViolation> CheckTruthfulness(
    AuctionKind kind, const Solver& solver,
    const std::optional<Prediction>& predictions, const AuctionConfig& config,
    const GridSpec& spec = {});

// True when facility's membership in the winner set never switches back on
// as its bid rises along `grid` (others truthful).
bool CheckMonotonicity(AuctionKind kind, const Solver& solver,
                       const std::optional<Prediction>& predictions,
                       const AuctionConfig& config, int facility,
                       std::span<const Rational> grid);

struct SearchResult {
  RatioReport worst;
  Prediction worst_predictions;
  int probes = 0;
  // Probes whose ratio exceeded the theoretical bound for their error.
  std::vector<RatioReport> violations;
  std::vector<Prediction> violating_predictions;
};

using ProbeCallback =
    std::function<void(const Prediction&, const RatioReport&)>;

// Falsification search over predictions at truthful bids: structured probes
// (exact, swapped optimum/frugal profiles, extreme over- and
// under-prediction, forced predicted optima, boundary errors) followed by
// random ones until `budget` probes have run. Prediction-free auctions use
// a single probe.
SearchResult AdversarialSearch(AuctionKind kind, const Solver& solver,
                               const AuctionConfig& config, int budget,
                               std::uint64_t seed,
                               const ProbeCallback& on_probe = nullptr);

}  // namespace frugal_ufl

#endif  // FRUGAL_UFL_ANALYSIS_H_
