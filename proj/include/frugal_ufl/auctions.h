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

#ifndef FRUGAL_UFL_AUCTIONS_H_
#define FRUGAL_UFL_AUCTIONS_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frugal_ufl/instance.h"
#include "frugal_ufl/rational.h"
#include "frugal_ufl/solver.h"

namespace frugal_ufl {

enum class AuctionKind { kVcg, kPredictedLimits, kErrorTolerant, kFirstPrice };

std::string_view AuctionName(AuctionKind kind);
// Accepts the names AuctionName produces; throws InvalidArgumentError.
AuctionKind ParseAuctionKind(std::string_view name);
bool UsesPredictions(AuctionKind kind);

struct AuctionConfig {
  Rational epsilon = 1;  // in (0, 2]
  Rational lambda = 1;   // >= 1; error-tolerant auction only

  void Validate() const;
};

struct Outcome {
  FacilitySet winners;
  std::map<int, Rational> payments;  // facility index -> payment
  Rational connection;               // d(U, winners)
  Rational total_payment_cost;       // payments plus connection

  Rational SumPayments() const;
};

// A deterministic allocation rule that minimizes a bid-dependent scaled
// cost. Payments are derived from it as critical bids.
class AllocationRule {
 public:
  virtual ~AllocationRule() = default;

  virtual std::string_view name() const = 0;
  // The cost model minimized when facilities report `bids`.
  virtual CostModel ModelFor(const BidProfile& bids) const = 0;
  // Every bid of `facility` at which ModelFor can change while the other
  // bids stay fixed. Between consecutive breakpoints the model is constant.
  virtual std::vector<Rational> Breakpoints(int facility) const = 0;

  FacilitySet Winners(const Solver& solver, const BidProfile& bids) const;
};

// Plain cost minimization.
class VcgRule final : public AllocationRule {
 public:
  std::string_view name() const override { return "vcg"; }
  CostModel ModelFor(const BidProfile&) const override {
    return CostModel::Plain();
  }
  std::vector<Rational> Breakpoints(int) const override { return {}; }
};

// Inflates a predicted-optimal member's bid by 2/epsilon once it exceeds
// the prediction, but only inside the predicted-optimal set itself.
class PredictedLimitsRule final : public AllocationRule {
 public:
  PredictedLimitsRule(const Solver& solver, Prediction predictions,
                      Rational epsilon);

  std::string_view name() const override { return "predicted-limits"; }
  CostModel ModelFor(const BidProfile& bids) const override;
  std::vector<Rational> Breakpoints(int facility) const override;
  FacilitySet predicted_opt() const { return predicted_opt_; }

 private:
  Prediction predictions_;
  Rational factor_;
  FacilitySet predicted_opt_;
};

// Favors the predicted-optimal set by 1/lambda^2 while all of its members
// bid within lambda of their predictions; otherwise behaves like
// PredictedLimitsRule with the triggers moved to lambda times the prediction.
class ErrorTolerantRule final : public AllocationRule {
 public:
  ErrorTolerantRule(const Solver& solver, Prediction predictions,
                    Rational epsilon, Rational lambda);

  std::string_view name() const override { return "error-tolerant"; }
  CostModel ModelFor(const BidProfile& bids) const override;
  std::vector<Rational> Breakpoints(int facility) const override;
  FacilitySet predicted_opt() const { return predicted_opt_; }
  // True when every predicted-optimal member bids within its tolerance.
  bool WithinTolerance(const BidProfile& bids) const;

 private:
  std::vector<Rational> limits_;  // lambda * prediction
  Rational inflate_;
  Rational downscale_;
  FacilitySet predicted_opt_;
};

struct ThresholdOptions {
  // Re-runs the full allocation at sample bids on both sides of the
  // computed threshold and fails on any disagreement.
  bool verify_by_sampling = true;
};

// sup{b >= 0 : facility wins under rule at (b, bids_-facility)}, computed
// exactly from the piecewise-linear cost curves. nullopt when the facility
// loses even at bid 0. Throws MonopolyError when every candidate set
// contains the facility, NonMonotoneError when it wins again after losing.
std::optional<Rational> ThresholdPayment(const AllocationRule& rule,
                                         const Solver& solver,
                                         const BidProfile& bids, int facility,
                                         const ThresholdOptions& options = {});

// Winners of the rule, each paid its threshold.
Outcome RunRule(const AllocationRule& rule, const Solver& solver,
                const BidProfile& bids, const ThresholdOptions& options = {});

// Closed-form VCG, cross-checked against the generic threshold.
Outcome Vcg(const Solver& solver, const BidProfile& bids);
Outcome PredictedLimits(const Solver& solver, const BidProfile& bids,
                        const Prediction& predictions, const Rational& epsilon);
Outcome ErrorTolerant(const Solver& solver, const BidProfile& bids,
                      const Prediction& predictions, const Rational& epsilon,
                      const Rational& lambda);
// Control: the VCG allocation paying each winner its own bid. Not truthful.
Outcome FirstPrice(const Solver& solver, const BidProfile& bids);

// The allocation rule behind `kind` (first-price shares VCG's).
std::unique_ptr<AllocationRule> MakeRule(
    AuctionKind kind, const Solver& solver,
    const std::optional<Prediction>& predictions, const AuctionConfig& config);

Outcome RunAuction(AuctionKind kind, const Solver& solver,
                   const BidProfile& bids,
                   const std::optional<Prediction>& predictions,
                   const AuctionConfig& config);

}  // namespace frugal_ufl

#endif  // FRUGAL_UFL_AUCTIONS_H_
