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

#include "frugal_ufl/auctions.h"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>

#include "frugal_ufl/errors.h"

namespace frugal_ufl {
namespace {

void CheckPredictions(const Prediction& p, int num_facilities) {
  if (p.size() != num_facilities) {
    throw InvalidArgumentError("predictions have " + std::to_string(p.size()) +
                               " entries, want " +
                               std::to_string(num_facilities));
  }
}

FacilitySet PredictedOpt(const Solver& solver, const Prediction& p) {
  CheckPredictions(p, solver.num_facilities());
  return solver.OptSet(p.AsCosts()).argmin_set;
}

struct Line {
  Rational intercept;
  Rational slope;
};

// Facility's exact standing at one bid: the cheapest set with and without it.
struct Standing {
  Rational in;
  Rational out;
};

class ThresholdSolver {
 public:
  ThresholdSolver(const AllocationRule& rule, const Solver& solver,
                  const BidProfile& bids, int facility)
      : rule_(rule), solver_(solver), bids_(bids), facility_(facility) {}

  Standing At(const Rational& b) const {
    const BidProfile bb = bids_.WithBid(facility_, b);
    const CostModel model = rule_.ModelFor(bb);
    return {MinWith(bb, model, MustContain{facility_}),
            MinWith(bb, model, MustExclude{facility_})};
  }

  // Largest bid in (lo, hi) at which the facility still wins, assuming the
  // model is constant there; nullopt if it wins nowhere on the interval.
  // hi == nullopt means the interval is unbounded.
  std::optional<Rational> LastWinIn(const Rational& lo,
                                    const std::optional<Rational>& hi) const {
    const Rational s1 = hi ? lo + (*hi - lo) / Rational(3) : lo + Rational(1);
    const Rational s2 = hi ? lo + (*hi - lo) * Rational(2, 3) : lo + Rational(2);
    const BidProfile b1 = bids_.WithBid(facility_, s1);
    const BidProfile b2 = bids_.WithBid(facility_, s2);
    const CostModel model = rule_.ModelFor(b1);
    if (!(rule_.ModelFor(b2) == model)) {
      throw std::logic_error(std::string(rule_.name()) +
                             ": cost model changes between breakpoints");
    }
    const Rational out = MinWith(b1, model, MustExclude{facility_});

    std::vector<Line> lines;
    const std::optional<FacilitySet> target = model.target();
    // Every non-target set containing the facility costs A + b.
    const FacilitySet skip = target.value_or(FacilitySet());
    const Constraint others[] = {MustContain{facility_}, NotEqualTo{skip}};
    const std::optional<SolveResult> a = solver_.TryMinimize(
        bids_.WithBid(facility_, Rational(0)), CostModel::Plain(), others);
    if (a) lines.push_back({a->scaled_cost, Rational(1)});
    if (target && target->Contains(facility_)) {
      const Rational v1 = solver_.ScaledCost(b1, model, *target);
      const Rational v2 = solver_.ScaledCost(b2, model, *target);
      const Rational slope = (v2 - v1) / (s2 - s1);
      lines.push_back({v1 - slope * s1, slope});
    }

    std::optional<Rational> last;
    for (const Line& line : lines) {
      if (!line.slope.IsPositive()) {
        throw std::logic_error("scaled cost must grow with the bid");
      }
      Rational r = (out - line.intercept) / line.slope;
      if (!last || r > *last) last = std::move(r);
    }
    if (!last || *last <= lo) return std::nullopt;
    if (hi && *last > *hi) return hi;
    return last;
  }

 private:
  Rational MinWith(const BidProfile& bb, const CostModel& model,
                   Constraint c) const {
    std::optional<SolveResult> r =
        solver_.TryMinimize(bb, model, std::span(&c, 1));
    if (!r) {
      throw MonopolyError("facility " +
                          solver_.instance().facilities()[facility_] +
                          " appears in every feasible set");
    }
    return std::move(r->scaled_cost);
  }

  const AllocationRule& rule_;
  const Solver& solver_;
  const BidProfile& bids_;
  int facility_;
};

}  // namespace

std::string_view AuctionName(AuctionKind kind) {
  switch (kind) {
    case AuctionKind::kVcg:
      return "vcg";
    case AuctionKind::kPredictedLimits:
      return "predicted-limits";
    case AuctionKind::kErrorTolerant:
      return "error-tolerant";
    case AuctionKind::kFirstPrice:
      return "first-price";
  }
  return "?";
}

AuctionKind ParseAuctionKind(std::string_view name) {
  for (AuctionKind k : {AuctionKind::kVcg, AuctionKind::kPredictedLimits,
                        AuctionKind::kErrorTolerant, AuctionKind::kFirstPrice}) {
    if (AuctionName(k) == name) return k;
  }
  throw InvalidArgumentError("unknown auction '" + std::string(name) + "'");
}

bool UsesPredictions(AuctionKind kind) {
  return kind == AuctionKind::kPredictedLimits ||
         kind == AuctionKind::kErrorTolerant;
}

void AuctionConfig::Validate() const {
  if (!epsilon.IsPositive() || epsilon > Rational(2)) {
    throw InvalidArgumentError("epsilon must lie in (0, 2], got " +
                               epsilon.ToExactString());
  }
  if (lambda < Rational(1)) {
    throw InvalidArgumentError("lambda must be at least 1, got " +
                               lambda.ToExactString());
  }
}

Rational Outcome::SumPayments() const {
  Rational sum;
  for (const auto& [f, p] : payments) sum += p;
  return sum;
}

FacilitySet AllocationRule::Winners(const Solver& solver,
                                    const BidProfile& bids) const {
  return solver.Minimize(bids, ModelFor(bids)).argmin_set;
}

PredictedLimitsRule::PredictedLimitsRule(const Solver& solver,
                                         Prediction predictions,
                                         Rational epsilon)
    : predictions_(std::move(predictions)),
      factor_(Rational(2) / epsilon),
      predicted_opt_(PredictedOpt(solver, predictions_)) {
  AuctionConfig{epsilon, Rational(1)}.Validate();
}

CostModel PredictedLimitsRule::ModelFor(const BidProfile&) const {
  return CostModel::PerFacilityInflate(predicted_opt_, predictions_.values(),
                                       factor_);
}

std::vector<Rational> PredictedLimitsRule::Breakpoints(int facility) const {
  if (!predicted_opt_.Contains(facility)) return {};
  return {predictions_[facility]};
}

ErrorTolerantRule::ErrorTolerantRule(const Solver& solver,
                                     Prediction predictions, Rational epsilon,
                                     Rational lambda)
    : inflate_(Rational(2) / epsilon),
      downscale_(Rational(1) / (lambda * lambda)),
      predicted_opt_(PredictedOpt(solver, predictions)) {
  AuctionConfig{epsilon, lambda}.Validate();
  limits_.reserve(predictions.values().size());
  for (const Rational& p : predictions.values()) limits_.push_back(lambda * p);
}

bool ErrorTolerantRule::WithinTolerance(const BidProfile& bids) const {
  for (int f : predicted_opt_.Indices()) {
    if (bids[f] > limits_[static_cast<std::size_t>(f)]) return false;
  }
  return true;
}

CostModel ErrorTolerantRule::ModelFor(const BidProfile& bids) const {
  if (WithinTolerance(bids)) {
    return CostModel::WholeSetDownscale(predicted_opt_, downscale_);
  }
  return CostModel::PerFacilityInflate(predicted_opt_, limits_, inflate_);
}

std::vector<Rational> ErrorTolerantRule::Breakpoints(int facility) const {
  if (!predicted_opt_.Contains(facility)) return {};
  return {limits_[static_cast<std::size_t>(facility)]};
}

std::optional<Rational> ThresholdPayment(const AllocationRule& rule,
                                         const Solver& solver,
                                         const BidProfile& bids, int facility,
                                         const ThresholdOptions& options) {
  if (facility < 0 || facility >= solver.num_facilities()) {
    throw InvalidArgumentError("unknown facility index " +
                               std::to_string(facility));
  }
  std::vector<Rational> points = {Rational(0)};
  for (Rational& p : rule.Breakpoints(facility)) {
    if (p.IsPositive()) points.push_back(std::move(p));
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const ThresholdSolver ts(rule, solver, bids, facility);
  auto wins_at = [&](const Rational& b) {
    return rule.Winners(solver, bids.WithBid(facility, b)).Contains(facility);
  };
  std::optional<Rational> sup;
  bool lost = false;
  std::vector<Rational> inside;  // bids where the facility must win
  auto win = [&](const Rational& upto) {
    if (lost) {
      throw NonMonotoneError(std::string(rule.name()) + ": facility " +
                             solver.instance().facilities()[facility] +
                             " wins again at bid " + upto.ToExactString() +
                             " after losing at a lower bid");
    }
    sup = upto;
  };

  for (std::size_t i = 0; i < points.size(); ++i) {
    const Rational& lo = points[i];
    const Standing st = ts.At(lo);
    // An exact tie at a point is settled by the tie-break itself.
    if (st.in < st.out || (st.in == st.out && !lost && wins_at(lo))) {
      win(lo);
    } else {
      lost = true;
    }
    std::optional<Rational> hi;
    if (i + 1 < points.size()) hi = points[i + 1];
    const std::optional<Rational> last = ts.LastWinIn(lo, hi);
    if (!last) {
      lost = true;
      continue;
    }
    inside.push_back((lo + *last) / Rational(2));
    win(*last);
    if (!hi || *last < *hi) lost = true;
  }

  if (sup && options.verify_by_sampling) {
    auto fail = [&](const Rational& b) {
      throw NonMonotoneError(std::string(rule.name()) +
                             ": sampled allocation at bid " +
                             b.ToExactString() +
                             " disagrees with threshold " +
                             sup->ToExactString());
    };
    if (!inside.empty()) {
      if (!wins_at(inside.front())) fail(inside.front());
      if (inside.size() > 1 && !wins_at(inside.back())) fail(inside.back());
    }
    Rational gap = Max(*sup, Rational(1)) / Rational(1000000);
    for (const Rational& p : points) {
      if (p > *sup) {
        gap = Min(gap, (p - *sup) / Rational(2));
        break;
      }
    }
    const Rational above = *sup + gap;
    if (wins_at(above)) fail(above);
  }
  return sup;
}

Outcome RunRule(const AllocationRule& rule, const Solver& solver,
                const BidProfile& bids, const ThresholdOptions& options) {
  Outcome out;
  out.winners = rule.Winners(solver, bids);
  for (int f : out.winners.Indices()) {
    std::optional<Rational> p =
        ThresholdPayment(rule, solver, bids, f, options);
    if (!p || *p < bids[f]) {
      throw std::logic_error(std::string(rule.name()) +
                             ": winner's threshold is below its bid");
    }
    out.payments.emplace(f, *std::move(p));
  }
  out.connection = solver.Connection(out.winners).value();
  out.total_payment_cost = out.SumPayments() + out.connection;
  return out;
}

Outcome Vcg(const Solver& solver, const BidProfile& bids) {
  Outcome out;
  out.winners = solver.OptSet(bids).argmin_set;
  const VcgRule rule;
  for (int f : out.winners.Indices()) {
    const Constraint exclude = MustExclude{f};
    const std::optional<SolveResult> without =
        solver.TryMinimize(bids, CostModel::Plain(), std::span(&exclude, 1));
    if (!without) {
      throw MonopolyError("facility " + solver.instance().facilities()[f] +
                          " appears in every feasible set");
    }
    Rational p = without->scaled_cost -
                 solver.OptSet(bids.WithBid(f, Rational(0))).scaled_cost;
    const std::optional<Rational> generic =
        ThresholdPayment(rule, solver, bids, f, {.verify_by_sampling = false});
    if (!generic || *generic != p) {
      throw std::logic_error("VCG payment disagrees with its threshold");
    }
    out.payments.emplace(f, std::move(p));
  }
  out.connection = solver.Connection(out.winners).value();
  out.total_payment_cost = out.SumPayments() + out.connection;
  return out;
}

Outcome PredictedLimits(const Solver& solver, const BidProfile& bids,
                        const Prediction& predictions, const Rational& epsilon) {
  return RunRule(PredictedLimitsRule(solver, predictions, epsilon), solver,
                 bids);
}

Outcome ErrorTolerant(const Solver& solver, const BidProfile& bids,
                      const Prediction& predictions, const Rational& epsilon,
                      const Rational& lambda) {
  return RunRule(ErrorTolerantRule(solver, predictions, epsilon, lambda),
                 solver, bids);
}

Outcome FirstPrice(const Solver& solver, const BidProfile& bids) {
  Outcome out;
  out.winners = solver.OptSet(bids).argmin_set;
  for (int f : out.winners.Indices()) out.payments.emplace(f, bids[f]);
  out.connection = solver.Connection(out.winners).value();
  out.total_payment_cost = out.SumPayments() + out.connection;
  return out;
}

std::unique_ptr<AllocationRule> MakeRule(
    AuctionKind kind, const Solver& solver,
    const std::optional<Prediction>& predictions, const AuctionConfig& config) {
  config.Validate();
  if (UsesPredictions(kind) && !predictions) {
    throw InvalidArgumentError(std::string(AuctionName(kind)) +
                               " needs predictions");
  }
  switch (kind) {
    case AuctionKind::kPredictedLimits:
      return std::make_unique<PredictedLimitsRule>(solver, *predictions,
                                                   config.epsilon);
    case AuctionKind::kErrorTolerant:
      return std::make_unique<ErrorTolerantRule>(solver, *predictions,
                                                 config.epsilon, config.lambda);
    case AuctionKind::kVcg:
    case AuctionKind::kFirstPrice:
      break;
  }
  return std::make_unique<VcgRule>();
}

Outcome RunAuction(AuctionKind kind, const Solver& solver,
                   const BidProfile& bids,
                   const std::optional<Prediction>& predictions,
                   const AuctionConfig& config) {
  switch (kind) {
    case AuctionKind::kVcg:
      return Vcg(solver, bids);
    case AuctionKind::kFirstPrice:
      return FirstPrice(solver, bids);
    default:
      return RunRule(*MakeRule(kind, solver, predictions, config), solver,
                     bids);
  }
}

}  // namespace frugal_ufl
