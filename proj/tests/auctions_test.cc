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

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "frugal_ufl/errors.h"
#include "frugal_ufl/generators.h"
#include "oracle.h"
#include "random_instances.h"

namespace frugal_ufl {
namespace {

using testing_util::RandomBids;
using testing_util::RandomInstance;
using testing_util::RandomPredictions;

FacilitySet Peripherals(int k) {
  FacilitySet s;
  for (int i = 1; i <= k; ++i) s = s.With(i);
  return s;
}

// The star with one more facility far from everything and almost free.
// Each peripheral's threshold is then set by "peripherals + far", which
// no cost model scales.
Instance StarWithFarFacility(int k, const Rational& far_cost) {
  const Instance star = GenerateStar(k);
  std::vector<std::vector<Rational>> d = star.distances();
  for (auto& row : d) row.push_back(Rational(10));
  d.emplace_back(d.size() + 1, Rational(10));
  d.back().back() = 0;
  std::vector<std::string> facilities = star.facilities();
  facilities.push_back("m");
  std::vector<Rational> opening = star.opening();
  opening.push_back(far_cost);
  return Instance(star.users(), facilities, d, opening);
}

TEST(AuctionKindTest, NamesRoundTrip) {
  for (AuctionKind k : {AuctionKind::kVcg, AuctionKind::kPredictedLimits,
                        AuctionKind::kErrorTolerant, AuctionKind::kFirstPrice}) {
    EXPECT_EQ(ParseAuctionKind(AuctionName(k)), k);
  }
  EXPECT_THROW(ParseAuctionKind("dutch"), InvalidArgumentError);
  EXPECT_TRUE(UsesPredictions(AuctionKind::kErrorTolerant));
  EXPECT_FALSE(UsesPredictions(AuctionKind::kFirstPrice));
}

TEST(AuctionConfigTest, RejectsOutOfRangeParameters) {
  EXPECT_NO_THROW((AuctionConfig{Rational(2), Rational(1)}.Validate()));
  EXPECT_THROW((AuctionConfig{Rational(0), Rational(1)}.Validate()),
               InvalidArgumentError);
  EXPECT_THROW((AuctionConfig{Rational(21, 10), Rational(1)}.Validate()),
               InvalidArgumentError);
  EXPECT_THROW((AuctionConfig{Rational(1), Rational(1, 2)}.Validate()),
               InvalidArgumentError);
  const Solver solver(GenerateStar(2));
  EXPECT_THROW(MakeRule(AuctionKind::kPredictedLimits, solver, std::nullopt, {}),
               InvalidArgumentError);
}

TEST(VcgTest, StarPaysTwoToEachPeripheral) {
  const Solver solver(GenerateStar(6));
  const Outcome out = Vcg(solver, solver.instance().TrueCosts());
  EXPECT_EQ(out.winners, Peripherals(6));
  for (int j = 1; j <= 6; ++j) EXPECT_EQ(out.payments.at(j), Rational(2));
  EXPECT_EQ(out.connection, Rational(6));
  EXPECT_EQ(out.total_payment_cost, Rational(18));
}

TEST(VcgTest, SinglePointIsASecondPriceAuction) {
  const Instance inst({"u"}, {"a", "b"}, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}},
                      {Rational(1), Rational(3)});
  const Solver solver(inst);
  const Outcome out = Vcg(solver, inst.TrueCosts());
  EXPECT_EQ(out.winners, FacilitySet::Of({0}));
  EXPECT_EQ(out.payments.at(0), Rational(3));
  const Outcome first = FirstPrice(solver, inst.TrueCosts());
  EXPECT_EQ(first.winners, out.winners);
  EXPECT_EQ(first.payments.at(0), Rational(1));
}

TEST(VcgTest, ClosedFormMatchesGenericThreshold) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 150; ++trial) {
    const int nf = static_cast<int>(UniformInt(rng, 2, 6));
    const Instance inst = RandomInstance(rng, static_cast<int>(UniformInt(rng, 1, 5)), nf);
    const Solver solver(inst);
    const BidProfile bids(RandomBids(rng, nf));
    const Outcome closed = Vcg(solver, bids);
    const Outcome generic = RunRule(VcgRule(), solver, bids);
    EXPECT_EQ(closed.winners, generic.winners);
    EXPECT_EQ(closed.payments, generic.payments);
  }
}

TEST(PredictedLimitsTest, StarPaysEpsilonWithExactPredictions) {
  const Solver solver(GenerateStar(6));
  const BidProfile o = solver.instance().TrueCosts();
  const Prediction exact(o.values());
  for (const Rational& eps : {Rational(1, 2), Rational(1), Rational(3, 2)}) {
    const Outcome out = PredictedLimits(solver, o, exact, eps);
    EXPECT_EQ(out.winners, Peripherals(6));
    for (int j = 1; j <= 6; ++j) EXPECT_EQ(out.payments.at(j), eps);
    EXPECT_EQ(out.total_payment_cost, Rational(6) * eps + Rational(6));
  }
}

TEST(PredictedLimitsTest, EpsilonTwoIsVcg) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 60; ++trial) {
    const int nf = static_cast<int>(UniformInt(rng, 2, 6));
    const Instance inst = RandomInstance(rng, 3, nf);
    const Solver solver(inst);
    const BidProfile bids(RandomBids(rng, nf));
    const Prediction pred(RandomPredictions(rng, nf));
    const Outcome pl = PredictedLimits(solver, bids, pred, Rational(2));
    const Outcome vcg = Vcg(solver, bids);
    EXPECT_EQ(pl.winners, vcg.winners);
    EXPECT_EQ(pl.payments, vcg.payments);
  }
}

TEST(PredictedLimitsTest, FarCheapFacilityBreaksConsistency) {
  // Exact predictions, yet each peripheral is paid 199/100 whatever epsilon
  // is, because "peripherals + m" is never inflated.
  const Solver solver(StarWithFarFacility(6, Rational(1, 100)));
  const BidProfile o = solver.instance().TrueCosts();
  const Prediction exact(o.values());
  for (const Rational& eps : {Rational(1, 10), Rational(1, 2), Rational(1)}) {
    const Outcome out = PredictedLimits(solver, o, exact, eps);
    EXPECT_EQ(out.winners, Peripherals(6));
    for (int j = 1; j <= 6; ++j) EXPECT_EQ(out.payments.at(j), Rational(199, 100));
    EXPECT_EQ(out.total_payment_cost, Rational(1794, 100));
    EXPECT_GT(out.total_payment_cost / Rational(8), Rational(1) + eps);
  }
}

TEST(ErrorTolerantTest, StarWithFlooredPredictions) {
  const Solver solver(GenerateStar(6));
  const BidProfile o = solver.instance().TrueCosts();
  const Prediction floored(ApplyCostFloor(o, Rational(1, 100)).values());
  const Outcome out = ErrorTolerant(solver, o, floored, Rational(1), Rational(2));
  EXPECT_EQ(out.winners, Peripherals(6));
  for (int j = 1; j <= 6; ++j) EXPECT_EQ(out.payments.at(j), Rational(1));
  EXPECT_EQ(out.total_payment_cost, Rational(12));
}

TEST(ErrorTolerantTest, LambdaOneMatchesPredictedLimits) {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 80; ++trial) {
    const int nf = static_cast<int>(UniformInt(rng, 2, 6));
    const Instance inst = RandomInstance(rng, 3, nf);
    const Solver solver(inst);
    const BidProfile bids(RandomBids(rng, nf));
    const Prediction pred(RandomPredictions(rng, nf));
    const Rational eps(UniformInt(rng, 1, 20), 10);
    const Outcome et = ErrorTolerant(solver, bids, pred, eps, Rational(1));
    const Outcome pl = PredictedLimits(solver, bids, pred, eps);
    EXPECT_EQ(et.winners, pl.winners);
    EXPECT_EQ(et.payments, pl.payments);
  }
}

TEST(ErrorTolerantTest, DownscalesOnlyWithinTolerance) {
  const Solver solver(GenerateStar(3));
  const Prediction pred({Rational(2), Rational(1, 10), Rational(1, 10),
                         Rational(1, 10)});
  const ErrorTolerantRule rule(solver, pred, Rational(1), Rational(2));
  EXPECT_EQ(rule.predicted_opt(), Peripherals(3));
  const BidProfile low(std::vector<Rational>(4, Rational(1, 5)));
  EXPECT_TRUE(rule.WithinTolerance(low));
  EXPECT_EQ(rule.ModelFor(low).kind(), CostModel::Kind::kWholeSetDownscale);
  const BidProfile high = low.WithBid(2, Rational(1));
  EXPECT_FALSE(rule.WithinTolerance(high));
  EXPECT_EQ(rule.ModelFor(high).kind(), CostModel::Kind::kPerFacilityInflate);
  // The hub is outside the predicted optimum, so its bid never matters.
  EXPECT_TRUE(rule.WithinTolerance(low.WithBid(0, Rational(100))));
}

// Thresholds from the segment algorithm against exact bisection over the
// brute-force allocation.
void CompareThresholds(oracle::Rule::Kind kind, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 120; ++trial) {
    const int nf = static_cast<int>(UniformInt(rng, 2, 5));
    const int nu = static_cast<int>(UniformInt(rng, 1, 4));
    const Instance inst = RandomInstance(rng, nu, nf);
    const Solver solver(inst);
    const std::vector<Rational> bids = RandomBids(rng, nf);
    const std::vector<Rational> pred = RandomPredictions(rng, nf);
    const Rational eps(UniformInt(rng, 1, 20), 10);
    const Rational lambda(UniformInt(rng, 10, 30), 10);
    const oracle::Rule ref = oracle::MakeRule(inst, kind, pred, eps, lambda);

    std::unique_ptr<AllocationRule> rule;
    switch (kind) {
      case oracle::Rule::kVcg:
        rule = std::make_unique<VcgRule>();
        break;
      case oracle::Rule::kPredictedLimits:
        rule = std::make_unique<PredictedLimitsRule>(solver, Prediction(pred), eps);
        break;
      case oracle::Rule::kErrorTolerant:
        rule = std::make_unique<ErrorTolerantRule>(solver, Prediction(pred), eps,
                                                   lambda);
        break;
    }
    const BidProfile profile(bids);
    ASSERT_EQ(rule->Winners(solver, profile).mask(),
              oracle::Winners(inst, ref, bids)) << "trial " << trial;
    for (int f = 0; f < nf; ++f) {
      const std::optional<Rational> expected = oracle::Threshold(inst, ref, bids, f);
      const std::optional<Rational> got = ThresholdPayment(*rule, solver, profile, f);
      ASSERT_EQ(expected.has_value(), got.has_value())
          << "trial " << trial << " facility " << f;
      if (expected) {
        EXPECT_EQ(*got, *expected) << "trial " << trial << " facility " << f;
      }
    }
  }
}

TEST(ThresholdOracleTest, Vcg) { CompareThresholds(oracle::Rule::kVcg, 21); }

TEST(ThresholdOracleTest, PredictedLimits) {
  CompareThresholds(oracle::Rule::kPredictedLimits, 22);
}

TEST(ThresholdOracleTest, ErrorTolerant) {
  CompareThresholds(oracle::Rule::kErrorTolerant, 23);
}

TEST(ThresholdTest, MonopolistHasNoThreshold) {
  const Instance inst({"u"}, {"f", "g"}, {{0, 1, 1}, {1, 0, 2}, {1, 2, 0}},
                      {Rational(1), Rational(1)});
  const Solver solver(inst);
  // g alone is feasible, so f has a finite threshold.
  EXPECT_TRUE(ThresholdPayment(VcgRule(), solver, inst.TrueCosts(), 0));
  const Instance single({"u"}, {"f"}, {{0, 1}, {1, 0}}, {Rational(1)});
  const Solver lone(single);
  EXPECT_THROW(ThresholdPayment(VcgRule(), lone, single.TrueCosts(), 0),
               MonopolyError);
}

TEST(ThresholdTest, LoserHasNoThreshold) {
  const Instance inst({"u"}, {"a", "b"}, {{0, 0, 5}, {0, 0, 5}, {5, 5, 0}},
                      {Rational(1), Rational(1)});
  const Solver solver(inst);
  EXPECT_FALSE(ThresholdPayment(VcgRule(), solver, inst.TrueCosts(), 1));
}

TEST(AuctionTest, WinnersAreIndividuallyRational) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 60; ++trial) {
    const int nf = static_cast<int>(UniformInt(rng, 2, 6));
    const Instance inst = RandomInstance(rng, 4, nf);
    const Solver solver(inst);
    const BidProfile bids(RandomBids(rng, nf));
    const Prediction pred(RandomPredictions(rng, nf));
    for (AuctionKind k : {AuctionKind::kVcg, AuctionKind::kPredictedLimits,
                          AuctionKind::kErrorTolerant}) {
      const Outcome out =
          RunAuction(k, solver, bids, pred, {Rational(1, 2), Rational(3, 2)});
      EXPECT_EQ(out.payments.size(), static_cast<std::size_t>(out.winners.size()));
      for (const auto& [f, p] : out.payments) {
        EXPECT_TRUE(out.winners.Contains(f));
        EXPECT_GE(p, bids[f]) << AuctionName(k);
      }
      EXPECT_EQ(out.total_payment_cost,
                out.SumPayments() + solver.Connection(out.winners).value());
    }
  }
}

}  // namespace
}  // namespace frugal_ufl
