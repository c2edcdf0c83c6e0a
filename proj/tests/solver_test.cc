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

#include "frugal_ufl/solver.h"

#include <cstdint>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "frugal_ufl/errors.h"
#include "frugal_ufl/generators.h"
#include "oracle.h"
#include "random_instances.h"
#include "random_models.h"

namespace frugal_ufl {
namespace {

using testing_util::RandomBids;
using testing_util::RandomInstance;
using testing_util::RandomValue;
using testing_util::RandomConstraints;
using testing_util::RandomModel;

FacilitySet Peripherals(int k) {
  FacilitySet s;
  for (int i = 1; i <= k; ++i) s = s.With(i);
  return s;
}

void CompareWithOracle(bool huge, bool exact_only, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (int trial = 0; trial < 300; ++trial) {
    const int nf = static_cast<int>(UniformInt(rng, 1, 7));
    const int nu = static_cast<int>(UniformInt(rng, 0, 6));
    const Instance inst = RandomInstance(rng, nu, nf, huge);
    Solver solver(inst);
    solver.set_exact_only(exact_only);
    const std::vector<Rational> bids = RandomBids(rng, nf, huge);
    const testing_util::ModelPair model = RandomModel(rng, nf);
    const testing_util::ConstraintPair cons = RandomConstraints(rng, nf);

    const auto expected = oracle::Minimize(inst, bids, model.ref, cons.ref);
    const auto got = solver.TryMinimize(BidProfile(bids), model.lib, cons.lib);
    ASSERT_EQ(expected.has_value(), got.has_value()) << "trial " << trial;
    if (!expected) {
      EXPECT_THROW(solver.Minimize(BidProfile(bids), model.lib, cons.lib),
                   UnsatisfiableError);
      continue;
    }
    EXPECT_EQ(got->argmin_set.mask(), expected->mask) << "trial " << trial;
    EXPECT_EQ(got->scaled_cost, expected->cost) << "trial " << trial;
    EXPECT_EQ(got->tied_sets_count, expected->ties) << "trial " << trial;
    const FacilitySet s = FacilitySet::FromMask(expected->mask);
    if (!s.empty()) {
      EXPECT_EQ(solver.ScaledCost(BidProfile(bids), model.lib, s),
                oracle::Scaled(inst, bids, model.ref, expected->mask));
    }
  }
}

TEST(SolverOracleTest, FastPathMatchesEnumeration) {
  CompareWithOracle(/*huge=*/false, /*exact_only=*/false, 1);
}

TEST(SolverOracleTest, ExactPathMatchesEnumeration) {
  CompareWithOracle(/*huge=*/false, /*exact_only=*/true, 2);
}

TEST(SolverOracleTest, OverflowFallbackMatchesEnumeration) {
  CompareWithOracle(/*huge=*/true, /*exact_only=*/false, 3);
}

TEST(SolverOracleTest, ConnectionTableMatchesDirectLoop) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int nf = static_cast<int>(UniformInt(rng, 1, 8));
    const Instance inst = RandomInstance(rng, 5, nf);
    const Solver solver(inst);
    for (std::uint32_t m = 1; m < (1u << nf); ++m) {
      EXPECT_EQ(solver.Connection(FacilitySet::FromMask(m)).value(),
                *oracle::Connection(inst, m));
    }
    EXPECT_TRUE(solver.Connection(FacilitySet()).is_infinite());
  }
}

TEST(SolverTest, FactorOneInflationEqualsPlain) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const int nf = static_cast<int>(UniformInt(rng, 1, 6));
    const Instance inst = RandomInstance(rng, 4, nf);
    const Solver solver(inst);
    const BidProfile bids(RandomBids(rng, nf));
    const auto target = FacilitySet::FromMask(
        static_cast<std::uint32_t>(UniformInt(rng, 1, (1 << nf) - 1)));
    const CostModel unit =
        CostModel::PerFacilityInflate(target, RandomBids(rng, nf), Rational(1));
    EXPECT_EQ(solver.Minimize(bids, unit), solver.Minimize(bids, CostModel::Plain()));
    const CostModel whole = CostModel::WholeSetDownscale(target, Rational(1));
    EXPECT_EQ(solver.Minimize(bids, whole), solver.Minimize(bids, CostModel::Plain()));
  }
}

TEST(SolverTest, StarOptimumAndFrugalSet) {
  for (int k = 1; k <= 10; ++k) {
    const Solver solver(GenerateStar(k));
    const BidProfile o = solver.instance().TrueCosts();
    const SolveResult opt = solver.OptSet(o);
    EXPECT_EQ(opt.argmin_set, Peripherals(k));
    EXPECT_EQ(opt.scaled_cost, Rational(k));
    const SolveResult frugal = solver.FrugalSet(o);
    EXPECT_EQ(frugal.argmin_set, FacilitySet::Of({0}));
    EXPECT_EQ(frugal.scaled_cost, Rational(k + 2));
  }
}

TEST(SolverTest, ScaledCostExamples) {
  const Instance star = GenerateStar(6);
  const BidProfile o = star.TrueCosts();
  const FacilitySet hub = FacilitySet::Of({0});
  EXPECT_EQ(ScaledCost(star, o, CostModel::Plain(), hub), Rational(8));
  // Downscaling by 1/lambda^2 with lambda = 2 turns the six peripherals,
  // worth 6, into 3/2.
  const CostModel down =
      CostModel::WholeSetDownscale(Peripherals(6), Rational(1, 4));
  EXPECT_EQ(ScaledCost(star, o, down, Peripherals(6)), Rational(3, 2));
  EXPECT_EQ(ScaledCost(star, o, down, hub), Rational(8));
  // Inflation only touches members whose bid exceeds the threshold.
  const CostModel up = CostModel::PerFacilityInflate(
      hub, std::vector<Rational>(7, Rational(1)), Rational(4));
  EXPECT_EQ(ScaledCost(star, o, up, hub), Rational(14));
  EXPECT_EQ(up.Multiplier(0, hub, Rational(2)), Rational(4));
  EXPECT_EQ(up.Multiplier(0, hub, Rational(1)), Rational(1));
  EXPECT_EQ(up.Multiplier(0, Peripherals(6).With(0), Rational(2)), Rational(1));
  EXPECT_THROW(ScaledCost(star, o, CostModel::Plain(), FacilitySet()),
               InvalidArgumentError);
}

TEST(SolverTest, TieBreakPrefersSmallestMask) {
  // Two identical facilities at the same distance from the only user.
  const Instance inst({"u"}, {"a", "b"},
                      {{0, 1, 1}, {1, 0, 0}, {1, 0, 0}},
                      {Rational(1), Rational(1)});
  const SolveResult r = OptSet(inst, inst.TrueCosts());
  EXPECT_EQ(r.argmin_set, FacilitySet::Of({0}));
  EXPECT_EQ(r.tied_sets_count, 2);
}

TEST(SolverTest, UnsatisfiableConstraints) {
  const Solver solver(GenerateStar(2));
  const std::vector<Constraint> c = {MustContain{0}, MustExclude{0}};
  EXPECT_THROW(solver.Minimize(solver.instance().TrueCosts(),
                               CostModel::Plain(), c),
               UnsatisfiableError);
  EXPECT_FALSE(solver.TryMinimize(solver.instance().TrueCosts(),
                                  CostModel::Plain(), c).has_value());
}

TEST(SolverTest, MonopolyHasNoFrugalSet) {
  const Instance single({"u"}, {"f"}, {{0, 1}, {1, 0}}, {Rational(1)});
  EXPECT_THROW(FrugalSet(single, single.TrueCosts()), MonopolyError);
}

TEST(SolverTest, EnumerationCapIsEnforced) {
  EuclideanSpec spec{.num_users = 2, .num_facilities = 8, .seed = 1};
  const Instance inst = GenerateEuclidean(spec);
  EXPECT_THROW(Solver(inst, 7), CapExceededError);
  EXPECT_NO_THROW(Solver(inst, 8));
  spec.num_facilities = 27;
  EXPECT_THROW(Solver(GenerateEuclidean(spec), 30), CapExceededError);
}

TEST(SolverTest, ModelFactoriesValidate) {
  const FacilitySet s = FacilitySet::Of({0});
  EXPECT_THROW(CostModel::PerFacilityInflate(s, {Rational(1)}, Rational(1, 2)),
               InvalidArgumentError);
  EXPECT_THROW(CostModel::WholeSetDownscale(s, Rational(2)), InvalidArgumentError);
  EXPECT_THROW(CostModel::WholeSetDownscale(s, Rational(0)), InvalidArgumentError);
}

}  // namespace
}  // namespace frugal_ufl
