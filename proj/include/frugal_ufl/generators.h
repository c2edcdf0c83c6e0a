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

#ifndef FRUGAL_UFL_GENERATORS_H_
#define FRUGAL_UFL_GENERATORS_H_

#include <cstdint>
#include <random>

#include "frugal_ufl/instance.h"
#include "frugal_ufl/rational.h"

namespace frugal_ufl {

// Star (tree metric) lower-bound family: users u1..uk, centre facility l0
// with opening cost 2 at distance 1 from every user, and peripheral
// facilities l1..lk with opening cost 0 where d(u_i, l_i) = 1. All other
// distances are shortest paths through the star, so d(u_i, l_j) = 3.
Instance GenerateStar(int k);

struct EuclideanSpec {
  int num_users = 1;
  int num_facilities = 1;
  Rational cost_min = 0;
  Rational cost_max = 1;
  std::uint64_t seed = 0;
  int dimension = 2;
  // Coordinates are drawn on a 10^-coordinate_digits grid in [0,1]^dimension.
  int coordinate_digits = 6;
  // Distances are rounded up onto a 10^-distance_digits grid.
  int distance_digits = 4;
  // Opening costs are drawn on a 10^-cost_digits grid in [cost_min, cost_max].
  int cost_digits = 4;
};

// Uniform random points; distances are exact Euclidean lengths rounded up.
// Deterministic for a fixed spec.
Instance GenerateEuclidean(const EuclideanSpec& spec);

// Replaces zero costs by `floor` (> 0); the prediction error divides by them.
BidProfile ApplyCostFloor(const BidProfile& costs, const Rational& floor);

// Predictions o_l * r_l with r_l in [1/eta_target, eta_target] and one
// facility pinned to an endpoint, so the realized error against the floored
// costs is exactly eta_target.
Prediction PerturbPredictions(const BidProfile& costs,
                              const Rational& eta_target, std::uint64_t seed,
                              const Rational& floor = Rational(1, 100));

// Unbiased integer in [lo, hi] from a 64-bit engine. The standard
// distributions are implementation defined, so generators use this instead
// to stay reproducible across toolchains.
std::int64_t UniformInt(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi);

}  // namespace frugal_ufl

#endif  // FRUGAL_UFL_GENERATORS_H_
