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

#include "frugal_ufl/generators.h"

#include <string>
#include <vector>

#include "frugal_ufl/errors.h"

namespace frugal_ufl {
namespace {

mpz_class PowerOfTen(int digits) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  return out;
}

Rational OnGrid(std::int64_t units, int digits) {
  return Rational(mpq_class(mpz_class(static_cast<long>(units)), PowerOfTen(digits)));
}

std::int64_t FloorUnits(const Rational& value, int digits) {
  mpz_class scaled = value.numerator() * PowerOfTen(digits);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), value.denominator().get_mpz_t());
  if (!q.fits_slong_p()) throw InvalidArgumentError("cost range too large");
  return q.get_si();
}

std::int64_t CeilUnits(const Rational& value, int digits) {
  mpz_class scaled = value.numerator() * PowerOfTen(digits);
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), value.denominator().get_mpz_t());
  if (!q.fits_slong_p()) throw InvalidArgumentError("cost range too large");
  return q.get_si();
}

}  // namespace

std::int64_t UniformInt(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InvalidArgumentError("empty integer range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo);
  if (span == ~0ull) return static_cast<std::int64_t>(rng());
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = ~0ull - (~0ull % range);
  std::uint64_t draw;
  do {
    draw = rng();
  } while (draw >= limit);
  return lo + static_cast<std::int64_t>(draw % range);
}

Instance GenerateStar(int k) {
  if (k < 1) throw InvalidArgumentError("star instance needs k >= 1");
  std::vector<std::string> users;
  std::vector<std::string> facilities;
  for (int i = 1; i <= k; ++i) users.push_back("u" + std::to_string(i));
  for (int i = 0; i <= k; ++i) facilities.push_back("l" + std::to_string(i));

  // Tree: l0 - u_i - l_i with unit edges. Shortest paths give the rest.
  const int n = 2 * k + 1;
  auto user = [](int i) { return i - 1; };        // u_i, i in 1..k
  auto facility = [k](int i) { return k + i; };   // l_i, i in 0..k
  std::vector<std::vector<Rational>> d(
      static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  auto set = [&d](int a, int b, long value) {
    d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] = value;
    d[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)] = value;
  };
  for (int i = 1; i <= k; ++i) {
    set(user(i), facility(0), 1);
    set(user(i), facility(i), 1);
    set(facility(0), facility(i), 2);
    for (int j = 1; j <= k; ++j) {
      if (j == i) continue;
      set(user(i), facility(j), 3);
      if (j > i) {
        set(user(i), user(j), 2);
        set(facility(i), facility(j), 4);
      }
    }
  }
  std::vector<Rational> opening(static_cast<std::size_t>(k + 1), Rational(0));
  opening[0] = 2;
  return Instance(std::move(users), std::move(facilities), std::move(d),
                  std::move(opening));
}

Instance GenerateEuclidean(const EuclideanSpec& spec) {
  if (spec.num_users < 1 || spec.num_facilities < 1) {
    throw InvalidArgumentError("euclidean instance needs at least one user and facility");
  }
  if (spec.dimension < 1) throw InvalidArgumentError("dimension must be >= 1");
  if (spec.num_facilities > FacilitySet::kMaxFacilities) {
    throw InvalidArgumentError("too many facilities");
  }
  if (spec.cost_min.IsNegative()) throw InvalidArgumentError("negative cost range");
  for (int digits : {spec.coordinate_digits, spec.distance_digits, spec.cost_digits}) {
    if (digits < 0 || digits > 12) throw InvalidArgumentError("grid digits out of range");
  }
  const std::int64_t cost_lo = CeilUnits(spec.cost_min, spec.cost_digits);
  const std::int64_t cost_hi = FloorUnits(spec.cost_max, spec.cost_digits);
  if (spec.cost_max < spec.cost_min || cost_hi < cost_lo) {
    throw InvalidArgumentError("empty cost range");
  }

  std::mt19937_64 rng(spec.seed);
  const int n = spec.num_users + spec.num_facilities;
  const std::int64_t grid = PowerOfTen(spec.coordinate_digits).get_si();
  std::vector<std::vector<std::int64_t>> coords(static_cast<std::size_t>(n));
  for (auto& point : coords) {
    for (int c = 0; c < spec.dimension; ++c) point.push_back(UniformInt(rng, 0, grid));
  }
  std::vector<Rational> opening;
  for (int f = 0; f < spec.num_facilities; ++f) {
    opening.push_back(OnGrid(UniformInt(rng, cost_lo, cost_hi), spec.cost_digits));
  }

  const mpz_class coordinate_scale = PowerOfTen(2 * spec.coordinate_digits);
  std::vector<std::vector<Rational>> d(
      static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      mpz_class squared = 0;
      for (int c = 0; c < spec.dimension; ++c) {
        const mpz_class delta(static_cast<long>(coords[a][c] - coords[b][c]));
        squared += delta * delta;
      }
      const Rational exact_squared(mpq_class(squared, coordinate_scale));
      const mpz_class units = CeilScaledSqrt(exact_squared, spec.distance_digits);
      Rational value(mpq_class(units, PowerOfTen(spec.distance_digits)));
      d[a][b] = value;
      d[b][a] = value;
    }
  }

  std::vector<std::string> users;
  std::vector<std::string> facilities;
  for (int u = 1; u <= spec.num_users; ++u) users.push_back("u" + std::to_string(u));
  for (int f = 1; f <= spec.num_facilities; ++f) facilities.push_back("f" + std::to_string(f));
  return Instance(std::move(users), std::move(facilities), std::move(d),
                  std::move(opening));
}

BidProfile ApplyCostFloor(const BidProfile& costs, const Rational& floor) {
  if (!floor.IsPositive()) throw InvalidArgumentError("cost floor must be positive");
  std::vector<Rational> out = costs.values();
  for (Rational& c : out) {
    if (c.IsZero()) c = floor;
  }
  return BidProfile(std::move(out));
}

Prediction PerturbPredictions(const BidProfile& costs, const Rational& eta_target,
                              std::uint64_t seed, const Rational& floor) {
  if (eta_target < Rational(1)) throw InvalidArgumentError("eta_target must be >= 1");
  const BidProfile base = ApplyCostFloor(costs, floor);
  std::vector<Rational> predicted = base.values();
  if (eta_target == Rational(1) || predicted.empty()) return Prediction(std::move(predicted));

  std::mt19937_64 rng(seed);
  const Rational low = Rational(1) / eta_target;
  const Rational width = eta_target - low;
  constexpr std::int64_t kSteps = 1000000;
  const auto pinned = static_cast<std::size_t>(
      UniformInt(rng, 0, static_cast<std::int64_t>(predicted.size()) - 1));
  const bool pin_high = UniformInt(rng, 0, 1) == 1;
  for (std::size_t f = 0; f < predicted.size(); ++f) {
    Rational factor;
    if (f == pinned) {
      factor = pin_high ? eta_target : low;
    } else {
      factor = low + width * Rational(UniformInt(rng, 0, kSteps), kSteps);
    }
    predicted[f] *= factor;
  }
  return Prediction(std::move(predicted));
}

}  // namespace frugal_ufl
