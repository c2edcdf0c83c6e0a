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

#include <bit>
#include <cstdlib>
#include <limits>
#include <string>
#include <utility>

#include "frugal_ufl/errors.h"

namespace frugal_ufl {
namespace {

// Headroom below 2^63 so a scaled cost plus one more term cannot overflow.
const mpz_class kIntLimit = mpz_class(1) << 61;

struct Filter {
  std::uint32_t must_in = 0;
  std::uint32_t must_out = 0;
  std::vector<std::uint32_t> excluded;
  bool allow_empty = false;

  bool Accepts(std::uint32_t s) const {
    if (s == 0 && !allow_empty) return false;
    if ((s & must_in) != must_in || (s & must_out) != 0) return false;
    for (std::uint32_t e : excluded) {
      if (s == e) return false;
    }
    return true;
  }
};

template <typename Num>
struct Best {
  std::uint32_t mask = 0;
  Num value{};
  int ties = 0;
  bool found = false;

  void Offer(std::uint32_t s, const Num& v) {
    if (!found || v < value) {
      mask = s;
      value = v;
      ties = 1;
      found = true;
    } else if (v == value) {
      ++ties;  // s > mask: iteration is ascending, so the first one stays
    }
  }
};

void CheckFacility(int facility, int num_facilities) {
  if (facility < 0 || facility >= num_facilities) {
    throw InvalidArgumentError("unknown facility index " +
                               std::to_string(facility));
  }
}

void CheckBids(const BidProfile& bids, int num_facilities) {
  if (bids.size() != num_facilities) {
    throw InvalidArgumentError("bid profile has " +
                               std::to_string(bids.size()) + " entries, want " +
                               std::to_string(num_facilities));
  }
}

void CheckModel(const CostModel& model, int num_facilities) {
  if (model.kind() == CostModel::Kind::kPlain) return;
  if (!model.target()->IsSubsetOf(FacilitySet::All(num_facilities))) {
    throw InvalidArgumentError("cost model target has unknown facilities");
  }
  if (model.kind() == CostModel::Kind::kPerFacilityInflate &&
      static_cast<int>(model.thresholds().size()) != num_facilities) {
    throw InvalidArgumentError("inflation thresholds must cover every facility");
  }
}

Filter MakeFilter(std::span<const Constraint> constraints, int num_facilities,
                  bool allow_empty) {
  Filter f;
  f.allow_empty = allow_empty;
  const FacilitySet all = FacilitySet::All(num_facilities);
  for (const Constraint& c : constraints) {
    if (const auto* in = std::get_if<MustContain>(&c)) {
      CheckFacility(in->facility, num_facilities);
      f.must_in |= 1u << in->facility;
    } else if (const auto* out = std::get_if<MustExclude>(&c)) {
      CheckFacility(out->facility, num_facilities);
      f.must_out |= 1u << out->facility;
    } else if (const auto* d = std::get_if<DisjointFrom>(&c)) {
      if (!d->set.IsSubsetOf(all)) {
        throw InvalidArgumentError("constraint names unknown facilities");
      }
      f.must_out |= d->set.mask();
    } else {
      const auto& ne = std::get<NotEqualTo>(c);
      if (!ne.set.IsSubsetOf(all)) {
        throw InvalidArgumentError("constraint names unknown facilities");
      }
      f.excluded.push_back(ne.set.mask());
    }
  }
  return f;
}

mpz_class Lcm(const mpz_class& a, const mpz_class& b) {
  mpz_class out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

}  // namespace

CostModel CostModel::PerFacilityInflate(FacilitySet target,
                                        std::vector<Rational> thresholds,
                                        Rational factor) {
  if (target.empty()) throw InvalidArgumentError("empty cost-model target");
  if (factor < Rational(1)) {
    throw InvalidArgumentError("inflation factor must be at least 1");
  }
  CostModel m;
  m.kind_ = Kind::kPerFacilityInflate;
  m.target_ = target;
  m.thresholds_ = std::move(thresholds);
  m.factor_ = std::move(factor);
  return m;
}

CostModel CostModel::WholeSetDownscale(FacilitySet target, Rational factor) {
  if (target.empty()) throw InvalidArgumentError("empty cost-model target");
  if (!factor.IsPositive() || factor > Rational(1)) {
    throw InvalidArgumentError("downscale factor must lie in (0, 1]");
  }
  CostModel m;
  m.kind_ = Kind::kWholeSetDownscale;
  m.target_ = target;
  m.factor_ = std::move(factor);
  return m;
}

std::optional<FacilitySet> CostModel::target() const {
  if (kind_ == Kind::kPlain) return std::nullopt;
  return target_;
}

bool CostModel::Triggered(int facility, const Rational& bid) const {
  return kind_ == Kind::kPerFacilityInflate && target_.Contains(facility) &&
         bid > thresholds_.at(static_cast<std::size_t>(facility));
}

Rational CostModel::Multiplier(int facility, FacilitySet s,
                               const Rational& bid) const {
  if (kind_ == Kind::kPlain || s != target_ || !s.Contains(facility)) {
    return Rational(1);
  }
  if (kind_ == Kind::kWholeSetDownscale) return factor_;
  return Triggered(facility, bid) ? factor_ : Rational(1);
}

int DefaultEnumerationCap() {
  const char* env = std::getenv("FRUGAL_UFL_CAP");
  if (env == nullptr) return kDefaultEnumerationCap;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || *end != '\0' || v < 1) return kDefaultEnumerationCap;
  return v > kHardEnumerationCap ? kHardEnumerationCap : static_cast<int>(v);
}

struct Solver::Data {
  Instance instance;
  int num_facilities = 0;
  // d(U, S) * conn_scale for every mask, when that fits in 64 bits.
  std::vector<std::int64_t> conn_units;
  mpz_class conn_scale = 1;
  mpz_class conn_max_units = 0;
  // Exact fallback when the integer table does not fit.
  std::vector<Rational> conn_exact;

  Rational ConnectionOf(std::uint32_t s) const {
    if (!conn_units.empty()) {
      return Rational(mpq_class(mpz_class(static_cast<long>(conn_units[s])),
                                conn_scale));
    }
    return conn_exact[s];
  }
};

Solver::Solver(Instance instance, int cap) {
  auto data = std::make_shared<Data>();
  const int nf = instance.num_facilities();
  const int nu = instance.num_users();
  if (nf > cap || nf > kHardEnumerationCap) {
    throw CapExceededError("instance has " + std::to_string(nf) +
                           " facilities; enumeration cap is " +
                           std::to_string(std::min(cap, kHardEnumerationCap)));
  }
  data->num_facilities = nf;
  const std::size_t n = std::size_t{1} << nf;

  mpz_class scale = 1;
  mpz_class max_d = 0;
  for (int u = 0; u < nu; ++u) {
    for (int f = 0; f < nf; ++f) {
      const Rational& d = instance.UserFacilityDistance(u, f);
      scale = Lcm(scale, d.denominator());
    }
  }
  for (int u = 0; u < nu; ++u) {
    for (int f = 0; f < nf; ++f) {
      const Rational& d = instance.UserFacilityDistance(u, f);
      mpz_class units = d.numerator() * (scale / d.denominator());
      if (units > max_d) max_d = units;
    }
  }
  const bool fits = scale < kIntLimit && max_d * (nu + 1) < kIntLimit;

  if (fits) {
    data->conn_scale = scale;
    data->conn_max_units = max_d * nu;
    data->conn_units.assign(n, 0);
    std::vector<std::int64_t> nearest(n);
    std::vector<std::int64_t> du(static_cast<std::size_t>(nf));
    for (int u = 0; u < nu; ++u) {
      for (int f = 0; f < nf; ++f) {
        const Rational& d = instance.UserFacilityDistance(u, f);
        mpz_class units = d.numerator() * (scale / d.denominator());
        du[static_cast<std::size_t>(f)] = units.get_si();
      }
      nearest[0] = std::numeric_limits<std::int64_t>::max();
      for (std::size_t s = 1; s < n; ++s) {
        const std::int64_t via = du[static_cast<std::size_t>(std::countr_zero(s))];
        nearest[s] = std::min(nearest[s & (s - 1)], via);
        data->conn_units[s] += nearest[s];
      }
    }
  } else {
    data->conn_exact.assign(n, Rational(0));
    for (std::size_t s = 1; s < n; ++s) {
      data->conn_exact[s] =
          ConnectionCost(instance, FacilitySet::FromMask(static_cast<std::uint32_t>(s)))
              .value();
    }
  }
  data->instance = std::move(instance);
  data_ = std::move(data);
}

const Instance& Solver::instance() const { return data_->instance; }

int Solver::num_facilities() const { return data_->num_facilities; }

Cost Solver::Connection(FacilitySet s) const {
  if (!s.IsSubsetOf(data_->instance.AllFacilities())) {
    throw InvalidArgumentError("facility set references unknown facility");
  }
  if (s.empty() && data_->instance.num_users() > 0) return Cost::Infinite();
  return data_->ConnectionOf(s.mask());
}

Rational Solver::ScaledCost(const BidProfile& bids, const CostModel& model,
                            FacilitySet s) const {
  const int nf = num_facilities();
  CheckBids(bids, nf);
  CheckModel(model, nf);
  if (s.empty()) throw InvalidArgumentError("scaled cost of the empty set");
  Rational conn = Connection(s).value();
  const bool is_target = model.target() == s;
  if (is_target && model.kind() == CostModel::Kind::kWholeSetDownscale) {
    Rational total = conn;
    for (int f : s.Indices()) total += bids[f];
    return total * model.factor();
  }
  Rational total = conn;
  for (int f : s.Indices()) {
    if (is_target && model.Triggered(f, bids[f])) {
      total += bids[f] * model.factor();
    } else {
      total += bids[f];
    }
  }
  return total;
}

std::optional<SolveResult> Solver::TryMinimize(
    const BidProfile& bids, const CostModel& model,
    std::span<const Constraint> constraints) const {
  const int nf = num_facilities();
  CheckBids(bids, nf);
  CheckModel(model, nf);
  Filter filter = MakeFilter(constraints, nf, data_->instance.num_users() == 0);
  const std::optional<FacilitySet> target = model.target();
  if (target) filter.excluded.push_back(target->mask());

  const std::uint32_t n = 1u << nf;
  Best<Rational> best;

  // Integer fast path: common denominator for distances and bids.
  bool done = false;
  if (!exact_only_ && !data_->conn_units.empty()) {
    mpz_class scale = data_->conn_scale;
    for (const Rational& b : bids.values()) scale = Lcm(scale, b.denominator());
    const mpz_class mult = scale / data_->conn_scale;
    mpz_class bound = data_->conn_max_units * mult;
    std::vector<std::int64_t> units(static_cast<std::size_t>(nf));
    bool fits = scale < kIntLimit && bound < kIntLimit;
    for (int f = 0; fits && f < nf; ++f) {
      mpz_class u = bids[f].numerator() * (scale / bids[f].denominator());
      bound += u;
      fits = bound < kIntLimit;
      if (fits) units[static_cast<std::size_t>(f)] = u.get_si();
    }
    if (fits) {
      const std::int64_t m = mult.get_si();
      thread_local std::vector<std::int64_t> open;
      open.resize(n);
      open[0] = 0;
      Best<std::int64_t> ib;
      const auto& conn = data_->conn_units;
      for (std::uint32_t s = 1; s < n; ++s) {
        open[s] = open[s & (s - 1)] +
                  units[static_cast<std::size_t>(std::countr_zero(s))];
      }
      for (std::uint32_t s = 0; s < n; ++s) {
        if (!filter.Accepts(s)) continue;
        ib.Offer(s, conn[s] * m + open[s]);
      }
      if (ib.found) {
        best.mask = ib.mask;
        best.value = Rational(mpq_class(mpz_class(static_cast<long>(ib.value)), scale));
        best.ties = ib.ties;
        best.found = true;
      }
      done = true;
    }
  }
  if (!done) {
    thread_local std::vector<Rational> open;
    open.resize(n);
    open[0] = Rational(0);
    for (std::uint32_t s = 1; s < n; ++s) {
      open[s] = open[s & (s - 1)] + bids[std::countr_zero(s)];
    }
    for (std::uint32_t s = 0; s < n; ++s) {
      if (!filter.Accepts(s)) continue;
      best.Offer(s, data_->ConnectionOf(s) + open[s]);
    }
  }

  if (target) {
    filter.excluded.pop_back();
    if (filter.Accepts(target->mask())) {
      Rational t = ScaledCost(bids, model, *target);
      if (!best.found || t < best.value) {
        best = {target->mask(), std::move(t), 1, true};
      } else if (t == best.value) {
        ++best.ties;
        best.mask = std::min(best.mask, target->mask());
      }
    }
  }
  if (!best.found) return std::nullopt;
  return SolveResult{FacilitySet::FromMask(best.mask), std::move(best.value),
                     best.ties};
}

SolveResult Solver::Minimize(const BidProfile& bids, const CostModel& model,
                             std::span<const Constraint> constraints) const {
  std::optional<SolveResult> r = TryMinimize(bids, model, constraints);
  if (!r) throw UnsatisfiableError("no facility set satisfies the constraints");
  return *std::move(r);
}

SolveResult Solver::OptSet(const BidProfile& bids) const {
  return Minimize(bids, CostModel::Plain());
}

SolveResult Solver::FrugalSet(const BidProfile& costs) const {
  const SolveResult opt = OptSet(costs);
  if (opt.argmin_set == data_->instance.AllFacilities() &&
      data_->instance.num_users() > 0) {
    throw MonopolyError(
        "optimal set uses every facility; no disjoint alternative exists");
  }
  const Constraint disjoint = DisjointFrom{opt.argmin_set};
  return Minimize(costs, CostModel::Plain(), std::span(&disjoint, 1));
}

Rational ScaledCost(const Instance& instance, const BidProfile& bids,
                    const CostModel& model, FacilitySet s) {
  return Solver(instance).ScaledCost(bids, model, s);
}

SolveResult Minimize(const Instance& instance, const BidProfile& bids,
                     const CostModel& model,
                     std::span<const Constraint> constraints) {
  return Solver(instance).Minimize(bids, model, constraints);
}

SolveResult OptSet(const Instance& instance, const BidProfile& bids) {
  return Solver(instance).OptSet(bids);
}

SolveResult FrugalSet(const Instance& instance, const BidProfile& costs) {
  return Solver(instance).FrugalSet(costs);
}

}  // namespace frugal_ufl
