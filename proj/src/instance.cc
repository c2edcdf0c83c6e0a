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

#include "frugal_ufl/instance.h"

#include <set>
#include <utility>

#include "frugal_ufl/errors.h"

namespace frugal_ufl {
namespace {

void CheckIndex(int index) {
  if (index < 0 || index >= FacilitySet::kMaxFacilities) {
    throw InvalidArgumentError("facility index out of range: " +
                               std::to_string(index));
  }
}

void CheckSubset(const Instance& instance, FacilitySet s) {
  if (!s.IsSubsetOf(instance.AllFacilities())) {
    throw InvalidArgumentError("facility set references unknown facility");
  }
}

}  // namespace

FacilitySet FacilitySet::Of(std::initializer_list<int> indices) {
  FacilitySet s;
  for (int i : indices) s = s.With(i);
  return s;
}

FacilitySet FacilitySet::FromIndices(std::span<const int> indices) {
  FacilitySet s;
  for (int i : indices) s = s.With(i);
  return s;
}

FacilitySet FacilitySet::All(int num_facilities) {
  if (num_facilities < 0 || num_facilities > kMaxFacilities) {
    throw InvalidArgumentError("too many facilities for a facility set");
  }
  if (num_facilities == kMaxFacilities) return FromMask(~0u);
  return FromMask((1u << num_facilities) - 1u);
}

FacilitySet FacilitySet::With(int index) const {
  CheckIndex(index);
  return FromMask(mask_ | (1u << index));
}

FacilitySet FacilitySet::Without(int index) const {
  CheckIndex(index);
  return FromMask(mask_ & ~(1u << index));
}

std::vector<int> FacilitySet::Indices() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

BidProfile::BidProfile(std::vector<Rational> bids) : bids_(std::move(bids)) {
  for (const Rational& b : bids_) {
    if (b.IsNegative()) throw InvalidArgumentError("negative bid " + b.ToExactString());
  }
}

BidProfile BidProfile::WithBid(int facility, Rational bid) const {
  if (facility < 0 || facility >= size()) {
    throw InvalidArgumentError("bid for unknown facility index");
  }
  if (bid.IsNegative()) throw InvalidArgumentError("negative bid");
  BidProfile copy = *this;
  copy.bids_[static_cast<std::size_t>(facility)] = std::move(bid);
  return copy;
}

Prediction::Prediction(std::vector<Rational> predicted)
    : predicted_(std::move(predicted)) {
  for (const Rational& p : predicted_) {
    if (p.IsNegative()) {
      throw InvalidArgumentError("negative prediction " + p.ToExactString());
    }
  }
}

Instance::Instance(std::vector<std::string> users,
                   std::vector<std::string> facilities,
                   std::vector<std::vector<Rational>> distances,
                   std::vector<Rational> opening)
    : users_(std::move(users)),
      facilities_(std::move(facilities)),
      distances_(std::move(distances)),
      opening_(std::move(opening)) {
  if (facilities_.size() > static_cast<std::size_t>(FacilitySet::kMaxFacilities)) {
    throw InvalidArgumentError("at most 32 facilities are representable");
  }
  std::set<std::string_view> seen;
  for (const auto* ids : {&users_, &facilities_}) {
    for (const std::string& id : *ids) {
      if (id.empty()) throw InvalidArgumentError("empty point id");
      if (!seen.insert(id).second) {
        throw InvalidArgumentError("duplicate point id '" + id + "'");
      }
    }
  }
  const std::size_t n = users_.size() + facilities_.size();
  if (distances_.size() != n) {
    throw InvalidArgumentError("distance matrix has wrong number of rows");
  }
  for (const auto& row : distances_) {
    if (row.size() != n) {
      throw InvalidArgumentError("distance matrix row has wrong length");
    }
  }
  if (opening_.size() != facilities_.size()) {
    throw InvalidArgumentError("one opening cost per facility required");
  }
  for (const Rational& o : opening_) {
    if (o.IsNegative()) throw InvalidArgumentError("negative opening cost");
  }
}

const std::string& Instance::PointId(int point) const {
  if (point < num_users()) return users_.at(static_cast<std::size_t>(point));
  return facilities_.at(static_cast<std::size_t>(point - num_users()));
}

int Instance::FacilityIndex(std::string_view id) const {
  for (int f = 0; f < num_facilities(); ++f) {
    if (facilities_[static_cast<std::size_t>(f)] == id) return f;
  }
  throw InvalidArgumentError("unknown facility id '" + std::string(id) + "'");
}

int Instance::PointIndex(std::string_view id) const {
  for (int p = 0; p < num_points(); ++p) {
    if (PointId(p) == id) return p;
  }
  throw InvalidArgumentError("unknown point id '" + std::string(id) + "'");
}

FacilitySet FacilitySetFromIds(const Instance& instance,
                               std::span<const std::string> ids) {
  FacilitySet s;
  for (const std::string& id : ids) s = s.With(instance.FacilityIndex(id));
  return s;
}

std::vector<std::string> FacilityIds(const Instance& instance, FacilitySet s) {
  std::vector<std::string> out;
  for (int f : s.Indices()) {
    out.push_back(instance.facilities().at(static_cast<std::size_t>(f)));
  }
  return out;
}

std::string MetricViolation::Describe() const {
  switch (kind) {
    case Kind::kNonzeroDiagonal:
      return "d(" + x + "," + x + ") != 0";
    case Kind::kNegative:
      return "d(" + x + "," + y + ") < 0";
    case Kind::kAsymmetric:
      return "d(" + x + "," + y + ") != d(" + y + "," + x + ")";
    case Kind::kTriangle:
      return "d(" + x + "," + z + ") > d(" + x + "," + y + ") + d(" + y +
             "," + z + ")";
  }
  return "unknown violation";
}

std::vector<MetricViolation> ValidateMetric(const Instance& instance,
                                            const Rational& tolerance) {
  using Kind = MetricViolation::Kind;
  std::vector<MetricViolation> out;
  const int n = instance.num_points();
  for (int x = 0; x < n; ++x) {
    const Rational& self = instance.Distance(x, x);
    if (self > tolerance || self.IsNegative()) {
      out.push_back({Kind::kNonzeroDiagonal, instance.PointId(x), "", ""});
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      if (x == y) continue;
      if (instance.Distance(x, y) + tolerance < Rational(0)) {
        out.push_back({Kind::kNegative, instance.PointId(x),
                       instance.PointId(y), ""});
      }
      if (x < y) {
        Rational gap = instance.Distance(x, y) - instance.Distance(y, x);
        if (gap.IsNegative()) gap = -gap;
        if (gap > tolerance) {
          out.push_back({Kind::kAsymmetric, instance.PointId(x),
                         instance.PointId(y), ""});
        }
      }
    }
  }
  for (int x = 0; x < n; ++x) {
    for (int z = x + 1; z < n; ++z) {
      const Rational& direct = instance.Distance(x, z);
      for (int y = 0; y < n; ++y) {
        if (y == x || y == z) continue;
        if (direct > instance.Distance(x, y) + instance.Distance(y, z) + tolerance) {
          out.push_back({Kind::kTriangle, instance.PointId(x),
                         instance.PointId(y), instance.PointId(z)});
        }
      }
    }
  }
  return out;
}

Cost ConnectionCost(const Instance& instance, FacilitySet s) {
  CheckSubset(instance, s);
  if (instance.num_users() == 0) return Rational(0);
  if (s.empty()) return Cost::Infinite();
  const std::vector<int> members = s.Indices();
  Rational total;
  for (int u = 0; u < instance.num_users(); ++u) {
    const Rational* nearest = &instance.UserFacilityDistance(u, members[0]);
    for (int f : members) {
      const Rational& d = instance.UserFacilityDistance(u, f);
      if (d < *nearest) nearest = &d;
    }
    total += *nearest;
  }
  return total;
}

Cost TotalCost(const Instance& instance, FacilitySet s,
               const BidProfile& costs) {
  if (costs.size() != instance.num_facilities()) {
    throw InvalidArgumentError("cost vector does not match facility count");
  }
  Cost connection = ConnectionCost(instance, s);
  if (connection.is_infinite()) return connection;
  Rational total = connection.value();
  for (int f : s.Indices()) total += costs[f];
  return total;
}

}  // namespace frugal_ufl
