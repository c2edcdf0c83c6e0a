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

#ifndef FRUGAL_UFL_INSTANCE_H_
#define FRUGAL_UFL_INSTANCE_H_

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "frugal_ufl/rational.h"

namespace frugal_ufl {

// A subset of an instance's facilities, stored as a bitmask over facility
// indices. Ordering is by mask, which is the solver's tie-break order.
class FacilitySet {
 public:
  static constexpr int kMaxFacilities = 32;

  constexpr FacilitySet() = default;
  static constexpr FacilitySet FromMask(std::uint32_t mask) {
    FacilitySet s;
    s.mask_ = mask;
    return s;
  }
  static FacilitySet Of(std::initializer_list<int> indices);
  static FacilitySet FromIndices(std::span<const int> indices);
  static FacilitySet All(int num_facilities);

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr bool empty() const { return mask_ == 0; }
  int size() const { return std::popcount(mask_); }
  constexpr bool Contains(int index) const {
    return index >= 0 && index < kMaxFacilities && ((mask_ >> index) & 1u);
  }
  FacilitySet With(int index) const;
  FacilitySet Without(int index) const;
  constexpr bool IsSubsetOf(FacilitySet other) const {
    return (mask_ & ~other.mask_) == 0;
  }
  constexpr bool Intersects(FacilitySet other) const {
    return (mask_ & other.mask_) != 0;
  }
  std::vector<int> Indices() const;

  friend constexpr FacilitySet operator|(FacilitySet a, FacilitySet b) {
    return FromMask(a.mask_ | b.mask_);
  }
  friend constexpr FacilitySet operator&(FacilitySet a, FacilitySet b) {
    return FromMask(a.mask_ & b.mask_);
  }
  friend constexpr bool operator==(FacilitySet, FacilitySet) = default;
  friend constexpr auto operator<=>(FacilitySet, FacilitySet) = default;

 private:
  std::uint32_t mask_ = 0;
};

// Reported (or true) opening costs, one per facility index. Nonnegative.
class BidProfile {
 public:
  BidProfile() = default;
  explicit BidProfile(std::vector<Rational> bids);

  int size() const { return static_cast<int>(bids_.size()); }
  const Rational& operator[](int facility) const { return bids_.at(facility); }
  const std::vector<Rational>& values() const { return bids_; }

  // Copy with facility's bid replaced: the profile (b, b_{-l}).
  BidProfile WithBid(int facility, Rational bid) const;

  friend bool operator==(const BidProfile&, const BidProfile&) = default;

 private:
  std::vector<Rational> bids_;
};

// Predicted opening costs, one per facility index. Nonnegative; the
// prediction error additionally requires them to be positive.
class Prediction {
 public:
  Prediction() = default;
  explicit Prediction(std::vector<Rational> predicted);

  int size() const { return static_cast<int>(predicted_.size()); }
  const Rational& operator[](int facility) const {
    return predicted_.at(facility);
  }
  const std::vector<Rational>& values() const { return predicted_; }
  // The prediction as a cost vector (what the predicted-optimal solve uses).
  BidProfile AsCosts() const { return BidProfile(predicted_); }

  friend bool operator==(const Prediction&, const Prediction&) = default;

 private:
  std::vector<Rational> predicted_;
};

// A UFL instance: users, facilities, a distance matrix over the points
// users ++ facilities (user u is point u, facility f is point
// num_users() + f), and the true opening costs.
class Instance {
 public:
  Instance() = default;
  Instance(std::vector<std::string> users, std::vector<std::string> facilities,
           std::vector<std::vector<Rational>> distances,
           std::vector<Rational> opening);

  int num_users() const { return static_cast<int>(users_.size()); }
  int num_facilities() const { return static_cast<int>(facilities_.size()); }
  int num_points() const { return num_users() + num_facilities(); }

  const std::vector<std::string>& users() const { return users_; }
  const std::vector<std::string>& facilities() const { return facilities_; }
  const std::string& PointId(int point) const;
  int FacilityIndex(std::string_view id) const;  // throws on unknown id
  int PointIndex(std::string_view id) const;     // throws on unknown id

  const Rational& Distance(int point_a, int point_b) const {
    return distances_[point_a][point_b];
  }
  const Rational& UserFacilityDistance(int user, int facility) const {
    return distances_[user][num_users() + facility];
  }
  const std::vector<std::vector<Rational>>& distances() const {
    return distances_;
  }

  const std::vector<Rational>& opening() const { return opening_; }
  BidProfile TrueCosts() const { return BidProfile(opening_); }
  FacilitySet AllFacilities() const {
    return FacilitySet::All(num_facilities());
  }

  friend bool operator==(const Instance&, const Instance&) = default;

 private:
  std::vector<std::string> users_;
  std::vector<std::string> facilities_;
  std::vector<std::vector<Rational>> distances_;
  std::vector<Rational> opening_;
};

FacilitySet FacilitySetFromIds(const Instance& instance,
                               std::span<const std::string> ids);
std::vector<std::string> FacilityIds(const Instance& instance, FacilitySet s);

struct MetricViolation {
  enum class Kind { kNonzeroDiagonal, kNegative, kAsymmetric, kTriangle };
  Kind kind;
  // (x, y, z) for a triangle violation d(x,z) > d(x,y) + d(y,z); (x, y) for
  // pair violations, with z empty; (x) for the diagonal.
  std::string x;
  std::string y;
  std::string z;

  std::string Describe() const;
  friend bool operator==(const MetricViolation&,
                         const MetricViolation&) = default;
};

// Every violation of the metric axioms, beyond `tolerance`. Triangle triples
// are reported once per unordered endpoint pair (x before z in point order).
std::vector<MetricViolation> ValidateMetric(const Instance& instance,
                                            const Rational& tolerance = 0);

// d(U, S): sum over users of the distance to the nearest member of S.
// Infinite for S empty with users present, zero without users.
Cost ConnectionCost(const Instance& instance, FacilitySet s);

// c(S) = sum of `costs` over S plus d(U, S).
Cost TotalCost(const Instance& instance, FacilitySet s,
               const BidProfile& costs);

}  // namespace frugal_ufl

#endif  // FRUGAL_UFL_INSTANCE_H_
