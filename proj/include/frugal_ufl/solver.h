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

#ifndef FRUGAL_UFL_SOLVER_H_
#define FRUGAL_UFL_SOLVER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "frugal_ufl/instance.h"
#include "frugal_ufl/rational.h"

namespace frugal_ufl {

// Set-dependent cost scaling. Every variant leaves all sets except `target`
// at their plain cost c(S); only the exact target set is rescaled.
class CostModel {
 public:
  enum class Kind { kPlain, kPerFacilityInflate, kWholeSetDownscale };

  static CostModel Plain() { return CostModel(); }
  // Inside `target`, a member l whose bid exceeds thresholds[l] contributes
  // factor * bid instead of bid. Requires factor >= 1.
  static CostModel PerFacilityInflate(FacilitySet target,
                                      std::vector<Rational> thresholds,
                                      Rational factor);
  // The whole cost of `target`, connection included, is multiplied by
  // factor. Requires 0 < factor <= 1.
  static CostModel WholeSetDownscale(FacilitySet target, Rational factor);

  Kind kind() const { return kind_; }
  std::optional<FacilitySet> target() const;
  const Rational& factor() const { return factor_; }
  const std::vector<Rational>& thresholds() const { return thresholds_; }

  // Whether facility's bid trips the inflation trigger.
  bool Triggered(int facility, const Rational& bid) const;
  // alpha_l(S): the multiplier this model applies to facility's bid inside s.
  Rational Multiplier(int facility, FacilitySet s, const Rational& bid) const;

  friend bool operator==(const CostModel&, const CostModel&) = default;

 private:
  CostModel() = default;

  Kind kind_ = Kind::kPlain;
  FacilitySet target_;
  std::vector<Rational> thresholds_;
  Rational factor_ = 1;
};

struct MustContain {
  int facility;
};
struct MustExclude {
  int facility;
};
struct DisjointFrom {
  FacilitySet set;
};
// Forbids one exact set (supersets and subsets stay feasible).
struct NotEqualTo {
  FacilitySet set;
};
using Constraint = std::variant<MustContain, MustExclude, DisjointFrom, NotEqualTo>;

struct SolveResult {
  FacilitySet argmin_set;
  Rational scaled_cost;
  // Number of feasible sets attaining scaled_cost.
  int tied_sets_count = 0;

  friend bool operator==(const SolveResult&, const SolveResult&) = default;
};

inline constexpr int kDefaultEnumerationCap = 20;
inline constexpr int kHardEnumerationCap = 26;

// kDefaultEnumerationCap unless FRUGAL_UFL_CAP holds a valid override.
int DefaultEnumerationCap();

// Exact minimizer of scaled UFL costs by exhaustive enumeration of facility
// bitmasks. Construction precomputes d(U, S) for every S; copies share it.
// Among equal-cost sets the numerically smallest bitmask wins.
class Solver {
 public:
  explicit Solver(Instance instance, int cap = DefaultEnumerationCap());

  const Instance& instance() const;
  int num_facilities() const;

  // d(U, S) from the precomputed table.
  Cost Connection(FacilitySet s) const;
  // Scaled cost of a nonempty set under the model.
  Rational ScaledCost(const BidProfile& bids, const CostModel& model,
                      FacilitySet s) const;

  // Throws UnsatisfiableError when no set meets the constraints.
  SolveResult Minimize(const BidProfile& bids, const CostModel& model,
                       std::span<const Constraint> constraints = {}) const;
  std::optional<SolveResult> TryMinimize(
      const BidProfile& bids, const CostModel& model,
      std::span<const Constraint> constraints = {}) const;

  SolveResult OptSet(const BidProfile& bids) const;
  // Cheapest set disjoint from OptSet(costs); MonopolyError if none exists.
  SolveResult FrugalSet(const BidProfile& costs) const;

  // Disables the 64-bit integer fast path (tests compare both paths).
  void set_exact_only(bool exact_only) { exact_only_ = exact_only; }

 private:
  struct Data;
  std::shared_ptr<const Data> data_;
  bool exact_only_ = false;
};

Rational ScaledCost(const Instance& instance, const BidProfile& bids,
                    const CostModel& model, FacilitySet s);
SolveResult Minimize(const Instance& instance, const BidProfile& bids,
                     const CostModel& model,
                     std::span<const Constraint> constraints = {});
SolveResult OptSet(const Instance& instance, const BidProfile& bids);
SolveResult FrugalSet(const Instance& instance, const BidProfile& costs);

}  // namespace frugal_ufl

#endif  // FRUGAL_UFL_SOLVER_H_
