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

#ifndef FRUGAL_UFL_INSTANCE_IO_H_
#define FRUGAL_UFL_INSTANCE_IO_H_

#include <optional>
#include <string>

#include "frugal_ufl/instance.h"

namespace frugal_ufl {

struct InstanceFile {
  Instance instance;
  std::optional<Prediction> predictions;
};

struct LoadOptions {
  // Accept distance data that violates the metric axioms.
  bool allow_non_metric = false;
  Rational tolerance = 0;
};

// JSON text of the instance file schema:
//   { "users": [id...], "facilities": [id...],
//     "dist": {"a|b": "decimal", ...}
//           | {"coords": {id: ["decimal", ...]}, "precision": digits},
//     "opening": {id: "decimal"}, "predictions": {id: "decimal"}? }
// Numbers are written as exact decimal strings (or "p/q" when a value has no
// finite decimal expansion). Output is deterministic.
std::string InstanceToJson(const Instance& instance,
                           const std::optional<Prediction>& predictions = {});

// Throws SchemaError on malformed input and MetricError (listing the
// offending triples) on non-metric distances unless allowed.
InstanceFile InstanceFromJson(const std::string& text,
                              const LoadOptions& options = {});

void SaveInstance(const std::string& path, const Instance& instance,
                  const std::optional<Prediction>& predictions = {});
InstanceFile LoadInstance(const std::string& path,
                          const LoadOptions& options = {});

}  // namespace frugal_ufl

#endif  // FRUGAL_UFL_INSTANCE_IO_H_
