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

#include "frugal_ufl/instance_io.h"

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <string>

#include <gtest/gtest.h>

#include "frugal_ufl/errors.h"
#include "frugal_ufl/generators.h"

namespace frugal_ufl {
namespace {

constexpr char kTwoPoints[] = R"({
  "users": ["u"],
  "facilities": ["f"],
  "dist": {"u|f": "1.5"},
  "opening": {"f": "1/3"}
})";

TEST(InstanceIoTest, ParsesPairDistances) {
  const InstanceFile file = InstanceFromJson(kTwoPoints);
  EXPECT_EQ(file.instance.UserFacilityDistance(0, 0), Rational(3, 2));
  EXPECT_EQ(file.instance.opening()[0], Rational(1, 3));
  EXPECT_FALSE(file.predictions.has_value());
}

TEST(InstanceIoTest, RoundTripIsLossless) {
  const Instance star = GenerateStar(4);
  const Prediction pred({Rational(1, 3), Rational(0), Rational(2, 7),
                         Rational(5, 4), Rational(1)});
  const InstanceFile back = InstanceFromJson(InstanceToJson(star, pred));
  EXPECT_EQ(back.instance, star);
  ASSERT_TRUE(back.predictions.has_value());
  EXPECT_EQ(*back.predictions, pred);
}

TEST(InstanceIoTest, OutputIsDeterministic) {
  EuclideanSpec spec{.num_users = 4, .num_facilities = 3, .seed = 5};
  const Instance inst = GenerateEuclidean(spec);
  EXPECT_EQ(InstanceToJson(inst), InstanceToJson(GenerateEuclidean(spec)));
  EXPECT_EQ(InstanceFromJson(InstanceToJson(inst)).instance, inst);
}

TEST(InstanceIoTest, CoordinateDistancesRoundUp) {
  const InstanceFile file = InstanceFromJson(R"({
    "users": ["u"], "facilities": ["f", "g"],
    "dist": {"coords": {"u": ["0", "0"], "f": ["3", "4"], "g": ["1", "1"]},
             "precision": 2},
    "opening": {"f": "0", "g": "0"}
  })");
  EXPECT_EQ(file.instance.UserFacilityDistance(0, 0), Rational(5));
  // sqrt(2) = 1.41421..., rounded up to two digits.
  EXPECT_EQ(file.instance.UserFacilityDistance(0, 1), Rational(142, 100));
}

TEST(InstanceIoTest, MissingPairIsASchemaError) {
  EXPECT_THROW(InstanceFromJson(R"({
    "users": ["u", "v"], "facilities": ["f"],
    "dist": {"u|f": "1", "v|f": "1"},
    "opening": {"f": "1"}
  })"), SchemaError);
}

TEST(InstanceIoTest, MalformedInputIsASchemaError) {
  EXPECT_THROW(InstanceFromJson("not json"), SchemaError);
  EXPECT_THROW(InstanceFromJson(R"({"users": []})"), SchemaError);
  EXPECT_THROW(InstanceFromJson(R"({
    "users": ["u"], "facilities": ["f"],
    "dist": {"u|f": "abc"}, "opening": {"f": "1"}
  })"), SchemaError);
  EXPECT_THROW(InstanceFromJson(R"({
    "users": ["u"], "facilities": ["f"],
    "dist": {"u|f": "1"}, "opening": {"f": "-1"}
  })"), SchemaError);
}

TEST(InstanceIoTest, TriangleViolationNamesTheTriple) {
  constexpr char kBad[] = R"({
    "users": ["a", "c"], "facilities": ["b"],
    "dist": {"a|b": "1", "b|c": "1", "a|c": "5"},
    "opening": {"b": "1"}
  })";
  try {
    InstanceFromJson(kBad);
    FAIL() << "expected MetricError";
  } catch (const MetricError& e) {
    const std::string what = e.what();
    EXPECT_NE(what.find("a"), std::string::npos);
    EXPECT_NE(what.find("b"), std::string::npos);
    EXPECT_NE(what.find("c"), std::string::npos);
  }
  LoadOptions lenient;
  lenient.allow_non_metric = true;
  EXPECT_NO_THROW(InstanceFromJson(kBad, lenient));
}

TEST(InstanceIoTest, SaveAndLoadThroughAFile) {
  const std::filesystem::path path =
      std::filesystem::temp_directory_path() / "frugal_ufl_io_test.json";
  const Instance star = GenerateStar(3);
  SaveInstance(path.string(), star);
  EXPECT_EQ(LoadInstance(path.string()).instance, star);
  std::filesystem::remove(path);
  EXPECT_THROW(LoadInstance(path.string()), std::runtime_error);
}

}  // namespace
}  // namespace frugal_ufl
