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

#include <fstream>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

#include "frugal_ufl/errors.h"
#include "json.hpp"

namespace frugal_ufl {
namespace {

using Json = nlohmann::ordered_json;

constexpr char kPairSeparator = '|';

Rational ParseNumber(const Json& value, const std::string& where) {
  try {
    if (value.is_string()) return Rational::Parse(value.get<std::string>());
    if (value.is_number_integer()) return Rational(value.get<long>());
  } catch (const std::invalid_argument& e) {
    throw SchemaError(where + ": " + e.what());
  }
  throw SchemaError(where + ": expected a decimal string");
}

std::vector<std::string> ParseIds(const Json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_array()) {
    throw SchemaError(std::string("missing array '") + key + "'");
  }
  std::vector<std::string> ids;
  for (const Json& id : doc[key]) {
    if (!id.is_string()) throw SchemaError(std::string("non-string id in '") + key + "'");
    std::string s = id.get<std::string>();
    if (s.find(kPairSeparator) != std::string::npos) {
      throw SchemaError("id '" + s + "' contains the pair separator '|'");
    }
    ids.push_back(std::move(s));
  }
  return ids;
}

std::vector<Rational> ParseFacilityMap(const Json& doc, const char* key,
                                       const std::vector<std::string>& facilities) {
  const Json& map = doc[key];
  if (!map.is_object()) throw SchemaError(std::string("'") + key + "' must be an object");
  std::vector<Rational> out;
  for (const std::string& f : facilities) {
    if (!map.contains(f)) {
      throw SchemaError(std::string("'") + key + "' has no entry for facility '" + f + "'");
    }
    out.push_back(ParseNumber(map[f], std::string(key) + "." + f));
  }
  if (map.size() != facilities.size()) {
    throw SchemaError(std::string("'") + key + "' names unknown facilities");
  }
  return out;
}

using Matrix = std::vector<std::vector<Rational>>;

Matrix ParsePairDistances(const Json& dist, const std::map<std::string, int>& index) {
  const std::size_t n = index.size();
  Matrix d(n, std::vector<Rational>(n));
  std::vector<std::vector<bool>> seen(n, std::vector<bool>(n, false));
  for (const auto& [key, value] : dist.items()) {
    const auto bar = key.find(kPairSeparator);
    if (bar == std::string::npos) throw SchemaError("distance key '" + key + "' is not 'a|b'");
    const auto a = index.find(key.substr(0, bar));
    const auto b = index.find(key.substr(bar + 1));
    if (a == index.end() || b == index.end()) {
      throw SchemaError("distance key '" + key + "' names an unknown point");
    }
    const Rational v = ParseNumber(value, "dist." + key);
    const auto i = static_cast<std::size_t>(a->second);
    const auto j = static_cast<std::size_t>(b->second);
    d[i][j] = v;
    seen[i][j] = true;
    if (!seen[j][i]) d[j][i] = v;
  }
  std::vector<std::string> names(n);
  for (const auto& [name, i] : index) names[static_cast<std::size_t>(i)] = name;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!seen[i][j] && !seen[j][i]) {
        throw SchemaError("missing distance for pair '" + names[i] + "|" + names[j] + "'");
      }
    }
  }
  return d;
}

Matrix ParseCoordinateDistances(const Json& dist, const std::vector<std::string>& points) {
  if (!dist.contains("precision") || !dist["precision"].is_number_integer()) {
    throw SchemaError("coordinate distances need an integer 'precision'");
  }
  const int precision = dist["precision"].get<int>();
  if (precision < 0 || precision > 18) throw SchemaError("precision out of range");
  const Json& coords = dist["coords"];
  if (!coords.is_object()) throw SchemaError("'coords' must be an object");
  std::vector<std::vector<Rational>> xs;
  for (const std::string& p : points) {
    if (!coords.contains(p) || !coords[p].is_array()) {
      throw SchemaError("missing coordinates for point '" + p + "'");
    }
    std::vector<Rational> x;
    for (const Json& c : coords[p]) x.push_back(ParseNumber(c, "coords." + p));
    if (!xs.empty() && x.size() != xs.front().size()) {
      throw SchemaError("coordinate dimension mismatch at point '" + p + "'");
    }
    xs.push_back(std::move(x));
  }
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(precision));
  const std::size_t n = points.size();
  Matrix d(n, std::vector<Rational>(n));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      Rational squared;
      for (std::size_t c = 0; c < xs[a].size(); ++c) {
        const Rational delta = xs[a][c] - xs[b][c];
        squared += delta * delta;
      }
      d[a][b] = Rational(mpq_class(CeilScaledSqrt(squared, precision), scale));
      d[b][a] = d[a][b];
    }
  }
  return d;
}

}  // namespace

std::string InstanceToJson(const Instance& instance,
                           const std::optional<Prediction>& predictions) {
  Json doc;
  doc["users"] = instance.users();
  doc["facilities"] = instance.facilities();
  Json dist = Json::object();
  for (int a = 0; a < instance.num_points(); ++a) {
    for (int b = a + 1; b < instance.num_points(); ++b) {
      const std::string key = instance.PointId(a) + kPairSeparator + instance.PointId(b);
      dist[key] = instance.Distance(a, b).ToExactString();
      if (instance.Distance(b, a) != instance.Distance(a, b)) {
        dist[instance.PointId(b) + kPairSeparator + instance.PointId(a)] =
            instance.Distance(b, a).ToExactString();
      }
    }
  }
  doc["dist"] = std::move(dist);
  Json opening = Json::object();
  for (int f = 0; f < instance.num_facilities(); ++f) {
    opening[instance.facilities()[static_cast<std::size_t>(f)]] =
        instance.opening()[static_cast<std::size_t>(f)].ToExactString();
  }
  doc["opening"] = std::move(opening);
  if (predictions) {
    if (predictions->size() != instance.num_facilities()) {
      throw InvalidArgumentError("prediction does not match facility count");
    }
    Json pred = Json::object();
    for (int f = 0; f < instance.num_facilities(); ++f) {
      pred[instance.facilities()[static_cast<std::size_t>(f)]] =
          (*predictions)[f].ToExactString();
    }
    doc["predictions"] = std::move(pred);
  }
  return doc.dump(2) + "\n";
}

InstanceFile InstanceFromJson(const std::string& text, const LoadOptions& options) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("instance file must be a JSON object");

  std::vector<std::string> users = ParseIds(doc, "users");
  std::vector<std::string> facilities = ParseIds(doc, "facilities");
  std::vector<std::string> points = users;
  points.insert(points.end(), facilities.begin(), facilities.end());
  std::map<std::string, int> index;
  for (const std::string& p : points) {
    if (!index.emplace(p, static_cast<int>(index.size())).second) {
      throw SchemaError("duplicate point id '" + p + "'");
    }
  }

  if (!doc.contains("dist") || !doc["dist"].is_object()) {
    throw SchemaError("missing object 'dist'");
  }
  const Json& dist = doc["dist"];
  Matrix d = dist.contains("coords") ? ParseCoordinateDistances(dist, points)
                                     : ParsePairDistances(dist, index);
  if (!doc.contains("opening")) throw SchemaError("missing object 'opening'");
  std::vector<Rational> opening = ParseFacilityMap(doc, "opening", facilities);

  InstanceFile out;
  try {
    out.instance = Instance(std::move(users), std::move(facilities), std::move(d),
                            std::move(opening));
    if (doc.contains("predictions")) {
      out.predictions =
          Prediction(ParseFacilityMap(doc, "predictions", out.instance.facilities()));
    }
  } catch (const InvalidArgumentError& e) {
    throw SchemaError(e.what());
  }

  if (!options.allow_non_metric) {
    const auto violations = ValidateMetric(out.instance, options.tolerance);
    if (!violations.empty()) {
      std::ostringstream msg;
      msg << "distances are not a metric (" << violations.size() << " violation"
          << (violations.size() == 1 ? "" : "s") << ")";
      for (std::size_t i = 0; i < violations.size() && i < 10; ++i) {
        msg << "; " << violations[i].Describe();
      }
      throw MetricError(msg.str());
    }
  }
  return out;
}

void SaveInstance(const std::string& path, const Instance& instance,
                  const std::optional<Prediction>& predictions) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << InstanceToJson(instance, predictions);
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

InstanceFile LoadInstance(const std::string& path, const LoadOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return InstanceFromJson(buffer.str(), options);
}

}  // namespace frugal_ufl
