//
// Copyright 2026 The Puffercal Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "puffercal/serde.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <json.hpp>

#include "puffercal/errors.hpp"

namespace puffercal::serde {

namespace {

using nlohmann::json;

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ValidationError(std::string("missing JSON field: ") + key);
  }
  return *it;
}

double number(const json& j, const char* what) {
  if (!j.is_number()) {
    throw ValidationError(std::string(what) + " must be a number");
  }
  return j.get<double>();
}

std::vector<double> number_list(const json& j, const char* what) {
  if (!j.is_array()) {
    throw ValidationError(std::string(what) + " must be an array");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const json& v : j) out.push_back(number(v, what));
  return out;
}

DiscreteDistribution distribution_from(const json& j) {
  if (!j.is_object()) {
    throw ValidationError("distribution must be a JSON object");
  }
  return DiscreteDistribution(number_list(field(j, "support"), "support"),
                              number_list(field(j, "mass"), "mass"));
}

json distribution_to(const DiscreteDistribution& dist) {
  return json{{"support", dist.support()}, {"mass", dist.mass()}};
}

SecretPair secret_pair_from(const json& j) {
  if (!j.is_object()) {
    throw ValidationError("secret pair must be a JSON object");
  }
  std::string user;
  if (j.contains("user")) user = j.at("user").get<std::string>();
  const bool has_a = j.contains("a");
  const bool has_b = j.contains("b");
  const bool has_p = j.contains("P");
  const bool has_q = j.contains("Q");
  if (has_a && has_b && !has_p && !has_q) {
    return ValuePair{user, number(j.at("a"), "a"), number(j.at("b"), "b")};
  }
  if (has_a && !has_b && !has_p && !has_q) {
    return ValueAbsent{user, number(j.at("a"), "a")};
  }
  if (has_p && has_q && !has_a && !has_b) {
    return DistPair{user, distribution_from(j.at("P")),
                    distribution_from(j.at("Q"))};
  }
  if (has_p && !has_q && !has_a && !has_b) {
    return DistAbsent{user, distribution_from(j.at("P"))};
  }
  throw ValidationError(
      "secret pair must carry {a,b}, {a}, {P}, or {P,Q} fields");
}

json secret_pair_to(const SecretPair& pair) {
  json j;
  std::visit(
      [&j](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if (!p.user_id.empty()) j["user"] = p.user_id;
        if constexpr (std::is_same_v<T, ValuePair>) {
          j["a"] = p.a;
          j["b"] = p.b;
        } else if constexpr (std::is_same_v<T, ValueAbsent>) {
          j["a"] = p.a;
        } else if constexpr (std::is_same_v<T, DistAbsent>) {
          j["P"] = distribution_to(p.dist);
        } else {
          j["P"] = distribution_to(p.p);
          j["Q"] = distribution_to(p.q);
        }
      },
      pair);
  return j;
}

std::string dump(const json& j, int indent) {
  return indent < 0 ? j.dump() : j.dump(indent);
}

}  // namespace

DiscreteDistribution distribution_from_json(std::string_view text) {
  return distribution_from(parse(text));
}

std::string to_json(const DiscreteDistribution& dist, int indent) {
  return dump(distribution_to(dist), indent);
}

SystemConfig config_from_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("users") || !j.at("users").is_array()) {
    throw ValidationError("config must be an object with a \"users\" array");
  }
  std::vector<UserSpec> users;
  users.reserve(j.at("users").size());
  for (const json& u : j.at("users")) {
    if (!u.is_object()) throw ValidationError("user entry must be an object");
    if (!u.contains("id") || !u.at("id").is_string()) {
      throw ValidationError("user entry needs a string \"id\"");
    }
    const double presence =
        u.contains("presence") ? number(u.at("presence"), "presence") : 1.0;
    users.emplace_back(u.at("id").get<std::string>(), presence,
                       distribution_from(field(u, "distribution")));
  }
  return SystemConfig(std::move(users));
}

std::string to_json(const SystemConfig& config, int indent) {
  json users = json::array();
  for (const UserSpec& u : config.users()) {
    users.push_back(json{{"id", u.id},
                         {"presence", u.presence},
                         {"distribution", distribution_to(u.distribution)}});
  }
  return dump(json{{"users", users}}, indent);
}

SecretPair secret_pair_from_json(std::string_view text) {
  return secret_pair_from(parse(text));
}

std::vector<SecretPair> secret_pairs_from_json(std::string_view text) {
  const json j = parse(text);
  if (j.is_object()) return {secret_pair_from(j)};
  if (!j.is_array()) {
    throw ValidationError("pairs must be a JSON array (or one object)");
  }
  std::vector<SecretPair> pairs;
  pairs.reserve(j.size());
  for (const json& p : j) pairs.push_back(secret_pair_from(p));
  return pairs;
}

std::string to_json(const SecretPair& pair, int indent) {
  return dump(secret_pair_to(pair), indent);
}

CategoryCodec codec_from_json(std::string_view text) {
  const json j = parse(text);
  if (!j.is_object() || !j.contains("column") || !j.contains("codes")) {
    throw ValidationError("codec must carry \"column\" and \"codes\"");
  }
  std::vector<std::pair<std::string, int>> codes;
  for (const auto& [category, code] : j.at("codes").items()) {
    if (!code.is_number_integer()) {
      throw ValidationError("codec codes must be integers");
    }
    codes.emplace_back(category, code.get<int>());
  }
  // JSON objects arrive key-sorted; order codes by value so first-appearance
  // extension continues from the largest assigned code.
  std::sort(codes.begin(), codes.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });
  return CategoryCodec(j.at("column").get<std::string>(), std::move(codes));
}

std::string to_json(const CategoryCodec& codec, int indent) {
  json codes = json::object();
  for (const auto& [category, code] : codec.codes()) codes[category] = code;
  return dump(json{{"column", codec.column()}, {"codes", codes}}, indent);
}

std::string to_json(const CalibrationResult& result, double epsilon,
                    int indent) {
  json j{{"theta", result.theta},
         {"method", method_name(result.method)},
         {"witness", result.witness},
         {"epsilon", epsilon}};
  if (!result.note.empty()) j["note"] = result.note;
  if (result.root.has_value()) {
    j["root"] = json{{"iterations", result.root->iterations},
                     {"bracket_lo", result.root->bracket_lo},
                     {"bracket_hi", result.root->bracket_hi},
                     {"residual", result.root->residual}};
  }
  return dump(j, indent);
}

std::string to_json(const VerificationReport& report, int indent) {
  json j{{"max_abs_log_ratio", report.max_abs_log_ratio},
         {"satisfied", report.satisfied},
         {"epsilon", report.epsilon},
         {"pair", report.pair}};
  if (std::isinf(report.attained_at)) {
    j["attained_at"] = report.attained_at > 0 ? "+inf" : "-inf";
  } else {
    j["attained_at"] = report.attained_at;
  }
  return dump(j, indent);
}

}  // namespace puffercal::serde
