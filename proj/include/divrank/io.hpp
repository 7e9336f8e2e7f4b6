#pragma once

// JSON formats.
//
// Instance:  {"m":int,"n":int,"c":[f64],"a":[f64],"w":[f64]|null,"b1":f64,"b2":f64}
//            w == null selects default_weights(n).
// Solution:  {"status":str,"lambda_star":f64,"objective":f64,"diversity":f64,
//             "rho":f64,"slots1":[int],"slots2":[int],"stats":{...}}

#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

#include "divrank/model.hpp"

namespace divrank::io {

using json = nlohmann::json;

/// Parsed and validated instance, or human-readable errors. Validation
/// errors are reported by their enum names.
using InstanceOrErrors = std::variant<Instance, std::vector<std::string>>;

inline InstanceOrErrors instance_from_json(const json& j) {
  std::vector<std::string> errors;
  if (!j.is_object()) return std::vector<std::string>{"instance must be a JSON object"};

  Instance inst;
  auto need = [&](const char* key) -> const json* {
    auto it = j.find(key);
    if (it == j.end()) {
      errors.push_back(std::string("missing field '") + key + "'");
      return nullptr;
    }
    return &*it;
  };
  auto read_size = [&](const char* key, std::size_t& out) {
    if (const json* v = need(key)) {
      if (v->is_number_integer() && v->get<long long>() >= 0)
        out = v->get<std::size_t>();
      else
        errors.push_back(std::string("field '") + key + "' must be a non-negative integer");
    }
  };
  auto read_real = [&](const char* key, double& out) {
    if (const json* v = need(key)) {
      if (v->is_number())
        out = v->get<double>();
      else
        errors.push_back(std::string("field '") + key + "' must be a number");
    }
  };
  auto read_vec = [&](const char* key, std::vector<double>& out) {
    if (const json* v = need(key)) {
      if (!v->is_array()) {
        errors.push_back(std::string("field '") + key + "' must be an array of numbers");
        return;
      }
      out.clear();
      for (const auto& x : *v) {
        if (!x.is_number()) {
          errors.push_back(std::string("field '") + key + "' must be an array of numbers");
          return;
        }
        out.push_back(x.get<double>());
      }
    }
  };

  read_size("m", inst.m);
  read_size("n", inst.n);
  read_vec("c", inst.c);
  read_vec("a", inst.a);
  read_real("b1", inst.b1);
  read_real("b2", inst.b2);
  if (const json* w = need("w")) {
    if (w->is_null())
      inst.w = default_weights(inst.n);
    else
      read_vec("w", inst.w);
  }
  if (!errors.empty()) return errors;

  auto checked = check_instance(inst);
  if (checked.empty()) return inst;
  for (auto e : checked) errors.emplace_back(to_string(e));
  return errors;
}

inline InstanceOrErrors parse_instance(std::string_view text) {
  json j = json::parse(text.begin(), text.end(), nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) return std::vector<std::string>{"malformed JSON"};
  return instance_from_json(j);
}

/// Weights are always written explicitly.
inline json to_json(const Instance& inst) {
  return json{{"m", inst.m}, {"n", inst.n}, {"c", inst.c}, {"a", inst.a},
              {"w", inst.w}, {"b1", inst.b1}, {"b2", inst.b2}};
}

inline json to_json(const SolveStats& s) {
  return json{{"iterations", s.iterations}, {"screens", s.screens},     {"dropped", s.dropped},
              {"wall_time_us", s.wall_time_us}, {"exact", s.exact},     {"lambda_lo", s.lambda_lo},
              {"lambda_hi", s.lambda_hi},     {"gap", s.gap}};
}

inline json to_json(const Solution& sol) {
  return json{{"status", std::string(to_string(sol.status))},
              {"lambda_star", sol.lambda_star},
              {"objective", sol.mixture.objective},
              {"diversity", sol.mixture.diversity},
              {"rho", sol.mixture.rho},
              {"slots1", sol.mixture.x1.slots},
              {"slots2", sol.mixture.x2.slots},
              {"stats", to_json(sol.stats)}};
}

/// Inverse of to_json(Solution); throws nlohmann::json::exception or
/// std::invalid_argument on malformed input.
inline Solution solution_from_json(const json& j) {
  Solution sol;
  auto st = status_from_string(j.at("status").get<std::string>());
  if (!st) throw std::invalid_argument("unknown status");
  sol.status = *st;
  sol.lambda_star = j.at("lambda_star").get<double>();
  sol.mixture.objective = j.at("objective").get<double>();
  sol.mixture.diversity = j.at("diversity").get<double>();
  sol.mixture.rho = j.at("rho").get<double>();
  sol.mixture.x1.slots = j.at("slots1").get<std::vector<std::size_t>>();
  sol.mixture.x2.slots = j.at("slots2").get<std::vector<std::size_t>>();
  const auto& s = j.at("stats");
  sol.stats.iterations = s.at("iterations").get<std::size_t>();
  sol.stats.screens = s.at("screens").get<std::size_t>();
  sol.stats.dropped = s.at("dropped").get<std::size_t>();
  sol.stats.wall_time_us = s.at("wall_time_us").get<std::int64_t>();
  sol.stats.exact = s.at("exact").get<bool>();
  // Non-finite bracket ends are written as null.
  auto real_or_inf = [](const json& v) { return v.is_null() ? std::numeric_limits<double>::infinity() : v.get<double>(); };
  sol.stats.lambda_lo = real_or_inf(s.at("lambda_lo"));
  sol.stats.lambda_hi = real_or_inf(s.at("lambda_hi"));
  sol.stats.gap = s.at("gap").get<double>();
  return sol;
}

}  // namespace divrank::io
