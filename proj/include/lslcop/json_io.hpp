#pragma once

// JSON interchange for diagonals and reports.
//   {"type":"pwl","knots":[[0,0],...,[1,1]]}
//   {"type":"ratio","knots":[[0,phi0],...,[1,1]]}
//   {"type":"l","a":0.5} {"type":"u","a":0.5} {"type":"power","p":1.5}
//   {"type":"mo","alpha":0.3,"beta":0.7}
//   {"type":"mix","w":0.3,"left":{...},"right":{...}}

#include "lslcop/concordance.hpp"
#include "lslcop/diagonal.hpp"
#include "lslcop/star.hpp"

#include <json.hpp>

#include <string>
#include <type_traits>
#include <vector>

namespace lslcop {

using json = nlohmann::json;

inline json to_json(const Diagonal& d) {
  return std::visit(
      [](const auto& r) -> json {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, Diagonal::Pwl>) {
          json k = json::array();
          for (const auto& n : r.knots) k.push_back({n.x, n.y});
          return {{"type", "pwl"}, {"knots", k}};
        } else if constexpr (std::is_same_v<T, Diagonal::Ratio>) {
          json k = json::array();
          for (const auto& n : r.knots) k.push_back({n.x, n.phi});
          return {{"type", "ratio"}, {"knots", k}};
        } else if constexpr (std::is_same_v<T, Diagonal::Lower>) {
          return {{"type", "l"}, {"a", r.a}};
        } else if constexpr (std::is_same_v<T, Diagonal::Upper>) {
          return {{"type", "u"}, {"a", r.a}};
        } else if constexpr (std::is_same_v<T, Diagonal::Power>) {
          return {{"type", "power"}, {"p", r.p}};
        } else if constexpr (std::is_same_v<T, Diagonal::MoStar>) {
          return {{"type", "mo"}, {"alpha", r.alpha}, {"beta", r.beta}};
        } else {
          return {{"type", "mix"}, {"w", r.weight}, {"left", to_json(*r.left)}, {"right", to_json(*r.right)}};
        }
      },
      d.repr());
}

namespace detail {

inline double number(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw MalformedKnots(std::string("diagonal json: missing number '") + key + "'");
  return j.at(key).get<double>();
}

inline std::vector<std::pair<double, double>> pairs(const json& j) {
  if (!j.contains("knots") || !j.at("knots").is_array())
    throw MalformedKnots("diagonal json: missing knots array");
  std::vector<std::pair<double, double>> out;
  for (const auto& k : j.at("knots")) {
    if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number())
      throw MalformedKnots("diagonal json: knot must be [x, y]");
    out.emplace_back(k[0].get<double>(), k[1].get<double>());
  }
  return out;
}

}  // namespace detail

inline Diagonal diagonal_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw MalformedKnots("diagonal json: missing type");
  const auto type = j.at("type").get<std::string>();
  if (type == "pwl") {
    std::vector<Knot> k;
    for (auto [x, y] : detail::pairs(j)) k.push_back({x, y});
    return make_pwl(std::move(k));
  }
  if (type == "ratio") {
    std::vector<RatioKnot> k;
    for (auto [x, p] : detail::pairs(j)) k.push_back({x, p});
    return make_ratio(std::move(k));
  }
  if (type == "l") return lower(detail::number(j, "a"));
  if (type == "u") return upper(detail::number(j, "a"));
  if (type == "power") return power(detail::number(j, "p"));
  if (type == "mo") return mo_star(detail::number(j, "alpha"), detail::number(j, "beta"));
  if (type == "mix") {
    if (!j.contains("left") || !j.contains("right")) throw MalformedKnots("diagonal json: mix needs left and right");
    return mix(diagonal_from_json(j.at("left")), diagonal_from_json(j.at("right")), detail::number(j, "w"));
  }
  throw MalformedKnots("diagonal json: unknown type '" + type + "'");
}

inline json to_json(const ValidationReport& r) {
  json v = json::array();
  for (const auto& x : r.violations)
    v.push_back({{"condition", std::string(to_string(x.condition))},
                 {"witness_x", x.witness_x},
                 {"lhs", x.lhs},
                 {"rhs", x.rhs}});
  return {{"is_member", r.is_member}, {"tolerance", r.tolerance}, {"violations", v}};
}

inline json to_json(const ConcordanceReport& r) {
  return {{"tau", r.tau},
          {"rho", r.rho},
          {"gamma", r.gamma},
          {"footrule", r.footrule},
          {"blomqvist", r.blomqvist},
          {"sing", r.sing},
          {"lower_bound_ok", r.lower_bound_ok},
          {"upper_conjecture_ok", r.upper_conjecture_ok}};
}

inline json to_json(const StarResult& r) {
  return {{"product", to_json(r.product)},
          {"projection_error_bound", r.projection_error_bound},
          {"repair_magnitude", r.repair_magnitude}};
}

}  // namespace lslcop
