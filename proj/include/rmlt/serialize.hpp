#pragma once

// JSON forms of fields, polynomials, constraints, tables and reports.

#include <string>
#include <vector>

#include "json.hpp"

#include "rmlt/builder.hpp"
#include "rmlt/constraint.hpp"
#include "rmlt/core.hpp"
#include "rmlt/error.hpp"
#include "rmlt/gf.hpp"
#include "rmlt/oracle.hpp"
#include "rmlt/poly.hpp"
#include "rmlt/tester.hpp"

namespace rmlt {

using json = nlohmann::ordered_json;

inline json to_json(const Field& f) { return {{"p", f.p()}, {"s", f.s()}, {"modulus", f.modulus()}}; }

namespace detail {

template <typename Fn>
auto parse_guard(const char* what, Fn&& fn) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

inline Field field_from_json(const json& j) {
  return detail::parse_guard("field", [&] {
    return Field::create(j.at("p").get<unsigned>(), j.at("s").get<unsigned>(),
                         j.at("modulus").get<std::vector<unsigned>>());
  });
}

inline json to_json(const MultiPoly& m) {
  json terms = json::array();
  for (const auto& t : m.terms()) terms.push_back(json::array({t.exponents, t.coeff}));
  return {{"n", m.n()}, {"terms", terms}};
}

inline MultiPoly poly_from_json(const Field& f, const json& j) {
  return detail::parse_guard("polynomial", [&] {
    const auto n = j.at("n").get<std::size_t>();
    std::vector<MultiPoly::Term> terms;
    for (const auto& t : j.at("terms")) {
      auto e = t.at(0).get<DegreeVector>();
      auto c = t.at(1).get<unsigned>();
      if (e.size() != n) throw Error(ErrorCode::ParseError, "term arity differs from n");
      if (!f.valid(c)) throw Error(ErrorCode::ParseError, "coefficient outside the field");
      terms.push_back({std::move(e), static_cast<Element>(c)});
    }
    return MultiPoly::from_terms(f, n, std::move(terms));
  });
}

inline json to_json(const Constraint& c) {
  json points = json::array();
  for (std::size_t j = 0; j < c.k(); ++j) {
    auto pt = c.point(j);
    points.push_back(std::vector<Element>(pt.begin(), pt.end()));
  }
  return {{"field", to_json(c.field())}, {"n", c.n()}, {"points", points}, {"rows", c.rows()}};
}

inline Constraint constraint_from_json(const json& j) {
  return detail::parse_guard("constraint", [&] {
    Field f = field_from_json(j.at("field"));
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Element> flat;
    std::size_t k = 0;
    for (const auto& pt : j.at("points")) {
      auto coords = pt.get<std::vector<unsigned>>();
      if (coords.size() != n) throw Error(ErrorCode::ParseError, "point arity differs from n");
      for (auto c : coords) {
        if (!f.valid(c)) throw Error(ErrorCode::ParseError, "point coordinate outside the field");
        flat.push_back(static_cast<Element>(c));
      }
      ++k;
    }
    std::vector<std::vector<Element>> rows;
    for (const auto& row : j.at("rows")) {
      std::vector<Element> r;
      for (auto c : row.get<std::vector<unsigned>>()) {
        if (!f.valid(c)) throw Error(ErrorCode::ParseError, "coefficient outside the field");
        r.push_back(static_cast<Element>(c));
      }
      rows.push_back(std::move(r));
    }
    return Constraint(std::move(f), n, k, std::move(flat), std::move(rows));
  });
}

inline json to_json(const FunctionTable& t) {
  return {{"field", to_json(t.field())}, {"n", t.n()}, {"values", t.values()}};
}

inline FunctionTable table_from_json(const json& j) {
  return detail::parse_guard("function table", [&] {
    Field f = field_from_json(j.at("field"));
    const auto n = j.at("n").get<std::size_t>();
    std::vector<Element> values;
    for (auto v : j.at("values").get<std::vector<unsigned>>()) {
      if (!f.valid(v)) throw Error(ErrorCode::ParseError, "table value outside the field");
      values.push_back(static_cast<Element>(v));
    }
    return FunctionTable(std::move(f), n, std::move(values));
  });
}

inline json to_json(const AffineTransform& t) { return {{"matrix", t.matrix}, {"shift", t.shift}}; }

inline json to_json(const Decomposition& d) {
  return {{"target", d.target}, {"r", d.r},         {"l", d.l}, {"l_prime", d.l_prime},
          {"r_prime", d.r_prime}, {"variables_needed", d.variables_needed}, {"extension", d.extension}};
}

inline json to_json(const CoreReport& r) {
  json j = {{"q", r.q},
            {"p", r.p},
            {"s", r.s},
            {"k", r.k},
            {"upper_bound", r.upper_bound},
            {"lower_bound", r.lower_bound},
            {"upper_ok", r.upper_ok},
            {"lower_ok", r.lower_ok},
            {"homogeneous", r.homogeneous},
            {"accept_checks", r.accept_checks},
            {"accept_failures", r.accept_failures},
            {"canonical", r.canonical},
            {"reject_check", r.reject_check},
            {"pass", r.pass}};
  j["witness"] = r.witness ? json(*r.witness) : json(nullptr);
  return j;
}

/// Provenance block for a build: parameters, per-degree parts, bounds.
inline json provenance_json(const RmBuild& b) {
  json parts = json::array();
  for (const auto& p : b.parts)
    parts.push_back({{"decomposition", to_json(p.decomposition)},
                     {"k", p.k},
                     {"bound", p.bound},
                     {"bound_satisfied", p.bound_satisfied}});
  return {{"n", b.n},
          {"d", b.d},
          {"q", b.constraint.field().q()},
          {"b_values", b.b_values},
          {"decompositions", parts},
          {"k", b.k},
          {"bound", b.bound},
          {"bound_satisfied", b.bound_satisfied},
          {"simple_bound", b.simple_bound},
          {"simple_bound_satisfied", b.simple_bound_satisfied}};
}

inline json to_json(const TestReport& r) {
  return {{"trials", r.trials},       {"rejections", r.rejections}, {"estimate", r.estimate},
          {"mode", to_string(r.mode)}, {"seed", r.seed},             {"queries_per_trial", r.queries_per_trial}};
}

inline json to_json(const RankCertificate& c) {
  json j = {{"q", c.q},
            {"n", c.n},
            {"d", c.d},
            {"k", c.k},
            {"dual_dim", c.dual_dim},
            {"achieved_rank", c.achieved_rank},
            {"max_row_weight", c.max_row_weight},
            {"weight_bound", c.weight_bound},
            {"weight_bound_satisfied", c.weight_bound_satisfied},
            {"rows_in_dual", c.rows_in_dual},
            {"exhaustive", c.exhaustive},
            {"transforms_used", c.transforms_used},
            {"status", to_string(c.status)},
            {"pass", c.pass}};
  j["dual_witness"] = c.dual_witness ? json(*c.dual_witness) : json(nullptr);
  return j;
}

inline json to_json(const DegBorderReport& r) {
  json border = json::array();
  for (const auto& b : r.border)
    border.push_back({{"border", b.border}, {"rejecting", b.rejecting ? to_json(*b.rejecting) : json(nullptr)}});
  json j = {{"q", r.q}, {"n", r.n}, {"d", r.d}, {"deg_size", r.deg_size}};
  j["deg_failure"] = r.deg_failure ? json(*r.deg_failure) : json(nullptr);
  j["border"] = border;
  j["uncovered"] = r.uncovered;
  j["exhaustive"] = r.exhaustive;
  j["pass"] = r.pass;
  return j;
}

}  // namespace rmlt
