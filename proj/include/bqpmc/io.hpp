#pragma once

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqpmc/core.hpp"
#include "json.hpp"

namespace bqpmc::io {

using nlohmann::json;
using nlohmann::ordered_json;

inline json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return json::parse(in);
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

inline ordered_json instance_to_json(const Instance& inst) {
  ordered_json j;
  ordered_json subsets = ordered_json::array();
  for (const auto& s : inst.subsets()) {
    ordered_json names = ordered_json::array();
    for (int i : s) names.push_back(inst.x_name(i));
    subsets.push_back(names);
  }
  j["subsets"] = subsets;
  j["y"] = inst.y_names();
  if (inst.complete_spec()) {
    j["edges"] = "complete";
  } else {
    ordered_json edges = ordered_json::array();
    for (auto [i, jj] : inst.edges()) edges.push_back({inst.x_name(i), inst.y_name(jj)});
    j["edges"] = edges;
  }
  return j;
}

inline Instance instance_from_json(const json& j) {
  auto subsets = j.at("subsets").get<std::vector<std::vector<std::string>>>();
  auto ys = j.at("y").get<std::vector<std::string>>();
  const json& e = j.at("edges");
  if (e.is_string()) {
    if (e.get<std::string>() != "complete") throw std::invalid_argument("edges must be \"complete\" or a list of pairs");
    return Instance::build(subsets, ys, EdgeSpec::complete_graph());
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (const auto& p : e) pairs.emplace_back(p.at(0).get<std::string>(), p.at(1).get<std::string>());
  return Instance::build(subsets, ys, EdgeSpec::list(std::move(pairs)));
}

inline Instance read_instance(const std::string& path) { return instance_from_json(read_json_file(path)); }

inline ordered_json constraint_to_json(const LinearConstraint& c, const Instance& inst) {
  ordered_json j;
  j["tag"] = c.tag();
  j["sense"] = sense_symbol(c.sense());
  j["rhs"] = c.rhs();
  ordered_json terms = ordered_json::array();
  for (const Term& t : c.terms()) terms.push_back({inst.var_name(t.var), t.coef});
  j["terms"] = terms;
  return j;
}

inline LinearConstraint constraint_from_json(const json& j, const Instance& inst) {
  std::vector<Term> terms;
  for (const auto& t : j.at("terms")) terms.push_back({inst.parse_var(t.at(0).get<std::string>()), t.at(1).get<double>()});
  return LinearConstraint(std::move(terms), parse_sense(j.at("sense").get<std::string>()), j.at("rhs").get<double>(),
                          j.value("tag", std::string{}));
}

inline ordered_json pool_to_json(const std::vector<LinearConstraint>& pool, const Instance& inst) {
  ordered_json arr = ordered_json::array();
  for (const auto& c : pool) arr.push_back(constraint_to_json(c, inst));
  return arr;
}

inline std::vector<LinearConstraint> pool_from_json(const json& j, const Instance& inst) {
  std::vector<LinearConstraint> out;
  for (const auto& r : j) out.push_back(constraint_from_json(r, inst));
  return out;
}

// Points map variable names to numbers or rational strings ("3/10"); absent variables are 0.
inline RationalPoint point_from_json(const json& j, const Instance& inst) {
  RationalPoint p(inst);
  for (auto it = j.begin(); it != j.end(); ++it) {
    VarId v = inst.parse_var(it.key());
    if (it->is_string())
      p[v] = parse_rational(it->get<std::string>());
    else
      p[v] = to_rational(it->get<double>());
  }
  return p;
}

template <class T>
ordered_json point_to_json(const BasicPoint<T>& p, const Instance& inst) {
  ordered_json j = ordered_json::object();
  for (int k = 0; k < inst.num_vars(); ++k) {
    if constexpr (NumTraits<T>::exact)
      j[inst.var_name(VarId{k})] = p.values[k].get_str();
    else
      j[inst.var_name(VarId{k})] = p.values[k];
  }
  return j;
}

}  // namespace bqpmc::io
