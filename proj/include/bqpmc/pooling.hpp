#pragma once

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "bqpmc/core.hpp"
#include "bqpmc/random.hpp"
#include "bqpmc/simplex.hpp"
#include "json.hpp"

namespace bqpmc::pooling {

struct Input {
  std::string name;
  double availability = 0;
  std::vector<double> spec;  // one value per specification
};

struct Group {
  std::vector<int> inputs;  // indices into PoolingInstance::inputs
  double sigma = 0;
};

struct Pool {
  std::string name;
  std::vector<Group> groups;  // partition of the pool's inputs, one group per material
};

struct Output {
  std::string name;
  double demand = 0;
  std::vector<double> spec_min, spec_max;
};

// Arcs run input -> pool (the pools' groups) and pool -> output (every pool feeds every output).
struct PoolingInstance {
  std::vector<std::string> specs;
  std::vector<Input> inputs;
  std::vector<Pool> pools;
  std::vector<Output> outputs;

  std::vector<int> pool_inputs(int l) const {
    std::vector<int> out;
    for (const auto& g : pools.at(l).groups) out.insert(out.end(), g.inputs.begin(), g.inputs.end());
    return out;
  }

  void validate() const {
    const std::size_t ns = specs.size();
    for (const auto& in : inputs)
      if (in.spec.size() != ns) throw std::invalid_argument("pooling: input " + in.name + " spec count");
    for (const auto& o : outputs)
      if (o.spec_min.size() != ns || o.spec_max.size() != ns)
        throw std::invalid_argument("pooling: output " + o.name + " spec count");
    for (const auto& p : pools) {
      double total = 0;
      std::set<int> seen;
      for (const auto& g : p.groups) {
        if (g.sigma < 0 || g.sigma > 1) throw std::invalid_argument("pooling: sigma outside [0,1] at " + p.name);
        total += g.sigma;
        for (int i : g.inputs) {
          if (i < 0 || i >= static_cast<int>(inputs.size())) throw std::invalid_argument("pooling: bad input index");
          if (!seen.insert(i).second) throw std::invalid_argument("pooling: groups of " + p.name + " overlap");
        }
      }
      if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("pooling: sigma of " + p.name + " does not sum to 1");
    }
  }
};

inline PoolingInstance instance_from_json(const nlohmann::json& j) {
  PoolingInstance pi;
  pi.specs = j.at("specs").get<std::vector<std::string>>();
  std::map<std::string, int> index;
  for (const auto& in : j.at("inputs")) {
    Input x{in.at("name").get<std::string>(), in.at("availability").get<double>(),
            in.at("spec").get<std::vector<double>>()};
    if (!index.emplace(x.name, static_cast<int>(pi.inputs.size())).second)
      throw std::invalid_argument("pooling: duplicate input " + x.name);
    pi.inputs.push_back(std::move(x));
  }
  for (const auto& p : j.at("pools")) {
    Pool pool{p.at("name").get<std::string>(), {}};
    for (const auto& g : p.at("groups")) {
      Group grp;
      grp.sigma = g.at("sigma").get<double>();
      for (const auto& n : g.at("inputs")) {
        auto it = index.find(n.get<std::string>());
        if (it == index.end()) throw std::invalid_argument("pooling: unknown input " + n.get<std::string>());
        grp.inputs.push_back(it->second);
      }
      pool.groups.push_back(std::move(grp));
    }
    pi.pools.push_back(std::move(pool));
  }
  for (const auto& o : j.at("outputs"))
    pi.outputs.push_back({o.at("name").get<std::string>(), o.at("demand").get<double>(),
                          o.at("min").get<std::vector<double>>(), o.at("max").get<std::vector<double>>()});
  pi.validate();
  return pi;
}

inline nlohmann::ordered_json instance_to_json(const PoolingInstance& pi) {
  nlohmann::ordered_json j;
  j["specs"] = pi.specs;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& in : pi.inputs)
    j["inputs"].push_back({{"name", in.name}, {"availability", in.availability}, {"spec", in.spec}});
  j["pools"] = nlohmann::ordered_json::array();
  for (const auto& p : pi.pools) {
    nlohmann::ordered_json groups = nlohmann::ordered_json::array();
    for (const auto& g : p.groups) {
      std::vector<std::string> names;
      for (int i : g.inputs) names.push_back(pi.inputs[i].name);
      groups.push_back({{"inputs", names}, {"sigma", g.sigma}});
    }
    j["pools"].push_back({{"name", p.name}, {"groups", groups}});
  }
  j["outputs"] = nlohmann::ordered_json::array();
  for (const auto& o : pi.outputs)
    j["outputs"].push_back({{"name", o.name}, {"demand", o.demand}, {"min", o.spec_min}, {"max", o.spec_max}});
  return j;
}

enum class RowKind {
  flow_bound,       // y_il <= b_i, y_lo <= d_o
  conservation,     // pool inflow = pool outflow
  recipe_flow,      // group inflow = sigma * pool outflow
  proportion_sum,   // sum q = 1 per pool
  link,             // y_il = sum_o v_ilo
  spec_min,
  spec_max,
  recipe_q,         // group sum of q = sigma
  recipe_v,         // group sum of v_ilo = sigma * y_lo
  pool_rlt_z,       // v >= 0
  pool_rlt_xz,      // d_o q - v >= 0
  pool_rlt_y,       // sigma y_lo - group sum v >= 0
  pool_rlt_mc,      // sigma y_lo + d_o group sum q - group sum v <= sigma d_o
};

inline const char* kind_name(RowKind k) {
  switch (k) {
    case RowKind::flow_bound: return "flow_bound";
    case RowKind::conservation: return "conservation";
    case RowKind::recipe_flow: return "recipe_flow";
    case RowKind::proportion_sum: return "proportion_sum";
    case RowKind::link: return "link";
    case RowKind::spec_min: return "spec_min";
    case RowKind::spec_max: return "spec_max";
    case RowKind::recipe_q: return "recipe_q";
    case RowKind::recipe_v: return "recipe_v";
    case RowKind::pool_rlt_z: return "pool_rlt_z";
    case RowKind::pool_rlt_xz: return "pool_rlt_xz";
    case RowKind::pool_rlt_y: return "pool_rlt_y";
    case RowKind::pool_rlt_mc: return "pool_rlt_mc";
  }
  return "?";
}

struct Row {
  std::string name;
  RowKind kind;
  LinearConstraint c;
};

// v = q * y
struct BilinearRow {
  std::string name;
  int v, q, y;
};

struct PoolingModel {
  std::string formulation;
  std::vector<std::string> var_names;
  std::vector<double> upper;  // all variables are nonnegative
  std::vector<double> objective;
  std::vector<Row> rows;
  std::vector<BilinearRow> bilinear;

  int num_vars() const { return static_cast<int>(var_names.size()); }
  std::size_t count(RowKind k) const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.kind == k;
    return n;
  }
  int find(const std::string& name) const {
    for (int k = 0; k < num_vars(); ++k)
      if (var_names[k] == name) return k;
    return -1;
  }
};

namespace detail {

struct Vars {
  std::map<std::pair<int, int>, int> y_in, q;  // (input, pool)
  std::map<std::pair<int, int>, int> y_out;     // (pool, output)
  std::map<std::tuple<int, int, int>, int> v;   // (input, pool, output)
};

inline int add_var(PoolingModel& m, std::string name, double upper) {
  m.var_names.push_back(std::move(name));
  m.upper.push_back(upper);
  m.objective.push_back(0.0);
  return m.num_vars() - 1;
}

inline LinearConstraint row(std::vector<std::pair<int, double>> terms, Sense s, double rhs) {
  std::vector<Term> t;
  for (auto [k, a] : terms) t.push_back({VarId{k}, a});
  return LinearConstraint(std::move(t), s, rhs);
}

}  // namespace detail

inline PoolingModel build_q(const PoolingInstance& pi, detail::Vars* vars_out = nullptr) {
  pi.validate();
  PoolingModel m;
  m.formulation = "q";
  detail::Vars vs;
  const int nl = static_cast<int>(pi.pools.size()), no = static_cast<int>(pi.outputs.size());
  auto in = [&](int i) { return pi.inputs[i].name; };
  auto pl = [&](int l) { return pi.pools[l].name; };
  auto out = [&](int o) { return pi.outputs[o].name; };

  double vmax = 0;
  for (const auto& x : pi.inputs) vmax = std::max(vmax, x.availability);
  for (int l = 0; l < nl; ++l)
    for (int i : pi.pool_inputs(l)) vs.y_in[{i, l}] = detail::add_var(m, "y_" + in(i) + "_" + pl(l), pi.inputs[i].availability);
  for (int l = 0; l < nl; ++l)
    for (int o = 0; o < no; ++o) {
      int k = detail::add_var(m, "y_" + pl(l) + "_" + out(o), pi.outputs[o].demand);
      vs.y_out[{l, o}] = k;
      m.objective[k] = 1.0;
    }
  for (int l = 0; l < nl; ++l)
    for (int i : pi.pool_inputs(l)) vs.q[{i, l}] = detail::add_var(m, "q_" + in(i) + "_" + pl(l), 1.0);
  for (int l = 0; l < nl; ++l)
    for (int i : pi.pool_inputs(l))
      for (int o = 0; o < no; ++o)
        vs.v[{i, l, o}] = detail::add_var(m, "v_" + in(i) + "_" + pl(l) + "_" + out(o), pi.inputs[i].availability);

  auto push = [&](std::string name, RowKind k, LinearConstraint c) { m.rows.push_back({std::move(name), k, std::move(c)}); };
  for (int l = 0; l < nl; ++l)
    for (int i : pi.pool_inputs(l))
      push("bound_" + in(i) + "_" + pl(l), RowKind::flow_bound,
           detail::row({{vs.y_in[{i, l}], 1.0}}, Sense::LE, pi.inputs[i].availability));
  for (int l = 0; l < nl; ++l)
    for (int o = 0; o < no; ++o)
      push("bound_" + pl(l) + "_" + out(o), RowKind::flow_bound,
           detail::row({{vs.y_out[{l, o}], 1.0}}, Sense::LE, pi.outputs[o].demand));
  for (int l = 0; l < nl; ++l) {
    std::vector<std::pair<int, double>> t;
    for (int i : pi.pool_inputs(l)) t.emplace_back(vs.y_in[{i, l}], 1.0);
    for (int o = 0; o < no; ++o) t.emplace_back(vs.y_out[{l, o}], -1.0);
    push("conserve_" + pl(l), RowKind::conservation, detail::row(t, Sense::EQ, 0.0));
  }
  for (int l = 0; l < nl; ++l)
    for (std::size_t h = 0; h < pi.pools[l].groups.size(); ++h) {
      const auto& g = pi.pools[l].groups[h];
      std::vector<std::pair<int, double>> t;
      for (int i : g.inputs) t.emplace_back(vs.y_in[{i, l}], 1.0);
      for (int o = 0; o < no; ++o) t.emplace_back(vs.y_out[{l, o}], -g.sigma);
      push("recipe_" + pl(l) + "_g" + std::to_string(h + 1), RowKind::recipe_flow, detail::row(t, Sense::EQ, 0.0));
    }
  for (int l = 0; l < nl; ++l) {
    std::vector<std::pair<int, double>> t;
    for (int i : pi.pool_inputs(l)) t.emplace_back(vs.q[{i, l}], 1.0);
    push("propsum_" + pl(l), RowKind::proportion_sum, detail::row(t, Sense::EQ, 1.0));
  }
  for (int l = 0; l < nl; ++l)
    for (int i : pi.pool_inputs(l))
      for (int o = 0; o < no; ++o)
        m.bilinear.push_back({"bil_" + in(i) + "_" + pl(l) + "_" + out(o), vs.v[{i, l, o}], vs.q[{i, l}], vs.y_out[{l, o}]});
  for (int l = 0; l < nl; ++l)
    for (int i : pi.pool_inputs(l)) {
      std::vector<std::pair<int, double>> t{{vs.y_in[{i, l}], 1.0}};
      for (int o = 0; o < no; ++o) t.emplace_back(vs.v[{i, l, o}], -1.0);
      push("link_" + in(i) + "_" + pl(l), RowKind::link, detail::row(t, Sense::EQ, 0.0));
    }
  for (int o = 0; o < no; ++o)
    for (std::size_t s = 0; s < pi.specs.size(); ++s) {
      // quality sum_l sum_i lambda_is v_ilo against mu * sum_l y_lo
      auto spec_row = [&](double mu, Sense sense) {
        std::vector<std::pair<int, double>> t;
        for (int l = 0; l < nl; ++l) {
          for (int i : pi.pool_inputs(l)) t.emplace_back(vs.v[{i, l, o}], pi.inputs[i].spec[s]);
          t.emplace_back(vs.y_out[{l, o}], -mu);
        }
        return detail::row(t, sense, 0.0);
      };
      const std::string tail = out(o) + "_" + pi.specs[s];
      push("specmin_" + tail, RowKind::spec_min, spec_row(pi.outputs[o].spec_min[s], Sense::GE));
      push("specmax_" + tail, RowKind::spec_max, spec_row(pi.outputs[o].spec_max[s], Sense::LE));
    }
  if (vars_out) *vars_out = vs;
  return m;
}

// q plus the recipe equations on q and v, and per pool the RLT rows of the rescaled
// multiple-choice polytope (x = q / sigma, y = y_lo / d_o, z = v / (sigma d_o)), multiplied back
// through so zero sigma or demand stays well defined.
inline PoolingModel build_qcuts(const PoolingInstance& pi) {
  detail::Vars vs;
  PoolingModel m = build_q(pi, &vs);
  m.formulation = "qcuts";
  const int nl = static_cast<int>(pi.pools.size()), no = static_cast<int>(pi.outputs.size());
  auto push = [&](std::string name, RowKind k, LinearConstraint c) { m.rows.push_back({std::move(name), k, std::move(c)}); };
  for (int l = 0; l < nl; ++l) {
    const auto& pool = pi.pools[l];
    for (std::size_t h = 0; h < pool.groups.size(); ++h) {
      std::vector<std::pair<int, double>> t;
      for (int i : pool.groups[h].inputs) t.emplace_back(vs.q[{i, l}], 1.0);
      push("qrecipe_" + pool.name + "_g" + std::to_string(h + 1), RowKind::recipe_q,
           detail::row(t, Sense::EQ, pool.groups[h].sigma));
    }
    for (int o = 0; o < no; ++o)
      for (std::size_t h = 0; h < pool.groups.size(); ++h) {
        std::vector<std::pair<int, double>> t;
        for (int i : pool.groups[h].inputs) t.emplace_back(vs.v[{i, l, o}], 1.0);
        t.emplace_back(vs.y_out[{l, o}], -pool.groups[h].sigma);
        push("vrecipe_" + pool.name + "_g" + std::to_string(h + 1) + "_" + pi.outputs[o].name, RowKind::recipe_v,
             detail::row(t, Sense::EQ, 0.0));
      }
    for (int o = 0; o < no; ++o) {
      const double d = pi.outputs[o].demand;
      const std::string on = pi.outputs[o].name;
      for (int i : pi.pool_inputs(l)) {
        const std::string tag = pi.inputs[i].name + "_" + pool.name + "_" + on;
        int v = vs.v[{i, l, o}];
        push("rltz_" + tag, RowKind::pool_rlt_z, detail::row({{v, 1.0}}, Sense::GE, 0.0));
        push("rltxz_" + tag, RowKind::pool_rlt_xz, detail::row({{vs.q[{i, l}], d}, {v, -1.0}}, Sense::GE, 0.0));
      }
      for (std::size_t h = 0; h < pool.groups.size(); ++h) {
        const auto& g = pool.groups[h];
        const std::string tag = pool.name + "_g" + std::to_string(h + 1) + "_" + on;
        std::vector<std::pair<int, double>> ty{{vs.y_out[{l, o}], g.sigma}}, tm{{vs.y_out[{l, o}], g.sigma}};
        for (int i : g.inputs) {
          ty.emplace_back(vs.v[{i, l, o}], -1.0);
          tm.emplace_back(vs.q[{i, l}], d);
          tm.emplace_back(vs.v[{i, l, o}], -1.0);
        }
        push("rlty_" + tag, RowKind::pool_rlt_y, detail::row(ty, Sense::GE, 0.0));
        push("rltmc_" + tag, RowKind::pool_rlt_mc, detail::row(tm, Sense::LE, g.sigma * d));
      }
    }
  }
  return m;
}

// LP relaxation with the bilinear rows dropped.
inline LpProblem relaxation(const PoolingModel& m) {
  LpProblem lp(m.num_vars(), true);
  lp.objective = m.objective;
  lp.upper = m.upper;
  for (const auto& r : m.rows) lp.constraints.push_back(r.c);
  return lp;
}

// Shortest text that reads back to the same double.
inline std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v + 0.0);
  return std::string(buf, res.ptr);
}

inline std::string linear_text(const PoolingModel& m, const LinearConstraint& c) {
  std::string s;
  for (const Term& t : c.terms()) {
    double a = t.coef;
    s += (s.empty() ? (a < 0 ? "- " : "") : (a < 0 ? " - " : " + "));
    if (std::abs(a) != 1.0) s += format_number(std::abs(a)) + " ";
    s += m.var_names[t.var.index];
  }
  return s.empty() ? "0 " + m.var_names.front() : s;
}

// CPLEX-style LP text; bilinear rows as "[ q * y ] - v = 0".
inline std::string to_lp_text(const PoolingModel& m) {
  std::ostringstream os;
  os << "\\ pooling " << m.formulation << " formulation\n";
  os << "Maximize\n obj:";
  bool first = true;
  for (int k = 0; k < m.num_vars(); ++k)
    if (m.objective[k] != 0) {
      os << (first ? " " : " + ") << (m.objective[k] == 1.0 ? "" : format_number(m.objective[k]) + " ") << m.var_names[k];
      first = false;
    }
  os << "\nSubject To\n";
  for (const auto& r : m.rows)
    os << ' ' << r.name << ": " << linear_text(m, r.c) << ' ' << sense_symbol(r.c.sense()) << ' '
       << format_number(r.c.rhs()) << '\n';
  for (const auto& b : m.bilinear)
    os << ' ' << b.name << ": [ " << m.var_names[b.q] << " * " << m.var_names[b.y] << " ] - " << m.var_names[b.v]
       << " = 0\n";
  os << "Bounds\n";
  for (int k = 0; k < m.num_vars(); ++k) os << " 0 <= " << m.var_names[k] << " <= " << format_number(m.upper[k]) << '\n';
  os << "End\n";
  return os.str();
}

inline void export_lp(const PoolingModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << to_lp_text(m);
  if (!out) throw std::runtime_error("write failed: " + path);
}

// Reader for the files written above (not a general LP parser).
struct LpFile {
  std::vector<std::string> objective;
  struct LinearRow {
    std::string name;
    std::vector<std::pair<std::string, double>> terms;
    std::string sense;
    double rhs = 0;
    bool operator==(const LinearRow&) const = default;
  };
  struct QuadRow {
    std::string name, q, y, v;
    bool operator==(const QuadRow&) const = default;
  };
  std::vector<LinearRow> rows;
  std::vector<QuadRow> bilinear;
  std::map<std::string, double> upper;
};

inline LpFile parse_lp_text(const std::string& text) {
  LpFile f;
  std::istringstream in(text);
  std::string line, section;
  auto fail = [&](const std::string& why) { throw std::runtime_error("lp parse: " + why + " in '" + line + "'"); };
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '\\') continue;
    if (line[0] != ' ') {
      section = line;
      continue;
    }
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (section == "Maximize") {
      for (std::size_t k = 1; k < tok.size(); ++k)
        if (tok[k] != "+") f.objective.push_back(tok[k]);
    } else if (section == "Subject To") {
      if (tok.size() < 4 || tok[0].back() != ':') fail("row");
      std::string name = tok[0].substr(0, tok[0].size() - 1);
      if (tok[1] == "[") {
        if (tok.size() != 10 || tok[3] != "*" || tok[5] != "]" || tok[6] != "-" || tok[8] != "=" || tok[9] != "0")
          fail("bilinear row");
        f.bilinear.push_back({name, tok[2], tok[4], tok[7]});
        continue;
      }
      LpFile::LinearRow r;
      r.name = name;
      r.sense = tok[tok.size() - 2];
      r.rhs = std::stod(tok.back());
      double sign = 1, coef = 1;
      bool have_coef = false;
      for (std::size_t k = 1; k + 2 < tok.size(); ++k) {
        const std::string& t = tok[k];
        if (t == "+" || t == "-") {
          sign = t == "-" ? -1 : 1;
        } else if (std::isdigit(static_cast<unsigned char>(t[0])) || t[0] == '.') {
          coef = std::stod(t);
          have_coef = true;
        } else {
          r.terms.emplace_back(t, sign * (have_coef ? coef : 1.0));
          sign = 1;
          coef = 1;
          have_coef = false;
        }
      }
      f.rows.push_back(std::move(r));
    } else if (section == "Bounds") {
      if (tok.size() != 5 || tok[1] != "<=" || tok[3] != "<=") fail("bound");
      f.upper[tok[2]] = std::stod(tok[4]);
    } else {
      fail("unknown section " + section);
    }
  }
  return f;
}

inline LpFile lp_file_of(const PoolingModel& m) { return parse_lp_text(to_lp_text(m)); }

// Random instance: every input feeds one or two pools; per pool the inputs are grouped
// into 1..3 materials with random recipe shares.
inline PoolingInstance random_instance(SplitMix64& rng) {
  PoolingInstance pi;
  int ni = 2 + static_cast<int>(rng.below(4)), nl = 1 + static_cast<int>(rng.below(3)),
      no = 1 + static_cast<int>(rng.below(3)), ns = 1 + static_cast<int>(rng.below(2));
  for (int s = 0; s < ns; ++s) pi.specs.push_back("s" + std::to_string(s + 1));
  for (int i = 0; i < ni; ++i) {
    Input x{"in" + std::to_string(i + 1), std::round(rng.uniform(5, 50)), {}};
    for (int s = 0; s < ns; ++s) x.spec.push_back(std::round(rng.uniform(0, 10) * 4) / 4);
    pi.inputs.push_back(std::move(x));
  }
  for (int l = 0; l < nl; ++l) {
    std::vector<int> feed;
    for (int i = 0; i < ni; ++i)
      if (rng.coin(0.7)) feed.push_back(i);
    if (feed.empty()) feed.push_back(static_cast<int>(rng.below(ni)));
    int r = 1 + static_cast<int>(rng.below(std::min<std::uint64_t>(3, feed.size())));
    Pool p{"pl" + std::to_string(l + 1), std::vector<Group>(r)};
    for (std::size_t k = 0; k < feed.size(); ++k)
      p.groups[k < static_cast<std::size_t>(r) ? k : rng.below(r)].inputs.push_back(feed[k]);
    std::vector<double> w(r);
    double total = 0;
    for (auto& x : w) total += x = 1 + static_cast<double>(rng.below(4));
    for (int h = 0; h < r; ++h) p.groups[h].sigma = w[h] / total;
    double rest = 1.0;
    for (int h = 0; h + 1 < r; ++h) rest -= p.groups[h].sigma;
    p.groups[r - 1].sigma = rest;
    pi.pools.push_back(std::move(p));
  }
  for (int o = 0; o < no; ++o) {
    Output out{"o" + std::to_string(o + 1), std::round(rng.uniform(10, 60)), {}, {}};
    for (int s = 0; s < ns; ++s) {
      double a = std::round(rng.uniform(0, 5) * 4) / 4;
      out.spec_min.push_back(a);
      out.spec_max.push_back(a + std::round(rng.uniform(1, 6) * 4) / 4);
    }
    pi.outputs.push_back(std::move(out));
  }
  pi.validate();
  return pi;
}

}  // namespace bqpmc::pooling
