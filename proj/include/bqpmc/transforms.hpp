#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqpmc/core.hpp"
#include "bqpmc/netflow.hpp"

namespace bqpmc {

// y_j -> 1 - y_j and z_ij -> x_i - z_ij for j in hat_y. GE input is normalized to LE first.
inline LinearConstraint switch_y(const LinearConstraint& c_in, const std::set<int>& hat_y, const Instance& inst) {
  for (int j : hat_y)
    if (j < 0 || j >= inst.num_y()) throw std::invalid_argument("switch: hat_y contains a non-Y node");
  LinearConstraint c = c_in.normalized();
  if (hat_y.empty()) return c;
  std::vector<Term> out;
  double rhs = c.rhs();
  for (const Term& t : c.terms()) {
    VarInfo in = inst.info(t.var);
    if (in.kind == VarKind::Y && hat_y.count(in.j)) {
      out.push_back({t.var, -t.coef});
      rhs -= t.coef;
    } else if (in.kind == VarKind::Z && hat_y.count(in.j)) {
      out.push_back({t.var, -t.coef});
      out.push_back({inst.x(in.i), t.coef});
    } else {
      out.push_back(t);
    }
  }
  return LinearConstraint(std::move(out), c.sense(), rhs, c.tag());
}

// Each j's effect on lhs - rhs is separable, so decide per node. Ties keep j unswitched.
inline LinearConstraint best_switching(const LinearConstraint& c_in, const Point& p, const Instance& inst,
                                       std::set<int>* chosen = nullptr) {
  LinearConstraint c = c_in.normalized();
  std::vector<double> gain(inst.num_y(), 0.0);
  for (const Term& t : c.terms()) {
    VarInfo in = inst.info(t.var);
    if (in.kind == VarKind::Y) gain[in.j] += t.coef * (1.0 - 2.0 * p[t.var]);
    if (in.kind == VarKind::Z) gain[in.j] += t.coef * (p[inst.x(in.i)] - 2.0 * p[t.var]);
  }
  std::set<int> hat;
  for (int j : y_support(c, inst))
    if (gain[j] > 0.0) hat.insert(j);
  if (chosen) *chosen = hat;
  return switch_y(c, hat, inst);
}

// Coefficient tuple of node i: (a_i, a_ij for j in Y), with zeros off N(i).
using CoefTuple = std::vector<double>;

struct TupleTable {
  // per subset: tuples[0] is the zero tuple, then distinct tuples in order of first appearance
  std::vector<std::vector<CoefTuple>> tuples;
  // per subset, per member position: index of the node's own tuple
  std::vector<std::vector<int>> original;
};

inline CoefTuple node_tuple(const LinearConstraint& c, const Instance& inst, int i) {
  CoefTuple t(1 + inst.num_y(), 0.0);
  t[0] = c.coef(inst.x(i));
  for (int j : inst.x_neighbours(i)) t[1 + j] = c.coef(inst.z(i, j));
  return t;
}

inline TupleTable tuple_table(const LinearConstraint& c, const Instance& inst) {
  TupleTable tab;
  for (const auto& s : inst.subsets()) {
    std::vector<CoefTuple> h{CoefTuple(1 + inst.num_y(), 0.0)};
    std::vector<int> orig;
    for (int i : s) {
      CoefTuple t = node_tuple(c, inst, i);
      auto it = std::find(h.begin(), h.end(), t);
      if (it == h.end()) {
        h.push_back(t);
        orig.push_back(static_cast<int>(h.size()) - 1);
      } else {
        orig.push_back(static_cast<int>(it - h.begin()));
      }
    }
    tab.tuples.push_back(std::move(h));
    tab.original.push_back(std::move(orig));
  }
  return tab;
}

// Per subset, per member position: chosen tuple index into the subset's H^I.
struct CopyAssignment {
  std::vector<std::vector<int>> choice;

  static CopyAssignment identity(const TupleTable& tab) { return CopyAssignment{tab.original}; }
};

// A tuple may go to node i when some original holder shares N(i) (always, on subset-uniform graphs).
inline bool tuple_allowed(const Instance& inst, const TupleTable& tab, int subset, int tuple, int pos) {
  if (tuple == 0) return true;
  const auto& members = inst.subset(subset);
  for (std::size_t q = 0; q < members.size(); ++q)
    if (tab.original[subset][q] == tuple && inst.x_neighbours(members[q]) == inst.x_neighbours(members[pos]))
      return true;
  return false;
}

inline LinearConstraint copy_constraint(const LinearConstraint& c, const CopyAssignment& asg, const Instance& inst,
                                        bool require_structure_preserving = true) {
  TupleTable tab = tuple_table(c, inst);
  if (asg.choice.size() != tab.tuples.size()) throw std::invalid_argument("copy: assignment does not match partition");
  std::vector<Term> out;
  for (const Term& t : c.terms())
    if (inst.info(t.var).kind == VarKind::Y) out.push_back(t);
  for (int k = 0; k < inst.num_subsets(); ++k) {
    const auto& members = inst.subset(k);
    if (asg.choice[k].size() != members.size()) throw std::invalid_argument("copy: assignment does not match subset");
    std::vector<char> used(tab.tuples[k].size(), 0);
    for (std::size_t q = 0; q < members.size(); ++q) {
      int h = asg.choice[k][q];
      if (h < 0 || h >= static_cast<int>(tab.tuples[k].size())) throw std::invalid_argument("copy: tuple not in H^I");
      if (!tuple_allowed(inst, tab, k, h, static_cast<int>(q)))
        throw std::invalid_argument("copy: tuple moved between nodes with different neighbourhoods");
      used[h] = 1;
      const CoefTuple& tup = tab.tuples[k][h];
      int i = members[q];
      if (tup[0] != 0.0) out.push_back({inst.x(i), tup[0]});
      for (int j = 0; j < inst.num_y(); ++j)
        if (tup[1 + j] != 0.0) out.push_back({inst.z(i, j), tup[1 + j]});
    }
    if (require_structure_preserving)
      for (std::size_t h = 1; h < used.size(); ++h)
        if (!used[h]) throw std::invalid_argument("copy: copying is not structure-preserving");
  }
  return LinearConstraint(std::move(out), c.sense(), c.rhs(), c.tag());
}

namespace detail {

inline double tuple_value(const CoefTuple& t, const Point& p, const Instance& inst, int i) {
  double v = t[0] * p[inst.x(i)];
  for (int j : inst.x_neighbours(i))
    if (t[1 + j] != 0.0) v += t[1 + j] * p[inst.z(i, j)];
  return v;
}

}  // namespace detail

// Structure-preserving copying maximizing lhs - rhs at p (LE orientation).
inline LinearConstraint best_copying(const LinearConstraint& c_in, const Point& p, const Instance& inst,
                                     CopyAssignment* chosen = nullptr) {
  LinearConstraint c = c_in.normalized();
  TupleTable tab = tuple_table(c, inst);
  CopyAssignment asg;
  for (int k = 0; k < inst.num_subsets(); ++k) {
    const auto& members = inst.subset(k);
    const auto& H = tab.tuples[k];
    const int nm = static_cast<int>(members.size());
    const int nh = static_cast<int>(H.size());
    std::vector<std::vector<double>> val(nm, std::vector<double>(nh, 0.0));
    std::vector<std::vector<char>> ok(nm, std::vector<char>(nh, 0));
    std::vector<int> greedy(nm);
    std::vector<double> best(nm);
    for (int q = 0; q < nm; ++q) {
      int orig = tab.original[k][q];
      for (int h = 0; h < nh; ++h) {
        ok[q][h] = tuple_allowed(inst, tab, k, h, q);
        if (ok[q][h]) val[q][h] = detail::tuple_value(H[h], p, inst, members[q]);
      }
      int g = orig;
      for (int h = 0; h < nh; ++h)
        if (ok[q][h] && val[q][h] > val[q][g]) g = h;
      greedy[q] = g;
      best[q] = val[q][g];
    }
    // Design rule: greedy, then hand each orphaned tuple back to its original holder.
    std::vector<int> pick = greedy;
    for (;;) {
      std::vector<char> used(nh, 0);
      for (int q = 0; q < nm; ++q) used[pick[q]] = 1;
      int orphan = -1;
      for (int h = 1; h < nh && orphan < 0; ++h)
        if (!used[h]) orphan = h;
      if (orphan < 0) break;
      for (int q = 0; q < nm; ++q)
        if (tab.original[k][q] == orphan) {
          pick[q] = orphan;
          break;
        }
    }
    double repair_loss = 0.0;
    for (int q = 0; q < nm; ++q) repair_loss += val[q][pick[q]] - best[q];
    // Exact optimum: one representative per non-zero tuple, chosen by max-weight assignment.
    if (nh > 1 && repair_loss < -1e-12) {
      std::vector<std::vector<double>> w(nm, std::vector<double>(nh - 1, -1e12));
      for (int q = 0; q < nm; ++q)
        for (int h = 1; h < nh; ++h)
          if (ok[q][h]) w[q][h - 1] = val[q][h] - best[q];
      Assignment a = h_cardinality_assignment(w, nh - 1);
      if (a.value > repair_loss + 1e-12) {
        pick = greedy;
        for (auto [q, col] : a.pairs) pick[q] = col + 1;
      }
    }
    asg.choice.push_back(std::move(pick));
  }
  if (chosen) *chosen = asg;
  return copy_constraint(c, asg, inst);
}

namespace detail {

// Partition of `sub` must be the trace of `full`'s partition on sub's X nodes.
inline void check_nested(const Instance& sub, const Instance& full) {
  std::map<int, int> full_to_sub_subset;
  for (int k = 0; k < sub.num_subsets(); ++k)
    for (int i : sub.subset(k)) {
      int fi = full.find_x(sub.x_name(i));
      int fk = full.subset_of(fi);
      auto [it, fresh] = full_to_sub_subset.emplace(fk, k);
      if (!fresh && it->second != k) throw std::invalid_argument("incompatible partition nesting");
    }
  for (int k = 0; k < sub.num_subsets(); ++k) {
    int fk = full.subset_of(full.find_x(sub.x_name(sub.subset(k).front())));
    if (full_to_sub_subset.at(fk) != k) throw std::invalid_argument("incompatible partition nesting");
  }
  for (int j = 0; j < sub.num_y(); ++j) full.find_y(sub.y_name(j));
  for (auto [i, j] : sub.edges())
    if (!full.has_edge(full.find_x(sub.x_name(i)), full.find_y(sub.y_name(j))))
      throw std::invalid_argument("sub instance is not a subgraph");
}

}  // namespace detail

// 0-lifting from an induced subgraph.
inline LinearConstraint extend(const LinearConstraint& c, const Instance& sub, const Instance& full) {
  detail::check_nested(sub, full);
  std::vector<Term> out;
  for (const Term& t : c.terms()) out.push_back({full.parse_var(sub.var_name(t.var)), t.coef});
  return LinearConstraint(std::move(out), c.sense(), c.rhs(), c.tag());
}

inline LinearConstraint restrict_to(const LinearConstraint& c, const Instance& full, const Instance& sub) {
  detail::check_nested(sub, full);
  for (auto [i, j] : full.edges()) {
    // induced: every full edge between kept nodes must be kept
    const auto& xn = sub.x_names();
    const auto& yn = sub.y_names();
    bool xi = std::find(xn.begin(), xn.end(), full.x_name(i)) != xn.end();
    bool yj = std::find(yn.begin(), yn.end(), full.y_name(j)) != yn.end();
    if (xi && yj && !sub.has_edge(sub.find_x(full.x_name(i)), sub.find_y(full.y_name(j))))
      throw std::invalid_argument("restrict: sub instance is not an induced subgraph");
  }
  std::vector<Term> out;
  for (const Term& t : c.terms()) {
    try {
      out.push_back({sub.parse_var(full.var_name(t.var)), t.coef});
    } catch (const std::exception&) {
      // variable outside the sub instance: dropped
    }
  }
  return LinearConstraint(std::move(out), c.sense(), c.rhs(), c.tag());
}

struct NodePermutation {
  std::vector<int> x;  // x[i] = image of X node i
  std::vector<int> y;  // y[j] = image of Y node j

  static NodePermutation identity(const Instance& inst) {
    NodePermutation s;
    for (int i = 0; i < inst.num_x(); ++i) s.x.push_back(i);
    for (int j = 0; j < inst.num_y(); ++j) s.y.push_back(j);
    return s;
  }
};

// Requires sigma to map subsets onto subsets and edges onto edges.
inline LinearConstraint permute(const LinearConstraint& c, const NodePermutation& s, const Instance& inst) {
  auto is_perm = [](std::vector<int> v, int n) {
    if (static_cast<int>(v.size()) != n) return false;
    std::sort(v.begin(), v.end());
    for (int k = 0; k < n; ++k)
      if (v[k] != k) return false;
    return true;
  };
  if (!is_perm(s.x, inst.num_x()) || !is_perm(s.y, inst.num_y())) throw std::invalid_argument("permute: not a permutation");
  for (const auto& sub : inst.subsets()) {
    int target = inst.subset_of(s.x[sub.front()]);
    if (static_cast<int>(inst.subset(target).size()) != static_cast<int>(sub.size()))
      throw std::invalid_argument("permute: sigma moves a node across subsets");
    for (int i : sub)
      if (inst.subset_of(s.x[i]) != target) throw std::invalid_argument("permute: sigma moves a node across subsets");
  }
  for (int i = 0; i < inst.num_x(); ++i)
    for (int j = 0; j < inst.num_y(); ++j)
      if (inst.has_edge(i, j) != inst.has_edge(s.x[i], s.y[j]))
        throw std::invalid_argument("permute: sigma does not preserve the edge set");
  std::vector<Term> out;
  for (const Term& t : c.terms()) {
    VarInfo in = inst.info(t.var);
    VarId v = in.kind == VarKind::X ? inst.x(s.x[in.i]) : in.kind == VarKind::Y ? inst.y(s.y[in.j]) : inst.z(s.x[in.i], s.y[in.j]);
    out.push_back({v, t.coef});
  }
  return LinearConstraint(std::move(out), c.sense(), c.rhs(), c.tag());
}

// Designated slack node i0 per subset.
struct LowDimMap {
  std::vector<int> slack;  // X ordinal per subset
};

// Adds one slack node per subset, adjacent to the subset's joint neighbourhood.
inline std::pair<Instance, LowDimMap> with_slack_nodes(const Instance& inst) {
  std::vector<std::vector<std::string>> subsets;
  std::set<std::string> names(inst.x_names().begin(), inst.x_names().end());
  names.insert(inst.y_names().begin(), inst.y_names().end());
  std::vector<std::string> slack_names;
  for (int k = 0; k < inst.num_subsets(); ++k) {
    std::vector<std::string> s;
    for (int i : inst.subset(k)) s.push_back(inst.x_name(i));
    std::string nm = "i0_" + std::to_string(k + 1);
    while (names.count(nm)) nm += "_";
    names.insert(nm);
    s.push_back(nm);
    slack_names.push_back(nm);
    subsets.push_back(std::move(s));
  }
  std::vector<std::pair<std::string, std::string>> edges;
  for (auto [i, j] : inst.edges()) edges.emplace_back(inst.x_name(i), inst.y_name(j));
  for (int k = 0; k < inst.num_subsets(); ++k) {
    std::set<int> nb;
    for (int i : inst.subset(k)) nb.insert(inst.x_neighbours(i).begin(), inst.x_neighbours(i).end());
    for (int j : nb) edges.emplace_back(slack_names[k], inst.y_name(j));
  }
  Instance ext = Instance::build(subsets, inst.y_names(), EdgeSpec::list(edges));
  LowDimMap map;
  for (const auto& nm : slack_names) map.slack.push_back(ext.find_x(nm));
  return {ext, map};
}

namespace detail {

inline void check_map(const LowDimMap& map, const Instance& inst) {
  if (static_cast<int>(map.slack.size()) != inst.num_subsets()) throw std::invalid_argument("low-dim map: wrong subset count");
  for (int k = 0; k < inst.num_subsets(); ++k) {
    int i0 = map.slack[k];
    if (i0 < 0 || i0 >= inst.num_x() || inst.subset_of(i0) != k) throw std::invalid_argument("low-dim map: i0 not in subset");
  }
}

}  // namespace detail

// From the x_{i0} = 0 embedding to the equality-constrained space:
// x_{i0} -> sum_I x_i - 1, z_{i0 j} -> sum_I z_ij - y_j.
inline LinearConstraint to_low_dim(const LinearConstraint& c, const LowDimMap& map, const Instance& inst) {
  detail::check_map(map, inst);
  std::vector<Term> out;
  double rhs = c.rhs();
  for (const Term& t : c.terms()) {
    VarInfo in = inst.info(t.var);
    if (in.kind == VarKind::Y || map.slack[inst.subset_of(in.i)] != in.i) {
      out.push_back(t);
      continue;
    }
    const auto& members = inst.subset(inst.subset_of(in.i));
    if (in.kind == VarKind::X) {
      for (int i : members) out.push_back({inst.x(i), t.coef});
      rhs += t.coef;
    } else {
      for (int i : members) out.push_back({inst.z(i, in.j), t.coef});
      out.push_back({inst.y(in.j), -t.coef});
    }
  }
  return LinearConstraint(std::move(out), c.sense(), rhs, c.tag());
}

// Inverse: x_{i0} -> x_{i0} + 1 - sum_{i != i0} x_i, z_{i0 j} -> z_{i0 j} + y_j - sum_{i != i0} z_ij.
inline LinearConstraint to_full_dim(const LinearConstraint& c, const LowDimMap& map, const Instance& inst) {
  detail::check_map(map, inst);
  std::vector<Term> out;
  double rhs = c.rhs();
  for (const Term& t : c.terms()) {
    VarInfo in = inst.info(t.var);
    if (in.kind == VarKind::Y || map.slack[inst.subset_of(in.i)] != in.i) {
      out.push_back(t);
      continue;
    }
    const auto& members = inst.subset(inst.subset_of(in.i));
    out.push_back(t);
    if (in.kind == VarKind::X) {
      for (int i : members)
        if (i != in.i) out.push_back({inst.x(i), -t.coef});
      rhs -= t.coef;
    } else {
      for (int i : members)
        if (i != in.i) out.push_back({inst.z(i, in.j), -t.coef});
      out.push_back({inst.y(in.j), t.coef});
    }
  }
  return LinearConstraint(std::move(out), c.sense(), rhs, c.tag());
}

}  // namespace bqpmc
