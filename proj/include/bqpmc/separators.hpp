#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "bqpmc/core.hpp"
#include "bqpmc/families.hpp"
#include "bqpmc/netflow.hpp"
#include "bqpmc/simplex.hpp"
#include "bqpmc/transforms.hpp"

namespace bqpmc {

inline constexpr double kViolationTol = 1e-6;

struct CutBatch {
  std::string family;
  std::vector<LinearConstraint> cuts;
  std::vector<double> violations;
  std::vector<std::string> keys;  // which enumeration tuple produced each cut

  void add(LinearConstraint c, double v, std::string key) {
    cuts.push_back(std::move(c));
    violations.push_back(v);
    keys.push_back(std::move(key));
  }
  std::size_t size() const { return cuts.size(); }
  bool empty() const { return cuts.empty(); }
  double max_violation() const {
    double m = -std::numeric_limits<double>::infinity();
    for (double v : violations) m = std::max(m, v);
    return m;
  }
};

namespace detail {

inline void require_complete(const Instance& inst, const char* who) {
  if (!inst.is_complete()) throw std::invalid_argument(std::string(who) + ": needs a complete bipartite instance");
}

inline std::string key_of(std::initializer_list<int> parts) {
  std::ostringstream os;
  bool first = true;
  for (int v : parts) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  return os.str();
}

}  // namespace detail

// Violated RLT rows; static mode returns all of them.
inline CutBatch separate_rlt(const Instance& inst, const Point& p, bool static_mode = false, double tol = kViolationTol) {
  CutBatch out{"rlt", {}, {}, {}};
  int k = 0;
  for (auto& c : rlt_inequalities(inst)) {
    double v = c.violation(p);
    if (static_mode || v > tol) out.add(c, v, std::to_string(k));
    ++k;
  }
  return out;
}

// Shortest paths for every ordered pair (j_a, j_b). With copying the node sets are the positive
// parts (argmax when empty); without it the argmax singleton. The switched family is the
// lower bound L >= -1 on the same expression, found with all senses reversed.
inline CutBatch separate_cycle_copy(const Instance& inst, const Point& p, bool with_switchings, bool copying = true,
                                    double tol = kViolationTol) {
  detail::require_complete(inst, "separate_cycle_copy");
  if (inst.num_subsets() < 2 || inst.num_y() < 2) throw std::invalid_argument("separate_cycle_copy: need 2 subsets and 2 Y nodes");
  CutBatch out{copying ? "cc" : "c", {}, {}, {}};
  const int K = inst.num_subsets();
  struct Pick {
    double value;
    std::vector<int> nodes;
  };
  // dir = +1: maximize the sum of chosen v; dir = -1: minimize it.
  auto pick = [&](const std::vector<double>& v, const std::vector<int>& nodes, int dir) {
    Pick r{0.0, {}};
    if (copying) {
      for (std::size_t a = 0; a < v.size(); ++a)
        if (dir * v[a] > 0) {
          r.value += v[a];
          r.nodes.push_back(nodes[a]);
        }
      if (!r.nodes.empty()) return r;
    }
    std::size_t best = 0;
    for (std::size_t a = 1; a < v.size(); ++a)
      if (dir * v[a] > dir * v[best]) best = a;
    return Pick{v[best], {nodes[best]}};
  };
  for (int ja = 0; ja < inst.num_y(); ++ja)
    for (int jb = 0; jb < inst.num_y(); ++jb) {
      if (ja == jb) continue;
      std::optional<LinearConstraint> best_cut;
      double best_v = -std::numeric_limits<double>::infinity();
      std::string best_key;
      for (int dir : {1, -1}) {
        if (dir < 0 && !with_switchings) break;
        std::vector<Pick> phi1, phi2;
        for (int k = 0; k < K; ++k) {
          const auto& nodes = inst.subset(k);
          std::vector<double> v1, v2;
          for (int i : nodes) {
            double za = p[inst.z(i, ja)], zb = p[inst.z(i, jb)];
            v1.push_back(za - zb);
            v2.push_back(-p[inst.x(i)] + za + zb);
          }
          phi1.push_back(pick(v1, nodes, dir));
          phi2.push_back(pick(v2, nodes, dir));
        }
        int b1 = -1, b2 = -1;
        for (int k1 = 0; k1 < K; ++k1)
          for (int k2 = 0; k2 < K; ++k2) {
            if (k1 == k2) continue;
            if (b1 < 0 || dir * (phi1[k1].value + phi2[k2].value) > dir * (phi1[b1].value + phi2[b2].value)) {
              b1 = k1;
              b2 = k2;
            }
          }
        // The m = 2 cycle row with j_1 = j_b, j_2 = j_a reads sum_{S1} v1 + sum_{S2} v2 - y(j_a) <= 0.
        LinearConstraint c = cycle_copy_inequality(inst, CycleSpec{{jb, ja}, {phi1[b1].nodes, phi2[b2].nodes}});
        if (dir < 0) c = switch_y(c, {ja, jb}, inst);
        double v = c.violation(p);
        if (v > best_v) {
          best_v = v;
          best_cut = c;
          best_key = detail::key_of({ja, jb, b1, b2, dir});
        }
      }
      if (best_cut && best_v > tol) out.add(*best_cut, best_v, best_key);
    }
  return out;
}

namespace detail {

// Point view with the switch y -> 1 - y, z -> x - z applied on a set of Y nodes.
struct SwitchedView {
  const Instance& inst;
  const Point& p;
  double x(int i) const { return p[inst.x(i)]; }
  double y(int j, bool sw) const { return sw ? 1.0 - p[inst.y(j)] : p[inst.y(j)]; }
  double z(int i, int j, bool sw) const { return sw ? p[inst.x(i)] - p[inst.z(i, j)] : p[inst.z(i, j)]; }
};

// Per-path pieces of an arrow inequality (>= 0 form) for fixed i_1, j_1:
//   constant + sum over paths (sigma_i + gamma_ij + tau_j).
struct ArrowPieces {
  double constant = 0.0;
  std::vector<double> sigma;               // per i in I_2
  std::vector<std::vector<double>> gamma;  // [i in I_2][j in J]
  std::vector<double> tau;                 // per j in J
};

inline ArrowPieces arrow_pieces(const SwitchedView& v, ArrowVariant var, int i1, int j1, bool sw1,
                                const std::vector<int>& i2, const std::vector<int>& js, const std::vector<char>& sw) {
  ArrowPieces a;
  const bool one = var == ArrowVariant::arrow1;
  a.constant = one ? v.y(j1, sw1) - v.z(i1, j1, sw1) : v.x(i1) - v.z(i1, j1, sw1);
  for (int i : i2) a.sigma.push_back(one ? -v.z(i, j1, sw1) : v.z(i, j1, sw1));
  for (std::size_t b = 0; b < js.size(); ++b) {
    int j = js[b];
    a.tau.push_back(one ? -v.z(i1, j, sw[b]) : v.y(j, sw[b]) - v.z(i1, j, sw[b]));
  }
  for (int i : i2) {
    std::vector<double> row;
    for (std::size_t b = 0; b < js.size(); ++b) {
      int j = js[b];
      row.push_back(one ? v.z(i, j, sw[b]) + v.x(i1) : -v.z(i, j, sw[b]));
    }
    a.gamma.push_back(std::move(row));
  }
  return a;
}

struct ArrowPath {
  int i;       // position in I_2
  int j;       // position in J
  bool sw;     // path through the switched copy of j
};

// Min-cost routing of >= 2 unit paths s -> i -> j -> t; with two pieces per j (plain and switched)
// when `switched` is given. Returns the paths and the total cost.
inline std::optional<std::pair<std::vector<ArrowPath>, double>> route_arrow(const ArrowPieces& plain, const ArrowPieces* switched) {
  const int n2 = static_cast<int>(plain.sigma.size());
  const int nj = static_cast<int>(plain.tau.size());
  const int copies = switched ? 2 : 1;
  // nodes: I_2, then per j: copies split nodes and one merge node, then s, t
  Network net(n2 + nj * (copies + 1) + 2);
  const int s = n2 + nj * (copies + 1), t = s + 1;
  auto split = [&](int j, int c) { return n2 + j * (copies + 1) + c; };
  auto merge = [&](int j) { return n2 + j * (copies + 1) + copies; };
  for (int i = 0; i < n2; ++i) net.add_arc(s, i, 1, plain.sigma[i]);
  std::vector<ArrowPath> arc_path;
  std::vector<int> arc_ids;
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < nj; ++j)
      for (int c = 0; c < copies; ++c) {
        const ArrowPieces& a = c == 0 ? plain : *switched;
        arc_ids.push_back(net.add_arc(i, split(j, c), 1, a.gamma[i][j]));
        arc_path.push_back({i, j, c == 1});
      }
  for (int j = 0; j < nj; ++j) {
    for (int c = 0; c < copies; ++c) net.add_arc(split(j, c), merge(j), 1, (c == 0 ? plain : *switched).tau[j]);
    net.add_arc(merge(j), t, 1, 0.0);
  }
  auto res = min_cost_flow(net, FlowRequest{s, t, 2, INT_MAX, true});
  if (!res) return std::nullopt;
  std::vector<ArrowPath> paths;
  std::vector<char> j_used(nj, 0);
  for (std::size_t a = 0; a < arc_ids.size(); ++a)
    if (res->solution.flow[arc_ids[a]] > 0) {
      if (j_used[arc_path[a].j]) throw std::logic_error("route_arrow: two units routed into one Y node");
      j_used[arc_path[a].j] = 1;
      paths.push_back(arc_path[a]);
    }
  return std::make_pair(paths, res->solution.cost);
}

inline void arrow_core(const Instance& inst, const Point& p, ArrowVariant var, bool switching, double tol, CutBatch& out) {
  require_complete(inst, "separate_arrow");
  SwitchedView view{inst, p};
  for (int k1 = 0; k1 < inst.num_subsets(); ++k1)
    for (int k2 = 0; k2 < inst.num_subsets(); ++k2) {
      if (k1 == k2) continue;
      const auto& i2 = inst.subset(k2);
      if (i2.size() < 2) continue;
      for (int i1 : inst.subset(k1))
        for (int j1 = 0; j1 < inst.num_y(); ++j1) {
          std::vector<int> js;
          for (int j = 0; j < inst.num_y(); ++j)
            if (j != j1) js.push_back(j);
          if (js.size() < 2) continue;
          for (int sw1 : {0, 1}) {
            if (sw1 && !switching) break;
            ArrowPieces plain = arrow_pieces(view, var, i1, j1, sw1, i2, js, std::vector<char>(js.size(), 0));
            std::optional<ArrowPieces> swd;
            if (switching) swd = arrow_pieces(view, var, i1, j1, sw1, i2, js, std::vector<char>(js.size(), 1));
            auto routed = route_arrow(plain, swd ? &*swd : nullptr);
            if (!routed) continue;
            double viol = -(plain.constant + routed->second);
            if (!(viol > tol)) continue;
            ArrowSpec spec{i1, {}, {j1}};
            std::set<int> hat;
            if (sw1) hat.insert(j1);
            auto paths = routed->first;
            std::sort(paths.begin(), paths.end(), [](const ArrowPath& a, const ArrowPath& b) { return a.j < b.j; });
            for (const auto& ph : paths) {
              spec.rest.push_back(i2[ph.i]);
              spec.ys.push_back(js[ph.j]);
              if (ph.sw) hat.insert(js[ph.j]);
            }
            LinearConstraint c = arrow_inequality(inst, var, spec);
            if (switching) c = switch_y(c, hat, inst).with_tag(std::string(variant_name(var)) + "-switch");
            out.add(c, c.violation(p), key_of({k1, k2, i1, j1, sw1}));
          }
        }
    }
}

}  // namespace detail

// One min-cost flow per (I_1, I_2, i_1, j_1); at least two paths so that m >= 3.
inline CutBatch separate_arrow(const Instance& inst, const Point& p, ArrowVariant var, double tol = kViolationTol) {
  CutBatch out{var == ArrowVariant::arrow1 ? "a1" : "a2", {}, {}, {}};
  detail::arrow_core(inst, p, var, false, tol, out);
  return out;
}

// Every j is offered unswitched and switched; j_1's switch is an outer loop.
inline CutBatch separate_arrow_switch(const Instance& inst, const Point& p, ArrowVariant var, double tol = kViolationTol) {
  CutBatch out{var == ArrowVariant::arrow1 ? "a1s" : "a2s", {}, {}, {}};
  detail::arrow_core(inst, p, var, true, tol, out);
  return out;
}

// Integer MCCP per (I_1, I_2, j_1).
inline CutBatch separate_arrow_copy(const Instance& inst, const Point& p, ArrowVariant var, double tol = kViolationTol,
                                    long node_limit = 1L << 22) {
  detail::require_complete(inst, "separate_arrow_copy");
  CutBatch out{var == ArrowVariant::arrow1 ? "a1c" : "a2c", {}, {}, {}};
  const bool one = var == ArrowVariant::arrow1;
  for (int k1 = 0; k1 < inst.num_subsets(); ++k1)
    for (int k2 = 0; k2 < inst.num_subsets(); ++k2) {
      if (k1 == k2) continue;
      const auto& s1 = inst.subset(k1);
      const auto& s2 = inst.subset(k2);
      for (int j1 = 0; j1 < inst.num_y(); ++j1) {
        std::vector<int> js;
        for (int j = 0; j < inst.num_y(); ++j)
          if (j != j1) js.push_back(j);
        if (js.size() < 2) continue;
        ArrowCopyData d;
        d.min_b = 2;
        d.node_limit = node_limit;
        auto z = [&](int i, int j) { return p[inst.z(i, j)]; };
        auto x = [&](int i) { return p[inst.x(i)]; };
        for (int i : s1) {
          d.rho.push_back(one ? -z(i, j1) : x(i) - z(i, j1));
          std::vector<double> row;
          for (int j : js) row.push_back(one ? x(i) - z(i, j) : -z(i, j));
          d.pi.push_back(std::move(row));
        }
        for (int j : js) d.beta.push_back(one ? 0.0 : p[inst.y(j)]);
        for (int i : s2) {
          d.sigma.push_back(one ? -z(i, j1) : z(i, j1));
          std::vector<double> row;
          for (int j : js) row.push_back(one ? z(i, j) : -z(i, j));
          d.gamma.push_back(std::move(row));
        }
        const double constant = one ? p[inst.y(j1)] : 0.0;
        auto sol = solve_integer_mccp(d);
        if (!sol) continue;
        double viol = -(constant + sol->cost);
        if (!(viol > tol)) continue;
        ArrowCopySpec spec;
        for (std::size_t a = 0; a < s1.size(); ++a)
          if (sol->r[a]) spec.s1.push_back(s1[a]);
        spec.ys.push_back(j1);
        for (std::size_t b = 0; b < js.size(); ++b) {
          if (!sol->b[b]) continue;
          spec.ys.push_back(js[b]);
          std::vector<int> nodes;
          for (std::size_t a = 0; a < s2.size(); ++a)
            if (sol->u_ij[a][b]) nodes.push_back(s2[a]);
          spec.rest.push_back(std::move(nodes));
        }
        LinearConstraint c = arrow_copy_inequality(inst, var, spec);
        out.add(c, c.violation(p), detail::key_of({k1, k2, j1}));
      }
    }
  return out;
}

// A family whose member is fixed by slot representatives (or sets) and an ordered Y tuple:
//   sum_k sum_{i in S_k} (a_x[k] x_i + sum_p a_z[k][p] z(i, j_p)) + sum_p a_y[p] y(j_p) <= rhs.
struct LiftedFamily {
  std::string name;
  int m = 2;  // Y nodes
  int h = 2;  // slots
  std::vector<double> a_x;               // per slot
  std::vector<std::vector<double>> a_z;  // [slot][p]
  std::vector<double> a_y;               // per p
  double rhs = 0.0;
};

inline LiftedFamily bell_family(int m) {
  if (m < 2) throw std::invalid_argument("bell_family: m >= 2");
  LiftedFamily f{"bell", m, m, {}, {}, std::vector<double>(m, 0.0), 0.0};
  f.a_y[0] = -1.0;
  for (int k = 1; k <= m; ++k) {
    f.a_x.push_back(-static_cast<double>(m - k));
    std::vector<double> row;
    for (int p = 1; p <= m; ++p) row.push_back(bell_z_coef(m, k, p));
    f.a_z.push_back(std::move(row));
  }
  return f;
}

// The m = 2 cycle inequality in slot form: slot 1 carries v1, slot 2 carries v2.
inline LiftedFamily cycle_family() {
  return LiftedFamily{"cycle", 2, 2, {0.0, -1.0}, {{1.0, -1.0}, {1.0, 1.0}}, {-1.0, 0.0}, 0.0};
}

inline LinearConstraint lifted_member(const Instance& inst, const LiftedFamily& f, const std::vector<std::vector<int>>& sets,
                                      const std::vector<int>& ys) {
  std::vector<Term> t;
  for (int k = 0; k < f.h; ++k)
    for (int i : sets[k]) {
      t.push_back({inst.x(i), f.a_x[k]});
      for (int p = 0; p < f.m; ++p) t.push_back({inst.z(i, ys[p]), f.a_z[k][p]});
    }
  for (int p = 0; p < f.m; ++p) t.push_back({inst.y(ys[p]), f.a_y[p]});
  return LinearConstraint(std::move(t), Sense::LE, f.rhs, f.name);
}

// Per ordered m-tuple of Y nodes, per (subset, slot) the best contribution, then an
// h-cardinality assignment of slots to distinct subsets.
inline CutBatch separate_lifted_family(const Instance& inst, const Point& p, const LiftedFamily& f, bool copying = false,
                                       double tol = kViolationTol) {
  detail::require_complete(inst, "separate_lifted_family");
  if (f.m > inst.num_y()) throw std::invalid_argument("separate_lifted_family: m exceeds |Y|");
  if (f.h > inst.num_subsets()) throw std::invalid_argument("separate_lifted_family: h exceeds |I|");
  CutBatch out{f.name, {}, {}, {}};
  const int K = inst.num_subsets();
  std::vector<int> ys;
  std::vector<char> used(inst.num_y(), 0);
  auto visit = [&] {
    std::vector<std::vector<double>> w(K, std::vector<double>(f.h, 0.0));
    std::vector<std::vector<std::vector<int>>> chosen(K, std::vector<std::vector<int>>(f.h));
    for (int k = 0; k < K; ++k)
      for (int s = 0; s < f.h; ++s) {
        const auto& nodes = inst.subset(k);
        std::vector<double> c;
        for (int i : nodes) {
          double v = f.a_x[s] * p[inst.x(i)];
          for (int q = 0; q < f.m; ++q) v += f.a_z[s][q] * p[inst.z(i, ys[q])];
          c.push_back(v);
        }
        double sum = 0.0;
        if (copying)
          for (std::size_t a = 0; a < c.size(); ++a)
            if (c[a] > 0) {
              sum += c[a];
              chosen[k][s].push_back(nodes[a]);
            }
        if (chosen[k][s].empty()) {
          std::size_t best = std::max_element(c.begin(), c.end()) - c.begin();
          sum = c[best];
          chosen[k][s] = {nodes[best]};
        }
        w[k][s] = sum;
      }
    Assignment asg = h_cardinality_assignment(w, f.h);
    std::vector<std::vector<int>> sets(f.h);
    std::vector<int> slot_subset(f.h, -1);
    for (auto [k, s] : asg.pairs) {
      sets[s] = chosen[k][s];
      slot_subset[s] = k;
    }
    LinearConstraint c = lifted_member(inst, f, sets, ys);
    double v = c.violation(p);
    if (v > tol) {
      std::ostringstream key;
      for (int j : ys) key << j << ',';
      for (int k : slot_subset) key << 'I' << k << ',';
      out.add(c, v, key.str());
    }
  };
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(ys.size()) == f.m) {
      visit();
      return;
    }
    for (int j = 0; j < inst.num_y(); ++j) {
      if (used[j]) continue;
      used[j] = 1;
      ys.push_back(j);
      self(self);
      ys.pop_back();
      used[j] = 0;
    }
  };
  rec(rec);
  return out;
}

inline const std::vector<std::string>& all_class_names() {
  static const std::vector<std::string> names{"rlt", "c", "cc", "a1", "a1s", "a1c", "a2", "a2s", "a2c"};
  return names;
}

// "all" is RLT plus CC, A1S, A1C, A2S, A2C. "lp" or "" means no classes.
inline std::vector<std::string> expand_classes(const std::vector<std::string>& in) {
  std::vector<std::string> out;
  auto push = [&](const std::string& s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
  };
  for (const auto& c : in) {
    if (c == "all") {
      for (const char* s : {"rlt", "cc", "a1s", "a1c", "a2s", "a2c"}) push(s);
    } else if (c == "lp" || c.empty()) {
      continue;
    } else if (std::find(all_class_names().begin(), all_class_names().end(), c) != all_class_names().end()) {
      push(c);
    } else {
      throw std::invalid_argument("unknown class '" + c + "'");
    }
  }
  return out;
}

inline CutBatch separate_class(const std::string& cls, const Instance& inst, const Point& p, double tol = kViolationTol) {
  if (cls == "rlt") return separate_rlt(inst, p, false, tol);
  if (cls == "c") return separate_cycle_copy(inst, p, true, false, tol);
  if (cls == "cc") return separate_cycle_copy(inst, p, true, true, tol);
  if (cls == "a1") return separate_arrow(inst, p, ArrowVariant::arrow1, tol);
  if (cls == "a2") return separate_arrow(inst, p, ArrowVariant::arrow2, tol);
  if (cls == "a1s") return separate_arrow_switch(inst, p, ArrowVariant::arrow1, tol);
  if (cls == "a2s") return separate_arrow_switch(inst, p, ArrowVariant::arrow2, tol);
  if (cls == "a1c") return separate_arrow_copy(inst, p, ArrowVariant::arrow1, tol);
  if (cls == "a2c") return separate_arrow_copy(inst, p, ArrowVariant::arrow2, tol);
  throw std::invalid_argument("unknown class '" + cls + "'");
}

struct LoopConfig {
  double tol = kViolationTol;
  int max_rounds = 500;
  LpOptions lp;
};

struct RoundRecord {
  int round = 0;
  std::map<std::string, int> cuts_added;  // per class
  double lp_value = 0.0;
};

struct LoopReport {
  std::vector<std::string> classes;
  std::vector<RoundRecord> rounds;
  double lp_value = 0.0;
  double ip_value = 0.0;
  double gap_percent = 0.0;
  bool round_limit_hit = false;
  std::map<std::string, int> total_cuts;
  std::vector<LinearConstraint> cuts;  // every row added beyond the relaxation
  Point point;
};

// 100 (lp - ip) / |ip|, with |ip| floored at 1 so that ip = 0 stays finite.
inline double gap_percent(double lp, double ip) { return 100.0 * (lp - ip) / std::max(std::abs(ip), 1.0); }

// Starts from the McCormick relaxation (RLT rows up front when selected), then alternates
// solve and separation of every class at the same point until nothing new is violated.
inline LoopReport cutting_loop(const Instance& inst, const std::vector<double>& objective, const std::vector<std::string>& classes_in,
                               double ip_value, const LoopConfig& cfg = {}) {
  LoopReport rep;
  rep.classes = expand_classes(classes_in);
  rep.ip_value = ip_value;
  LpProblem prob = mccormick_relaxation(inst, objective);
  std::unordered_set<std::string> seen;
  for (const auto& c : prob.constraints) seen.insert(c.canonical_key());
  RoundRecord r0;
  bool with_rlt = std::find(rep.classes.begin(), rep.classes.end(), "rlt") != rep.classes.end();
  DualSimplex<double> lp(prob, cfg.lp);
  if (with_rlt) {
    int added = 0;
    for (auto& c : rlt_inequalities(inst))
      if (seen.insert(c.canonical_key()).second) {
        lp.add_row(c);
        rep.cuts.push_back(c);
        ++added;
      }
    r0.cuts_added["rlt"] = added;
    rep.total_cuts["rlt"] += added;
  }
  auto res = lp.solve();
  if (res.status != LpStatus::optimal) throw std::runtime_error(std::string("cutting_loop: LP ") + status_name(res.status));
  r0.lp_value = res.value;
  rep.rounds.push_back(r0);
  for (int round = 1;; ++round) {
    if (round > cfg.max_rounds) {
      rep.round_limit_hit = true;
      break;
    }
    RoundRecord rr;
    rr.round = round;
    int added_total = 0;
    for (const auto& cls : rep.classes) {
      CutBatch b = separate_class(cls, inst, res.point, cfg.tol);
      int added = 0;
      for (std::size_t k = 0; k < b.size(); ++k) {
        if (!(b.violations[k] > cfg.tol)) continue;
        if (!seen.insert(b.cuts[k].canonical_key()).second) continue;
        lp.add_row(b.cuts[k]);
        rep.cuts.push_back(b.cuts[k].with_tag(cls));
        ++added;
      }
      rr.cuts_added[cls] = added;
      rep.total_cuts[cls] += added;
      added_total += added;
    }
    if (added_total == 0) break;
    res = lp.solve();
    if (res.status != LpStatus::optimal) throw std::runtime_error(std::string("cutting_loop: LP ") + status_name(res.status));
    rr.lp_value = res.value;
    rep.rounds.push_back(rr);
  }
  rep.lp_value = res.value;
  rep.point = res.point;
  rep.gap_percent = gap_percent(rep.lp_value, ip_value);
  return rep;
}

// One CSV row per (round, class) plus rows for the final value.
inline std::string loop_csv_header() { return "instance,seed,classes,round,class,cuts_added,lp_value,ip_value,gap_percent\n"; }

inline std::string loop_csv_rows(const LoopReport& rep, const std::string& instance, const std::string& seed) {
  std::ostringstream os;
  os.precision(10);
  std::string cls;
  for (const auto& c : rep.classes) cls += (cls.empty() ? "" : "+") + c;
  if (cls.empty()) cls = "lp";
  for (const auto& r : rep.rounds) {
    double gap = gap_percent(r.lp_value, rep.ip_value);
    if (r.cuts_added.empty())
      os << instance << ',' << seed << ',' << cls << ',' << r.round << ",-,0," << r.lp_value << ',' << rep.ip_value << ',' << gap << '\n';
    for (const auto& [c, n] : r.cuts_added)
      os << instance << ',' << seed << ',' << cls << ',' << r.round << ',' << c << ',' << n << ',' << r.lp_value << ','
         << rep.ip_value << ',' << gap << '\n';
  }
  os << instance << ',' << seed << ',' << cls << ",final,-," << rep.cuts.size() << ',' << rep.lp_value << ',' << rep.ip_value << ','
     << rep.gap_percent << '\n';
  return os.str();
}

// Averages over a batch of reports of one class list: one row for the gap, one per class for cut counts.
inline std::string loop_csv_average_rows(const std::vector<LoopReport>& reps, const std::string& instance) {
  if (reps.empty()) return {};
  std::ostringstream os;
  os.precision(10);
  std::string cls;
  for (const auto& c : reps.front().classes) cls += (cls.empty() ? "" : "+") + c;
  if (cls.empty()) cls = "lp";
  const double n = static_cast<double>(reps.size());
  double lp = 0, ip = 0, gap = 0, cuts = 0;
  std::map<std::string, double> per_class;
  for (const auto& r : reps) {
    lp += r.lp_value / n;
    ip += r.ip_value / n;
    gap += r.gap_percent / n;
    cuts += static_cast<double>(r.cuts.size()) / n;
    for (const auto& [c, k] : r.total_cuts) per_class[c] += k / n;
  }
  os << instance << ",avg," << cls << ",final,-," << cuts << ',' << lp << ',' << ip << ',' << gap << '\n';
  for (const auto& [c, k] : per_class) os << instance << ",avg," << cls << ",total," << c << ',' << k << ",,,\n";
  return os.str();
}

}  // namespace bqpmc
