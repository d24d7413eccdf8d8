#pragma once

#include <algorithm>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqpmc/core.hpp"

namespace bqpmc {

inline std::vector<LinearConstraint> basic_inequalities(const Instance& inst) {
  std::vector<LinearConstraint> out;
  for (int j = 0; j < inst.num_y(); ++j) {
    out.emplace_back(std::vector<Term>{{inst.y(j), 1.0}}, Sense::GE, 0.0, "basic-y-lo");
    out.emplace_back(std::vector<Term>{{inst.y(j), 1.0}}, Sense::LE, 1.0, "basic-y-hi");
  }
  for (int i = 0; i < inst.num_x(); ++i) out.emplace_back(std::vector<Term>{{inst.x(i), 1.0}}, Sense::GE, 0.0, "basic-x");
  for (const auto& s : inst.subsets()) {
    std::vector<Term> t;
    for (int i : s) t.push_back({inst.x(i), 1.0});
    out.emplace_back(std::move(t), Sense::LE, 1.0, "basic-mc");
  }
  return out;
}

// z >= 0, x - z >= 0 per edge; y - sum z >= 0 and y + sum (x - z) <= 1 per (I, j) with N(j) n I nonempty.
inline std::vector<LinearConstraint> rlt_inequalities(const Instance& inst) {
  std::vector<LinearConstraint> out;
  for (auto [i, j] : inst.edges()) out.emplace_back(std::vector<Term>{{inst.z(i, j), 1.0}}, Sense::GE, 0.0, "rlt-z");
  for (auto [i, j] : inst.edges())
    out.emplace_back(std::vector<Term>{{inst.x(i), 1.0}, {inst.z(i, j), -1.0}}, Sense::GE, 0.0, "rlt-xz");
  for (int k = 0; k < inst.num_subsets(); ++k)
    for (int j = 0; j < inst.num_y(); ++j) {
      std::vector<Term> t{{inst.y(j), 1.0}};
      for (int i : inst.subset(k))
        if (inst.has_edge(i, j)) t.push_back({inst.z(i, j), -1.0});
      if (t.size() > 1) out.emplace_back(std::move(t), Sense::GE, 0.0, "rlt-y");
    }
  for (int k = 0; k < inst.num_subsets(); ++k)
    for (int j = 0; j < inst.num_y(); ++j) {
      std::vector<Term> t{{inst.y(j), 1.0}};
      for (int i : inst.subset(k))
        if (inst.has_edge(i, j)) {
          t.push_back({inst.x(i), 1.0});
          t.push_back({inst.z(i, j), -1.0});
        }
      if (t.size() > 1) out.emplace_back(std::move(t), Sense::LE, 1.0, "rlt-ymc");
    }
  return out;
}

// sum_{i in I} z_ij = y_j; valid only when every multiple-choice row holds with equality.
inline std::vector<LinearConstraint> rlt_equations(const Instance& inst) {
  std::vector<LinearConstraint> out;
  for (int j = 0; j < inst.num_y(); ++j)
    for (int k = 0; k < inst.num_subsets(); ++k) {
      std::vector<Term> t{{inst.y(j), -1.0}};
      for (int i : inst.subset(k))
        if (inst.has_edge(i, j)) t.push_back({inst.z(i, j), 1.0});
      out.emplace_back(std::move(t), Sense::EQ, 0.0, "rlt-eq");
    }
  return out;
}

namespace detail {

inline void require_distinct(std::vector<int> v, const char* what) {
  std::sort(v.begin(), v.end());
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) throw std::invalid_argument(std::string(what) + " must be pairwise distinct");
}

inline void require_y(const Instance& inst, const std::vector<int>& ys) {
  for (int j : ys)
    if (j < 0 || j >= inst.num_y()) throw std::out_of_range("unknown Y node");
  require_distinct(ys, "Y nodes");
}

inline void require_x(const Instance& inst, int i) {
  if (i < 0 || i >= inst.num_x()) throw std::out_of_range("unknown X node");
}

}  // namespace detail

// Cycle (I_1, j_1, ..., I_m, j_m) with S_p in I_p; I_p is read from S_p.
struct CycleSpec {
  std::vector<int> ys;                 // j_1..j_m
  std::vector<std::vector<int>> sets;  // S_1..S_m
};

// sum_{S_1}(-z(i,j_1) + z(i,j_m)) + sum_{p>=2}(-y(j_p) + sum_{S_p}(-x(i) + z(i,j_{p-1}) + z(i,j_p))) <= 0
inline LinearConstraint cycle_copy_inequality(const Instance& inst, const CycleSpec& spec) {
  const int m = static_cast<int>(spec.ys.size());
  if (m < 2 || static_cast<int>(spec.sets.size()) != m) throw std::invalid_argument("cycle: need m >= 2 and one S per Y node");
  detail::require_y(inst, spec.ys);
  std::vector<int> subs;
  for (const auto& s : spec.sets) {
    if (s.empty()) throw std::invalid_argument("cycle: empty S_p");
    for (int i : s) detail::require_x(inst, i);
    detail::require_distinct(s, "S_p members");
    int k = inst.subset_of(s.front());
    for (int i : s)
      if (inst.subset_of(i) != k) throw std::invalid_argument("cycle: S_p spans several subsets");
    subs.push_back(k);
  }
  try {
    detail::require_distinct(subs, "cycle subsets");
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("cycle touches a subset twice");
  }
  auto prev = [&](int p) { return spec.ys[(p + m - 1) % m]; };
  for (int p = 0; p < m; ++p)
    for (int i : spec.sets[p])
      if (!inst.has_edge(i, prev(p)) || !inst.has_edge(i, spec.ys[p])) throw std::invalid_argument("cycle: missing cycle edge");
  if (m >= 3) {
    for (int p = 0; p < m; ++p)
      for (int q = 0; q < m; ++q) {
        if (spec.ys[q] == spec.ys[p] || spec.ys[q] == prev(p)) continue;
        for (int i : inst.subset(subs[p]))
          if (inst.has_edge(i, spec.ys[q])) throw std::invalid_argument("cycle: cycle has a chord");
      }
  }
  std::vector<Term> t;
  for (int i : spec.sets[0]) {
    t.push_back({inst.z(i, spec.ys[0]), -1.0});
    t.push_back({inst.z(i, spec.ys[m - 1]), 1.0});
  }
  for (int p = 1; p < m; ++p) {
    t.push_back({inst.y(spec.ys[p]), -1.0});
    for (int i : spec.sets[p]) {
      t.push_back({inst.x(i), -1.0});
      t.push_back({inst.z(i, spec.ys[p - 1]), 1.0});
      t.push_back({inst.z(i, spec.ys[p]), 1.0});
    }
  }
  return LinearConstraint(std::move(t), Sense::LE, 0.0, "cycle");
}

struct BellSpec {
  std::vector<int> reps;  // i_1..i_m from pairwise distinct subsets
  std::vector<int> ys;    // j_1..j_m
};

// Coefficient of z(i_p, j_k) (1-based p, k) in the Bell inequality of order m.
inline double bell_z_coef(int m, int p, int k) {
  if (p + k < m + 2) return 1.0;
  if (p + k == m + 2 && p >= 2 && k >= 2) return -1.0;
  return 0.0;
}

inline LinearConstraint bell_inequality(const Instance& inst, const BellSpec& spec) {
  const int m = static_cast<int>(spec.ys.size());
  if (m < 2 || static_cast<int>(spec.reps.size()) != m) throw std::invalid_argument("bell: need m >= 2 representatives and Y nodes");
  if (m > inst.num_subsets() || m > inst.num_y()) throw std::invalid_argument("bell: m exceeds available subsets or Y nodes");
  detail::require_y(inst, spec.ys);
  std::vector<int> subs;
  for (int i : spec.reps) {
    detail::require_x(inst, i);
    subs.push_back(inst.subset_of(i));
  }
  detail::require_distinct(subs, "bell subsets");
  std::vector<Term> t{{inst.y(spec.ys[0]), -1.0}};
  for (int k = 1; k <= m; ++k) t.push_back({inst.x(spec.reps[k - 1]), -static_cast<double>(m - k)});
  for (int p = 1; p <= m; ++p)
    for (int k = 1; k <= m; ++k) {
      double a = bell_z_coef(m, p, k);
      if (a != 0.0) t.push_back({inst.z(spec.reps[p - 1], spec.ys[k - 1]), a});
    }
  return LinearConstraint(std::move(t), Sense::LE, 0.0, "bell");
}

enum class ArrowVariant { arrow1, arrow2 };

inline const char* variant_name(ArrowVariant v) { return v == ArrowVariant::arrow1 ? "arrow1" : "arrow2"; }

struct ArrowSpec {
  int i1 = -1;
  std::vector<int> rest;  // i_2..i_m, pairwise distinct, one subset other than i_1's
  std::vector<int> ys;    // j_1..j_m
};

namespace detail {

inline void check_arrow_nodes(const Instance& inst, int subset1, const std::vector<int>& rest_nodes, const std::vector<int>& ys) {
  if (ys.size() < 3) throw std::invalid_argument("arrow: m < 3");
  require_y(inst, ys);
  for (int i : rest_nodes) require_x(inst, i);
  int k2 = inst.subset_of(rest_nodes.front());
  if (k2 == subset1) throw std::invalid_argument("arrow: I_1 and I_2 must differ");
  for (int i : rest_nodes)
    if (inst.subset_of(i) != k2) throw std::invalid_argument("arrow: i_2..i_m must share one subset");
  require_distinct(rest_nodes, "arrow I_2 nodes");
}

}  // namespace detail

// Arrow-1: (m-1)x(i_1) + y(j_1) - sum_p z(i_1,j_p) + sum_{p>=2}(-z(i_p,j_1) + z(i_p,j_p)) >= 0
// Arrow-2: x(i_1) + sum_{p>=2} y(j_p) - sum_p z(i_1,j_p) + sum_{p>=2}(z(i_p,j_1) - z(i_p,j_p)) >= 0
inline LinearConstraint arrow_inequality(const Instance& inst, ArrowVariant v, const ArrowSpec& spec) {
  const int m = static_cast<int>(spec.ys.size());
  detail::require_x(inst, spec.i1);
  if (static_cast<int>(spec.rest.size()) != m - 1) {
    if (m >= 3 && static_cast<int>(inst.subset(inst.subset_of(spec.rest.empty() ? spec.i1 : spec.rest.front())).size()) < m - 1)
      throw std::invalid_argument("arrow: |I_2| < m - 1");
    throw std::invalid_argument("arrow: need m - 1 nodes i_2..i_m");
  }
  detail::check_arrow_nodes(inst, inst.subset_of(spec.i1), spec.rest, spec.ys);
  std::vector<Term> t;
  const double s1 = v == ArrowVariant::arrow1 ? 1.0 : -1.0;
  t.push_back({inst.x(spec.i1), v == ArrowVariant::arrow1 ? static_cast<double>(m - 1) : 1.0});
  if (v == ArrowVariant::arrow1) t.push_back({inst.y(spec.ys[0]), 1.0});
  else
    for (int p = 1; p < m; ++p) t.push_back({inst.y(spec.ys[p]), 1.0});
  for (int p = 0; p < m; ++p) t.push_back({inst.z(spec.i1, spec.ys[p]), -1.0});
  for (int p = 1; p < m; ++p) {
    t.push_back({inst.z(spec.rest[p - 1], spec.ys[0]), -s1});
    t.push_back({inst.z(spec.rest[p - 1], spec.ys[p]), s1});
  }
  return LinearConstraint(std::move(t), Sense::GE, 0.0, variant_name(v));
}

inline LinearConstraint arrow1_inequality(const Instance& inst, const ArrowSpec& s) { return arrow_inequality(inst, ArrowVariant::arrow1, s); }
inline LinearConstraint arrow2_inequality(const Instance& inst, const ArrowSpec& s) { return arrow_inequality(inst, ArrowVariant::arrow2, s); }

// Copying of an arrow inequality: S_1 takes i_1's tuple, S_p takes i_p's tuple.
struct ArrowCopySpec {
  std::vector<int> s1;                 // non-empty subset of I_1
  std::vector<int> ys;                 // j_1..j_m
  std::vector<std::vector<int>> rest;  // S_2..S_m, non-empty, pairwise disjoint, in I_2
};

inline LinearConstraint arrow_copy_inequality(const Instance& inst, ArrowVariant v, const ArrowCopySpec& spec) {
  const int m = static_cast<int>(spec.ys.size());
  if (spec.s1.empty() || static_cast<int>(spec.rest.size()) != m - 1) throw std::invalid_argument("arrow copy: malformed sets");
  for (int i : spec.s1) detail::require_x(inst, i);
  detail::require_distinct(spec.s1, "S_1 members");
  int k1 = inst.subset_of(spec.s1.front());
  for (int i : spec.s1)
    if (inst.subset_of(i) != k1) throw std::invalid_argument("arrow copy: S_1 spans several subsets");
  std::vector<int> all_rest;
  for (const auto& s : spec.rest) {
    if (s.empty()) throw std::invalid_argument("arrow copy: empty S_p");
    all_rest.insert(all_rest.end(), s.begin(), s.end());
  }
  detail::check_arrow_nodes(inst, k1, all_rest, spec.ys);
  std::vector<Term> t;
  const double s1 = v == ArrowVariant::arrow1 ? 1.0 : -1.0;
  for (int i : spec.s1) {
    t.push_back({inst.x(i), v == ArrowVariant::arrow1 ? static_cast<double>(m - 1) : 1.0});
    for (int p = 0; p < m; ++p) t.push_back({inst.z(i, spec.ys[p]), -1.0});
  }
  if (v == ArrowVariant::arrow1) t.push_back({inst.y(spec.ys[0]), 1.0});
  else
    for (int p = 1; p < m; ++p) t.push_back({inst.y(spec.ys[p]), 1.0});
  for (int p = 1; p < m; ++p)
    for (int i : spec.rest[p - 1]) {
      t.push_back({inst.z(i, spec.ys[0]), -s1});
      t.push_back({inst.z(i, spec.ys[p]), s1});
    }
  return LinearConstraint(std::move(t), Sense::GE, 0.0, std::string(variant_name(v)) + "-copy");
}

// Coefficient layout of the 1,m template
//   a_{i1} x_{i1} + sum_{p<=k} a_{jp} y_{jp} + sum_p a_{i1 jp} z_{i1 jp} + sum_{h>=2} sum_p a_{ih jp} z_{ih jp} >= 0.
// The y terms enter with a plus sign (arrow-1 at k = 1 needs +y_{j1}).
struct OneMCoefficients {
  double a_i1 = 0.0;
  std::vector<double> a_y;                // k entries
  std::vector<double> a_i1j;              // m entries
  std::vector<std::vector<double>> a_hj;  // (m-1) rows of m entries
};

inline bool check_one_m_valid(const OneMCoefficients& c, int m, int k) {
  if (m < 3 || k < 1 || k > m) throw std::invalid_argument("one_m: need m >= 3 and 1 <= k <= m");
  if (static_cast<int>(c.a_y.size()) != k || static_cast<int>(c.a_i1j.size()) != m ||
      static_cast<int>(c.a_hj.size()) != m - 1)
    throw std::invalid_argument("one_m: malformed layout");
  for (const auto& row : c.a_hj)
    if (static_cast<int>(row.size()) != m) throw std::invalid_argument("one_m: malformed layout");
  for (double a : c.a_i1j)
    if (a != -1.0) return false;  // (i)
  for (double a : c.a_y)
    if (a != 1.0) return false;  // (ii)
  if (c.a_i1 != m - k) return false;  // (iii)
  for (const auto& row : c.a_hj) {
    double worst = 0.0;
    for (int p = 0; p < m; ++p) {
      double a = row[p];
      if (p < k) {
        if (a != 0.0 && a != -1.0) return false;  // (iv)
        worst += a;
      } else {
        if (a != 0.0 && a != 1.0) return false;  // (v), for p = k+1..m
        worst += std::min(0.0, a - 1.0);
      }
    }
    if (worst < -(m - k)) return false;  // (vi) at its worst-case R
  }
  return true;
}

inline LinearConstraint one_m_inequality(const Instance& inst, const ArrowSpec& nodes, const OneMCoefficients& c) {
  const int m = static_cast<int>(nodes.ys.size());
  if (static_cast<int>(nodes.rest.size()) != m - 1 || static_cast<int>(c.a_i1j.size()) != m ||
      static_cast<int>(c.a_hj.size()) != m - 1 || static_cast<int>(c.a_y.size()) > m)
    throw std::invalid_argument("one_m: malformed layout");
  detail::check_arrow_nodes(inst, inst.subset_of(nodes.i1), nodes.rest, nodes.ys);
  std::vector<Term> t{{inst.x(nodes.i1), c.a_i1}};
  for (std::size_t p = 0; p < c.a_y.size(); ++p) t.push_back({inst.y(nodes.ys[p]), c.a_y[p]});
  for (int p = 0; p < m; ++p) t.push_back({inst.z(nodes.i1, nodes.ys[p]), c.a_i1j[p]});
  for (int h = 0; h < m - 1; ++h)
    for (int p = 0; p < m; ++p) t.push_back({inst.z(nodes.rest[h], nodes.ys[p]), c.a_hj[h][p]});
  return LinearConstraint(std::move(t), Sense::GE, 0.0, "one-m");
}

// Reads a >= 0 constraint back into the template layout for the given node order.
inline OneMCoefficients one_m_layout(const Instance& inst, const LinearConstraint& c_in, const ArrowSpec& nodes, int k) {
  LinearConstraint c = c_in.sense() == Sense::LE ? LinearConstraint(
                                                       [&] {
                                                         std::vector<Term> t = c_in.terms();
                                                         for (auto& x : t) x.coef = -x.coef;
                                                         return t;
                                                       }(),
                                                       Sense::GE, -c_in.rhs())
                                                 : c_in;
  const int m = static_cast<int>(nodes.ys.size());
  OneMCoefficients out;
  out.a_i1 = c.coef(inst.x(nodes.i1));
  for (int p = 0; p < k; ++p) out.a_y.push_back(c.coef(inst.y(nodes.ys[p])));
  for (int p = 0; p < m; ++p) out.a_i1j.push_back(c.coef(inst.z(nodes.i1, nodes.ys[p])));
  for (int h = 0; h < m - 1; ++h) {
    std::vector<double> row;
    for (int p = 0; p < m; ++p) row.push_back(c.coef(inst.z(nodes.rest[h], nodes.ys[p])));
    out.a_hj.push_back(std::move(row));
  }
  return out;
}

}  // namespace bqpmc
