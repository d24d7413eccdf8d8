#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <numeric>
#include <limits>
#include <optional>
#include <set>
#include <stdexcept>
#include <vector>

#include "bqpmc/core.hpp"
#include "bqpmc/families.hpp"
#include "bqpmc/rational.hpp"
#include "bqpmc/simplex.hpp"
#include "bqpmc/transforms.hpp"

namespace bqpmc {

// choice[k] = position within subset k of the selected node, or -1.
using XChoice = std::vector<int>;

// Visits every vertex of X^I restricted to the listed subsets (others stay at -1).
inline void for_each_x_vertex(const Instance& inst, const std::vector<int>& subsets, const std::function<void(const XChoice&)>& f) {
  XChoice choice(inst.num_subsets(), -1);
  const int n = static_cast<int>(subsets.size());
  while (true) {
    f(choice);
    int k = 0;
    for (; k < n; ++k) {
      int s = subsets[k];
      if (++choice[s] < static_cast<int>(inst.subset(s).size())) break;
      choice[s] = -1;
    }
    if (k == n) return;
  }
}

inline void for_each_x_vertex(const Instance& inst, const std::function<void(const XChoice&)>& f) {
  std::vector<int> all(inst.num_subsets());
  for (int k = 0; k < inst.num_subsets(); ++k) all[k] = k;
  for_each_x_vertex(inst, all, f);
}

inline std::vector<int> chosen_nodes(const Instance& inst, const XChoice& choice) {
  std::vector<int> out;
  for (int k = 0; k < inst.num_subsets(); ++k)
    if (choice[k] >= 0) out.push_back(inst.subset(k)[choice[k]]);
  return out;
}

template <class T = double>
BasicPoint<T> vertex_point(const Instance& inst, const std::vector<int>& x_nodes, const std::vector<int>& y_on) {
  BasicPoint<T> p(inst);
  for (int i : x_nodes) p[inst.x(i)] = T(1);
  for (int j : y_on) {
    p[inst.y(j)] = T(1);
    for (int i : x_nodes)
      if (inst.has_edge(i, j)) p[inst.z(i, j)] = T(1);
  }
  return p;
}

inline long double vertex_count(const Instance& inst) {
  long double n = std::ldexp(1.0L, inst.num_y());
  for (const auto& s : inst.subsets()) n *= static_cast<long double>(s.size() + 1);
  return n;
}

// All vertices of P(G, I): x a vertex of X^I, y binary, z = x y^T. Order: x odometer outer, y bits inner.
inline std::vector<Point> enumerate_vertices(const Instance& inst, long cap = 1L << 22) {
  if (vertex_count(inst) > static_cast<long double>(cap)) throw std::length_error("enumerate_vertices: vertex cap exceeded");
  if (inst.num_y() >= 62) throw std::length_error("enumerate_vertices: vertex cap exceeded");
  std::vector<Point> out;
  for_each_x_vertex(inst, [&](const XChoice& ch) {
    auto xs = chosen_nodes(inst, ch);
    for (long mask = 0; mask < (1L << inst.num_y()); ++mask) {
      std::vector<int> ys;
      for (int j = 0; j < inst.num_y(); ++j)
        if (mask >> j & 1) ys.push_back(j);
      out.push_back(vertex_point<double>(inst, xs, ys));
    }
  });
  return out;
}

template <class T>
struct Optimum {
  T value = T(0);
  BasicPoint<T> vertex;
};

namespace detail {

// max over vertices of sum a_v v for a coefficient vector; y_j is set in closed form per x vertex.
template <class T>
Optimum<T> maximize_over_vertices(const Instance& inst, const std::vector<T>& a, const std::vector<int>& subsets) {
  Optimum<T> best;
  bool have = false;
  for_each_x_vertex(inst, subsets, [&](const XChoice& ch) {
    auto xs = chosen_nodes(inst, ch);
    T val(0);
    for (int i : xs) val += a[inst.x(i).index];
    std::vector<int> ys;
    for (int j = 0; j < inst.num_y(); ++j) {
      T g = a[inst.y(j).index];
      for (int i : xs)
        if (inst.has_edge(i, j)) g += a[inst.z(i, j).index];
      if (g > T(0)) {
        val += g;
        ys.push_back(j);
      }
    }
    if (!have || val > best.value) {
      have = true;
      best.value = val;
      best.vertex = vertex_point<T>(inst, xs, ys);
    }
  });
  return best;
}

inline std::vector<int> all_subsets(const Instance& inst) {
  std::vector<int> all(inst.num_subsets());
  for (int k = 0; k < inst.num_subsets(); ++k) all[k] = k;
  return all;
}

// Subsets holding a node with a non-zero x or z coefficient.
inline std::vector<int> touched_subsets(const LinearConstraint& c, const Instance& inst) {
  std::set<int> s;
  for (const Term& t : c.terms()) {
    VarInfo in = inst.info(t.var);
    if (in.kind != VarKind::Y) s.insert(inst.subset_of(in.i));
  }
  return {s.begin(), s.end()};
}

}  // namespace detail

template <class T = double>
Optimum<T> integer_optimum(const Instance& inst, const std::vector<T>& objective) {
  if (static_cast<int>(objective.size()) != inst.num_vars()) throw std::invalid_argument("integer_optimum: objective size");
  return detail::maximize_over_vertices<T>(inst, objective, detail::all_subsets(inst));
}

template <class T = double>
struct Validity {
  bool valid = true;
  T worst_slack = T(0);  // minimum over vertices of the rhs-relative slack
  BasicPoint<T> witness; // vertex attaining worst_slack
};

// Exact extremes over all vertices, enumerating only the subsets the constraint touches.
template <class T = double>
Validity<T> check_validity(const Instance& inst, const LinearConstraint& c, double tol = 0.0) {
  auto subsets = detail::touched_subsets(c, inst);
  auto one_side = [&](const LinearConstraint& le) {
    std::vector<T> a(inst.num_vars(), T(0));
    for (const Term& t : le.terms()) a[t.var.index] = NumTraits<T>::from(t.coef);
    auto opt = detail::maximize_over_vertices<T>(inst, a, subsets);
    return std::make_pair(T(NumTraits<T>::from(le.rhs()) - opt.value), opt.vertex);
  };
  Validity<T> out;
  std::vector<LinearConstraint> sides;
  if (c.sense() == Sense::EQ) {
    sides.push_back(LinearConstraint(c.terms(), Sense::LE, c.rhs()));
    sides.push_back(LinearConstraint(c.terms(), Sense::GE, c.rhs()).normalized());
  } else {
    sides.push_back(c.normalized());
  }
  bool first = true;
  for (const auto& s : sides) {
    auto [slack, v] = one_side(s);
    if (first || slack < out.worst_slack) {
      out.worst_slack = slack;
      out.witness = v;
      first = false;
    }
  }
  out.valid = out.worst_slack >= -NumTraits<T>::from(tol);
  return out;
}

inline bool is_valid(const Instance& inst, const LinearConstraint& c, double tol = 1e-9) {
  return check_validity<double>(inst, c, tol).valid;
}

inline bool is_valid_exact(const Instance& inst, const LinearConstraint& c) {
  return check_validity<Rational>(inst, c, 0.0).valid;
}

// Rank of a rational matrix by Gaussian elimination.
inline int matrix_rank(std::vector<std::vector<Rational>> m) {
  int rank = 0;
  const int rows = static_cast<int>(m.size());
  const int cols = rows ? static_cast<int>(m[0].size()) : 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (sgn(m[r][c]) != 0) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(m[piv], m[rank]);
    for (int r = rank + 1; r < rows; ++r) {
      if (sgn(m[r][c]) == 0) continue;
      Rational f = m[r][c] / m[rank][c];
      for (int k = c; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

// Affine dimension of a point set; -1 when empty.
template <class T>
int affine_rank(const std::vector<BasicPoint<T>>& pts) {
  if (pts.empty()) return -1;
  std::vector<std::vector<Rational>> m;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    std::vector<Rational> row;
    for (std::size_t v = 0; v < pts[k].size(); ++v) {
      if constexpr (NumTraits<T>::exact)
        row.push_back(pts[k].values[v] - pts[0].values[v]);
      else
        row.push_back(to_rational(pts[k].values[v]) - to_rational(pts[0].values[v]));
    }
    m.push_back(std::move(row));
  }
  return matrix_rank(std::move(m));
}

// Affine dimension of the face {v : c tight}. Facet-defining iff the result is dim - 1.
inline int facet_rank(const Instance& inst, const LinearConstraint& c, long cap = 1L << 16) {
  if (!is_valid_exact(inst, c)) throw std::invalid_argument("facet_rank: constraint is not valid");
  std::vector<Point> tight;
  const Rational rhs = to_rational(c.rhs());
  for (const Point& v : enumerate_vertices(inst, cap))
    if (c.lhs(to_rational(v)) == rhs) tight.push_back(v);
  return affine_rank(tight);
}

// Family members searched exhaustively by brute_force_most_violated.
enum class FamilyKind { cycle, arrow1, arrow2, bell };

struct BruteSpec {
  FamilyKind kind = FamilyKind::cycle;
  bool copying = false;
  bool switching = false;
  int m = 2;  // Bell order
};

struct Violated {
  LinearConstraint cut;
  double violation = -std::numeric_limits<double>::infinity();
};

namespace detail {

inline std::vector<std::vector<int>> nonempty_subsets_of(const std::vector<int>& base, bool singletons_only) {
  std::vector<std::vector<int>> out;
  if (singletons_only) {
    for (int i : base) out.push_back({i});
    return out;
  }
  const int n = static_cast<int>(base.size());
  for (int mask = 1; mask < (1 << n); ++mask) {
    std::vector<int> s;
    for (int k = 0; k < n; ++k)
      if (mask >> k & 1) s.push_back(base[k]);
    out.push_back(std::move(s));
  }
  return out;
}

inline void consider(const Instance& inst, const LinearConstraint& c, const Point& p, bool switching, Violated& best) {
  auto take = [&](const LinearConstraint& d) {
    double v = d.violation(p);
    if (v > best.violation) best = {d, v};
  };
  if (!switching) {
    take(c);
    return;
  }
  std::vector<int> sup;
  for (int j : y_support(c, inst)) sup.push_back(j);
  const int n = static_cast<int>(sup.size());
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::set<int> hat;
    for (int k = 0; k < n; ++k)
      if (mask >> k & 1) hat.insert(sup[k]);
    take(switch_y(c, hat, inst));
  }
}

inline void brute_cycle(const Instance& inst, const BruteSpec& spec, const Point& p, Violated& best) {
  for (int ja = 0; ja < inst.num_y(); ++ja)
    for (int jb = 0; jb < inst.num_y(); ++jb) {
      if (ja == jb) continue;
      for (int k1 = 0; k1 < inst.num_subsets(); ++k1)
        for (int k2 = 0; k2 < inst.num_subsets(); ++k2) {
          if (k1 == k2) continue;
          for (const auto& s1 : nonempty_subsets_of(inst.subset(k1), !spec.copying))
            for (const auto& s2 : nonempty_subsets_of(inst.subset(k2), !spec.copying)) {
              LinearConstraint c;
              try {
                c = cycle_copy_inequality(inst, CycleSpec{{ja, jb}, {s1, s2}});
              } catch (const std::invalid_argument&) {
                continue;
              }
              consider(inst, c, p, spec.switching, best);
            }
        }
    }
}

// Every assignment of the nodes of I_2 to Y \ {j1} or to nothing; injective unless copying.
inline void brute_arrow(const Instance& inst, const BruteSpec& spec, const Point& p, Violated& best) {
  ArrowVariant var = spec.kind == FamilyKind::arrow1 ? ArrowVariant::arrow1 : ArrowVariant::arrow2;
  for (int k1 = 0; k1 < inst.num_subsets(); ++k1)
    for (int k2 = 0; k2 < inst.num_subsets(); ++k2) {
      if (k1 == k2) continue;
      const auto& i2 = inst.subset(k2);
      const int n2 = static_cast<int>(i2.size());
      for (int j1 = 0; j1 < inst.num_y(); ++j1) {
        std::vector<int> target(n2, -1);
        auto visit = [&] {
          std::map<int, std::vector<int>> by_j;
          for (int a = 0; a < n2; ++a)
            if (target[a] >= 0) by_j[target[a]].push_back(i2[a]);
          if (by_j.size() < 2) return;
          if (!spec.copying)
            for (auto& [j, nodes] : by_j)
              if (nodes.size() > 1) return;
          std::vector<int> ys{j1};
          std::vector<std::vector<int>> rest;
          for (auto& [j, nodes] : by_j) {
            ys.push_back(j);
            rest.push_back(nodes);
          }
          for (const auto& s1 : nonempty_subsets_of(inst.subset(k1), !spec.copying)) {
            LinearConstraint c;
            if (spec.copying) {
              c = arrow_copy_inequality(inst, var, ArrowCopySpec{s1, ys, rest});
            } else {
              std::vector<int> flat;
              for (auto& r : rest) flat.push_back(r.front());
              c = arrow_inequality(inst, var, ArrowSpec{s1.front(), flat, ys});
            }
            consider(inst, c, p, spec.switching, best);
          }
        };
        auto rec = [&](auto&& self, int a) -> void {
          if (a == n2) {
            visit();
            return;
          }
          for (int j = -1; j < inst.num_y(); ++j) {
            if (j == j1) continue;
            target[a] = j;
            self(self, a + 1);
          }
          target[a] = -1;
        };
        rec(rec, 0);
      }
    }
}

inline void brute_bell(const Instance& inst, const BruteSpec& spec, const Point& p, Violated& best) {
  const int m = spec.m;
  if (spec.copying) throw std::invalid_argument("brute_force_most_violated: Bell copying not enumerated");
  if (m > inst.num_subsets() || m > inst.num_y()) return;
  std::vector<int> reps, ys;
  std::vector<char> used_sub(inst.num_subsets(), 0), used_y(inst.num_y(), 0);
  auto rec_y = [&](auto&& self) -> void {
    if (static_cast<int>(ys.size()) == m) {
      consider(inst, bell_inequality(inst, BellSpec{reps, ys}), p, spec.switching, best);
      return;
    }
    for (int j = 0; j < inst.num_y(); ++j) {
      if (used_y[j]) continue;
      used_y[j] = 1;
      ys.push_back(j);
      self(self);
      ys.pop_back();
      used_y[j] = 0;
    }
  };
  auto rec_x = [&](auto&& self) -> void {
    if (static_cast<int>(reps.size()) == m) {
      rec_y(rec_y);
      return;
    }
    for (int k = 0; k < inst.num_subsets(); ++k) {
      if (used_sub[k]) continue;
      used_sub[k] = 1;
      for (int i : inst.subset(k)) {
        reps.push_back(i);
        self(self);
        reps.pop_back();
      }
      used_sub[k] = 0;
    }
  };
  rec_x(rec_x);
}

}  // namespace detail

// Exhaustive most violated family member at p; nullopt when the family is empty on inst.
inline std::optional<Violated> brute_force_most_violated(const Instance& inst, const BruteSpec& spec, const Point& p,
                                                         long cap = 1L << 20) {
  long double size = 1.0L;
  for (const auto& s : inst.subsets()) size *= std::ldexp(1.0L, static_cast<int>(s.size()));
  size *= std::pow(static_cast<long double>(inst.num_y() + 1), inst.num_x()) * std::ldexp(1.0L, inst.num_y());
  if (size > static_cast<long double>(cap) * 64) throw std::length_error("brute_force_most_violated: enumeration cap exceeded");
  Violated best;
  switch (spec.kind) {
    case FamilyKind::cycle: detail::brute_cycle(inst, spec, p, best); break;
    case FamilyKind::arrow1:
    case FamilyKind::arrow2: detail::brute_arrow(inst, spec, p, best); break;
    case FamilyKind::bell: detail::brute_bell(inst, spec, p, best); break;
  }
  if (best.violation == -std::numeric_limits<double>::infinity()) return std::nullopt;
  return best;
}

struct HullMembership {
  bool member = false;
  std::vector<std::pair<int, Rational>> weights;  // (vertex index, lambda), exact
};

namespace detail {

// Row sum_v (den * v_c) lambda_v = num for h_c = num / den; integer data stays exact in doubles.
inline LpProblem convex_lp(const std::vector<Point>& vertices, const std::vector<int>& cols, const RationalPoint& h) {
  const int n = static_cast<int>(cols.size());
  LpProblem lp(n, true);
  std::vector<Term> ones;
  for (int k = 0; k < n; ++k) ones.push_back({VarId{k}, 1.0});
  lp.constraints.push_back(LinearConstraint(std::move(ones), Sense::EQ, 1.0, "convexity"));
  for (std::size_t c = 0; c < h.size(); ++c) {
    const Rational& v = h.values[c];
    if (v.get_den() > mpz_class(1L << 52) || abs(v.get_num()) > mpz_class(1L << 52))
      throw std::domain_error("convex_membership: coordinate too large for exact row data");
    double den = v.get_den().get_d(), num = v.get_num().get_d();
    std::vector<Term> t;
    for (int k = 0; k < n; ++k)
      if (vertices[cols[k]].values[c] != 0) t.push_back({VarId{k}, den});
    lp.constraints.push_back(LinearConstraint(std::move(t), Sense::EQ, num, "coordinate"));
  }
  return lp;
}

inline bool exact_combination(const std::vector<Point>& vertices, const std::vector<int>& cols,
                              const RationalPoint& h, HullMembership& out) {
  auto res = solve_lp_exact(convex_lp(vertices, cols, h));
  if (res.status != LpStatus::optimal) return false;
  RationalPoint sum(std::vector<Rational>(h.size(), Rational(0)));
  Rational total(0);
  out.weights.clear();
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const Rational& l = res.point.values[k];
    if (sgn(l) < 0) return false;
    if (sgn(l) == 0) continue;
    out.weights.emplace_back(cols[k], l);
    total += l;
    for (std::size_t c = 0; c < h.size(); ++c)
      if (vertices[cols[k]].values[c] != 0) sum.values[c] += l;
  }
  return total == 1 && sum == h;
}

}  // namespace detail

// Is h a convex combination of the listed vertices? A floating solve picks the support,
// an exact solve on that support produces the weights, which are then re-checked exactly.
// Falls back to an exact solve over all columns when the floating support does not carry.
inline HullMembership convex_membership(const std::vector<Point>& vertices, const RationalPoint& h) {
  HullMembership out;
  std::vector<int> all(vertices.size());
  std::iota(all.begin(), all.end(), 0);
  auto approx = solve_lp(detail::convex_lp(vertices, all, h));
  if (approx.status == LpStatus::optimal) {
    std::vector<int> support;
    for (int k : all)
      if (approx.point.values[k] > 1e-9) support.push_back(k);
    if (detail::exact_combination(vertices, support, h, out)) {
      out.member = true;
      return out;
    }
  }
  out.member = detail::exact_combination(vertices, all, h, out);
  if (!out.member) out.weights.clear();
  return out;
}

}  // namespace bqpmc
