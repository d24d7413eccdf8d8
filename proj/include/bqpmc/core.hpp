#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bqpmc/rational.hpp"

namespace bqpmc {

enum class Side : std::uint8_t { X, Y };

struct NodeId {
  Side side;
  int index;
  auto operator<=>(const NodeId&) const = default;
};

struct VarId {
  int index = -1;
  auto operator<=>(const VarId&) const = default;
};

enum class VarKind : std::uint8_t { X, Y, Z };

struct VarInfo {
  VarKind kind;
  int i;  // X ordinal (X and Z variables), -1 otherwise
  int j;  // Y ordinal (Y and Z variables), -1 otherwise
};

struct EdgeSpec {
  bool complete = true;
  std::vector<std::pair<std::string, std::string>> pairs;

  static EdgeSpec complete_graph() { return {}; }
  static EdgeSpec list(std::vector<std::pair<std::string, std::string>> p) {
    return EdgeSpec{false, std::move(p)};
  }
};

// Bipartite graph G = (X u Y, E) with a partition of X into subsets.
// X ordinals follow subset order, so subset k occupies a contiguous block.
class Instance {
 public:
  Instance() = default;

  static Instance build(const std::vector<std::vector<std::string>>& subsets,
                        const std::vector<std::string>& y_names, const EdgeSpec& edges) {
    Instance inst;
    std::map<std::string, int> x_index;
    for (const auto& s : subsets) {
      if (s.empty()) throw std::invalid_argument("build_instance: empty subset");
      std::vector<int> members;
      for (const auto& name : s) {
        if (x_index.count(name)) throw std::invalid_argument("build_instance: overlapping subsets at " + name);
        int id = static_cast<int>(inst.x_names_.size());
        x_index[name] = id;
        inst.x_names_.push_back(name);
        inst.subset_of_.push_back(static_cast<int>(inst.subsets_.size()));
        members.push_back(id);
      }
      inst.subsets_.push_back(std::move(members));
    }
    std::map<std::string, int> y_index;
    for (const auto& name : y_names) {
      if (y_index.count(name) || x_index.count(name))
        throw std::invalid_argument("build_instance: duplicate node name " + name);
      y_index[name] = static_cast<int>(inst.y_names_.size());
      inst.y_names_.push_back(name);
    }
    std::vector<std::pair<int, int>> e;
    if (edges.complete) {
      for (int i = 0; i < inst.num_x(); ++i)
        for (int j = 0; j < inst.num_y(); ++j) e.emplace_back(i, j);
    } else {
      for (const auto& [a, b] : edges.pairs) {
        auto xi = x_index.find(a);
        auto yj = y_index.find(b);
        if (xi == x_index.end() || yj == y_index.end()) {
          // tolerate (j, i) order
          xi = x_index.find(b);
          yj = y_index.find(a);
        }
        if (xi == x_index.end() || yj == y_index.end())
          throw std::invalid_argument("build_instance: dangling edge (" + a + "," + b + ")");
        e.emplace_back(xi->second, yj->second);
      }
    }
    inst.complete_spec_ = edges.complete;
    inst.finish(std::move(e));
    return inst;
  }

  // Sizes-only construction with generated names i1.., j1...
  static Instance from_sizes(const std::vector<int>& subset_sizes, int y_count,
                             const std::vector<std::pair<int, int>>* edges = nullptr) {
    std::vector<std::vector<std::string>> subsets;
    int next = 1;
    for (int s : subset_sizes) {
      std::vector<std::string> names;
      for (int k = 0; k < s; ++k) names.push_back("i" + std::to_string(next++));
      subsets.push_back(std::move(names));
    }
    std::vector<std::string> ys;
    for (int j = 1; j <= y_count; ++j) ys.push_back("j" + std::to_string(j));
    if (!edges) return build(subsets, ys, EdgeSpec::complete_graph());
    Instance inst = build(subsets, ys, EdgeSpec::complete_graph());
    std::vector<std::pair<std::string, std::string>> named;
    for (auto [i, j] : *edges) {
      if (i < 0 || i >= inst.num_x() || j < 0 || j >= inst.num_y())
        throw std::invalid_argument("from_sizes: dangling edge");
      named.emplace_back(inst.x_names_[i], inst.y_names_[j]);
    }
    return build(subsets, ys, EdgeSpec::list(named));
  }

  int num_x() const { return static_cast<int>(x_names_.size()); }
  int num_y() const { return static_cast<int>(y_names_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_subsets() const { return static_cast<int>(subsets_.size()); }
  int num_vars() const { return num_x() + num_y() + num_edges(); }
  int dim() const { return num_vars(); }

  const std::vector<std::vector<int>>& subsets() const { return subsets_; }
  const std::vector<int>& subset(int k) const { return subsets_.at(k); }
  int subset_of(int i) const { return subset_of_.at(i); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  bool complete_spec() const { return complete_spec_; }
  bool is_complete() const { return num_edges() == num_x() * num_y(); }

  bool has_edge(int i, int j) const { return edge_index(i, j) >= 0; }
  int edge_index(int i, int j) const {
    if (i < 0 || i >= num_x() || j < 0 || j >= num_y()) return -1;
    return edge_id_[static_cast<std::size_t>(i) * num_y() + j];
  }

  // N(i) as Y ordinals and N(j) as X ordinals, ascending.
  const std::vector<int>& x_neighbours(int i) const { return x_adj_.at(i); }
  const std::vector<int>& y_neighbours(int j) const { return y_adj_.at(j); }

  VarId x(int i) const {
    if (i < 0 || i >= num_x()) throw std::out_of_range("x: unknown node");
    return VarId{i};
  }
  VarId y(int j) const {
    if (j < 0 || j >= num_y()) throw std::out_of_range("y: unknown node");
    return VarId{num_x() + j};
  }
  VarId z(int i, int j) const {
    int e = edge_index(i, j);
    if (e < 0) throw std::out_of_range("z: no edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
    return VarId{num_x() + num_y() + e};
  }
  VarId z_of_edge(int e) const { return VarId{num_x() + num_y() + e}; }

  VarInfo info(VarId v) const {
    int k = v.index;
    if (k < 0 || k >= num_vars()) throw std::out_of_range("unknown variable");
    if (k < num_x()) return {VarKind::X, k, -1};
    if (k < num_x() + num_y()) return {VarKind::Y, -1, k - num_x()};
    const auto& e = edges_[k - num_x() - num_y()];
    return {VarKind::Z, e.first, e.second};
  }

  const std::string& x_name(int i) const { return x_names_.at(i); }
  const std::string& y_name(int j) const { return y_names_.at(j); }
  const std::vector<std::string>& x_names() const { return x_names_; }
  const std::vector<std::string>& y_names() const { return y_names_; }

  std::string var_name(VarId v) const {
    VarInfo in = info(v);
    switch (in.kind) {
      case VarKind::X: return "x:" + x_names_[in.i];
      case VarKind::Y: return "y:" + y_names_[in.j];
      case VarKind::Z: return "z:" + x_names_[in.i] + ":" + y_names_[in.j];
    }
    return {};
  }

  VarId parse_var(std::string_view text) const {
    auto fail = [&] { return std::invalid_argument("unknown variable '" + std::string(text) + "'"); };
    if (text.size() < 3 || text[1] != ':') throw fail();
    std::string rest(text.substr(2));
    if (text[0] == 'x') return x(find_x(rest));
    if (text[0] == 'y') return y(find_y(rest));
    if (text[0] == 'z') {
      auto c = rest.find(':');
      if (c == std::string::npos) throw fail();
      return z(find_x(rest.substr(0, c)), find_y(rest.substr(c + 1)));
    }
    throw fail();
  }

  int find_x(const std::string& name) const {
    auto it = std::find(x_names_.begin(), x_names_.end(), name);
    if (it == x_names_.end()) throw std::invalid_argument("unknown X node " + name);
    return static_cast<int>(it - x_names_.begin());
  }
  int find_y(const std::string& name) const {
    auto it = std::find(y_names_.begin(), y_names_.end(), name);
    if (it == y_names_.end()) throw std::invalid_argument("unknown Y node " + name);
    return static_cast<int>(it - y_names_.begin());
  }

  bool operator==(const Instance& o) const {
    return x_names_ == o.x_names_ && y_names_ == o.y_names_ && subsets_ == o.subsets_ && edges_ == o.edges_;
  }

 private:
  void finish(std::vector<std::pair<int, int>> e) {
    std::sort(e.begin(), e.end());
    if (std::adjacent_find(e.begin(), e.end()) != e.end())
      throw std::invalid_argument("build_instance: duplicate edge");
    edges_ = std::move(e);
    edge_id_.assign(static_cast<std::size_t>(num_x()) * num_y(), -1);
    x_adj_.assign(num_x(), {});
    y_adj_.assign(num_y(), {});
    for (int k = 0; k < num_edges(); ++k) {
      auto [i, j] = edges_[k];
      edge_id_[static_cast<std::size_t>(i) * num_y() + j] = k;
      x_adj_[i].push_back(j);
      y_adj_[j].push_back(i);
    }
  }

  std::vector<std::string> x_names_, y_names_;
  std::vector<std::vector<int>> subsets_;
  std::vector<int> subset_of_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> edge_id_;
  std::vector<std::vector<int>> x_adj_, y_adj_;
  bool complete_spec_ = true;
};

// Total mapping VarId -> value over an instance's universe.
template <class T>
struct BasicPoint {
  std::vector<T> values;

  BasicPoint() = default;
  explicit BasicPoint(const Instance& inst) : values(inst.num_vars(), T(0)) {}
  explicit BasicPoint(std::vector<T> v) : values(std::move(v)) {}

  T& operator[](VarId v) { return values.at(v.index); }
  const T& operator[](VarId v) const { return values.at(v.index); }
  std::size_t size() const { return values.size(); }
  bool operator==(const BasicPoint&) const = default;
};

using Point = BasicPoint<double>;
using RationalPoint = BasicPoint<Rational>;

inline RationalPoint to_rational(const Point& p) {
  RationalPoint r;
  r.values.reserve(p.size());
  for (double v : p.values) r.values.push_back(to_rational(v));
  return r;
}

inline Point to_double(const RationalPoint& p) {
  Point r;
  r.values.reserve(p.size());
  for (const auto& v : p.values) r.values.push_back(v.get_d());
  return r;
}

enum class Sense : std::uint8_t { LE, GE, EQ };

inline const char* sense_symbol(Sense s) {
  switch (s) {
    case Sense::LE: return "<=";
    case Sense::GE: return ">=";
    case Sense::EQ: return "=";
  }
  return "?";
}

inline Sense parse_sense(const std::string& s) {
  if (s == "<=") return Sense::LE;
  if (s == ">=") return Sense::GE;
  if (s == "=" || s == "==") return Sense::EQ;
  throw std::invalid_argument("unknown sense '" + s + "'");
}

struct Term {
  VarId var;
  double coef;
  bool operator==(const Term&) const = default;
};

// Sparse a^T(x,y,z) {<=,>=,=} b. Terms are kept sorted by variable with no zeros.
class LinearConstraint {
 public:
  LinearConstraint() = default;
  LinearConstraint(std::vector<Term> terms, Sense sense, double rhs, std::string tag = {})
      : sense_(sense), rhs_(rhs), tag_(std::move(tag)) {
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    for (const Term& t : terms) {
      if (!terms_.empty() && terms_.back().var == t.var)
        terms_.back().coef += t.coef;
      else
        terms_.push_back(t);
    }
    std::erase_if(terms_, [](const Term& t) { return t.coef == 0.0; });
  }

  const std::vector<Term>& terms() const { return terms_; }
  Sense sense() const { return sense_; }
  double rhs() const { return rhs_; }
  const std::string& tag() const { return tag_; }

  LinearConstraint with_tag(std::string tag) const {
    LinearConstraint c = *this;
    c.tag_ = std::move(tag);
    return c;
  }

  double coef(VarId v) const {
    auto it = std::lower_bound(terms_.begin(), terms_.end(), v, [](const Term& t, VarId w) { return t.var < w; });
    return (it != terms_.end() && it->var == v) ? it->coef : 0.0;
  }

  template <class T>
  T lhs(const BasicPoint<T>& p) const {
    T s(0);
    for (const Term& t : terms_) s += NumTraits<T>::from(t.coef) * p[t.var];
    return s;
  }

  // Positive when violated; for EQ the absolute residual.
  template <class T>
  T violation(const BasicPoint<T>& p) const {
    T l = lhs(p);
    T b = NumTraits<T>::from(rhs_);
    switch (sense_) {
      case Sense::LE: return l - b;
      case Sense::GE: return b - l;
      case Sense::EQ: return l >= b ? T(l - b) : T(b - l);
    }
    return T(0);
  }

  template <class T>
  bool satisfied(const BasicPoint<T>& p, double tol = 0.0) const {
    return violation(p) <= NumTraits<T>::from(tol);
  }

  // GE rows negated into LE; LE and EQ unchanged.
  LinearConstraint normalized() const {
    if (sense_ != Sense::GE) return *this;
    LinearConstraint c = *this;
    for (Term& t : c.terms_) t.coef = -t.coef;
    c.rhs_ = -rhs_ + 0.0;  // no negative zero in keys
    c.sense_ = Sense::LE;
    return c;
  }

  // Identity of the half-space, independent of tag and of GE/LE orientation.
  std::string canonical_key() const {
    LinearConstraint n = normalized();
    std::ostringstream os;
    os.precision(17);
    os << sense_symbol(n.sense_) << ' ' << n.rhs_;
    for (const Term& t : n.terms_) os << ' ' << t.var.index << ':' << t.coef;
    return os.str();
  }

  // Same half-space (tags ignored).
  bool same_as(const LinearConstraint& o) const { return canonical_key() == o.canonical_key(); }

  bool operator==(const LinearConstraint& o) const {
    return terms_ == o.terms_ && sense_ == o.sense_ && rhs_ == o.rhs_;
  }

  std::string to_string(const Instance& inst) const {
    std::ostringstream os;
    bool first = true;
    for (const Term& t : terms_) {
      os << (first ? "" : " ") << (t.coef < 0 ? "-" : (first ? "" : "+"));
      if (std::abs(t.coef) != 1.0) os << std::abs(t.coef) << "*";
      os << inst.var_name(t.var);
      first = false;
    }
    if (first) os << "0";
    os << ' ' << sense_symbol(sense_) << ' ' << rhs_;
    return os.str();
  }

 private:
  std::vector<Term> terms_;
  Sense sense_ = Sense::LE;
  double rhs_ = 0.0;
  std::string tag_;
};

// Accumulates terms keyed by variable before freezing into a constraint.
class ConstraintBuilder {
 public:
  ConstraintBuilder& add(VarId v, double c) {
    if (c != 0.0) terms_.push_back({v, c});
    return *this;
  }
  LinearConstraint build(Sense s, double rhs, std::string tag = {}) const {
    return LinearConstraint(terms_, s, rhs, std::move(tag));
  }

 private:
  std::vector<Term> terms_;
};

inline std::vector<NodeId> neighbourhood(const Instance& inst, NodeId v) {
  std::vector<NodeId> out;
  if (v.side == Side::X) {
    if (v.index < 0 || v.index >= inst.num_x()) throw std::out_of_range("neighbourhood: unknown node");
    for (int j : inst.x_neighbours(v.index)) out.push_back({Side::Y, j});
  } else {
    if (v.index < 0 || v.index >= inst.num_y()) throw std::out_of_range("neighbourhood: unknown node");
    for (int i : inst.y_neighbours(v.index)) out.push_back({Side::X, i});
  }
  return out;
}

inline bool is_subset_uniform(const Instance& inst) {
  for (const auto& s : inst.subsets())
    for (int i : s)
      if (inst.x_neighbours(i) != inst.x_neighbours(s.front())) return false;
  return true;
}

// Merged graph on subsets + Y nodes. Node ids: subsets 0..k-1, then Y nodes k..k+|Y|-1.
struct DepGraph {
  int num_subsets = 0;
  int num_y = 0;
  std::vector<std::pair<int, int>> edges;  // (subset, j), sorted
  std::vector<std::vector<int>> adj;       // over merged node ids, ascending

  int num_nodes() const { return num_subsets + num_y; }
  int subset_node(int k) const { return k; }
  int y_node(int j) const { return num_subsets + j; }
  bool is_y_node(int v) const { return v >= num_subsets; }

  bool is_acyclic() const {
    // A forest iff |E| = |V| - #components.
    std::vector<int> parent(num_nodes());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    for (auto [k, j] : edges) {
      int a = find(subset_node(k)), b = find(y_node(j));
      if (a == b) return false;
      parent[a] = b;
    }
    return true;
  }

  bool has_edge(int k, int j) const {
    return std::binary_search(edges.begin(), edges.end(), std::make_pair(k, j));
  }
};

inline DepGraph dependency_graph(const Instance& inst) {
  if (!is_subset_uniform(inst)) throw std::invalid_argument("dependency_graph: instance is not subset-uniform");
  DepGraph g;
  g.num_subsets = inst.num_subsets();
  g.num_y = inst.num_y();
  g.adj.assign(g.num_nodes(), {});
  for (int k = 0; k < inst.num_subsets(); ++k)
    for (int j : inst.x_neighbours(inst.subset(k).front())) g.edges.emplace_back(k, j);
  std::sort(g.edges.begin(), g.edges.end());
  for (auto [k, j] : g.edges) {
    g.adj[g.subset_node(k)].push_back(g.y_node(j));
    g.adj[g.y_node(j)].push_back(g.subset_node(k));
  }
  for (auto& a : g.adj) std::sort(a.begin(), a.end());
  return g;
}

inline std::set<int> y_support(const LinearConstraint& c, const Instance& inst) {
  std::set<int> out;
  for (const Term& t : c.terms()) {
    VarInfo in = inst.info(t.var);
    if (in.kind != VarKind::X) out.insert(in.j);
  }
  return out;
}

namespace fixtures {

inline Instance inst_a() { return Instance::build({{"i1", "i2"}, {"i3"}}, {"j1", "j2"}, EdgeSpec::complete_graph()); }
inline Instance inst_b() { return Instance::build({{"i1", "i2"}}, {"j1"}, EdgeSpec::complete_graph()); }
inline Instance inst_c() {
  return Instance::build({{"i1", "i2"}, {"i3"}}, {"j1", "j2"},
                         EdgeSpec::list({{"i1", "j1"}, {"i2", "j1"}, {"i3", "j1"}, {"i3", "j2"}}));
}

}  // namespace fixtures

}  // namespace bqpmc
