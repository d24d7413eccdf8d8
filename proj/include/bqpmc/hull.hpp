#pragma once

#include <algorithm>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bqpmc/core.hpp"
#include "bqpmc/families.hpp"
#include "bqpmc/rational.hpp"
#include "json.hpp"

namespace bqpmc {

// Finite union of half-open intervals [a, b) inside U = [0, 1), kept sorted, non-empty and non-touching.
class IntervalSet {
 public:
  using Piece = std::pair<Rational, Rational>;

  IntervalSet() = default;
  static IntervalSet interval(const Rational& a, const Rational& b) {
    IntervalSet s;
    s.add(a, b);
    return s;
  }
  static IntervalSet unit() { return interval(Rational(0), Rational(1)); }

  const std::vector<Piece>& pieces() const { return pieces_; }
  bool empty() const { return pieces_.empty(); }

  Rational measure() const {
    Rational m(0);
    for (const auto& [a, b] : pieces_) m += b - a;
    return m;
  }

  IntervalSet unite(const IntervalSet& o) const {
    IntervalSet r = *this;
    for (const auto& [a, b] : o.pieces_) r.add(a, b);
    return r;
  }

  IntervalSet intersect(const IntervalSet& o) const {
    IntervalSet r;
    std::size_t i = 0, j = 0;
    while (i < pieces_.size() && j < o.pieces_.size()) {
      Rational lo = std::max(pieces_[i].first, o.pieces_[j].first);
      Rational hi = std::min(pieces_[i].second, o.pieces_[j].second);
      if (lo < hi) r.pieces_.emplace_back(lo, hi);
      if (pieces_[i].second < o.pieces_[j].second) ++i;
      else ++j;
    }
    return r;
  }

  // Complement in U.
  IntervalSet complement() const {
    IntervalSet r;
    Rational at(0);
    for (const auto& [a, b] : pieces_) {
      if (at < a) r.pieces_.emplace_back(at, a);
      at = b;
    }
    if (at < Rational(1)) r.pieces_.emplace_back(at, Rational(1));
    return r;
  }

  bool operator==(const IntervalSet& o) const { return pieces_ == o.pieces_; }

  std::string to_string() const {
    if (pieces_.empty()) return "{}";
    std::ostringstream os;
    for (std::size_t k = 0; k < pieces_.size(); ++k)
      os << (k ? " u " : "") << '[' << pieces_[k].first.get_str() << ',' << pieces_[k].second.get_str() << ')';
    return os.str();
  }

 private:
  void add(Rational a, Rational b) {
    if (a < 0 || b > 1) throw std::invalid_argument("IntervalSet: interval leaves [0,1)");
    if (!(a < b)) return;
    std::vector<Piece> out;
    bool placed = false;
    for (auto& p : pieces_) {
      if (p.second < a) {
        out.push_back(p);
      } else if (b < p.first) {
        if (!placed) {
          out.emplace_back(a, b);
          placed = true;
        }
        out.push_back(p);
      } else {
        a = std::min(a, p.first);
        b = std::max(b, p.second);
      }
    }
    if (!placed) out.emplace_back(a, b);
    std::sort(out.begin(), out.end());
    pieces_ = std::move(out);
  }

  std::vector<Piece> pieces_;
};

// Left-to-right carving: piece r is S n [t_{r-1}, t_r) with measure w_r.
inline std::vector<IntervalSet> match(const IntervalSet& s, const std::vector<Rational>& weights) {
  Rational total(0);
  for (const auto& w : weights) {
    if (w < 0) throw std::invalid_argument("match: negative weight");
    total += w;
  }
  if (total > s.measure()) throw std::invalid_argument("match: weights exceed measure");
  std::vector<IntervalSet> out;
  std::size_t k = 0;
  Rational t(0);
  for (const auto& w : weights) {
    IntervalSet piece;
    Rational need = w;
    while (need > 0) {
      const auto& [a, b] = s.pieces()[k];
      Rational lo = std::max(a, t);
      if (b - lo <= need) {
        piece = piece.unite(IntervalSet::interval(lo, b));
        need -= b - lo;
        t = b;
        ++k;
      } else {
        piece = piece.unite(IntervalSet::interval(lo, lo + need));
        t = lo + need;
        need = 0;
      }
    }
    out.push_back(std::move(piece));
  }
  return out;
}

struct Certificate {
  std::vector<IntervalSet> x;     // per X node
  std::vector<IntervalSet> y;     // per Y node
  std::vector<IntervalSet> edge;  // per edge index
};

struct CertificateCheck {
  bool ok = true;
  std::string failed;  // first failed condition, e.g. "(iv) x:i1 y:j2"
};

// The five set conditions, exactly.
inline CertificateCheck verify_certificate(const Instance& inst, const RationalPoint& h, const Certificate& c) {
  auto fail = [](std::string s) { return CertificateCheck{false, std::move(s)}; };
  if (static_cast<int>(c.x.size()) != inst.num_x() || static_cast<int>(c.y.size()) != inst.num_y() ||
      static_cast<int>(c.edge.size()) != inst.num_edges())
    return fail("malformed certificate");
  for (int i = 0; i < inst.num_x(); ++i)
    if (c.x[i].measure() != h[inst.x(i)]) return fail("(i) " + inst.var_name(inst.x(i)));
  for (int j = 0; j < inst.num_y(); ++j)
    if (c.y[j].measure() != h[inst.y(j)]) return fail("(ii) " + inst.var_name(inst.y(j)));
  for (int e = 0; e < inst.num_edges(); ++e)
    if (c.edge[e].measure() != h[inst.z_of_edge(e)]) return fail("(iii) " + inst.var_name(inst.z_of_edge(e)));
  for (int e = 0; e < inst.num_edges(); ++e) {
    auto [i, j] = inst.edges()[e];
    if (!(c.x[i].intersect(c.y[j]) == c.edge[e])) return fail("(iv) " + inst.var_name(inst.z_of_edge(e)));
  }
  for (const auto& s : inst.subsets())
    for (std::size_t a = 0; a < s.size(); ++a)
      for (std::size_t b = a + 1; b < s.size(); ++b)
        if (!c.x[s[a]].intersect(c.x[s[b]]).empty())
          return fail("(v) " + inst.x_name(s[a]) + " " + inst.x_name(s[b]));
  return {};
}

struct CertifyResult {
  enum class Status { certified, violated, out_of_scope };
  Status status = Status::certified;
  std::optional<Certificate> certificate;
  std::optional<LinearConstraint> violated_row;  // non-membership witness
  std::string message;
};

namespace detail {

inline std::optional<LinearConstraint> first_violated_row(const Instance& inst, const RationalPoint& h) {
  for (const auto& rows : {basic_inequalities(inst), rlt_inequalities(inst)})
    for (const auto& c : rows)
      if (c.violation(h) > 0) return c;
  return std::nullopt;
}

class TreeBuilder {
 public:
  TreeBuilder(const Instance& inst, const RationalPoint& h, const DepGraph& g) : inst_(inst), h_(h), g_(g) {
    cert_.x.assign(inst.num_x(), {});
    cert_.y.assign(inst.num_y(), {});
    cert_.edge.assign(inst.num_edges(), {});
  }

  Certificate run() {
    std::vector<char> seen(g_.num_nodes(), 0);
    seen_ = &seen;
    for (int j = 0; j < g_.num_y; ++j) {
      int v = g_.y_node(j);
      if (seen[v]) continue;
      seen[v] = 1;
      cert_.y[j] = match(IntervalSet::unit(), {h_[inst_.y(j)]}).front();
      for (int c : g_.adj[v])
        if (!seen[c]) traverse(v, c);
    }
    // Subsets outside every tree with a Y node: nodes placed next to each other from 0.
    for (int k = 0; k < g_.num_subsets; ++k) {
      if (seen[g_.subset_node(k)]) continue;
      seen[g_.subset_node(k)] = 1;
      std::vector<Rational> w;
      for (int i : inst_.subset(k)) w.push_back(h_[inst_.x(i)]);
      auto parts = match(IntervalSet::unit(), w);
      for (std::size_t a = 0; a < parts.size(); ++a) cert_.x[inst_.subset(k)[a]] = parts[a];
    }
    return cert_;
  }

 private:
  Rational hz(int i, int j) const { return h_[inst_.z(i, j)]; }

  void traverse(int p, int c) {
    (*seen_)[c] = 1;
    if (!g_.is_y_node(c)) {
      int j = p - g_.num_subsets;
      const auto& nodes = inst_.subset(c);
      std::vector<Rational> w1, w2;
      for (int i : nodes) {
        w1.push_back(hz(i, j));
        w2.push_back(h_[inst_.x(i)] - hz(i, j));
      }
      auto m1 = match(cert_.y[j], w1);                // M1
      auto m2 = match(cert_.y[j].complement(), w2);   // M2
      for (std::size_t a = 0; a < nodes.size(); ++a) {
        cert_.edge[inst_.edge_index(nodes[a], j)] = m1[a];
        cert_.x[nodes[a]] = m1[a].unite(m2[a]);
      }
    } else {
      int j = c - g_.num_subsets;
      const auto& nodes = inst_.subset(p);
      IntervalSet covered, sc;
      Rational rest = h_[inst_.y(j)];
      for (int i : nodes) {
        IntervalSet e = match(cert_.x[i], {hz(i, j)}).front();  // M3
        cert_.edge[inst_.edge_index(i, j)] = e;
        sc = sc.unite(e);
        covered = covered.unite(cert_.x[i]);
        rest -= hz(i, j);
      }
      cert_.y[j] = sc.unite(match(covered.complement(), {rest}).front());  // M4
    }
    for (int r : g_.adj[c])
      if (!(*seen_)[r]) traverse(c, r);
  }

  const Instance& inst_;
  const RationalPoint& h_;
  const DepGraph& g_;
  Certificate cert_;
  std::vector<char>* seen_ = nullptr;
};

// I = {X}: X sets side by side from 0, edge sets left-aligned in S_i, surplus of S_j outside all S_i.
inline Certificate one_subset_certificate(const Instance& inst, const RationalPoint& h) {
  Certificate c;
  c.x.assign(inst.num_x(), {});
  c.y.assign(inst.num_y(), {});
  c.edge.assign(inst.num_edges(), {});
  std::vector<Rational> w;
  for (int i = 0; i < inst.num_x(); ++i) w.push_back(h[inst.x(i)]);
  auto parts = match(IntervalSet::unit(), w);
  for (int i = 0; i < inst.num_x(); ++i) c.x[i] = parts[i];
  for (int j = 0; j < inst.num_y(); ++j) {
    IntervalSet covered, sj;
    Rational rest = h[inst.y(j)];
    for (int i : inst.y_neighbours(j)) {
      int e = inst.edge_index(i, j);
      c.edge[e] = match(c.x[i], {h[inst.z_of_edge(e)]}).front();
      sj = sj.unite(c.edge[e]);
      covered = covered.unite(c.x[i]);
      rest -= h[inst.z_of_edge(e)];
    }
    c.y[j] = sj.unite(match(covered.complement(), {rest}).front());
  }
  return c;
}

}  // namespace detail

// Membership of h in P(G, I) via the set characterization, for subset-uniform instances with
// a cycle-free dependency graph, or for a single subset on any bipartite graph.
inline CertifyResult certify_membership(const Instance& inst, const RationalPoint& h) {
  CertifyResult out;
  if (static_cast<int>(h.size()) != inst.num_vars()) throw std::invalid_argument("certify_membership: point size");
  if (auto row = detail::first_violated_row(inst, h)) {
    out.status = CertifyResult::Status::violated;
    out.violated_row = *row;
    out.message = "violates " + row->tag() + ": " + row->to_string(inst);
    return out;
  }
  if (inst.num_subsets() == 1) {
    out.certificate = detail::one_subset_certificate(inst, h);
    return out;
  }
  if (!is_subset_uniform(inst)) {
    out.status = CertifyResult::Status::out_of_scope;
    out.message = "out of theorem scope: not subset-uniform";
    return out;
  }
  DepGraph g = dependency_graph(inst);
  if (!g.is_acyclic()) {
    out.status = CertifyResult::Status::out_of_scope;
    out.message = "out of theorem scope: dependency graph has a cycle";
    return out;
  }
  out.certificate = detail::TreeBuilder(inst, h, g).run();
  return out;
}

inline nlohmann::ordered_json certificate_to_json(const Instance& inst, const Certificate& c) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  auto put = [&](const std::string& name, const IntervalSet& s) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [a, b] : s.pieces()) arr.push_back({a.get_str(), b.get_str()});
    j[name] = arr;
  };
  for (int i = 0; i < inst.num_x(); ++i) put(inst.var_name(inst.x(i)), c.x[i]);
  for (int y = 0; y < inst.num_y(); ++y) put(inst.var_name(inst.y(y)), c.y[y]);
  for (int e = 0; e < inst.num_edges(); ++e) put(inst.var_name(inst.z_of_edge(e)), c.edge[e]);
  return j;
}

// One line per variable: name followed by its intervals, e.g. "x:i1 [0,1/3) [1/2,3/4)".
inline std::string certificate_to_text(const Instance& inst, const Certificate& c) {
  std::ostringstream os;
  auto line = [&](VarId v, const IntervalSet& s) {
    os << inst.var_name(v);
    for (const auto& [a, b] : s.pieces()) os << " [" << a.get_str() << ',' << b.get_str() << ')';
    os << '\n';
  };
  for (int i = 0; i < inst.num_x(); ++i) line(inst.x(i), c.x[i]);
  for (int j = 0; j < inst.num_y(); ++j) line(inst.y(j), c.y[j]);
  for (int e = 0; e < inst.num_edges(); ++e) line(inst.z_of_edge(e), c.edge[e]);
  return os.str();
}

inline Certificate certificate_from_text(const Instance& inst, const std::string& text) {
  Certificate c;
  c.x.assign(inst.num_x(), {});
  c.y.assign(inst.num_y(), {});
  c.edge.assign(inst.num_edges(), {});
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string name, piece;
    if (!(ls >> name)) continue;
    IntervalSet s;
    while (ls >> piece) {
      auto comma = piece.find(',');
      if (piece.size() < 5 || piece.front() != '[' || piece.back() != ')' || comma == std::string::npos)
        throw std::invalid_argument("certificate: bad interval " + piece);
      s = s.unite(IntervalSet::interval(parse_rational(piece.substr(1, comma - 1)),
                                        parse_rational(piece.substr(comma + 1, piece.size() - comma - 2))));
    }
    VarInfo info = inst.info(inst.parse_var(name));
    switch (info.kind) {
      case VarKind::X: c.x[info.i] = s; break;
      case VarKind::Y: c.y[info.j] = s; break;
      case VarKind::Z: c.edge[inst.edge_index(info.i, info.j)] = s; break;
    }
  }
  return c;
}

}  // namespace bqpmc
