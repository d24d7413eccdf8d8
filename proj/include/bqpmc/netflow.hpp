#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

namespace bqpmc {

struct Arc {
  int from;
  int to;
  int capacity;
  double cost;
};

struct Network {
  int num_nodes = 0;
  std::vector<Arc> arcs;

  explicit Network(int n = 0) : num_nodes(n) {}
  int add_node() { return num_nodes++; }
  int add_arc(int from, int to, int capacity, double cost) {
    if (from < 0 || from >= num_nodes || to < 0 || to >= num_nodes) throw std::out_of_range("add_arc: unknown node");
    if (capacity < 0) throw std::invalid_argument("add_arc: negative capacity");
    if (!std::isfinite(cost)) throw std::invalid_argument("add_arc: non-finite cost");
    arcs.push_back({from, to, capacity, cost});
    return static_cast<int>(arcs.size()) - 1;
  }
};

struct FlowSolution {
  std::vector<int> flow;  // per arc
  double cost = 0.0;
};

// Net outflow minus inflow per node.
inline std::vector<int> flow_excess(const Network& n, const FlowSolution& f) {
  std::vector<int> ex(n.num_nodes, 0);
  for (std::size_t a = 0; a < n.arcs.size(); ++a) {
    ex[n.arcs[a].from] += f.flow[a];
    ex[n.arcs[a].to] -= f.flow[a];
  }
  return ex;
}

namespace detail {

constexpr double kFlowEps = 1e-12;

// Residual view: arc 2a is forward, 2a+1 backward.
class Residual {
 public:
  explicit Residual(const Network& n) : net_(n), flow_(n.arcs.size(), 0), out_(n.num_nodes) {
    for (std::size_t a = 0; a < n.arcs.size(); ++a) {
      out_[n.arcs[a].from].push_back(static_cast<int>(2 * a));
      out_[n.arcs[a].to].push_back(static_cast<int>(2 * a + 1));
    }
  }

  int head(int r) const { const Arc& a = net_.arcs[r / 2]; return r % 2 ? a.from : a.to; }
  int tail(int r) const { const Arc& a = net_.arcs[r / 2]; return r % 2 ? a.to : a.from; }
  int cap(int r) const { return r % 2 ? flow_[r / 2] : net_.arcs[r / 2].capacity - flow_[r / 2]; }
  double cost(int r) const { return r % 2 ? -net_.arcs[r / 2].cost : net_.arcs[r / 2].cost; }
  void push(int r, int amount) { flow_[r / 2] += r % 2 ? -amount : amount; }

  // Bellman-Ford from a virtual root joined to every node; returns residual arcs of a negative cycle.
  std::vector<int> negative_cycle() const {
    int n = net_.num_nodes;
    std::vector<double> dist(n, 0.0);
    std::vector<int> pred(n, -1);
    int last = -1;
    for (int it = 0; it < n; ++it) {
      last = -1;
      for (int u = 0; u < n; ++u)
        for (int r : out_[u]) {
          if (cap(r) <= 0) continue;
          int v = head(r);
          if (dist[u] + cost(r) < dist[v] - kFlowEps) {
            dist[v] = dist[u] + cost(r);
            pred[v] = r;
            last = v;
          }
        }
      if (last < 0) return {};
    }
    int v = last;
    for (int k = 0; k < n; ++k) v = tail(pred[v]);
    std::vector<int> cycle;
    int u = v;
    do {
      cycle.push_back(pred[u]);
      u = tail(pred[u]);
    } while (u != v);
    std::reverse(cycle.begin(), cycle.end());
    return cycle;
  }

  // Shortest s-t path by Bellman-Ford. Rounding can leave a slightly negative residual
  // cycle behind an augmentation; if one shows up in the predecessor graph it is
  // returned in *cycle instead of a path.
  std::optional<std::vector<int>> shortest_path(int s, int t, double* length, std::vector<int>* cycle) const {
    int n = net_.num_nodes;
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, inf);
    std::vector<int> pred(n, -1);
    dist[s] = 0.0;
    for (int it = 0; it < n; ++it) {
      bool changed = false;
      for (int u = 0; u < n; ++u) {
        if (dist[u] == inf) continue;
        for (int r : out_[u]) {
          if (cap(r) <= 0) continue;
          int v = head(r);
          if (dist[u] + cost(r) < dist[v] - kFlowEps) {
            dist[v] = dist[u] + cost(r);
            pred[v] = r;
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (dist[t] == inf) return std::nullopt;
    std::vector<int> path;
    std::vector<char> seen(n, 0);
    for (int v = t; v != s; v = tail(pred[v])) {
      if (seen[v]) {
        int u = v;
        do {
          cycle->push_back(pred[u]);
          u = tail(pred[u]);
        } while (u != v);
        return std::nullopt;
      }
      seen[v] = 1;
      path.push_back(pred[v]);
    }
    std::reverse(path.begin(), path.end());
    *length = dist[t];
    return path;
  }

  FlowSolution solution() const {
    FlowSolution f;
    f.flow = flow_;
    for (std::size_t a = 0; a < flow_.size(); ++a) f.cost += flow_[a] * net_.arcs[a].cost;
    return f;
  }

  void cancel_negative_cycles() {
    for (;;) {
      auto cyc = negative_cycle();
      if (cyc.empty()) return;
      double c = 0.0;
      int amount = INT_MAX;
      for (int r : cyc) {
        c += cost(r);
        amount = std::min(amount, cap(r));
      }
      if (c >= -kFlowEps || amount <= 0) return;
      for (int r : cyc) push(r, amount);
    }
  }

 private:
  const Network& net_;
  std::vector<int> flow_;
  std::vector<std::vector<int>> out_;
};

}  // namespace detail

// Minimum-cost circulation by negative-cycle canceling.
inline FlowSolution min_cost_circulation(const Network& n) {
  detail::Residual res(n);
  res.cancel_negative_cycles();
  return res.solution();
}

struct FlowRequest {
  int source = 0;
  int sink = 0;
  int min_amount = 0;
  int max_amount = INT_MAX;
  // When true, keep augmenting past min_amount only while paths have negative cost.
  bool stop_at_nonnegative = true;
};

struct FlowResult {
  FlowSolution solution;
  int amount = 0;
};

// Successive shortest paths on top of a cycle-free residual. Returns nullopt when
// min_amount units cannot be routed.
inline std::optional<FlowResult> min_cost_flow(const Network& n, const FlowRequest& req) {
  detail::Residual res(n);
  res.cancel_negative_cycles();
  int amount = 0;
  int repairs = 0;
  while (amount < req.max_amount) {
    double len = 0.0;
    std::vector<int> cycle;
    auto path = res.shortest_path(req.source, req.sink, &len, &cycle);
    if (!cycle.empty()) {
      if (++repairs > 100000) throw std::runtime_error("min_cost_flow: cycle repair did not terminate");
      int amt = INT_MAX;
      for (int r : cycle) amt = std::min(amt, res.cap(r));
      for (int r : cycle) res.push(r, amt);
      continue;
    }
    if (!path) break;
    bool need = amount < req.min_amount;
    if (!need && req.stop_at_nonnegative && len >= -detail::kFlowEps) break;
    int bottleneck = req.max_amount - amount;
    for (int r : *path) bottleneck = std::min(bottleneck, res.cap(r));
    if (!(len < -detail::kFlowEps) || !req.stop_at_nonnegative) {
      if (need) bottleneck = std::min(bottleneck, req.min_amount - amount);
    }
    if (bottleneck <= 0) break;
    for (int r : *path) res.push(r, bottleneck);
    amount += bottleneck;
  }
  if (amount < req.min_amount) return std::nullopt;
  return FlowResult{res.solution(), amount};
}

struct Assignment {
  std::vector<std::pair<int, int>> pairs;  // (row, column), by column
  double value = 0.0;
};

// Maximum-weight matching of exactly h pairs in a rows x columns weight table.
inline Assignment h_cardinality_assignment(const std::vector<std::vector<double>>& weight, int h) {
  int rows = static_cast<int>(weight.size());
  int cols = rows ? static_cast<int>(weight[0].size()) : 0;
  if (h < 0 || h > rows || h > cols) throw std::invalid_argument("h_cardinality_assignment: infeasible h");
  Network net(rows + cols + 2);
  int s = rows + cols, t = s + 1;
  for (int r = 0; r < rows; ++r) net.add_arc(s, r, 1, 0.0);
  std::vector<int> pair_arc;
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(weight[r].size()) != cols) throw std::invalid_argument("h_cardinality_assignment: ragged table");
    for (int c = 0; c < cols; ++c) pair_arc.push_back(net.add_arc(r, rows + c, 1, -weight[r][c]));
  }
  for (int c = 0; c < cols; ++c) net.add_arc(rows + c, t, 1, 0.0);
  auto res = min_cost_flow(net, FlowRequest{s, t, h, h, false});
  if (!res) throw std::invalid_argument("h_cardinality_assignment: infeasible h");
  Assignment out;
  for (int c = 0; c < cols; ++c)
    for (int r = 0; r < rows; ++r)
      if (res->solution.flow[pair_arc[r * cols + c]] > 0) {
        out.pairs.emplace_back(r, c);
        out.value += weight[r][c];
      }
  return out;
}

// Integer min-cost circulation subproblem of arrow+copying separation. Index sets:
// I1 (the r choices), I2 (flow sources), J (candidate Y nodes, b choices).
struct ArrowCopyData {
  std::vector<double> rho;                 // r_i cost, i in I1
  std::vector<std::vector<double>> pi;     // p_ij cost, i in I1, j in J
  std::vector<double> beta;                // b_j cost, j in J
  std::vector<double> sigma;               // (s,i) arc cost, i in I2
  std::vector<std::vector<double>> gamma;  // (i,j) arc cost, i in I2, j in J
  int min_b = 1;                           // lower bound on sum of b
  long node_limit = 1L << 22;              // branch-and-bound node cap
};

struct IntegerMccpSolution {
  std::vector<int> b;                   // per j
  std::vector<int> r;                   // per i in I1
  std::vector<std::vector<int>> p;      // [i in I1][j]
  std::vector<int> u_si;                // per i in I2
  std::vector<std::vector<int>> u_ij;   // [i in I2][j]
  std::vector<int> u_js;                // per j
  double cost = 0.0;
};

namespace detail {

struct ForcedFlow {
  double cost;
  std::vector<std::vector<int>> u_ij;
};

// Min-cost flow where each forced j receives >= 1 unit, allowed j >= 0, others none.
inline std::optional<ForcedFlow> forced_flow(const ArrowCopyData& d, const std::vector<int>& state) {
  int n2 = static_cast<int>(d.sigma.size());
  int nj = static_cast<int>(d.beta.size());
  int forced = 0;
  double big = 1.0;
  for (double v : d.sigma) big += std::abs(v);
  for (const auto& row : d.gamma)
    for (double v : row) big += std::abs(v);
  Network net(n2 + nj + 2);
  int s = n2 + nj, t = s + 1;
  for (int i = 0; i < n2; ++i) net.add_arc(s, i, 1, d.sigma[i]);
  std::vector<std::vector<int>> arc(n2, std::vector<int>(nj, -1));
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < nj; ++j)
      if (state[j] != 0) arc[i][j] = net.add_arc(i, n2 + j, 1, d.gamma[i][j]);
  for (int j = 0; j < nj; ++j) {
    if (state[j] == 1) {
      ++forced;
      net.add_arc(n2 + j, t, 1, -big);
      if (n2 > 1) net.add_arc(n2 + j, t, n2 - 1, 0.0);
    } else if (state[j] == 2) {
      net.add_arc(n2 + j, t, n2, 0.0);
    }
  }
  if (forced > n2) return std::nullopt;
  auto res = min_cost_flow(net, FlowRequest{s, t, 0, INT_MAX, true});
  ForcedFlow out{res->solution.cost + big * forced, std::vector<std::vector<int>>(n2, std::vector<int>(nj, 0))};
  std::vector<int> got(nj, 0);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < nj; ++j)
      if (arc[i][j] >= 0 && res->solution.flow[arc[i][j]] > 0) {
        out.u_ij[i][j] = 1;
        ++got[j];
      }
  for (int j = 0; j < nj; ++j)
    if (state[j] == 1 && got[j] == 0) return std::nullopt;
  return out;
}

// Best r for fixed coefficients: every negative one, else the single smallest.
inline double best_r(const std::vector<double>& coef, std::vector<int>* r) {
  double sum = 0.0;
  bool any = false;
  for (double c : coef)
    if (c < 0) { sum += c; any = true; }
  if (r) r->assign(coef.size(), 0);
  if (any) {
    if (r)
      for (std::size_t i = 0; i < coef.size(); ++i) (*r)[i] = coef[i] < 0;
    return sum;
  }
  auto it = std::min_element(coef.begin(), coef.end());
  if (r) (*r)[it - coef.begin()] = 1;
  return *it;
}

}  // namespace detail

// Depth-first branch-and-bound over b (value 1 first); r in closed form; flow by min-cost flow.
inline std::optional<IntegerMccpSolution> solve_integer_mccp(const ArrowCopyData& d) {
  const int n1 = static_cast<int>(d.rho.size());
  const int n2 = static_cast<int>(d.sigma.size());
  const int nj = static_cast<int>(d.beta.size());
  if (n1 == 0) throw std::invalid_argument("solve_integer_mccp: empty I1");
  if (static_cast<int>(d.pi.size()) != n1 || static_cast<int>(d.gamma.size()) != n2)
    throw std::invalid_argument("solve_integer_mccp: malformed data");
  if (d.min_b > std::min(nj, n2)) return std::nullopt;

  std::vector<int> state(nj, 2);  // 0 = off, 1 = on, 2 = free
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_state;
  long nodes = 0;

  auto r_coef = [&](bool optimistic) {
    std::vector<double> coef(d.rho);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < nj; ++j) {
        if (state[j] == 1) coef[i] += d.pi[i][j];
        else if (state[j] == 2 && optimistic) coef[i] += std::min(0.0, d.pi[i][j]);
      }
    return coef;
  };

  auto bound = [&](bool leaf) -> std::optional<double> {
    int on = 0, free = 0;
    double val = 0.0;
    for (int j = 0; j < nj; ++j) {
      if (state[j] == 1) { ++on; val += d.beta[j]; }
      else if (state[j] == 2) { ++free; val += std::min(0.0, d.beta[j]); }
    }
    if (on + free < d.min_b || on > n2) return std::nullopt;
    std::vector<double> coef = r_coef(!leaf);
    if (leaf) {
      val += detail::best_r(coef, nullptr);
    } else {
      double neg = 0.0;
      for (double c : coef) neg += std::min(0.0, c);
      val += neg < 0 ? neg : *std::min_element(coef.begin(), coef.end());
    }
    auto f = detail::forced_flow(d, state);
    if (!f) return std::nullopt;
    return val + f->cost;
  };

  auto dfs = [&](auto&& self, int j) -> void {
    if (++nodes > d.node_limit) throw std::runtime_error("solve_integer_mccp: branch-and-bound node limit exceeded");
    if (j == nj) {
      auto v = bound(true);
      if (v && *v < best - 1e-12) {
        best = *v;
        best_state = state;
      }
      return;
    }
    auto lb = bound(false);
    if (!lb || *lb >= best - 1e-12) return;
    for (int val : {1, 0}) {
      state[j] = val;
      self(self, j + 1);
    }
    state[j] = 2;
  };
  dfs(dfs, 0);
  if (best_state.empty()) return std::nullopt;

  state = best_state;
  IntegerMccpSolution sol;
  sol.b = state;
  detail::best_r(r_coef(false), &sol.r);
  sol.p.assign(n1, std::vector<int>(nj, 0));
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < nj; ++j) sol.p[i][j] = sol.r[i] * sol.b[j];
  auto f = detail::forced_flow(d, state);
  sol.u_ij = f->u_ij;
  sol.u_si.assign(n2, 0);
  sol.u_js.assign(nj, 0);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < nj; ++j)
      if (sol.u_ij[i][j]) {
        sol.u_si[i] += 1;
        sol.u_js[j] += 1;
      }
  sol.cost = 0.0;
  for (int i = 0; i < n1; ++i) {
    sol.cost += sol.r[i] * d.rho[i];
    for (int j = 0; j < nj; ++j) sol.cost += sol.p[i][j] * d.pi[i][j];
  }
  for (int j = 0; j < nj; ++j) sol.cost += sol.b[j] * d.beta[j];
  for (int i = 0; i < n2; ++i) {
    sol.cost += sol.u_si[i] * d.sigma[i];
    for (int j = 0; j < nj; ++j) sol.cost += sol.u_ij[i][j] * d.gamma[i][j];
  }
  return sol;
}

}  // namespace bqpmc
