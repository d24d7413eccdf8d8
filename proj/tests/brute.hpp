#pragma once

// Exhaustive reference solvers for the flow tests and the acceptance run.

#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "bqpmc/netflow.hpp"
#include "bqpmc/random.hpp"

namespace brute {

// Minimum cost over every integral circulation (odometer over arc flows).
inline double circulation(const bqpmc::Network& n) {
  std::vector<int> f(n.arcs.size(), 0);
  double best = 0.0;
  for (;;) {
    std::vector<int> ex(n.num_nodes, 0);
    double cost = 0.0;
    for (std::size_t a = 0; a < f.size(); ++a) {
      ex[n.arcs[a].from] -= f[a];
      ex[n.arcs[a].to] += f[a];
      cost += f[a] * n.arcs[a].cost;
    }
    bool ok = true;
    for (int v : ex) ok = ok && v == 0;
    if (ok && cost < best) best = cost;
    std::size_t k = 0;
    while (k < f.size() && f[k] == n.arcs[k].capacity) f[k++] = 0;
    if (k == f.size()) return best;
    ++f[k];
  }
}

inline bool is_circulation(const bqpmc::Network& n, const bqpmc::FlowSolution& s) {
  if (s.flow.size() != n.arcs.size()) return false;
  double cost = 0.0;
  for (std::size_t a = 0; a < s.flow.size(); ++a) {
    if (s.flow[a] < 0 || s.flow[a] > n.arcs[a].capacity) return false;
    cost += s.flow[a] * n.arcs[a].cost;
  }
  for (int v : bqpmc::flow_excess(n, s))
    if (v != 0) return false;
  return std::abs(cost - s.cost) < 1e-9;
}

// Random network whose flow space stays small enough to enumerate.
inline bqpmc::Network random_network(bqpmc::SplitMix64& rng, int max_nodes = 8, int max_arcs = 11) {
  int nodes = 2 + static_cast<int>(rng.below(max_nodes - 1));
  int arcs = 1 + static_cast<int>(rng.below(max_arcs));
  bqpmc::Network n(nodes);
  long space = 1;
  for (int a = 0; a < arcs; ++a) {
    int u = static_cast<int>(rng.below(nodes)), v = static_cast<int>(rng.below(nodes));
    if (u == v) continue;
    int cap = 1 + static_cast<int>(rng.below(2));
    if (space * (cap + 1) > 200000) cap = 1;
    if (space * (cap + 1) > 200000) break;
    space *= cap + 1;
    n.add_arc(u, v, cap, static_cast<double>(static_cast<int>(rng.below(11)) - 5));
  }
  return n;
}

inline double assignment(const std::vector<std::vector<double>>& w, int h) {
  const int rows = static_cast<int>(w.size()), cols = static_cast<int>(w[0].size());
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> used(rows, 0);
  auto rec = [&](auto&& self, int c, int left, double val) -> void {
    if (left == 0) {
      best = std::max(best, val);
      return;
    }
    if (cols - c < left) return;
    self(self, c + 1, left, val);
    for (int r = 0; r < rows; ++r)
      if (!used[r]) {
        used[r] = 1;
        self(self, c + 1, left - 1, val + w[r][c]);
        used[r] = 0;
      }
  };
  rec(rec, 0, h, 0.0);
  return best;
}

// Arrow+copying subproblem by enumeration of b, r and each I2 node's target.
inline std::optional<double> integer_mccp(const bqpmc::ArrowCopyData& d) {
  const int n1 = static_cast<int>(d.rho.size()), n2 = static_cast<int>(d.sigma.size()), nj = static_cast<int>(d.beta.size());
  std::optional<double> best;
  for (int bm = 0; bm < (1 << nj); ++bm) {
    if (__builtin_popcount(bm) < d.min_b) continue;
    for (int rm = 1; rm < (1 << n1); ++rm) {
      double base = 0.0;
      for (int j = 0; j < nj; ++j)
        if (bm >> j & 1) base += d.beta[j];
      for (int i = 0; i < n1; ++i)
        if (rm >> i & 1) {
          base += d.rho[i];
          for (int j = 0; j < nj; ++j)
            if (bm >> j & 1) base += d.pi[i][j];
        }
      // target[i] in {-1} U {on j}
      std::vector<int> target(n2, -1);
      for (;;) {
        std::vector<int> got(nj, 0);
        double cost = base;
        for (int i = 0; i < n2; ++i)
          if (target[i] >= 0) {
            ++got[target[i]];
            cost += d.sigma[i] + d.gamma[i][target[i]];
          }
        bool ok = true;
        for (int j = 0; j < nj; ++j)
          if ((bm >> j & 1) && got[j] == 0) ok = false;
        if (ok && (!best || cost < *best)) best = cost;
        int i = 0;
        for (; i < n2; ++i) {
          int t = target[i] + 1;
          while (t < nj && !(bm >> t & 1)) ++t;
          if (t < nj) {
            target[i] = t;
            break;
          }
          target[i] = -1;
        }
        if (i == n2) break;
      }
    }
  }
  return best;
}

inline bqpmc::ArrowCopyData random_mccp(bqpmc::SplitMix64& rng, int max_side = 3) {
  bqpmc::ArrowCopyData d;
  int n1 = 1 + static_cast<int>(rng.below(max_side));
  int n2 = 1 + static_cast<int>(rng.below(max_side));
  int nj = 1 + static_cast<int>(rng.below(max_side + 1));
  auto val = [&] { return std::round(rng.uniform(-2, 2) * 4) / 4; };
  for (int i = 0; i < n1; ++i) {
    d.rho.push_back(val());
    d.pi.emplace_back();
    for (int j = 0; j < nj; ++j) d.pi.back().push_back(val());
  }
  for (int j = 0; j < nj; ++j) d.beta.push_back(val());
  for (int i = 0; i < n2; ++i) {
    d.sigma.push_back(val());
    d.gamma.emplace_back();
    for (int j = 0; j < nj; ++j) d.gamma.back().push_back(val());
  }
  d.min_b = 1 + static_cast<int>(rng.below(2));
  return d;
}

}  // namespace brute
