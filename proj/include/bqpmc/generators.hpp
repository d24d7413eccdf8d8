#pragma once

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bqpmc/core.hpp"
#include "bqpmc/random.hpp"
#include "bqpmc/rational.hpp"

namespace bqpmc {

// One coefficient per variable in VarId order, uniform on [lo, hi), from a fresh SplitMix64(seed).
inline std::vector<double> uniform_objective(const Instance& inst, double lo, double hi, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<double> obj(inst.num_vars());
  for (auto& v : obj) v = rng.uniform(lo, hi);
  return obj;
}

// Integer coefficients in [lo, hi]; exact in both double and rational solves.
inline std::vector<double> integer_objective(const Instance& inst, SplitMix64& rng, int lo, int hi) {
  std::vector<double> obj(inst.num_vars());
  for (auto& v : obj) v = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
  return obj;
}

// "5x5" -> {5,5,5,5,5}; "1,2,3" -> {1,2,3}.
inline std::vector<int> parse_subset_sizes(const std::string& spec) {
  std::vector<int> out;
  auto positive = [&](const std::string& s) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || v <= 0) throw std::invalid_argument("bad subset sizes: " + spec);
    return v;
  };
  if (auto x = spec.find('x'); x != std::string::npos) {
    int count = positive(spec.substr(0, x)), size = positive(spec.substr(x + 1));
    out.assign(count, size);
    return out;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(positive(tok));
  if (out.empty()) throw std::invalid_argument("bad subset sizes: " + spec);
  return out;
}

// Subset-uniform instance whose dependency graph is a random forest; at most max_x X nodes, 1..max_y Y nodes.
inline Instance random_tree_instance(SplitMix64& rng, int max_x = 8, int max_y = 4) {
  int nx = 2 + static_cast<int>(rng.below(max_x - 1));
  int ny = 1 + static_cast<int>(rng.below(max_y));
  std::vector<int> sizes;
  for (int left = nx; left > 0;) {
    int s = 1 + static_cast<int>(rng.below(std::min(left, 3)));
    sizes.push_back(s);
    left -= s;
  }
  int ns = static_cast<int>(sizes.size());
  std::vector<std::pair<int, int>> cand;
  for (int k = 0; k < ns; ++k)
    for (int j = 0; j < ny; ++j) cand.emplace_back(k, j);
  for (std::size_t a = cand.size(); a > 1; --a) std::swap(cand[a - 1], cand[rng.below(a)]);
  std::vector<int> parent(ns + ny);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<int> first(ns, 0);
  for (int k = 1; k < ns; ++k) first[k] = first[k - 1] + sizes[k - 1];
  std::vector<std::pair<int, int>> edges;
  for (auto [k, j] : cand) {
    int a = find(k), b = find(ns + j);
    if (a == b || !rng.coin(0.8)) continue;
    parent[a] = b;
    for (int t = 0; t < sizes[k]; ++t) edges.emplace_back(first[k] + t, j);
  }
  std::sort(edges.begin(), edges.end());
  return Instance::from_sizes(sizes, ny, &edges);
}

// I = {X} on a random bipartite graph that is never complete.
inline Instance random_one_subset_instance(SplitMix64& rng, int max_x = 6, int max_y = 4) {
  int nx = 2 + static_cast<int>(rng.below(max_x - 1));
  int ny = 1 + static_cast<int>(rng.below(max_y));
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      if (rng.coin(0.6)) edges.emplace_back(i, j);
  if (static_cast<int>(edges.size()) == nx * ny) edges.erase(edges.begin() + rng.below(edges.size()));
  return Instance::from_sizes({nx}, ny, &edges);
}

// Random convex combination of `count` vertices with weights w_k / sum(w).
inline RationalPoint random_hull_point(const std::vector<Point>& vertices, SplitMix64& rng, int count) {
  if (vertices.empty()) throw std::invalid_argument("random_hull_point: no vertices");
  std::vector<long> w(count);
  long total = 0;
  for (auto& x : w) total += x = 1 + static_cast<long>(rng.below(20));
  RationalPoint p(std::vector<Rational>(vertices.front().size(), Rational(0)));
  for (int k = 0; k < count; ++k) {
    const Point& v = vertices[rng.below(vertices.size())];
    Rational lambda{mpz_class(w[k]), mpz_class(total)};
    lambda.canonicalize();
    for (std::size_t c = 0; c < v.size(); ++c)
      if (v.values[c] != 0) p.values[c] += lambda;
  }
  return p;
}

}  // namespace bqpmc
