#pragma once

// Test-side reference implementations. Deliberately share nothing with the
// library beyond the Graph accessors: adjacency matrices, recursive DFS and
// plain subset loops.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <utility>
#include <vector>

#include "resil/graph.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<char>>;

inline Matrix adjacency(const resil::Graph& g) {
  const int n = g.node_count();
  Matrix a(n, std::vector<char>(n, 0));
  for (const auto& [i, j] : g.edges()) a[i][j] = a[j][i] = 1;
  return a;
}

struct Score {
  int removed = 0;
  int largest = 0;
  int count = 0;
  int rupture() const { return -removed - largest + count; }
  bool is_cut(int n) const { return count >= 2 || n - removed == 1; }
};

/// Component label per node (-1 for removed) by recursive DFS.
inline std::vector<int> labels(const Matrix& a, const std::vector<char>& removed) {
  const int n = static_cast<int>(a.size());
  std::vector<int> lab(n, -1);
  int next = 0;
  std::function<void(int)> dfs = [&](int v) {
    for (int w = 0; w < n; ++w)
      if (a[v][w] && !removed[w] && lab[w] < 0) {
        lab[w] = lab[v];
        dfs(w);
      }
  };
  for (int v = 0; v < n; ++v) {
    if (removed[v] || lab[v] >= 0) continue;
    lab[v] = next++;
    dfs(v);
  }
  return lab;
}

inline Score score(const Matrix& a, const std::vector<char>& removed) {
  const std::vector<int> lab = labels(a, removed);
  Score s;
  std::vector<int> size;
  for (size_t v = 0; v < lab.size(); ++v) {
    if (removed[v]) {
      ++s.removed;
      continue;
    }
    if (lab[v] >= static_cast<int>(size.size())) size.resize(lab[v] + 1, 0);
    ++size[lab[v]];
  }
  s.count = static_cast<int>(size.size());
  for (int z : size) s.largest = std::max(s.largest, z);
  return s;
}

struct Worst {
  bool feasible = false;
  int rupture = std::numeric_limits<int>::min();
  std::vector<int> nodes;
};

/// Brute-force worst cut set over subsets of `attackable` within `budget`,
/// same tie-break as the library: larger r, fewer nodes, lexicographic.
inline Worst worst_cut(const resil::Graph& g, double budget, const std::vector<int>& attackable) {
  const Matrix a = adjacency(g);
  const int n = g.node_count();
  const int k = static_cast<int>(attackable.size());
  Worst best;
  for (uint64_t mask = 0; mask < (uint64_t{1} << k); ++mask) {
    std::vector<char> removed(n, 0);
    std::vector<int> nodes;
    double cost = 0.0;
    for (int b = 0; b < k; ++b)
      if ((mask >> b) & 1U) {
        removed[attackable[b]] = 1;
        nodes.push_back(attackable[b]);
        cost += g.attack_cost(attackable[b]);
      }
    if (cost > budget + 1e-9 || static_cast<int>(nodes.size()) >= n) continue;
    std::sort(nodes.begin(), nodes.end());
    const Score s = score(a, removed);
    if (!s.is_cut(n)) continue;
    const int r = s.rupture();
    bool better = !best.feasible || r > best.rupture ||
                  (r == best.rupture && (nodes.size() < best.nodes.size() ||
                                         (nodes.size() == best.nodes.size() && nodes < best.nodes)));
    if (better) {
      best.feasible = true;
      best.rupture = r;
      best.nodes = nodes;
    }
  }
  return best;
}

struct Response {
  int rupture = 0;
  double cost = 0.0;
  int links = 0;
};

/// Brute-force response: every subset of cheapest inter-component links
/// within `budget`, scored on the node graph. With `power`, a link between
/// two components without a generator node needs one of them linked to a
/// component that has one. Minimizes rupture, then cost, then link count.
inline Response best_response(const resil::Graph& g, const std::vector<char>& removed, double budget,
                              bool power = false) {
  const int n = g.node_count();
  const Matrix a = adjacency(g);
  const std::vector<int> lab = labels(a, removed);
  int s = 0;
  for (int v : lab) s = std::max(s, v + 1);
  std::vector<char> gen(s, 0);
  for (int v = 0; v < n; ++v)
    if (lab[v] >= 0 && g.node_class(v) == resil::NodeClass::kGenerator) gen[lab[v]] = 1;
  struct Link {
    int m, k, i, j;
    double cost;
  };
  std::vector<Link> links;
  for (int m = 0; m < s; ++m)
    for (int k = m + 1; k < s; ++k) {
      Link best{m, k, -1, -1, std::numeric_limits<double>::infinity()};
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (!((lab[i] == m && lab[j] == k) || (lab[i] == k && lab[j] == m))) continue;
          const double c = *g.link_cost(i, j);
          if (c < best.cost) best = Link{m, k, i, j, c};
        }
      links.push_back(best);
    }
  Response out;
  bool have = false;
  const int z = static_cast<int>(links.size());
  for (uint64_t mask = 0; mask < (uint64_t{1} << z); ++mask) {
    double cost = 0.0;
    Matrix b = a;
    std::vector<char> linked(z, 0);
    for (int t = 0; t < z; ++t)
      if ((mask >> t) & 1U) {
        cost += links[t].cost;
        b[links[t].i][links[t].j] = b[links[t].j][links[t].i] = 1;
        linked[t] = 1;
      }
    if (cost > budget + 1e-9) continue;
    if (power) {
      bool ok = true;
      for (int t = 0; t < z && ok; ++t) {
        if (!linked[t] || gen[links[t].m] || gen[links[t].k]) continue;
        bool coupled = false;
        for (int u = 0; u < z; ++u)
          if (linked[u] && u != t) {
            const bool touches = links[u].m == links[t].m || links[u].k == links[t].m ||
                                 links[u].m == links[t].k || links[u].k == links[t].k;
            if (touches && (gen[links[u].m] || gen[links[u].k])) coupled = true;
          }
        ok = coupled;
      }
      if (!ok) continue;
    }
    const int r = score(b, removed).rupture();
    const int count = __builtin_popcountll(mask);
    const bool better = !have || r < out.rupture ||
                        (r == out.rupture && (cost < out.cost - 1e-9 ||
                                              (std::abs(cost - out.cost) <= 1e-9 && count < out.links)));
    if (better) {
      have = true;
      out = Response{r, cost, count};
    }
  }
  return out;
}

/// Random connected graph: random tree plus `extra` random edges, unit
/// attack costs and link costs in {1.0, ..., 3.0} on every non-edge.
inline resil::Graph random_graph(std::mt19937_64& rng, int n, int extra) {
  resil::Graph g(n);
  for (int v = 1; v < n; ++v) g.add_edge(v, std::uniform_int_distribution<int>(0, v - 1)(rng));
  for (int t = 0; t < extra; ++t) {
    const int i = std::uniform_int_distribution<int>(0, n - 1)(rng);
    const int j = std::uniform_int_distribution<int>(0, n - 1)(rng);
    if (i != j && !g.has_edge(i, j)) g.add_edge(i, j);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!g.has_edge(i, j)) g.set_link_cost(i, j, std::uniform_int_distribution<int>(10, 30)(rng) / 10.0);
  return g;
}

/// Feasible 0/1 points of sum a_j x_j <= b, as bit masks.
inline std::vector<uint32_t> feasible_points(const std::vector<double>& a, double b) {
  std::vector<uint32_t> out;
  const int n = static_cast<int>(a.size());
  for (uint32_t m = 0; m < (1U << n); ++m) {
    double w = 0.0;
    for (int j = 0; j < n; ++j)
      if ((m >> j) & 1U) w += a[j];
    if (w <= b + 1e-9) out.push_back(m);
  }
  return out;
}

}  // namespace oracle
