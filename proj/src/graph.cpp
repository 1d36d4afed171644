#include "resil/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "resil/error.hpp"

namespace resil {

namespace {

constexpr double kUndefined = std::numeric_limits<double>::quiet_NaN();

// Visits the components of G - removed in order of smallest member; `visit`
// receives each component as a NodeSet.
template <typename F>
void scan_components(const Graph& g, const NodeSet& removed, F&& visit) {
  const int n = g.node_count();
  NodeSet unvisited = NodeSet::full(n);
  unvisited -= removed;
  std::vector<int> queue;
  queue.reserve(n);
  while (!unvisited.empty()) {
    const int seed = unvisited.first();
    NodeSet comp(n);
    comp.insert(seed);
    unvisited.erase(seed);
    queue.clear();
    queue.push_back(seed);
    for (size_t head = 0; head < queue.size(); ++head) {
      NodeSet fresh = g.neighbors(queue[head]);
      fresh &= unvisited;
      if (fresh.empty()) continue;
      unvisited -= fresh;
      comp |= fresh;
      fresh.for_each([&](int v) { queue.push_back(v); });
    }
    visit(comp, static_cast<int>(queue.size()));
  }
}

}  // namespace

std::string_view to_string(NodeClass c) {
  switch (c) {
    case NodeClass::kUnlabeled: return "unlabeled";
    case NodeClass::kAttackable: return "attackable";
    case NodeClass::kIntact: return "intact";
    case NodeClass::kGenerator: return "generator";
    case NodeClass::kHub: return "hub";
    case NodeClass::kLoad: return "load";
  }
  return "unlabeled";
}

std::optional<NodeClass> node_class_from_string(std::string_view s) {
  for (NodeClass c : {NodeClass::kUnlabeled, NodeClass::kAttackable, NodeClass::kIntact,
                      NodeClass::kGenerator, NodeClass::kHub, NodeClass::kLoad}) {
    if (to_string(c) == s) return c;
  }
  return std::nullopt;
}

Graph::Graph(int n)
    : n_(n),
      adj_(n > 0 ? n : 0, NodeSet(n > 0 ? n : 0)),
      attack_cost_(n > 0 ? n : 0, 1.0),
      link_cost_(n > 0 ? static_cast<size_t>(n) * n : 0, kUndefined),
      class_(n > 0 ? n : 0, NodeClass::kUnlabeled) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "graph needs at least one node");
}

void Graph::check_node(int i) const {
  if (i < 0 || i >= n_)
    fail(ErrorCode::kInvalidArgument, "node " + std::to_string(i + 1) + " out of range");
}

void Graph::add_edge(int i, int j) {
  check_node(i);
  check_node(j);
  if (i == j) fail(ErrorCode::kInvalidArgument, "self-loop at node " + std::to_string(i + 1));
  if (has_edge(i, j))
    fail(ErrorCode::kInvalidArgument,
         "duplicate edge " + std::to_string(i + 1) + "-" + std::to_string(j + 1));
  adj_[i].insert(j);
  adj_[j].insert(i);
  edges_.emplace_back(std::min(i, j), std::max(i, j));
}

void Graph::set_attack_cost(int i, double c) {
  check_node(i);
  if (!(c >= 0.0)) fail(ErrorCode::kInvalidArgument, "attack cost must be nonnegative");
  attack_cost_[i] = c;
}

void Graph::set_link_cost(int i, int j, double c) {
  check_node(i);
  check_node(j);
  if (i == j) fail(ErrorCode::kInvalidArgument, "link cost on the diagonal");
  if (!(c >= 0.0) || !std::isfinite(c))
    fail(ErrorCode::kInvalidArgument, "link cost must be finite and nonnegative");
  link_cost_[static_cast<size_t>(i) * n_ + j] = c;
  link_cost_[static_cast<size_t>(j) * n_ + i] = c;
}

void Graph::clear_link_cost(int i, int j) {
  link_cost_[static_cast<size_t>(i) * n_ + j] = kUndefined;
  link_cost_[static_cast<size_t>(j) * n_ + i] = kUndefined;
}

std::optional<double> Graph::link_cost(int i, int j) const {
  const double c = link_cost_[static_cast<size_t>(i) * n_ + j];
  if (std::isnan(c)) return std::nullopt;
  return c;
}

bool Graph::is_connected() const {
  int count = 0;
  scan_components(*this, NodeSet(n_), [&](const NodeSet&, int) { ++count; });
  return count == 1;
}

int ComponentPartition::largest_size() const {
  size_t m = 0;
  for (const auto& c : components) m = std::max(m, c.size());
  return static_cast<int>(m);
}

std::vector<int> ComponentPartition::sizes() const {
  std::vector<int> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(static_cast<int>(c.size()));
  return out;
}

std::vector<int> ComponentPartition::membership(int n) const {
  std::vector<int> m(n, -1);
  for (size_t c = 0; c < components.size(); ++c)
    for (int v : components[c]) m[v] = static_cast<int>(c);
  return m;
}

ComponentPartition components(const Graph& g, const NodeSet& removed) {
  ComponentPartition p;
  scan_components(g, removed,
                  [&](const NodeSet& comp, int) { p.components.push_back(comp.to_vector()); });
  return p;
}

RuptureScore rupture_score(const Graph& g, const NodeSet& removed) {
  RuptureScore s;
  s.cut_size = removed.count();
  if (s.cut_size >= g.node_count())
    fail(ErrorCode::kInvalidArgument, "removal set covers every node");
  scan_components(g, removed, [&](const NodeSet&, int size) {
    ++s.count;
    s.largest = std::max(s.largest, size);
  });
  s.rupture = -s.cut_size - s.largest + s.count;
  // Definition of a cut set: G - X disconnected, or a single vertex left.
  s.is_cut = s.count >= 2 || g.node_count() - s.cut_size == 1;
  return s;
}

bool attack_preferred(const RuptureScore& a, std::span<const int> a_nodes,
                      const RuptureScore& b, std::span<const int> b_nodes) {
  if (a.rupture != b.rupture) return a.rupture > b.rupture;
  if (a_nodes.size() != b_nodes.size()) return a_nodes.size() < b_nodes.size();
  return std::lexicographical_compare(a_nodes.begin(), a_nodes.end(), b_nodes.begin(),
                                      b_nodes.end());
}

double set_cost(const Graph& g, const NodeSet& nodes) {
  double c = 0.0;
  nodes.for_each([&](int v) { c += g.attack_cost(v); });
  return c;
}

OracleResult worst_cut_oracle(const Graph& g, double budget, const NodeSet& attackable,
                              int cap) {
  const std::vector<int> items = attackable.to_vector();
  const int k = static_cast<int>(items.size());
  if (k > cap || k > 62)
    fail(ErrorCode::kSizeGuard, "enumeration oracle refuses " + std::to_string(k) +
                                    " attackable nodes (cap " + std::to_string(cap) + ")");
  OracleResult best;
  std::vector<int> best_nodes;
  const int n = g.node_count();
  const uint64_t limit = uint64_t{1} << k;
  for (uint64_t mask = 0; mask < limit; ++mask) {
    double cost = 0.0;
    int size = 0;
    for (int b = 0; b < k; ++b) {
      if ((mask >> b) & 1U) {
        cost += g.attack_cost(items[b]);
        ++size;
      }
    }
    if (cost > budget + kCostTolerance || size >= n) continue;
    NodeSet removed(n);
    for (int b = 0; b < k; ++b)
      if ((mask >> b) & 1U) removed.insert(items[b]);
    const RuptureScore s = rupture_score(g, removed);
    if (!s.is_cut) continue;
    const std::vector<int> nodes = removed.to_vector();
    if (!best.feasible || attack_preferred(s, nodes, best.score, best_nodes)) {
      best.feasible = true;
      best.cut = CutSet{removed, true};
      best.score = s;
      best_nodes = nodes;
    }
  }
  return best;
}

}  // namespace resil
