#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "resil/node_set.hpp"

namespace resil {

/// Tolerance used for every budget comparison (sum of costs <= budget).
inline constexpr double kCostTolerance = 1e-9;

enum class NodeClass { kUnlabeled, kAttackable, kIntact, kGenerator, kHub, kLoad };

std::string_view to_string(NodeClass c);
std::optional<NodeClass> node_class_from_string(std::string_view s);

/// Undirected simple graph with per-node attack costs, optional pairwise
/// link-addition costs (defined for non-edges) and optional node classes.
/// Node indices are zero-based; files and reports use one-based labels.
class Graph {
 public:
  explicit Graph(int n);

  int node_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Throws on self-loops, out-of-range nodes and duplicates.
  void add_edge(int i, int j);
  bool has_edge(int i, int j) const { return adj_[i].contains(j); }
  const NodeSet& neighbors(int i) const { return adj_[i]; }
  int degree(int i) const { return adj_[i].count(); }
  /// Edges as (i, j) with i < j, in insertion order.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

  double attack_cost(int i) const { return attack_cost_[i]; }
  void set_attack_cost(int i, double c);
  const std::vector<double>& attack_costs() const { return attack_cost_; }

  /// Symmetric by construction.
  void set_link_cost(int i, int j, double c);
  std::optional<double> link_cost(int i, int j) const;
  void clear_link_cost(int i, int j);

  NodeClass node_class(int i) const { return class_[i]; }
  void set_node_class(int i, NodeClass c) { class_[i] = c; }

  bool is_connected() const;

 private:
  void check_node(int i) const;

  int n_;
  std::vector<NodeSet> adj_;
  std::vector<std::pair<int, int>> edges_;
  std::vector<double> attack_cost_;
  std::vector<double> link_cost_;  // n*n, NaN where undefined
  std::vector<NodeClass> class_;
};

/// Connected components of the surviving nodes, ordered by smallest member.
struct ComponentPartition {
  std::vector<std::vector<int>> components;

  int count() const { return static_cast<int>(components.size()); }
  int largest_size() const;
  std::vector<int> sizes() const;
  /// Component index per node, -1 for removed nodes.
  std::vector<int> membership(int n) const;
};

struct CutSet {
  NodeSet nodes;
  bool is_cut = false;
};

/// Components of the rupture degree for a fixed removal set X:
/// r = -|X| - m(G-X) + w(G-X).
struct RuptureScore {
  int cut_size = 0;
  int largest = 0;
  int count = 0;
  int rupture = 0;
  bool is_cut = false;

  int resilience() const { return -rupture; }
};

ComponentPartition components(const Graph& g, const NodeSet& removed);

/// Throws kInvalidArgument if `removed` covers every node.
RuptureScore rupture_score(const Graph& g, const NodeSet& removed);

/// Deterministic preference between two scored candidates: larger rupture,
/// then smaller cardinality, then lexicographically smaller sorted nodes.
bool attack_preferred(const RuptureScore& a, std::span<const int> a_nodes,
                      const RuptureScore& b, std::span<const int> b_nodes);

double set_cost(const Graph& g, const NodeSet& nodes);

struct OracleResult {
  bool feasible = false;
  CutSet cut;
  RuptureScore score;
};

inline constexpr int kDefaultEnumerationCap = 22;

/// Exhaustive worst cut set over subsets of `attackable` within `budget`.
/// Refuses (kSizeGuard) when the attackable set exceeds `cap` nodes.
OracleResult worst_cut_oracle(const Graph& g, double budget,
                              const NodeSet& attackable,
                              int cap = kDefaultEnumerationCap);

}  // namespace resil
