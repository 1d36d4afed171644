#pragma once

#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "resil/attack.hpp"
#include "resil/graph.hpp"

namespace resil {

inline constexpr double kUnlimitedBudget = std::numeric_limits<double>::infinity();

/// Cheapest inter-component link for every pair of post-attack components.
/// Components are zero-based here; endpoint(m, n) returns (i, j) with
/// i in component m and j in component n.
struct MceicMatrix {
  int size = 0;
  std::vector<double> cost;                    // size*size, NaN on the diagonal
  std::vector<std::pair<int, int>> endpoints;  // size*size

  double at(int m, int n) const { return cost[static_cast<size_t>(m) * size + n]; }
  std::pair<int, int> endpoint(int m, int n) const;
};

/// Throws kInvalidArgument for fewer than two components and kMissingCost
/// when some cross-component pair has no link cost.
MceicMatrix mceic_matrix(const Graph& g, const ComponentPartition& p);

/// Row-major flattening of the strict upper triangle of an s×s matrix.
/// Everything here is one-based: sigma(m, n) = (n - m) + sum_{k<m} (s - k).
class FlatIndex {
 public:
  explicit FlatIndex(int s);

  int components() const { return s_; }
  int length() const { return s_ * (s_ - 1) / 2; }
  int row_start(int m) const;
  int sigma(int m, int n) const;
  std::pair<int, int> pair(int z) const;

 private:
  int s_;
};

/// Throws for s < 2.
FlatIndex flatten(int s);

enum class ComponentClass { kLoadOnly, kHasGenerator };

struct ResponseModel {
  ComponentPartition partition;
  MceicMatrix mceic;
  double budget = 0.0;  // kUnlimitedBudget allowed
  int cut_size = 0;
  int survivors = 0;
  std::vector<ComponentClass> component_class;
  bool power_constraint = false;

  static ResponseModel build(const Graph& g, const NodeSet& removed, double budget);

  int component_count() const { return partition.count(); }
  /// Flat cost vector d̃ indexed by sigma - 1.
  std::vector<double> flat_costs() const;
};

/// Enables the generator-coupling rule: a link between two load-only
/// components needs one of them to link to a generator component too.
ResponseModel apply_power_constraint(ResponseModel m);

/// Checks the coupling rule for a selection of one-based sigma positions.
bool power_feasible(const ResponseModel& m, std::span<const int> sigmas);

struct SelectedLink {
  int sigma = 0;  // one-based
  int m = 0;      // zero-based components, m < n
  int n = 0;
  int i = 0;  // realized endpoint, zero-based nodes
  int j = 0;
  double cost = 0.0;
};

struct ReconstructionPlan {
  std::vector<SelectedLink> selected;
  double total_cost = 0.0;
  ComponentPartition merged_partition;
  RuptureScore score;  // r^R under the same removal set
  SolverStats stats;
  std::optional<AttackResult> dynamic_worst;

  int resilience() const { return score.resilience(); }
  std::vector<int> sigmas() const;
};

struct ResponseOptions {
  bool use_cuts = true;
};

/// Exact search over MCEIC link subsets within the budget, minimizing r^R,
/// then total cost, then link count, then the sorted sigma vector.
ReconstructionPlan solve_response(const ResponseModel& m, const ResponseOptions& opt = {});

inline constexpr int kResponseEnumerationCap = 21;

/// Brute force over all subsets of MCEIC links, scoring each on the node
/// level. Refuses (kSizeGuard) above `cap` candidate links.
ReconstructionPlan enumerate_response(const Graph& g, const NodeSet& removed,
                                      const ResponseModel& m,
                                      int cap = kResponseEnumerationCap);

/// g plus the plan's realized links (their link costs are cleared).
Graph reconstruct(const Graph& g, const ReconstructionPlan& plan);

/// Worst cut of the reconstructed network under the same attack model.
AttackResult dynamic_worst_cut(const Graph& g, const ReconstructionPlan& plan,
                               const AttackModel& attack, const AttackOptions& opt = {});

}  // namespace resil
