#pragma once

#include <cstdint>
#include <vector>

#include "resil/cutgen.hpp"
#include "resil/graph.hpp"

namespace resil {

/// First-stage attack problem: remove a budget-feasible subset of the
/// attackable nodes maximizing the rupture score. Nodes outside `attackable`
/// (the intact set) always survive.
struct AttackModel {
  Graph graph;
  double budget = 0.0;
  NodeSet attackable;

  /// Targeted attack: every node attackable.
  static AttackModel targeted(Graph g, double budget);
  /// Distributed attack restricted to `attackable`.
  static AttackModel distributed(Graph g, double budget, const NodeSet& attackable);

  NodeSet intact() const;
  /// Throws unless attackable/intact partition the node set and budget >= 0.
  void validate() const;
  /// Budget constraint over attackable nodes, items in ascending node order.
  KnapsackConstraint budget_knapsack() const;
  std::vector<int> knapsack_items() const { return attackable.to_vector(); }
};

enum class SolveStatus { kOptimal, kInfeasible };

struct SolverStats {
  int64_t nodes = 0;
  int cuts = 0;         // cuts in the pool
  int64_t cut_prunes = 0;  // prunes only the cut-derived bound achieved
  double time_ms = 0.0;
};

/// Continuous (α, b) values of the leaf relaxation, one b per label.
struct RelaxedValues {
  double alpha = 0.0;
  std::vector<double> b;
  bool integral = false;
};

struct AttackResult {
  SolveStatus status = SolveStatus::kInfeasible;
  CutSet cut;
  RuptureScore score;
  ComponentPartition partition;
  SolverStats stats;
  RelaxedValues relaxed;  // filled by solve_attack_relaxed

  bool feasible() const { return status == SolveStatus::kOptimal; }
  std::vector<int> cut_nodes() const { return cut.nodes.to_vector(); }
};

struct AttackOptions {
  bool use_cuts = true;
  /// Pre-supplied cuts on budget_knapsack(); must be verified.
  std::vector<LiftedCoverCut> cuts;
  bool generate_cuts = true;
};

/// Exact branch-and-bound over removal decisions.
AttackResult solve_attack(const AttackModel& m, const AttackOptions& opt = {});

/// Same search with the largest-component length α and the non-empty flags
/// b treated as continuous; returns their optimal values.
AttackResult solve_attack_relaxed(const AttackModel& m, const AttackOptions& opt = {});

/// Cuts solve_attack uses: opt.cuts plus, when enabled, verified lifted
/// cover cuts of the budget knapsack from several cover seeds.
std::vector<LiftedCoverCut> attack_cut_pool(const AttackModel& m, const AttackOptions& opt = {});

/// The search engine itself with an explicit cut pool (empty = no cuts).
AttackResult branch_bound_engine(const AttackModel& m, const std::vector<LiftedCoverCut>& cuts);

/// Continuous optimum of the (α, b) sub-problem for a fixed removal set:
/// max -α + sum_c b_c  s.t.  α >= L_c, b_c <= L_c, 0 <= b_c <= 1, α >= 0,
/// with one label per node (|C| = |N|) and L_c the label sizes.
RelaxedValues relaxed_leaf(const Graph& g, const NodeSet& removed);

}  // namespace resil
