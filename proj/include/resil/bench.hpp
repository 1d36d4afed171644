#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "resil/attack.hpp"
#include "resil/instance.hpp"
#include "resil/response.hpp"

namespace resil {

struct BenchConfig {
  uint64_t seed = 1;
  int count = 14;
  int n_min = 6;
  int n_max = 12;
  /// Edge count drawn uniformly from [n-1, round(edge_factor * n)], clamped
  /// to the complete graph.
  double edge_factor = 1.5;
  std::optional<double> budget_attack;  // default floor(n/2)
  double budget_response = kUnlimitedBudget;
};

/// Connected random instance: random spanning tree, then uniform extra
/// edges; every non-edge gets a link cost from {1.0, 1.1, ..., 3.0}; unit
/// attack costs, B^A = floor(n/2). Throws kInvalidArgument unless
/// n-1 <= edges <= n(n-1)/2.
InstanceFile gen_random(int n, int edges, uint64_t seed);

/// Instance `index` of a seeded batch; independent of the other indices.
InstanceFile gen_random(const BenchConfig& c, int index);

struct PipelineOptions {
  bool power_constraint = false;
  bool oracle_check = false;
  bool use_cuts = true;
  bool run_response = true;
  bool run_dynamic = true;
};

enum class PipelineStatus { kOk, kNoAttack };

struct OracleReport {
  bool attack_checked = false;
  bool response_checked = false;
  bool dynamic_checked = false;
};

struct PipelineResult {
  PipelineStatus status = PipelineStatus::kOk;
  AttackType attack_type = AttackType::kTargeted;
  bool stage_one_solved = false;
  int n = 0;
  int edges = 0;
  double budget_attack = 0.0;
  double budget_response = 0.0;
  NodeSet x;
  RuptureScore initial;
  ComponentPartition initial_partition;
  SolverStats attack_stats;
  std::vector<LiftedCoverCut> attack_cuts;
  std::vector<int> cut_items;  // knapsack position -> node
  std::optional<ReconstructionPlan> plan;  // plan->dynamic_worst holds X'*
  OracleReport oracle;

  bool has_dynamic() const { return plan && plan->dynamic_worst && plan->dynamic_worst->feasible(); }
};

/// Attack, response, dynamic worst cut. Designated and random attacks skip
/// the attack stage. An infeasible attack yields kNoAttack and stops.
/// With oracle_check, every stage within the enumeration caps is re-solved
/// by brute force and a mismatch throws Error(kInternal).
PipelineResult run_pipeline(const InstanceFile& f, const PipelineOptions& o = {});

/// Results in input order regardless of `threads`. A failing instance
/// rethrows the first error by index.
std::vector<PipelineResult> run_batch(const std::vector<InstanceFile>& instances, const PipelineOptions& o,
                                      int threads);

inline constexpr const char* kBenchCsvHeader =
    "instance,n,edges,budget_used,mceic_links,x_star_size,res_initial,res_reconstructed,x_dyn_size,res_dynamic";

std::string csv_row(const std::string& instance, const PipelineResult& r);
std::string table_header();
std::string table_row(const std::string& instance, const PipelineResult& r);

struct SweepRow {
  double budget = 0.0;
  int links_added = 0;
  double budget_used = 0.0;
  int resilience = 0;
  std::optional<int> robustness;  // |X'*|, empty when no cut set exists
};

/// Solves the attack stage once, then the response stage per budget.
/// Throws Error(kInfeasible) when the attack stage has no cut set.
std::vector<SweepRow> sweep_budget(const InstanceFile& f, const std::vector<double>& budgets,
                                   const PipelineOptions& o = {});

std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace resil
