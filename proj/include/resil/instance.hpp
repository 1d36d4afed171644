#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "resil/attack.hpp"
#include "resil/graph.hpp"

namespace resil {

enum class AttackType { kTargeted, kDesignated, kRandom, kDistributed };

std::string_view to_string(AttackType t);
std::optional<AttackType> attack_type_from_string(std::string_view s);

struct LinkCostEntry {
  int i = 0;  // zero-based, i < j
  int j = 0;
  double cost = 0.0;
};

/// In-memory form of the line-oriented instance text format:
///
///   VERSION 1
///   NODES 4
///   EDGES
///   1 2
///   COSTS
///   attack 3 2.5
///   link default 9.9
///   link 1 4 1.5
///   CLASSES
///   1 generator
///   BUDGETS
///   attack 2
///   response unlimited
///   ATTACK
///   distributed 1 2 3
///   REFERENCE
///   res_initial 1
///   END
///
/// Node labels in text are one-based, '#' starts a comment. Every section
/// except VERSION, NODES and END is optional.
struct InstanceFile {
  int version = 1;
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;  // zero-based, i < j
  std::vector<double> attack_cost;         // size nodes, default 1
  std::optional<double> link_default;
  std::vector<LinkCostEntry> links;  // sorted by (i, j)
  std::vector<NodeClass> classes;    // size nodes
  std::optional<double> budget_attack;
  std::optional<double> budget_response;  // kUnlimitedBudget allowed
  AttackType attack = AttackType::kTargeted;
  std::vector<int> attack_nodes;  // X for designated/random, N_I for distributed
  std::vector<std::pair<std::string, std::string>> reference;

  explicit InstanceFile(int n = 0);

  /// Sorts and checks ranges, duplicates, signs and the attack selector.
  void normalize();

  Graph graph() const;
  /// Attack budget, defaulting to floor(n/2).
  double attack_budget() const;
  /// Nodes the attacker may remove: N_I for distributed attacks, else all.
  NodeSet attackable() const;
  /// Fixed removal set for designated and random attacks.
  NodeSet designated() const;
  AttackModel attack_model() const;
  std::optional<std::string> reference_value(std::string_view key) const;
};

/// Throws Error(kInputError) with a "line N:" prefix on any schema violation.
InstanceFile parse_instance(std::string_view text);
/// Canonical text; parse_instance(emit_instance(f)) emits identically.
std::string emit_instance(const InstanceFile& f);

InstanceFile read_instance_file(const std::string& path);

/// Shortest round-trip decimal form of a double ("unlimited" for +inf).
std::string format_number(double v);

}  // namespace resil
