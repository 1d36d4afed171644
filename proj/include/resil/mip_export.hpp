#pragma once

#include <string>
#include <string_view>

#include "resil/attack.hpp"
#include "resil/graph.hpp"
#include "resil/response.hpp"

namespace resil {

enum class Formulation { kAttack, kResponse, kReduced };

std::string_view to_string(Formulation f);

inline constexpr int kExportNodeCap = 200;
inline constexpr double kExportEpsilon = 1e-3;

/// Full attack MIP in CPLEX LP text with |C| = |N| labels. A distributed
/// model (attackable a strict subset) writes c20a_i / c20b_i rows in place of
/// c4b_i. For non-adjacent pairs the c4i/c4j families collapse to a single
/// row c4i_i_j: y_i_j <= 0.
std::string export_attack_mip(const AttackModel& m);

/// Full response MIP over the survivors of `removed`, one label per
/// post-attack component, M = n + 1, epsilon = 1e-3 with the +epsilon sign.
std::string export_response_mip(const Graph& g, const NodeSet& removed, double budget);

/// Reduced response MIP on the flattened MCEIC vector, including c21_m_n rows when the
/// model carries the generator-coupling rule.
std::string export_reduced_mip(const ResponseModel& m, int node_count);

}  // namespace resil
