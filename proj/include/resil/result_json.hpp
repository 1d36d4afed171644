#pragma once

#include <string>

#include "resil/bench.hpp"
#include "resil/cutgen.hpp"
#include "resil/instance.hpp"

namespace resil {

inline constexpr const char* kResultSchema = "resil-result/1";

struct JsonOptions {
  bool timing = false;  // include wall-clock fields (breaks byte-determinism)
  int indent = 2;
};

/// Pipeline result as JSON. Node labels are one-based. When the instance has
/// a REFERENCE section each known key is compared against the computed value.
std::string result_json(const InstanceFile& f, const PipelineResult& r, const JsonOptions& o = {});

/// Audit record for cuts of a single knapsack.
std::string cuts_json(const KnapsackConstraint& k, const std::vector<LiftedCoverCut>& cuts, int indent = 2);

/// Score record for a fixed removal set.
std::string rupture_json(const Graph& g, const NodeSet& removed, int indent = 2);

}  // namespace resil
