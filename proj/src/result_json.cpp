#include "resil/result_json.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"
#include "resil/error.hpp"

namespace resil {

namespace {

using Json = nlohmann::ordered_json;

Json labels(const std::vector<int>& nodes) {
  Json a = Json::array();
  for (int v : nodes) a.push_back(v + 1);
  return a;
}

Json partition_json(const ComponentPartition& p) {
  Json a = Json::array();
  for (const auto& c : p.components) a.push_back(labels(c));
  return a;
}

Json budget_json(double b) {
  if (std::isinf(b)) return "unlimited";
  return b;
}

double tidy(double v) { return std::round(v * 1e9) / 1e9; }

Json score_json(const RuptureScore& s) {
  Json j;
  j["cut_size"] = s.cut_size;
  j["largest"] = s.largest;
  j["components"] = s.count;
  j["rupture"] = s.rupture;
  j["resilience"] = s.resilience();
  j["is_cut"] = s.is_cut;
  return j;
}

Json stats_json(const SolverStats& s, bool timing) {
  Json j;
  j["nodes"] = s.nodes;
  j["cuts"] = s.cuts;
  j["cut_prunes"] = s.cut_prunes;
  if (timing) j["time_ms"] = s.time_ms;
  return j;
}

// `items` maps knapsack positions to node indices (identity when null).
Json cut_json(const LiftedCoverCut& c, const std::vector<int>* items = nullptr) {
  auto map = [&](std::vector<int> v) {
    if (items)
      for (int& x : v) x = (*items)[x];
    return labels(v);
  };
  Json j;
  j["text"] = c.to_string();
  j["support"] = map(c.support());
  Json coeffs = Json::array();
  for (int v : c.support()) coeffs.push_back(c.coeffs[v]);
  j["coeffs"] = coeffs;
  j["rhs"] = c.rhs;
  j["cover"] = map(c.cover);
  j["lifted"] = c.lifted;
  j["verified"] = c.verified;
  j["dominates_ci"] = c.dominates_ci;
  j["downgraded"] = c.downgraded;
  return j;
}

std::string join_labels(const std::vector<int>& nodes) {
  std::string s;
  for (int v : nodes) {
    if (!s.empty()) s += ' ';
    s += std::to_string(v + 1);
  }
  return s;
}

std::optional<std::vector<double>> numbers(const std::string& s) {
  std::istringstream in(s);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) return std::nullopt;
    } catch (...) {
      return std::nullopt;
    }
  }
  return out;
}

bool same_value(const std::string& a, const std::string& b) {
  const auto x = numbers(a);
  const auto y = numbers(b);
  if (!x || !y) return a == b;
  if (x->size() != y->size()) return false;
  for (size_t k = 0; k < x->size(); ++k)
    if (std::abs((*x)[k] - (*y)[k]) > 1e-9) return false;
  return true;
}

std::optional<std::string> computed_value(const std::string& key, const PipelineResult& r) {
  if (r.status != PipelineStatus::kOk) return std::nullopt;
  if (key == "x_star") return join_labels(r.x.to_vector());
  if (key == "x_star_size") return std::to_string(r.x.count());
  if (key == "res_initial") return std::to_string(r.initial.resilience());
  if (!r.plan) return std::nullopt;
  if (key == "res_reconstructed") return std::to_string(r.plan->resilience());
  if (key == "links_added") return std::to_string(r.plan->selected.size());
  if (key == "budget_used") return format_number(tidy(r.plan->total_cost));
  if (!r.has_dynamic()) return std::nullopt;
  if (key == "x_dyn") return join_labels(r.plan->dynamic_worst->cut_nodes());
  if (key == "x_dyn_size") return std::to_string(r.plan->dynamic_worst->cut.nodes.count());
  if (key == "res_dynamic") return std::to_string(r.plan->dynamic_worst->score.resilience());
  return std::nullopt;
}

}  // namespace

std::string result_json(const InstanceFile& f, const PipelineResult& r, const JsonOptions& o) {
  Json j;
  j["schema"] = kResultSchema;
  j["status"] = r.status == PipelineStatus::kOk ? "ok" : "no_attack";
  j["n"] = r.n;
  j["edges"] = r.edges;

  Json a;
  a["type"] = std::string(to_string(r.attack_type));
  a["solved"] = r.stage_one_solved;
  a["budget"] = budget_json(r.budget_attack);
  if (r.attack_type == AttackType::kDistributed) a["attackable"] = labels(f.attackable().to_vector());
  if (r.status == PipelineStatus::kOk) {
    a["x"] = labels(r.x.to_vector());
    a["cost"] = tidy(set_cost(f.graph(), r.x));
    a["score"] = score_json(r.initial);
    a["partition"] = partition_json(r.initial_partition);
  } else {
    a["x"] = nullptr;
  }
  if (r.stage_one_solved) a["stats"] = stats_json(r.attack_stats, o.timing);
  j["attack"] = a;

  if (r.plan) {
    const ReconstructionPlan& p = *r.plan;
    Json resp;
    resp["budget"] = budget_json(r.budget_response);
    Json links = Json::array();
    for (const auto& l : p.selected) {
      Json lj;
      lj["sigma"] = l.sigma;
      lj["components"] = {l.m + 1, l.n + 1};
      lj["endpoints"] = {l.i + 1, l.j + 1};
      lj["cost"] = l.cost;
      links.push_back(lj);
    }
    resp["links"] = links;
    resp["total_cost"] = tidy(p.total_cost);
    resp["score"] = score_json(p.score);
    resp["partition"] = partition_json(p.merged_partition);
    resp["stats"] = stats_json(p.stats, o.timing);
    j["response"] = resp;

    if (p.dynamic_worst) {
      const AttackResult& d = *p.dynamic_worst;
      Json dj;
      dj["status"] = d.feasible() ? "optimal" : "infeasible";
      if (d.feasible()) {
        dj["x"] = labels(d.cut_nodes());
        dj["score"] = score_json(d.score);
        dj["partition"] = partition_json(d.partition);
      }
      dj["stats"] = stats_json(d.stats, o.timing);
      j["dynamic"] = dj;
    } else {
      j["dynamic"] = nullptr;
    }
  } else {
    j["response"] = nullptr;
    j["dynamic"] = nullptr;
  }

  Json cuts = Json::array();
  for (const auto& c : r.attack_cuts) cuts.push_back(cut_json(c, &r.cut_items));
  j["cuts"] = cuts;

  Json oc;
  oc["attack"] = r.oracle.attack_checked;
  oc["response"] = r.oracle.response_checked;
  oc["dynamic"] = r.oracle.dynamic_checked;
  j["oracle_checked"] = oc;

  Json ref = Json::array();
  for (const auto& [key, value] : f.reference) {
    Json e;
    e["key"] = key;
    e["reference"] = value;
    const auto got = computed_value(key, r);
    if (got) {
      e["computed"] = *got;
      e["match"] = same_value(value, *got);
    } else {
      e["computed"] = nullptr;
      e["match"] = nullptr;
    }
    ref.push_back(e);
  }
  j["reference"] = ref;
  return j.dump(o.indent) + "\n";
}

std::string cuts_json(const KnapsackConstraint& k, const std::vector<LiftedCoverCut>& cuts, int indent) {
  Json j;
  j["schema"] = "resil-cuts/1";
  j["coeffs"] = k.coeffs;
  j["capacity"] = k.capacity;
  Json a = Json::array();
  for (const auto& c : cuts) a.push_back(cut_json(c));
  j["cuts"] = a;
  return j.dump(indent) + "\n";
}

std::string rupture_json(const Graph& g, const NodeSet& removed, int indent) {
  Json j;
  j["schema"] = "resil-rupture/1";
  j["x"] = labels(removed.to_vector());
  j["score"] = score_json(rupture_score(g, removed));
  j["partition"] = partition_json(components(g, removed));
  return j.dump(indent) + "\n";
}

}  // namespace resil
