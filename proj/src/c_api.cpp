#include "resil/resil.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "resil/bench.hpp"
#include "resil/cutgen.hpp"
#include "resil/error.hpp"
#include "resil/instance.hpp"
#include "resil/mip_export.hpp"
#include "resil/result_json.hpp"

struct resil_instance {
  resil::InstanceFile file;
};

struct resil_result {
  resil::InstanceFile file;
  resil::PipelineResult result;
  bool timing = false;
};

namespace {

thread_local std::string g_last_error;

resil_status status_of(resil::ErrorCode c) {
  switch (c) {
    case resil::ErrorCode::kInvalidArgument: return RESIL_BAD_ARGUMENT;
    case resil::ErrorCode::kInputError: return RESIL_INPUT_ERROR;
    case resil::ErrorCode::kMissingCost: return RESIL_INPUT_ERROR;
    case resil::ErrorCode::kSizeGuard: return RESIL_SIZE_GUARD;
    case resil::ErrorCode::kInfeasible: return RESIL_INFEASIBLE;
    case resil::ErrorCode::kInternal: return RESIL_INTERNAL;
  }
  return RESIL_INTERNAL;
}

template <typename F>
resil_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const resil::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return RESIL_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return RESIL_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return RESIL_INTERNAL;
  }
}

resil_status bad(const char* msg) {
  g_last_error = msg;
  return RESIL_BAD_ARGUMENT;
}

char* dup(const std::string& s) {
  char* p = static_cast<char*>(std::malloc(s.size() + 1));
  if (!p) throw std::bad_alloc();
  std::memcpy(p, s.data(), s.size() + 1);
  return p;
}

resil::PipelineOptions convert(const resil_options* o) {
  resil_options d;
  resil_options_default(&d);
  if (!o) o = &d;
  resil::PipelineOptions p;
  p.power_constraint = o->power_constraint != 0;
  p.oracle_check = o->oracle_check != 0;
  p.use_cuts = o->use_cuts != 0;
  p.run_response = o->run_response != 0;
  p.run_dynamic = o->run_dynamic != 0;
  return p;
}

resil::NodeSet node_set(const resil::InstanceFile& f, const int* nodes, size_t count) {
  resil::NodeSet s(f.nodes);
  for (size_t k = 0; k < count; ++k) {
    if (nodes[k] < 1 || nodes[k] > f.nodes)
      resil::fail(resil::ErrorCode::kInputError, "node " + std::to_string(nodes[k]) + " out of range");
    s.insert(nodes[k] - 1);
  }
  return s;
}

}  // namespace

extern "C" {

const char* resil_version(void) { return "1.0.0"; }

const char* resil_last_error(void) { return g_last_error.c_str(); }

void resil_string_free(char* s) { std::free(s); }

void resil_options_default(resil_options* o) {
  if (!o) return;
  o->power_constraint = 0;
  o->oracle_check = 0;
  o->use_cuts = 1;
  o->run_response = 1;
  o->run_dynamic = 1;
  o->timing = 0;
}

void resil_bench_config_default(resil_bench_config* c) {
  if (!c) return;
  const resil::BenchConfig d;
  c->seed = d.seed;
  c->n_min = d.n_min;
  c->n_max = d.n_max;
  c->edge_factor = d.edge_factor;
}

resil_status resil_instance_parse(const char* text, resil_instance** out) {
  if (!text || !out) return bad("null argument");
  return guarded([&] {
    *out = new resil_instance{resil::parse_instance(text)};
    return RESIL_OK;
  });
}

resil_status resil_instance_load(const char* path, resil_instance** out) {
  if (!path || !out) return bad("null argument");
  return guarded([&] {
    *out = new resil_instance{resil::read_instance_file(path)};
    return RESIL_OK;
  });
}

resil_status resil_instance_generate(int n, int edges, uint64_t seed, resil_instance** out) {
  if (!out) return bad("null argument");
  return guarded([&] {
    try {
      *out = new resil_instance{resil::gen_random(n, edges, seed)};
    } catch (const resil::Error& e) {
      if (e.code() == resil::ErrorCode::kInvalidArgument) resil::fail(resil::ErrorCode::kInputError, e.what());
      throw;
    }
    return RESIL_OK;
  });
}

resil_status resil_instance_generate_batch(const resil_bench_config* c, int index, resil_instance** out) {
  if (!c || !out) return bad("null argument");
  return guarded([&] {
    resil::BenchConfig bc;
    bc.seed = c->seed;
    bc.n_min = c->n_min;
    bc.n_max = c->n_max;
    bc.edge_factor = c->edge_factor;
    *out = new resil_instance{resil::gen_random(bc, index)};
    return RESIL_OK;
  });
}

void resil_instance_free(resil_instance* inst) { delete inst; }

resil_status resil_instance_emit(const resil_instance* inst, char** out) {
  if (!inst || !out) return bad("null argument");
  return guarded([&] {
    *out = dup(resil::emit_instance(inst->file));
    return RESIL_OK;
  });
}

resil_status resil_instance_node_count(const resil_instance* inst, int* out) {
  if (!inst || !out) return bad("null argument");
  *out = inst->file.nodes;
  return RESIL_OK;
}

resil_status resil_instance_set_budget_attack(resil_instance* inst, double budget) {
  if (!inst) return bad("null argument");
  if (!(budget >= 0.0) || std::isinf(budget)) return bad("attack budget must be finite and >= 0");
  inst->file.budget_attack = budget;
  return RESIL_OK;
}

resil_status resil_instance_set_budget_response(resil_instance* inst, double budget) {
  if (!inst) return bad("null argument");
  if (!(budget >= 0.0)) return bad("response budget must be >= 0");
  inst->file.budget_response = budget;
  return RESIL_OK;
}

resil_status resil_instance_set_attack(resil_instance* inst, const char* type, const int* nodes, size_t count) {
  if (!inst || !type || (count > 0 && !nodes)) return bad("null argument");
  return guarded([&] {
    const auto t = resil::attack_type_from_string(type);
    if (!t) resil::fail(resil::ErrorCode::kInputError, std::string("unknown attack type '") + type + "'");
    resil::InstanceFile f = inst->file;
    f.attack = *t;
    f.attack_nodes.clear();
    for (size_t k = 0; k < count; ++k) {
      if (nodes[k] < 1 || nodes[k] > f.nodes)
        resil::fail(resil::ErrorCode::kInputError, "node " + std::to_string(nodes[k]) + " out of range");
      f.attack_nodes.push_back(nodes[k] - 1);
    }
    try {
      f.normalize();
    } catch (const resil::Error& e) {
      resil::fail(resil::ErrorCode::kInputError, e.what());
    }
    inst->file = std::move(f);
    return RESIL_OK;
  });
}

resil_status resil_run_pipeline(const resil_instance* inst, const resil_options* o, resil_result** out) {
  if (!inst || !out) return bad("null argument");
  return guarded([&] {
    auto* r = new resil_result{inst->file, resil::run_pipeline(inst->file, convert(o)), o && o->timing != 0};
    *out = r;
    if (r->result.status == resil::PipelineStatus::kNoAttack) {
      g_last_error = "no budget-feasible cut set";
      return RESIL_INFEASIBLE;
    }
    return RESIL_OK;
  });
}

resil_status resil_run_batch(const resil_instance* const* instances, size_t count, const resil_options* o,
                             int threads, resil_result** out) {
  if ((count > 0 && (!instances || !out))) return bad("null argument");
  return guarded([&] {
    std::vector<resil::InstanceFile> files;
    for (size_t k = 0; k < count; ++k) {
      if (!instances[k]) resil::fail(resil::ErrorCode::kInvalidArgument, "null instance");
      files.push_back(instances[k]->file);
    }
    std::vector<resil::PipelineResult> results = resil::run_batch(files, convert(o), threads);
    resil_status worst = RESIL_OK;
    for (size_t k = 0; k < count; ++k) {
      out[k] = new resil_result{files[k], std::move(results[k]), o && o->timing != 0};
      if (out[k]->result.status == resil::PipelineStatus::kNoAttack) worst = RESIL_INFEASIBLE;
    }
    return worst;
  });
}

void resil_result_free(resil_result* r) { delete r; }

resil_status resil_result_json(const resil_result* r, char** out) {
  if (!r || !out) return bad("null argument");
  return guarded([&] {
    resil::JsonOptions jo;
    jo.timing = r->timing;
    *out = dup(resil::result_json(r->file, r->result, jo));
    return RESIL_OK;
  });
}

resil_status resil_result_summary(const resil_result* r, resil_summary* out) {
  if (!r || !out) return bad("null argument");
  const resil::PipelineResult& p = r->result;
  *out = resil_summary{};
  out->status = p.status == resil::PipelineStatus::kOk ? RESIL_OK : RESIL_INFEASIBLE;
  out->n = p.n;
  out->edges = p.edges;
  out->x_star_size = out->res_initial = out->res_reconstructed = out->links_added = -1;
  out->x_dyn_size = out->res_dynamic = -1;
  out->budget_used = -1.0;
  if (p.status != resil::PipelineStatus::kOk) return RESIL_OK;
  out->x_star_size = p.x.count();
  out->res_initial = p.initial.resilience();
  if (p.plan) {
    out->res_reconstructed = p.plan->resilience();
    out->links_added = static_cast<int>(p.plan->selected.size());
    out->budget_used = p.plan->total_cost;
    if (p.has_dynamic()) {
      out->x_dyn_size = p.plan->dynamic_worst->cut.nodes.count();
      out->res_dynamic = p.plan->dynamic_worst->score.resilience();
    }
  }
  return RESIL_OK;
}

resil_status resil_result_csv_row(const resil_result* r, const char* instance_name, char** out) {
  if (!r || !instance_name || !out) return bad("null argument");
  return guarded([&] {
    *out = dup(resil::csv_row(instance_name, r->result));
    return RESIL_OK;
  });
}

resil_status resil_result_table_row(const resil_result* r, const char* instance_name, char** out) {
  if (!r || !instance_name || !out) return bad("null argument");
  return guarded([&] {
    *out = dup(resil::table_row(instance_name, r->result));
    return RESIL_OK;
  });
}

const char* resil_csv_header(void) { return resil::kBenchCsvHeader; }

const char* resil_table_header(void) {
  static const std::string header = resil::table_header();
  return header.c_str();
}

resil_status resil_sweep_csv(const resil_instance* inst, const double* budgets, size_t count,
                             const resil_options* o, char** out) {
  if (!inst || !out || (count > 0 && !budgets)) return bad("null argument");
  return guarded([&] {
    const std::vector<double> grid(budgets, budgets + count);
    *out = dup(resil::sweep_csv(resil::sweep_budget(inst->file, grid, convert(o))));
    return RESIL_OK;
  });
}

resil_status resil_export_mip(const resil_instance* inst, const char* which, const int* cut_x, size_t cut_count,
                              int power_constraint, char** out) {
  if (!inst || !which || !out || (cut_count > 0 && !cut_x)) return bad("null argument");
  return guarded([&] {
    const resil::InstanceFile& f = inst->file;
    const std::string w = which;
    if (w == "attack") {
      *out = dup(resil::export_attack_mip(f.attack_model()));
      return RESIL_OK;
    }
    if (w != "response" && w != "reduced")
      resil::fail(resil::ErrorCode::kInputError, "unknown formulation '" + w + "'");
    const resil::Graph g = f.graph();
    resil::NodeSet x(f.nodes);
    if (cut_count > 0) {
      x = node_set(f, cut_x, cut_count);
    } else if (f.attack == resil::AttackType::kDesignated || f.attack == resil::AttackType::kRandom) {
      x = f.designated();
    } else {
      const resil::AttackResult a = resil::solve_attack(f.attack_model());
      if (!a.feasible()) resil::fail(resil::ErrorCode::kInfeasible, "attack stage has no cut set");
      x = a.cut.nodes;
    }
    if (x.count() >= f.nodes) resil::fail(resil::ErrorCode::kInputError, "removal set covers every node");
    const double budget = f.budget_response ? *f.budget_response : resil::kUnlimitedBudget;
    if (w == "response") {
      *out = dup(resil::export_response_mip(g, x, budget));
    } else {
      resil::ResponseModel m = resil::ResponseModel::build(g, x, budget);
      if (power_constraint) m = resil::apply_power_constraint(m);
      *out = dup(resil::export_reduced_mip(m, f.nodes));
    }
    return RESIL_OK;
  });
}

resil_status resil_cuts_audit(const double* coeffs, size_t count, double capacity, char** out) {
  if (!out || (count > 0 && !coeffs)) return bad("null argument");
  return guarded([&] {
    resil::KnapsackConstraint k{std::vector<double>(coeffs, coeffs + count), capacity};
    try {
      k.validate();
    } catch (const resil::Error& e) {
      resil::fail(resil::ErrorCode::kInputError, e.what());
    }
    if (k.size() > resil::kVerifyCap)
      resil::fail(resil::ErrorCode::kSizeGuard, "cut audit refuses more than " +
                                                    std::to_string(resil::kVerifyCap) + " items");
    *out = dup(resil::cuts_json(k, resil::generate_cuts(k)));
    return RESIL_OK;
  });
}

resil_status resil_rupture(const resil_instance* inst, const int* x, size_t count, char** out) {
  if (!inst || !out || (count > 0 && !x)) return bad("null argument");
  return guarded([&] {
    const resil::NodeSet s = node_set(inst->file, x, count);
    if (s.count() >= inst->file.nodes) resil::fail(resil::ErrorCode::kInputError, "removal set covers every node");
    *out = dup(resil::rupture_json(inst->file.graph(), s));
    return RESIL_OK;
  });
}

}  // extern "C"
