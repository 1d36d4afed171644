#include "resil/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <thread>

#include "resil/error.hpp"

namespace resil {

InstanceFile gen_random(int n, int edges, uint64_t seed) {
  if (n < 1) fail(ErrorCode::kInvalidArgument, "node count must be >= 1");
  const int64_t max_edges = static_cast<int64_t>(n) * (n - 1) / 2;
  if (edges < n - 1 || edges > max_edges)
    fail(ErrorCode::kInvalidArgument, "impossible edge count " + std::to_string(edges) + " for " +
                                          std::to_string(n) + " nodes");
  std::mt19937_64 rng(seed);
  InstanceFile f(n);
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (int k = 1; k < n; ++k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    const int a = perm[k];
    const int b = perm[pick(rng)];
    adj[a][b] = adj[b][a] = 1;
    f.edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::vector<std::pair<int, int>> free_pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!adj[i][j]) free_pairs.emplace_back(i, j);
  std::shuffle(free_pairs.begin(), free_pairs.end(), rng);
  for (int k = 0; k < edges - (n - 1); ++k) {
    const auto [i, j] = free_pairs[k];
    adj[i][j] = adj[j][i] = 1;
    f.edges.emplace_back(i, j);
  }
  std::uniform_int_distribution<int> tenth(10, 30);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (!adj[i][j]) f.links.push_back(LinkCostEntry{i, j, tenth(rng) / 10.0});
  f.budget_attack = static_cast<double>(n / 2);
  f.normalize();
  return f;
}

InstanceFile gen_random(const BenchConfig& c, int index) {
  if (c.n_min < 1 || c.n_max < c.n_min) fail(ErrorCode::kInvalidArgument, "bad node-count range");
  std::seed_seq seq{static_cast<uint32_t>(c.seed), static_cast<uint32_t>(c.seed >> 32),
                    static_cast<uint32_t>(index)};
  std::mt19937_64 rng(seq);
  const int n = std::uniform_int_distribution<int>(c.n_min, c.n_max)(rng);
  const int64_t max_edges = static_cast<int64_t>(n) * (n - 1) / 2;
  const int64_t hi = std::clamp<int64_t>(std::llround(c.edge_factor * n), n - 1, max_edges);
  const int edges = static_cast<int>(std::uniform_int_distribution<int64_t>(n - 1, hi)(rng));
  InstanceFile f = gen_random(n, edges, rng());
  if (c.budget_attack) f.budget_attack = *c.budget_attack;
  f.budget_response = c.budget_response;
  return f;
}

namespace {

void check_attack(const AttackModel& m, const AttackResult& got) {
  const OracleResult ref = worst_cut_oracle(m.graph, m.budget, m.attackable);
  const bool same = ref.feasible == got.feasible() &&
                    (!ref.feasible || (ref.score.rupture == got.score.rupture && ref.cut.nodes == got.cut.nodes));
  if (!same) fail(ErrorCode::kInternal, "oracle mismatch in the attack stage");
}

}  // namespace

PipelineResult run_pipeline(const InstanceFile& f, const PipelineOptions& o) {
  PipelineResult r;
  const Graph g = f.graph();
  r.n = f.nodes;
  r.edges = static_cast<int>(f.edges.size());
  r.attack_type = f.attack;
  r.budget_attack = f.attack_budget();
  r.budget_response = f.budget_response ? *f.budget_response : kUnlimitedBudget;
  const AttackModel model = f.attack_model();
  AttackOptions aopt;
  aopt.use_cuts = o.use_cuts;

  if (f.attack == AttackType::kDesignated || f.attack == AttackType::kRandom) {
    r.x = f.designated();
  } else {
    r.stage_one_solved = true;
    r.attack_cuts = attack_cut_pool(model, aopt);
    r.cut_items = model.knapsack_items();
    const AttackResult a = branch_bound_engine(model, r.attack_cuts);
    r.attack_stats = a.stats;
    if (o.oracle_check && model.attackable.count() <= kDefaultEnumerationCap) {
      check_attack(model, a);
      r.oracle.attack_checked = true;
    }
    if (!a.feasible()) {
      r.status = PipelineStatus::kNoAttack;
      r.x = NodeSet(f.nodes);
      return r;
    }
    r.x = a.cut.nodes;
  }
  r.initial = rupture_score(g, r.x);
  r.initial_partition = components(g, r.x);
  if (!o.run_response) return r;

  ResponseModel rm = ResponseModel::build(g, r.x, r.budget_response);
  if (o.power_constraint) rm = apply_power_constraint(rm);
  ResponseOptions ropt;
  ropt.use_cuts = o.use_cuts;
  ReconstructionPlan plan = solve_response(rm, ropt);
  const int links = rm.component_count() * (rm.component_count() - 1) / 2;
  if (o.oracle_check && links <= kResponseEnumerationCap) {
    const ReconstructionPlan ref = enumerate_response(g, r.x, rm);
    if (ref.score.rupture != plan.score.rupture || ref.sigmas() != plan.sigmas())
      fail(ErrorCode::kInternal, "oracle mismatch in the response stage");
    r.oracle.response_checked = true;
  }
  if (o.run_dynamic) {
    AttackResult dyn = dynamic_worst_cut(g, plan, model, aopt);
    if (o.oracle_check && model.attackable.count() <= kDefaultEnumerationCap) {
      AttackModel dm{reconstruct(g, plan), model.budget, model.attackable};
      check_attack(dm, dyn);
      r.oracle.dynamic_checked = true;
    }
    plan.dynamic_worst = std::move(dyn);
  }
  r.plan = std::move(plan);
  return r;
}

std::vector<PipelineResult> run_batch(const std::vector<InstanceFile>& instances, const PipelineOptions& o,
                                      int threads) {
  const size_t count = instances.size();
  std::vector<PipelineResult> out(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t k = next++; k < count; k = next++) {
      try {
        out[k] = run_pipeline(instances[k], o);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int workers = std::clamp<int>(threads, 1, static_cast<int>(std::max<size_t>(count, 1)));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

namespace {

std::string cell(const std::optional<int>& v) { return v ? std::to_string(*v) : "NA"; }

struct Row {
  std::string budget_used = "NA";
  std::optional<int> links;
  std::optional<int> x_star;
  std::optional<int> res_initial;
  std::optional<int> res_reconstructed;
  std::optional<int> x_dyn;
  std::optional<int> res_dynamic;
};

Row summarize(const PipelineResult& r) {
  Row row;
  if (r.status != PipelineStatus::kOk) return row;
  row.x_star = r.x.count();
  row.res_initial = r.initial.resilience();
  if (r.plan) {
    row.budget_used = format_number(std::round(r.plan->total_cost * 1e6) / 1e6);
    row.links = static_cast<int>(r.plan->selected.size());
    row.res_reconstructed = r.plan->resilience();
    if (r.has_dynamic()) {
      row.x_dyn = r.plan->dynamic_worst->cut.nodes.count();
      row.res_dynamic = r.plan->dynamic_worst->score.resilience();
    }
  }
  return row;
}

}  // namespace

std::string csv_row(const std::string& instance, const PipelineResult& r) {
  const Row row = summarize(r);
  return instance + "," + std::to_string(r.n) + "," + std::to_string(r.edges) + "," + row.budget_used + "," +
         cell(row.links) + "," + cell(row.x_star) + "," + cell(row.res_initial) + "," +
         cell(row.res_reconstructed) + "," + cell(row.x_dyn) + "," + cell(row.res_dynamic);
}

std::string table_header() {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %4s %5s %6s %9s %9s %7s %9s %6s %11s", "instance", "n", "edges", "|X*|",
                "-r_X*(G)", "-r^R_X*", "|X'*|", "-r^R_X'*", "links", "budget_used");
  return buf;
}

std::string table_row(const std::string& instance, const PipelineResult& r) {
  const Row row = summarize(r);
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-12s %4d %5d %6s %9s %9s %7s %9s %6s %11s", instance.c_str(), r.n, r.edges,
                cell(row.x_star).c_str(), cell(row.res_initial).c_str(), cell(row.res_reconstructed).c_str(),
                cell(row.x_dyn).c_str(), cell(row.res_dynamic).c_str(), cell(row.links).c_str(),
                row.budget_used.c_str());
  return buf;
}

std::vector<SweepRow> sweep_budget(const InstanceFile& f, const std::vector<double>& budgets,
                                   const PipelineOptions& o) {
  PipelineOptions first = o;
  first.run_response = false;
  const PipelineResult base = run_pipeline(f, first);
  if (base.status != PipelineStatus::kOk) fail(ErrorCode::kInfeasible, "attack stage has no cut set");
  const Graph g = f.graph();
  const AttackModel model = f.attack_model();
  AttackOptions aopt;
  aopt.use_cuts = o.use_cuts;
  ResponseOptions ropt;
  ropt.use_cuts = o.use_cuts;
  std::vector<SweepRow> rows;
  for (double b : budgets) {
    ResponseModel rm = ResponseModel::build(g, base.x, b);
    if (o.power_constraint) rm = apply_power_constraint(rm);
    const ReconstructionPlan plan = solve_response(rm, ropt);
    SweepRow row;
    row.budget = b;
    row.links_added = static_cast<int>(plan.selected.size());
    row.budget_used = plan.total_cost;
    row.resilience = plan.resilience();
    if (o.run_dynamic) {
      const AttackResult dyn = dynamic_worst_cut(g, plan, model, aopt);
      if (dyn.feasible()) row.robustness = dyn.cut.nodes.count();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "budget,links_added,budget_used,resilience,robustness\n";
  for (const auto& r : rows)
    out += format_number(r.budget) + "," + std::to_string(r.links_added) + "," + format_number(std::round(r.budget_used * 1e6) / 1e6) +
           "," + std::to_string(r.resilience) + "," + cell(r.robustness) + "\n";
  return out;
}

}  // namespace resil
