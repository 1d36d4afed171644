#include <set>

#include "doctest.h"
#include "oracles.hpp"
#include "resil/bench.hpp"
#include "resil/error.hpp"
#include "resil/result_json.hpp"
#include "json.hpp"

using namespace resil;

namespace {

InstanceFile from_graph(int n, const std::vector<std::pair<int, int>>& edges, double link = 1.0) {
  InstanceFile f(n);
  f.edges = edges;
  f.link_default = link;
  f.normalize();
  return f;
}

InstanceFile star5() {
  std::vector<std::pair<int, int>> e;
  for (int v = 1; v <= 5; ++v) e.emplace_back(0, v);
  InstanceFile f = from_graph(6, e);
  f.budget_attack = 2;
  return f;
}

}  // namespace

TEST_CASE("generator properties") {
  SUBCASE("n=11, 15 edges is connected and reproducible") {
    const InstanceFile a = gen_random(11, 15, 42);
    const InstanceFile b = gen_random(11, 15, 42);
    CHECK(a.edges.size() == 15);
    CHECK(a.graph().is_connected());
    CHECK(emit_instance(a) == emit_instance(b));
    CHECK(emit_instance(a) != emit_instance(gen_random(11, 15, 43)));
    CHECK(a.attack_budget() == 5);
  }
  SUBCASE("n-1 edges gives a tree") {
    const InstanceFile t = gen_random(9, 8, 1);
    CHECK(t.graph().is_connected());
    CHECK(t.edges.size() == 8);
  }
  SUBCASE("n(n-1)/2 edges gives the complete graph") {
    const Graph g = gen_random(7, 21, 3).graph();
    for (int i = 0; i < 7; ++i) CHECK(g.degree(i) == 6);
  }
  SUBCASE("impossible edge counts") {
    CHECK_THROWS_AS(gen_random(6, 4, 1), Error);
    CHECK_THROWS_AS(gen_random(6, 16, 1), Error);
  }
  SUBCASE("link costs lie on the 0.1 grid in [1, 3]") {
    const Graph g = gen_random(10, 14, 9).graph();
    for (int i = 0; i < 10; ++i)
      for (int j = i + 1; j < 10; ++j) {
        if (g.has_edge(i, j)) continue;
        const double c = *g.link_cost(i, j);
        CHECK(c >= 1.0);
        CHECK(c <= 3.0);
        CHECK(std::abs(c * 10 - std::round(c * 10)) < 1e-9);
      }
  }
  SUBCASE("batch members depend only on seed and index") {
    BenchConfig c;
    c.seed = 17;
    const InstanceFile a = gen_random(c, 3);
    const InstanceFile b = gen_random(c, 3);
    CHECK(emit_instance(a) == emit_instance(b));
    CHECK(a.nodes >= c.n_min);
    CHECK(a.nodes <= c.n_max);
  }
}

TEST_CASE("star pipeline reconnects the leaves") {
  const PipelineResult r = run_pipeline(star5(), {.oracle_check = true});
  REQUIRE(r.status == PipelineStatus::kOk);
  CHECK(r.x.to_vector() == std::vector<int>{0});
  CHECK(r.initial.resilience() == -3);
  REQUIRE(r.plan.has_value());
  CHECK(r.plan->selected.size() == 4);
  CHECK(r.plan->resilience() == 5);
  CHECK(r.oracle.attack_checked);
  CHECK(r.oracle.response_checked);
}

TEST_CASE("designated attack skips stage one") {
  InstanceFile f = from_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  f.attack = AttackType::kDesignated;
  f.attack_nodes = {1};
  f.normalize();
  const PipelineResult r = run_pipeline(f);
  CHECK_FALSE(r.stage_one_solved);
  CHECK(r.x.to_vector() == std::vector<int>{1});
  CHECK(r.initial.rupture == -1);
  REQUIRE(r.plan.has_value());
  CHECK(r.plan->selected.size() == 1);
}

TEST_CASE("infeasible attack reports no attack") {
  InstanceFile f = from_graph(4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  f.budget_attack = 1;
  const PipelineResult r = run_pipeline(f);
  CHECK(r.status == PipelineStatus::kNoAttack);
  CHECK_FALSE(r.plan.has_value());
  CHECK(csv_row("k4", r).find("NA") != std::string::npos);
}

TEST_CASE("nine-node budget sweep") {
  const InstanceFile f = read_instance_file(RESIL_DATA_DIR "/nine_node.inst");
  const auto rows = sweep_budget(f, {0.5, 1.5, kUnlimitedBudget});
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].resilience == -1);
  CHECK(rows[1].resilience == 1);
  CHECK(rows[2].resilience == 8);
  CHECK(rows[0].links_added == 0);
  CHECK(rows[1].links_added == 1);
  const std::string csv = sweep_csv(rows);
  CHECK(csv.rfind("budget,links_added,budget_used,resilience,robustness\n", 0) == 0);
  CHECK(csv.find("unlimited,") != std::string::npos);
}

TEST_CASE("sweep rows agree with the brute-force response") {
  for (uint64_t seed = 1; seed <= 8; ++seed) {
    const InstanceFile f = gen_random(9, 11, seed);
    std::vector<double> grid{0, 1, 1.5, 2, 3, 4.5, 6, kUnlimitedBudget};
    std::vector<SweepRow> rows;
    try {
      rows = sweep_budget(f, grid);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::kInfeasible);
      continue;
    }
    const PipelineResult base = run_pipeline(f, {.run_response = false});
    std::vector<char> removed(9, 0);
    base.x.for_each([&](int v) { removed[v] = 1; });
    CHECK(rows[0].resilience == base.initial.resilience());
    for (size_t k = 0; k < rows.size(); ++k) {
      CHECK(-oracle::best_response(f.graph(), removed, grid[k]).rupture == rows[k].resilience);
      if (k) CHECK(rows[k].resilience >= rows[k - 1].resilience);
    }
  }
}

TEST_CASE("batch results do not depend on the thread count") {
  BenchConfig c;
  c.seed = 5;
  std::vector<InstanceFile> batch;
  for (int i = 0; i < 10; ++i) batch.push_back(gen_random(c, i));
  const auto one = run_batch(batch, {}, 1);
  const auto four = run_batch(batch, {}, 4);
  REQUIRE(one.size() == four.size());
  for (size_t k = 0; k < one.size(); ++k) {
    CHECK(csv_row("i", one[k]) == csv_row("i", four[k]));
    CHECK(result_json(batch[k], one[k]) == result_json(batch[k], four[k]));
  }
}

TEST_CASE("csv and table rows") {
  const PipelineResult r = run_pipeline(star5());
  const std::string row = csv_row("star", r);
  CHECK(row.rfind("star,6,5,4,4,1,-3,5,", 0) == 0);
  CHECK(std::string(kBenchCsvHeader).find("instance,n,edges,budget_used") == 0);
  CHECK(table_row("star", r).find("star") != std::string::npos);
  CHECK_FALSE(table_header().empty());
}

TEST_CASE("result JSON carries the schema and the reference comparison") {
  const InstanceFile f = read_instance_file(RESIL_DATA_DIR "/nine_node.inst");
  const PipelineResult r = run_pipeline(f);
  const auto j = nlohmann::json::parse(result_json(f, r));
  CHECK(j["schema"] == kResultSchema);
  CHECK(j["status"] == "ok");
  CHECK(j["attack"]["x"] == nlohmann::json::array({5}));
  CHECK(j["response"]["score"]["resilience"] == 8);
  for (const auto& e : j["reference"]) CHECK(e["match"] == true);
  CHECK(result_json(f, r) == result_json(f, run_pipeline(f)));
}
