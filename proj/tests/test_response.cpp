#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "resil/error.hpp"
#include "resil/instance.hpp"
#include "resil/response.hpp"

using namespace resil;

namespace {

NodeSet one_based(int n, std::initializer_list<int> labels) {
  NodeSet s(n);
  for (int v : labels) s.insert(v - 1);
  return s;
}

std::vector<char> flags(const NodeSet& x) {
  std::vector<char> f(x.capacity(), 0);
  x.for_each([&](int v) { f[v] = 1; });
  return f;
}

InstanceFile nine_node() { return read_instance_file(RESIL_DATA_DIR "/nine_node.inst"); }
InstanceFile ieee14() { return read_instance_file(RESIL_DATA_DIR "/ieee14.inst"); }

// Links as one-based endpoint pairs, smaller label first.
std::vector<std::pair<int, int>> endpoints(const ReconstructionPlan& p) {
  std::vector<std::pair<int, int>> out;
  for (const auto& l : p.selected) out.emplace_back(std::min(l.i, l.j) + 1, std::max(l.i, l.j) + 1);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("flat index examples") {
  CHECK(flatten(2).sigma(1, 2) == 1);
  const FlatIndex f = flatten(5);
  CHECK(f.length() == 10);
  CHECK(f.sigma(1, 2) == 1);
  CHECK(f.sigma(2, 4) == 6);
  CHECK(f.sigma(4, 5) == 10);
  CHECK(f.pair(6) == std::pair<int, int>{2, 4});
  CHECK_THROWS_AS(flatten(1), Error);
  CHECK_THROWS_AS(f.sigma(3, 3), Error);
  CHECK_THROWS_AS(f.pair(11), Error);
}

TEST_CASE("flat index is a bijection for s up to 50") {
  for (int s = 2; s <= 50; ++s) {
    const FlatIndex f(s);
    int expect = 0;
    for (int m = 1; m <= s; ++m)
      for (int n = m + 1; n <= s; ++n) {
        // Row-major order over the strict upper triangle.
        CHECK(f.sigma(m, n) == ++expect);
        CHECK(f.pair(f.sigma(m, n)) == std::pair<int, int>{m, n});
      }
    CHECK(expect == f.length());
  }
}

TEST_CASE("MCEIC on the nine-node example") {
  const InstanceFile f = nine_node();
  const Graph g = f.graph();
  const ComponentPartition p = components(g, one_based(9, {5}));
  const MceicMatrix mc = mceic_matrix(g, p);
  REQUIRE(mc.size == 5);
  // Components {1,2,3},{4},{6,7},{8},{9}: the cheapest 1-4 link joins the first two.
  for (int m = 0; m < 5; ++m) CHECK(std::isnan(mc.at(m, m)));
  for (int m = 0; m < 5; ++m)
    for (int n = m + 1; n < 5; ++n) {
      CHECK(mc.at(m, n) == mc.at(n, m));
      double best = std::numeric_limits<double>::infinity();
      for (int i : p.components[m])
        for (int j : p.components[n]) best = std::min(best, *g.link_cost(i, j));
      CHECK(mc.at(m, n) == best);
      const auto [i, j] = mc.endpoint(m, n);
      CHECK(*g.link_cost(i, j) == best);
    }
  CHECK(mc.at(3, 4) == doctest::Approx(1.0));
}

TEST_CASE("missing link costs are reported") {
  Graph g(4);
  g.add_edge(0, 1);
  g.add_edge(1, 2);
  g.add_edge(2, 3);
  NodeSet x(4);
  x.insert(1);
  const ComponentPartition p = components(g, x);
  CHECK_THROWS_AS(mceic_matrix(g, p), Error);
  try {
    mceic_matrix(g, p);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kMissingCost);
  }
}

TEST_CASE("nine-node anchors") {
  const InstanceFile f = nine_node();
  const Graph g = f.graph();
  const NodeSet x = one_based(9, {5});
  CHECK(rupture_score(g, x).rupture == 1);  // resilience -1 before the response

  SUBCASE("budget 0.5 adds nothing") {
    const ReconstructionPlan p = solve_response(ResponseModel::build(g, x, 0.5));
    CHECK(p.selected.empty());
    CHECK(p.resilience() == -1);
  }
  SUBCASE("budget 1.5 adds link 1-4") {
    const ReconstructionPlan p = solve_response(ResponseModel::build(g, x, 1.5));
    CHECK(endpoints(p) == std::vector<std::pair<int, int>>{{1, 4}});
    CHECK(p.resilience() == 1);
  }
  SUBCASE("unlimited budget") {
    const ReconstructionPlan p = solve_response(ResponseModel::build(g, x, kUnlimitedBudget));
    CHECK(p.resilience() == 8);
    CHECK(p.merged_partition.count() == 1);
    CHECK(p.selected.size() == 4);
  }
}

TEST_CASE("response equals the independent brute force on random instances") {
  std::mt19937_64 rng(31);
  int checked = 0;
  for (int t = 0; t < 400 && checked < 80; ++t) {
    const int n = std::uniform_int_distribution<int>(5, 11)(rng);
    Graph g = oracle::random_graph(rng, n, std::uniform_int_distribution<int>(0, n / 2)(rng));
    for (int v = 0; v < n; ++v)
      if (std::uniform_int_distribution<int>(0, 2)(rng) == 0) g.set_node_class(v, NodeClass::kGenerator);
    NodeSet x(n);
    for (int v = 0; v < n; ++v)
      if (std::uniform_int_distribution<int>(0, 3)(rng) == 0) x.insert(v);
    if (x.count() >= n - 1) continue;
    const ComponentPartition part = components(g, x);
    if (part.count() < 2 || part.count() > 6) continue;
    const double budget = t % 4 == 0 ? kUnlimitedBudget : std::uniform_int_distribution<int>(0, 80)(rng) / 10.0;
    const bool power = t % 3 == 0;
    ResponseModel m = ResponseModel::build(g, x, budget);
    if (power) m = apply_power_constraint(m);
    const ReconstructionPlan p = solve_response(m);
    const oracle::Response o = oracle::best_response(g, flags(x), budget, power);
    CHECK(p.score.rupture == o.rupture);
    CHECK(p.total_cost == doctest::Approx(o.cost));
    CHECK(static_cast<int>(p.selected.size()) == o.links);
    CHECK(p.total_cost <= budget + kCostTolerance);
    // The reported score is the score of the rebuilt graph.
    CHECK(rupture_score(reconstruct(g, p), x).rupture == p.score.rupture);
    if (power) CHECK(power_feasible(m, p.sigmas()));

    ResponseOptions plain;
    plain.use_cuts = false;
    const ReconstructionPlan q = solve_response(m, plain);
    CHECK(q.sigmas() == p.sigmas());
    if (!power) {
      const ReconstructionPlan e = enumerate_response(g, x, m);
      CHECK(e.score.rupture == p.score.rupture);
      CHECK(e.sigmas() == p.sigmas());
    }
    ++checked;
  }
  CHECK(checked >= 80);
}

TEST_CASE("resilience is non-decreasing in the response budget") {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 40; ++t) {
    const int n = std::uniform_int_distribution<int>(6, 11)(rng);
    const Graph g = oracle::random_graph(rng, n, 2);
    NodeSet x(n);
    x.insert(std::uniform_int_distribution<int>(0, n - 1)(rng));
    x.insert(std::uniform_int_distribution<int>(0, n - 1)(rng));
    if (components(g, x).count() < 2) continue;
    int last = std::numeric_limits<int>::min();
    for (double b : {0.0, 1.0, 2.0, 3.5, 5.0, 8.0, kUnlimitedBudget}) {
      const int res = solve_response(ResponseModel::build(g, x, b)).resilience();
      CHECK(res >= last);
      last = res;
    }
  }
}

TEST_CASE("each merge lowers the component count by one") {
  const InstanceFile f = nine_node();
  const Graph g = f.graph();
  const NodeSet x = one_based(9, {5});
  const ReconstructionPlan p = solve_response(ResponseModel::build(g, x, kUnlimitedBudget));
  const int before = components(g, x).count();
  CHECK(p.merged_partition.count() == before - static_cast<int>(p.selected.size()));
}

TEST_CASE("generator coupling on the 14-bus network") {
  const InstanceFile f = ieee14();
  const Graph g = f.graph();
  const NodeSet x = one_based(14, {2, 4, 6, 9});
  const ResponseModel m = apply_power_constraint(ResponseModel::build(g, x, 3.0));
  // Ordered by smallest member: {1,5},{3},{7,8},{10,11},{12,13,14}.
  REQUIRE(m.component_count() == 5);
  CHECK(m.component_class[0] == ComponentClass::kHasGenerator);
  CHECK(m.component_class[3] == ComponentClass::kLoadOnly);
  CHECK(m.component_class[4] == ComponentClass::kLoadOnly);
  const FlatIndex fi(5);
  const int load_pair = fi.sigma(4, 5);
  const int to_gen = fi.sigma(1, 5);
  CHECK_FALSE(power_feasible(m, std::vector<int>{load_pair}));
  CHECK(power_feasible(m, std::vector<int>{load_pair, to_gen}));
  CHECK(power_feasible(m, std::vector<int>{to_gen}));

  SUBCASE("a budget that only affords the load-only link leaves the plan empty") {
    ResponseModel only = m;
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b)
        if (a != b && !((a == 3 && b == 4) || (a == 4 && b == 3)))
          only.mceic.cost[static_cast<size_t>(a) * 5 + b] = 10.0;
    only.budget = 3.0;
    CHECK(solve_response(only).selected.empty());
    ResponseModel free_rule = only;
    free_rule.power_constraint = false;
    CHECK(solve_response(free_rule).sigmas() == std::vector<int>{load_pair});
  }
  SUBCASE("without load-only pairs the rule changes nothing") {
    const NodeSet y = one_based(14, {4});
    const ResponseModel a = ResponseModel::build(g, y, 3.0);
    const ResponseModel b = apply_power_constraint(a);
    CHECK(solve_response(a).sigmas() == solve_response(b).sigmas());
  }
}

TEST_CASE("14-bus with budget 3 adds exactly two links") {
  const InstanceFile f = ieee14();
  const Graph g = f.graph();
  const NodeSet x = one_based(14, {2, 4, 6, 9});
  const ReconstructionPlan p = solve_response(ResponseModel::build(g, x, 3.0));
  CHECK(p.selected.size() == 2);
  CHECK(p.total_cost <= 3.0 + kCostTolerance);
  const oracle::Response o = oracle::best_response(g, flags(x), 3.0);
  CHECK(p.score.rupture == o.rupture);
}

TEST_CASE("dynamic worst cut") {
  const InstanceFile f = nine_node();
  const Graph g = f.graph();
  const NodeSet x = one_based(9, {5});
  const AttackModel attack = AttackModel::targeted(g, 4);

  SUBCASE("empty plan leaves the attack unchanged") {
    const ReconstructionPlan p = solve_response(ResponseModel::build(g, x, 0.5));
    REQUIRE(p.selected.empty());
    const AttackResult d = dynamic_worst_cut(g, p, attack);
    const AttackResult a = solve_attack(attack);
    CHECK(d.score.rupture == a.score.rupture);
    CHECK(d.cut_nodes() == a.cut_nodes());
  }
  SUBCASE("links are added at their realized endpoints") {
    const ReconstructionPlan p = solve_response(ResponseModel::build(g, x, kUnlimitedBudget));
    const Graph h = reconstruct(g, p);
    CHECK(h.edge_count() == g.edge_count() + p.selected.size());
    for (const auto& l : p.selected) {
      CHECK(h.has_edge(l.i, l.j));
      CHECK_FALSE(h.link_cost(l.i, l.j).has_value());
    }
    const AttackResult d = dynamic_worst_cut(g, p, attack);
    const oracle::Worst w = oracle::worst_cut(h, 4, {0, 1, 2, 3, 4, 5, 6, 7, 8});
    CHECK(d.score.rupture == w.rupture);
    CHECK(d.cut_nodes() == w.nodes);
  }
}

TEST_CASE("response model validation") {
  const InstanceFile f = nine_node();
  const Graph g = f.graph();
  CHECK_THROWS_AS(ResponseModel::build(g, one_based(9, {5}), -1.0), Error);
  const ResponseModel single = ResponseModel::build(g, NodeSet(9), 2.0);
  CHECK(single.component_count() == 1);
  CHECK(solve_response(single).selected.empty());
}
