#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "resil/cutgen.hpp"
#include "resil/error.hpp"

using namespace resil;

namespace {

Cover cover_of(std::vector<int> idx) {
  Cover c;
  c.indices = std::move(idx);
  c.minimal = true;
  return c;
}

// Test-side validity check: no feasible point of the knapsack violates the cut.
bool removes_no_point(const KnapsackConstraint& k, const LiftedCoverCut& cut) {
  for (uint32_t m : oracle::feasible_points(k.coeffs, k.capacity)) {
    int lhs = 0;
    for (int j = 0; j < k.size(); ++j)
      if ((m >> j) & 1U) lhs += cut.coeffs[j];
    if (lhs > cut.rhs) return false;
  }
  return true;
}

double abar_residual(const KnapsackConstraint& k, const Cover& c, double abar) {
  double s = 0.0;
  for (int j : c.indices) s += std::min(k.coeffs[j], abar);
  return s - k.capacity;
}

}  // namespace

TEST_CASE("find_cover examples") {
  SUBCASE("(4,3,3,2), b=6") {
    const auto c = find_cover({{4, 3, 3, 2}, 6});
    REQUIRE(c.has_value());
    CHECK(c->indices == std::vector<int>{0, 1});
    CHECK(c->minimal);
  }
  SUBCASE("total weight below capacity") { CHECK_FALSE(find_cover({{1, 1}, 5}).has_value()); }
  SUBCASE("(5,5,5), b=9") {
    const auto c = find_cover({{5, 5, 5}, 9});
    REQUIRE(c.has_value());
    CHECK(c->indices == std::vector<int>{0, 1});
  }
  SUBCASE("greedy result is peeled to minimality") {
    const KnapsackConstraint k{{1, 6, 2, 2}, 6};
    const std::vector<int> order{0, 2, 3, 1};
    const auto c = find_cover(k, order);
    REQUIRE(c.has_value());
    CHECK(is_cover(k, c->indices));
    CHECK(is_minimal_cover(k, c->indices));
  }
}

TEST_CASE("cover inequalities") {
  const KnapsackConstraint k{{5, 5, 5}, 9};
  const LiftedCoverCut ci = cover_inequality(k, cover_of({0, 1}));
  CHECK(ci.coeffs == std::vector<int>{1, 1, 0});
  CHECK(ci.rhs == 1);
  CHECK(ci.to_string() == "x1 + x2 <= 1");
  CHECK(verify_cut(k, ci).valid);

  const KnapsackConstraint big{{2, 9, 1}, 5};
  const LiftedCoverCut fix = cover_inequality(big, cover_of({1}));
  CHECK(fix.rhs == 0);
  CHECK(fix.coeffs == std::vector<int>{0, 1, 0});
}

TEST_CASE("abar examples") {
  CHECK(compute_abar({{4, 3}, 6}, cover_of({0, 1})) == doctest::Approx(3.0));
  CHECK(compute_abar({{7, 3}, 8}, cover_of({0, 1})) == doctest::Approx(5.0));
  CHECK(compute_abar({{3, 3}, 6}, cover_of({0, 1})) == doctest::Approx(3.0));
  CHECK(compute_abar({{5, 5, 5}, 9}, cover_of({0, 1})) == doctest::Approx(4.5));
}

TEST_CASE("lifting fixtures") {
  SUBCASE("(4,3,3,2), b=6 keeps the plain cover inequality") {
    const KnapsackConstraint k{{4, 3, 3, 2}, 6};
    const LiftedCoverCut cut = lift_cover(k, cover_of({0, 1}));
    CHECK(cut.coeffs == std::vector<int>{1, 1, 0, 0});
    CHECK(cut.rhs == 1);
    CHECK(cut.cminus == std::vector<int>{1});
    CHECK(cut.verified);
    CHECK_FALSE(cut.downgraded);
    CHECK(removes_no_point(k, cut));
  }
  SUBCASE("(4,3,3,6), b=6 lifts x4") {
    const KnapsackConstraint k{{4, 3, 3, 6}, 6};
    const LiftedCoverCut cut = lift_cover(k, cover_of({0, 1}));
    CHECK(cut.to_string() == "x1 + x2 + x4 <= 1");
    CHECK(cut.verified);
    CHECK(cut.dominates_ci);
    CHECK(removes_no_point(k, cut));
    // Strictly stronger: x4 = 1 alone is cut-tight but the CI leaves it free.
    const LiftedCoverCut ci = cover_inequality(k, cover_of({0, 1}));
    CHECK(ci.coeffs[3] == 0);
  }
  SUBCASE("(5,5,5), b=9 with an empty C-minus") {
    const KnapsackConstraint k{{5, 5, 5}, 9};
    const LiftedCoverCut cut = lift_cover(k, cover_of({0, 1}));
    CHECK(cut.cminus.empty());
    CHECK(cut.to_string() == "x1 + x2 + x3 <= 1");
    CHECK(removes_no_point(k, cut));
  }
}

TEST_CASE("verification rejects a corrupted cut and guards size") {
  const KnapsackConstraint k{{4, 3, 3, 6}, 6};
  LiftedCoverCut cut = lift_cover(k, cover_of({0, 1}));
  cut.rhs -= 1;
  CHECK_FALSE(verify_cut(k, cut).valid);

  KnapsackConstraint wide;
  wide.coeffs.assign(kVerifyCap + 1, 1.0);
  wide.capacity = 3;
  LiftedCoverCut any = cover_inequality(wide, cover_of({0, 1, 2, 3}));
  CHECK_THROWS_AS(verify_cut(wide, any), Error);
}

TEST_CASE("abar solves its equation and a perturbation breaks it") {
  std::mt19937_64 rng(3);
  int checked = 0;
  for (int t = 0; t < 400; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 10)(rng);
    KnapsackConstraint k;
    for (int j = 0; j < n; ++j) k.coeffs.push_back(std::uniform_int_distribution<int>(1, 40)(rng) / 4.0);
    double total = 0.0;
    for (double a : k.coeffs) total += a;
    k.capacity = std::uniform_real_distribution<double>(0.3, 0.9)(rng) * total;
    const auto c = find_cover(k);
    if (!c) continue;
    const double abar = compute_abar(k, *c);
    CHECK(abar > 0.0);
    CHECK(std::abs(abar_residual(k, *c, abar)) < 1e-9);
    // Below max a_C the residual is strictly increasing in abar.
    double amax = 0.0;
    for (int j : c->indices) amax = std::max(amax, k.coeffs[j]);
    if (abar < amax - 1e-6) {
      CHECK(std::abs(abar_residual(k, *c, abar + 1e-6)) > 1e-12);
      CHECK(std::abs(abar_residual(k, *c, abar - 1e-6)) > 1e-12);
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("generated cuts are valid, dominate their CI and use unit weights on C-minus") {
  std::mt19937_64 rng(99);
  int produced = 0;
  for (int t = 0; t < 300; ++t) {
    const int n = std::uniform_int_distribution<int>(2, 12)(rng);
    KnapsackConstraint k;
    const bool decimal = t % 2 == 1;
    for (int j = 0; j < n; ++j) {
      const int raw = std::uniform_int_distribution<int>(1, decimal ? 90 : 9)(rng);
      k.coeffs.push_back(decimal ? raw / 10.0 : raw);
    }
    double total = 0.0;
    for (double a : k.coeffs) total += a;
    k.capacity = std::max(0.1, std::round(std::uniform_real_distribution<double>(0.2, 0.8)(rng) * total * 10) / 10);
    for (const LiftedCoverCut& cut : generate_cuts(k)) {
      ++produced;
      CHECK(cut.verified);
      CHECK(removes_no_point(k, cut));
      CHECK(cut.rhs == static_cast<int>(cut.cover.size()) - 1);
      for (int j : cut.cover) CHECK(cut.coeffs[j] >= 1);
      for (int j : cut.cminus) CHECK(cut.coeffs[j] == 1);
      for (int v : cut.coeffs) CHECK(v >= 0);
    }
  }
  CHECK(produced > 200);
}

TEST_CASE("unchecked lifting can be audited") {
  const KnapsackConstraint k{{4, 3, 3, 6}, 6};
  const LiftedCoverCut raw = lift_cover_unchecked(k, cover_of({0, 1}));
  CHECK_FALSE(raw.verified);
  CHECK(verify_cut(k, raw).valid);
}

TEST_CASE("fractional knapsack bound") {
  const std::vector<double> w{3, 2, 1, -1};
  const std::vector<double> c{1, 1, 1, 1};
  CHECK(fractional_knapsack_bound(w, c, 1.5) == doctest::Approx(4.0));
  CHECK(fractional_knapsack_bound(w, c, 10) == doctest::Approx(6.0));
  CHECK(fractional_knapsack_bound(w, c, 0) == doctest::Approx(0.0));
}

TEST_CASE("integer scale") {
  const std::vector<double> a{1.5, 2.25};
  REQUIRE(integer_scale(a).has_value());
  CHECK(*integer_scale(a) == 100);
  const std::vector<double> b{1.0 / 3.0};
  CHECK_FALSE(integer_scale(b).has_value());
}

TEST_CASE("knapsack validation") {
  CHECK_THROWS_AS((KnapsackConstraint{{1, -1}, 3}).validate(), Error);
  CHECK_THROWS_AS((KnapsackConstraint{{1, 1}, 0}).validate(), Error);
  CHECK_NOTHROW((KnapsackConstraint{{1, 1}, 1}).validate());
}
