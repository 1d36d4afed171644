#include "resil/response.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <string>

#include "resil/cutgen.hpp"
#include "resil/error.hpp"
#include "resil/union_find.hpp"

namespace resil {

std::pair<int, int> MceicMatrix::endpoint(int m, int n) const {
  const auto e = endpoints[static_cast<size_t>(m) * size + n];
  return e;
}

MceicMatrix mceic_matrix(const Graph& g, const ComponentPartition& p) {
  const int s = p.count();
  if (s < 2) fail(ErrorCode::kInvalidArgument, "MCEIC matrix needs at least two components");
  MceicMatrix mx;
  mx.size = s;
  mx.cost.assign(static_cast<size_t>(s) * s, std::numeric_limits<double>::quiet_NaN());
  mx.endpoints.assign(static_cast<size_t>(s) * s, {-1, -1});
  for (int m = 0; m < s; ++m) {
    for (int n = m + 1; n < s; ++n) {
      double best = std::numeric_limits<double>::infinity();
      std::pair<int, int> arg{-1, -1};
      // Members are sorted, so the first strict improvement is the
      // lexicographically smallest minimizer.
      for (int i : p.components[m]) {
        for (int j : p.components[n]) {
          const auto c = g.link_cost(i, j);
          if (!c)
            fail(ErrorCode::kMissingCost, "no link cost for " + std::to_string(i + 1) + "-" +
                                              std::to_string(j + 1));
          if (*c < best) {
            best = *c;
            arg = {i, j};
          }
        }
      }
      mx.cost[static_cast<size_t>(m) * s + n] = best;
      mx.cost[static_cast<size_t>(n) * s + m] = best;
      mx.endpoints[static_cast<size_t>(m) * s + n] = arg;
      mx.endpoints[static_cast<size_t>(n) * s + m] = {arg.second, arg.first};
    }
  }
  return mx;
}

FlatIndex::FlatIndex(int s) : s_(s) {
  if (s < 2) fail(ErrorCode::kInvalidArgument, "flattening needs s >= 2");
}

int FlatIndex::row_start(int m) const {
  // 1 + sum_{k=1}^{m-1} (s - k)
  return 1 + (m - 1) * s_ - (m - 1) * m / 2;
}

int FlatIndex::sigma(int m, int n) const {
  if (m < 1 || n > s_ || m >= n) fail(ErrorCode::kInvalidArgument, "sigma needs 1 <= m < n <= s");
  return (n - m) + row_start(m) - 1;
}

std::pair<int, int> FlatIndex::pair(int z) const {
  if (z < 1 || z > length()) fail(ErrorCode::kInvalidArgument, "flat position out of range");
  int m = 1;
  while (m < s_ - 1 && row_start(m + 1) <= z) ++m;
  return {m, m + (z - row_start(m)) + 1};
}

FlatIndex flatten(int s) { return FlatIndex(s); }

ResponseModel ResponseModel::build(const Graph& g, const NodeSet& removed, double budget) {
  if (!(budget >= 0.0)) fail(ErrorCode::kInvalidArgument, "response budget must be nonnegative");
  ResponseModel m;
  m.partition = components(g, removed);
  m.budget = budget;
  m.cut_size = removed.count();
  m.survivors = g.node_count() - m.cut_size;
  if (m.partition.count() >= 2) m.mceic = mceic_matrix(g, m.partition);
  for (const auto& comp : m.partition.components) {
    bool gen = false;
    for (int v : comp) gen = gen || g.node_class(v) == NodeClass::kGenerator;
    m.component_class.push_back(gen ? ComponentClass::kHasGenerator : ComponentClass::kLoadOnly);
  }
  return m;
}

std::vector<double> ResponseModel::flat_costs() const {
  const int s = component_count();
  std::vector<double> d;
  if (s < 2) return d;
  for (int m = 0; m < s; ++m)
    for (int n = m + 1; n < s; ++n) d.push_back(mceic.at(m, n));
  return d;
}

ResponseModel apply_power_constraint(ResponseModel m) {
  if (m.component_class.size() != static_cast<size_t>(m.component_count()))
    fail(ErrorCode::kInvalidArgument, "component classes are not populated");
  m.power_constraint = true;
  return m;
}

bool power_feasible(const ResponseModel& m, std::span<const int> sigmas) {
  const int s = m.component_count();
  if (s < 2) return true;
  const FlatIndex fi(s);
  std::vector<char> chosen(fi.length() + 1, 0);
  for (int z : sigmas) chosen[z] = 1;
  auto linked = [&](int a, int b) {  // zero-based components
    if (a == b) return false;
    return chosen[fi.sigma(std::min(a, b) + 1, std::max(a, b) + 1)] != 0;
  };
  for (int z : sigmas) {
    const auto [m1, n1] = fi.pair(z);
    const int a = m1 - 1;
    const int b = n1 - 1;
    if (m.component_class[a] != ComponentClass::kLoadOnly ||
        m.component_class[b] != ComponentClass::kLoadOnly)
      continue;
    bool supported = false;
    for (int g = 0; g < s && !supported; ++g) {
      if (m.component_class[g] != ComponentClass::kHasGenerator) continue;
      supported = linked(a, g) || linked(b, g);
    }
    if (!supported) return false;
  }
  return true;
}

std::vector<int> ReconstructionPlan::sigmas() const {
  std::vector<int> z;
  for (const auto& l : selected) z.push_back(l.sigma);
  return z;
}

namespace {

constexpr double kEps = 1e-9;

bool plan_preferred(int r1, double c1, const std::vector<int>& s1, int r2, double c2,
                    const std::vector<int>& s2) {
  if (r1 != r2) return r1 < r2;
  if (std::abs(c1 - c2) > kEps) return c1 < c2;
  // Fewer links first: with zero-cost links a redundant selection would
  // otherwise tie on cost.
  if (s1.size() != s2.size()) return s1.size() < s2.size();
  return std::lexicographical_compare(s1.begin(), s1.end(), s2.begin(), s2.end());
}

ReconstructionPlan materialize(const ResponseModel& m, const std::vector<int>& sigmas) {
  ReconstructionPlan plan;
  const int s = m.component_count();
  UnionFind uf(std::max(s, 1), m.partition.sizes());
  if (s >= 2) {
    const FlatIndex fi(s);
    for (int z : sigmas) {
      const auto [m1, n1] = fi.pair(z);
      SelectedLink l;
      l.sigma = z;
      l.m = m1 - 1;
      l.n = n1 - 1;
      std::tie(l.i, l.j) = m.mceic.endpoint(l.m, l.n);
      l.cost = m.mceic.at(l.m, l.n);
      plan.total_cost += l.cost;
      plan.selected.push_back(l);
      uf.unite(l.m, l.n);
    }
  }
  std::vector<std::vector<int>> groups(std::max(s, 1));
  for (int c = 0; c < s; ++c) {
    auto& g = groups[uf.find(c)];
    g.insert(g.end(), m.partition.components[c].begin(), m.partition.components[c].end());
  }
  for (auto& g : groups) {
    if (g.empty()) continue;
    std::sort(g.begin(), g.end());
    plan.merged_partition.components.push_back(std::move(g));
  }
  std::sort(plan.merged_partition.components.begin(), plan.merged_partition.components.end());
  plan.score.cut_size = m.cut_size;
  plan.score.count = plan.merged_partition.count();
  plan.score.largest = plan.merged_partition.largest_size();
  plan.score.rupture = -plan.score.cut_size - plan.score.largest + plan.score.count;
  plan.score.is_cut = plan.score.count >= 2 || m.survivors == 1;
  return plan;
}

class ResponseSearch {
 public:
  ResponseSearch(const ResponseModel& m, const ResponseOptions& opt)
      : m_(m), s_(m.component_count()), costs_(m.flat_costs()) {
    if (opt.use_cuts && std::isfinite(m.budget) && m.budget > 0.0 && !costs_.empty() &&
        static_cast<int>(costs_.size()) <= kVerifyCap) {
      cuts_ = generate_cuts(KnapsackConstraint{costs_, m.budget});
    }
  }

  ReconstructionPlan run() {
    const auto t0 = std::chrono::steady_clock::now();
    if (s_ >= 2) {
      const FlatIndex fi(s_);
      for (int z = 1; z <= fi.length(); ++z) pairs_.push_back(fi.pair(z));
      UnionFind uf(s_, m_.partition.sizes());
      std::vector<int> chosen;
      std::vector<int> cut_lhs(cuts_.size(), 0);
      visit(0, uf, chosen, 0.0, cut_lhs, true);
    }
    ReconstructionPlan plan = materialize(m_, best_sigmas_);
    plan.stats = stats_;
    plan.stats.cuts = static_cast<int>(cuts_.size());
    plan.stats.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return plan;
  }

 private:
  int objective(UnionFind& uf) const {
    int largest = 0;
    for (int c = 0; c < s_; ++c) largest = std::max(largest, uf.weight(c));
    return -m_.cut_size - largest + uf.set_count();
  }

  void evaluate(UnionFind& uf, const std::vector<int>& chosen, double cost) {
    if (m_.power_constraint && !power_feasible(m_, chosen)) return;
    const int r = objective(uf);
    if (!have_ || plan_preferred(r, cost, chosen, best_r_, best_cost_, best_sigmas_)) {
      have_ = true;
      best_r_ = r;
      best_cost_ = cost;
      best_sigmas_ = chosen;
    }
  }

  // Lower bound on r^R over completions: at most k more merges, where k is
  // capped by the remaining candidates, the components left, and the LP
  // relaxation (unit weights) of the budget and of every lifted cover cut.
  // k merges join at most k+1 current groups, so m' <= sum of the k+1
  // largest group sizes, and w' >= w - k.
  struct Bound {
    int with_cuts;
    int without_cuts;
  };

  Bound bound(int depth, UnionFind& uf, double cost, const std::vector<int>& cut_lhs) const {
    const int remaining = static_cast<int>(costs_.size()) - depth;
    const int omega = uf.set_count();
    auto cap_from = [&](double lp) {
      return std::min<int>(std::min(remaining, omega - 1),
                           static_cast<int>(std::floor(lp + kEps)));
    };
    int k_plain = std::min(remaining, omega - 1);
    int k_cuts = k_plain;
    if (std::isfinite(m_.budget)) {
      std::vector<double> ones(remaining, 1.0);
      std::span<const double> tail(costs_.data() + depth, remaining);
      k_plain = cap_from(fractional_knapsack_bound(ones, tail, m_.budget - cost));
      k_cuts = k_plain;
      std::vector<double> gamma(remaining);
      for (size_t c = 0; c < cuts_.size(); ++c) {
        for (int u = 0; u < remaining; ++u) gamma[u] = cuts_[c].coeffs[depth + u];
        const double residual = static_cast<double>(cuts_[c].rhs - cut_lhs[c]);
        k_cuts = std::min(k_cuts, cap_from(fractional_knapsack_bound(ones, gamma, residual)));
      }
    }
    std::vector<int> sizes;
    for (int c = 0; c < s_; ++c)
      if (uf.find(c) == c) sizes.push_back(uf.weight(c));
    std::sort(sizes.begin(), sizes.end(), std::greater<int>());
    auto lb = [&](int k) {
      int top = 0;
      for (int t = 0; t <= k && t < static_cast<int>(sizes.size()); ++t) top += sizes[t];
      return -m_.cut_size - top + omega - k;
    };
    return {lb(k_cuts), lb(k_plain)};
  }

  bool prunes(int lb, double cost) const {
    if (!have_) return false;
    if (lb > best_r_) return true;
    return lb == best_r_ && cost > best_cost_ + kEps;
  }

  void visit(int depth, UnionFind& uf, std::vector<int>& chosen, double cost,
             std::vector<int>& cut_lhs, bool fresh) {
    ++stats_.nodes;
    if (fresh) evaluate(uf, chosen, cost);
    if (depth == static_cast<int>(costs_.size()) || uf.set_count() == 1) return;

    const Bound b = bound(depth, uf, cost, cut_lhs);
    if (prunes(b.with_cuts, cost)) {
      if (!prunes(b.without_cuts, cost)) ++stats_.cut_prunes;
      return;
    }

    const int z = depth + 1;
    const auto [m1, n1] = pairs_[depth];
    const double c = costs_[depth];
    const bool affordable = cost + c <= m_.budget + kCostTolerance;
    // A link inside an already merged group changes neither m' nor w';
    // only the coupling rule can make one worth paying for.
    const bool redundant = uf.find(m1 - 1) == uf.find(n1 - 1);
    if (affordable && (!redundant || m_.power_constraint)) {
      UnionFind next = uf;
      next.unite(m1 - 1, n1 - 1);
      chosen.push_back(z);
      for (size_t k = 0; k < cuts_.size(); ++k) cut_lhs[k] += cuts_[k].coeffs[depth];
      visit(depth + 1, next, chosen, cost + c, cut_lhs, true);
      for (size_t k = 0; k < cuts_.size(); ++k) cut_lhs[k] -= cuts_[k].coeffs[depth];
      chosen.pop_back();
    }
    visit(depth + 1, uf, chosen, cost, cut_lhs, false);
  }

  const ResponseModel& m_;
  int s_;
  std::vector<double> costs_;
  std::vector<LiftedCoverCut> cuts_;
  std::vector<std::pair<int, int>> pairs_;
  SolverStats stats_;
  bool have_ = false;
  int best_r_ = 0;
  double best_cost_ = 0.0;
  std::vector<int> best_sigmas_;
};

}  // namespace

ReconstructionPlan solve_response(const ResponseModel& m, const ResponseOptions& opt) {
  return ResponseSearch(m, opt).run();
}

ReconstructionPlan enumerate_response(const Graph& g, const NodeSet& removed,
                                      const ResponseModel& m, int cap) {
  const std::vector<double> costs = m.flat_costs();
  const int p = static_cast<int>(costs.size());
  if (p > cap)
    fail(ErrorCode::kSizeGuard, "response enumeration refuses " + std::to_string(p) + " links");
  const int n = g.node_count();
  // Node-level union-find over the surviving edges of G - X.
  UnionFind base(n);
  for (const auto& [i, j] : g.edges())
    if (!removed.contains(i) && !removed.contains(j)) base.unite(i, j);
  std::vector<std::pair<int, int>> links;
  if (m.component_count() >= 2) {
    const FlatIndex fi(m.component_count());
    for (int z = 1; z <= p; ++z) {
      const auto [m1, n1] = fi.pair(z);
      links.push_back(m.mceic.endpoint(m1 - 1, n1 - 1));
    }
  }
  bool have = false;
  int best_r = 0;
  double best_cost = 0.0;
  std::vector<int> best;
  for (uint64_t mask = 0; mask < (uint64_t{1} << p); ++mask) {
    double cost = 0.0;
    std::vector<int> sig;
    for (int z = 0; z < p; ++z) {
      if ((mask >> z) & 1U) {
        cost += costs[z];
        sig.push_back(z + 1);
      }
    }
    if (cost > m.budget + kCostTolerance) continue;
    if (m.power_constraint && !power_feasible(m, sig)) continue;
    UnionFind uf = base;
    for (int z : sig) uf.unite(links[z - 1].first, links[z - 1].second);
    std::vector<int> size_of_root(n, 0);
    int count = 0;
    int largest = 0;
    for (int v = 0; v < n; ++v) {
      if (removed.contains(v)) continue;
      const int root = uf.find(v);
      if (size_of_root[root]++ == 0) ++count;
      largest = std::max(largest, size_of_root[root]);
    }
    const int r = -removed.count() - largest + count;
    if (!have || plan_preferred(r, cost, sig, best_r, best_cost, best)) {
      have = true;
      best_r = r;
      best_cost = cost;
      best = sig;
    }
  }
  return materialize(m, best);
}

Graph reconstruct(const Graph& g, const ReconstructionPlan& plan) {
  Graph out = g;
  for (const auto& l : plan.selected) {
    if (out.has_edge(l.i, l.j)) continue;
    out.add_edge(l.i, l.j);
    out.clear_link_cost(l.i, l.j);
  }
  return out;
}

AttackResult dynamic_worst_cut(const Graph& g, const ReconstructionPlan& plan,
                               const AttackModel& attack, const AttackOptions& opt) {
  AttackModel m{reconstruct(g, plan), attack.budget, attack.attackable};
  return solve_attack(m, opt);
}

}  // namespace resil
