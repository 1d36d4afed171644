#include "resil/attack.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "resil/error.hpp"

namespace resil {

AttackModel AttackModel::targeted(Graph g, double budget) {
  const int n = g.node_count();
  return AttackModel{std::move(g), budget, NodeSet::full(n)};
}

AttackModel AttackModel::distributed(Graph g, double budget, const NodeSet& attackable) {
  AttackModel m{std::move(g), budget, attackable};
  m.validate();
  return m;
}

NodeSet AttackModel::intact() const {
  NodeSet s = NodeSet::full(graph.node_count());
  s -= attackable;
  return s;
}

void AttackModel::validate() const {
  if (attackable.capacity() != graph.node_count())
    fail(ErrorCode::kInvalidArgument, "attackable set does not match the graph size");
  if (!(budget >= 0.0)) fail(ErrorCode::kInvalidArgument, "attack budget must be nonnegative");
}

KnapsackConstraint AttackModel::budget_knapsack() const {
  KnapsackConstraint k;
  attackable.for_each([&](int v) { k.coeffs.push_back(graph.attack_cost(v)); });
  k.capacity = budget;
  return k;
}

RelaxedValues relaxed_leaf(const Graph& g, const NodeSet& removed) {
  const ComponentPartition p = components(g, removed);
  RelaxedValues r;
  r.b.assign(g.node_count(), 0.0);
  // Each variable has a single-signed objective coefficient and independent
  // bounds, so the continuous optimum sits at its tightest bound.
  double alpha_lb = 0.0;
  for (int c = 0; c < p.count(); ++c) {
    const double len = static_cast<double>(p.components[c].size());
    alpha_lb = std::max(alpha_lb, len);
    r.b[c] = std::min(1.0, len);
  }
  r.alpha = alpha_lb;
  r.integral = std::abs(r.alpha - std::round(r.alpha)) <= 1e-9;
  for (double b : r.b) r.integral = r.integral && std::abs(b - std::round(b)) <= 1e-9;
  return r;
}

namespace {

class Engine {
 public:
  Engine(const AttackModel& m, const std::vector<LiftedCoverCut>& cuts, bool relaxed)
      : g_(m.graph), m_(m), cuts_(cuts), relaxed_(relaxed), n_(m.graph.node_count()) {
    m.validate();
    order_ = m.attackable.to_vector();
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return g_.degree(a) > g_.degree(b); });
    const std::vector<int> items = m.knapsack_items();
    cut_index_.assign(n_, -1);
    for (size_t j = 0; j < items.size(); ++j) cut_index_[items[j]] = static_cast<int>(j);
    for (const auto& c : cuts_) {
      if (!c.verified) fail(ErrorCode::kInvalidArgument, "unverified cut supplied to the attack solver");
      if (c.coeffs.size() != items.size())
        fail(ErrorCode::kInvalidArgument, "cut does not match the budget knapsack");
    }
  }

  AttackResult run() {
    const auto t0 = std::chrono::steady_clock::now();
    NodeSet removed(n_);
    NodeSet kept = m_.intact();
    std::vector<int> cut_lhs(cuts_.size(), 0);
    visit(0, removed, kept, 0.0, cut_lhs, true);

    AttackResult res;
    res.stats = stats_;
    res.stats.cuts = static_cast<int>(cuts_.size());
    if (have_incumbent_) {
      res.status = SolveStatus::kOptimal;
      res.cut = CutSet{best_, true};
      res.score = rupture_score(g_, best_);
      res.partition = components(g_, best_);
      if (relaxed_) res.relaxed = relaxed_leaf(g_, best_);
    } else {
      res.status = SolveStatus::kInfeasible;
      res.cut = CutSet{NodeSet(n_), false};
    }
    res.stats.time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return res;
  }

 private:
  // Scores X with every undecided node kept.
  void evaluate(const NodeSet& removed) {
    const int size = removed.count();
    if (size >= n_) return;
    RuptureScore s = rupture_score(g_, removed);
    if (!s.is_cut) return;
    if (relaxed_) {
      const RelaxedValues r = relaxed_leaf(g_, removed);
      if (!r.integral) fail(ErrorCode::kInternal, "relaxed leaf is fractional");
      double nonempty = 0.0;
      for (double b : r.b) nonempty += b;
      s.rupture = static_cast<int>(std::llround(-size - r.alpha + nonempty));
    }
    const std::vector<int> nodes = removed.to_vector();
    if (!have_incumbent_ || attack_preferred(s, nodes, best_score_, best_nodes_)) {
      have_incumbent_ = true;
      best_ = removed;
      best_score_ = s;
      best_nodes_ = nodes;
    }
  }

  // Upper bounds on r over every completion X = X_f ∪ A, A ⊆ U (undecided).
  //
  // Structural bound: every component of G[K] (K = kept nodes) lies inside
  // one final component, so m >= m_K; a final component that contains no
  // kept node consists of undecided nodes with no kept neighbour ("free"),
  // so w <= w_K + |free|; and -|X| <= -|X_f|.
  //
  // Growth bound: deleting a vertex v from H raises w by at most deg_H(v)-1
  // and degrees only fall as more vertices go, hence
  //   w(G - X) <= w(G - X_f) + sum_{v in A} (deg_{G-X_f}(v) - 1)
  // and r <= -|X_f| - m_K + w(G - X_f) + max_A sum_{v in A} (deg(v) - 2).
  // The max over budget-feasible A is bounded by the LP relaxation of any
  // single valid constraint (the budget itself or a lifted cover cut); the
  // minimum of these is still an upper bound.
  struct Bounds {
    int with_cuts;
    int without_cuts;
  };

  Bounds bound(int depth, const NodeSet& removed, const NodeSet& kept, double cost,
               const std::vector<int>& cut_lhs) const {
    const int xf = removed.count();

    NodeSet outside_kept = NodeSet::full(n_);
    outside_kept -= kept;
    int omega_k = 0;
    int m_k = 1;
    if (!kept.empty()) {
      const ComponentPartition pk = components(g_, outside_kept);
      omega_k = pk.count();
      m_k = std::max(1, pk.largest_size());
    }
    int free_count = 0;
    std::vector<double> weights;
    std::vector<double> costs;
    std::vector<int> undecided;
    for (size_t d = depth; d < order_.size(); ++d) {
      const int v = order_[d];
      undecided.push_back(v);
      NodeSet nb = g_.neighbors(v);
      nb &= kept;
      if (nb.empty()) ++free_count;
    }
    const int structural = -xf - m_k + omega_k + free_count;

    int omega0 = 0;
    {
      RuptureScore s0;
      if (xf < n_) s0 = rupture_score(g_, removed);
      omega0 = s0.count;
    }
    for (int v : undecided) {
      NodeSet nb = g_.neighbors(v);
      nb -= removed;
      weights.push_back(static_cast<double>(nb.count() - 2));
      costs.push_back(g_.attack_cost(v));
    }
    const double budget_lp = fractional_knapsack_bound(weights, costs, m_.budget - cost);
    double cut_lp = budget_lp;
    std::vector<double> gamma(undecided.size());
    for (size_t c = 0; c < cuts_.size(); ++c) {
      for (size_t u = 0; u < undecided.size(); ++u)
        gamma[u] = cuts_[c].coeffs[cut_index_[undecided[u]]];
      const double residual = static_cast<double>(cuts_[c].rhs - cut_lhs[c]);
      cut_lp = std::min(cut_lp, fractional_knapsack_bound(weights, gamma, residual));
    }
    auto gain = [](double lp) { return static_cast<int>(std::floor(lp + 1e-9)); };
    const int growth_plain = -xf - m_k + omega0 + gain(budget_lp);
    const int growth_cuts = -xf - m_k + omega0 + gain(cut_lp);
    return {std::min(structural, growth_cuts), std::min(structural, growth_plain)};
  }

  bool prunes(int bound_value, int xf) const {
    if (!have_incumbent_) return false;
    if (bound_value < best_score_.rupture) return true;
    // Equal rupture: completions other than X_f itself are strictly larger,
    // and X_f has already been scored.
    return bound_value == best_score_.rupture && xf >= static_cast<int>(best_nodes_.size());
  }

  void visit(int depth, NodeSet& removed, NodeSet& kept, double cost, std::vector<int>& cut_lhs,
             bool fresh) {
    ++stats_.nodes;
    if (fresh) evaluate(removed);
    if (depth == static_cast<int>(order_.size())) return;

    bool affordable = false;
    for (size_t d = depth; d < order_.size(); ++d)
      if (cost + g_.attack_cost(order_[d]) <= m_.budget + kCostTolerance) affordable = true;
    if (!affordable) return;

    const int xf = removed.count();
    const Bounds b = bound(depth, removed, kept, cost, cut_lhs);
    if (prunes(b.with_cuts, xf)) {
      if (!prunes(b.without_cuts, xf)) ++stats_.cut_prunes;
      return;
    }

    const int v = order_[depth];
    if (cost + g_.attack_cost(v) <= m_.budget + kCostTolerance && xf + 1 < n_) {
      removed.insert(v);
      for (size_t c = 0; c < cuts_.size(); ++c) cut_lhs[c] += cuts_[c].coeffs[cut_index_[v]];
      visit(depth + 1, removed, kept, cost + g_.attack_cost(v), cut_lhs, true);
      for (size_t c = 0; c < cuts_.size(); ++c) cut_lhs[c] -= cuts_[c].coeffs[cut_index_[v]];
      removed.erase(v);
    }
    kept.insert(v);
    visit(depth + 1, removed, kept, cost, cut_lhs, false);
    kept.erase(v);
  }

  const Graph& g_;
  const AttackModel& m_;
  const std::vector<LiftedCoverCut>& cuts_;
  bool relaxed_;
  int n_;
  std::vector<int> order_;
  std::vector<int> cut_index_;
  SolverStats stats_;
  bool have_incumbent_ = false;
  NodeSet best_;
  RuptureScore best_score_;
  std::vector<int> best_nodes_;
};

}  // namespace

std::vector<LiftedCoverCut> attack_cut_pool(const AttackModel& m, const AttackOptions& opt) {
  if (!opt.use_cuts) return {};
  std::vector<LiftedCoverCut> cuts = opt.cuts;
  if (opt.generate_cuts && m.budget > 0.0) {
    const KnapsackConstraint k = m.budget_knapsack();
    if (k.size() > 0 && k.size() <= kVerifyCap) {
      // Extra cover seed: items by descending degree, the nodes the search
      // tries to remove first.
      const std::vector<int> items = m.knapsack_items();
      std::vector<int> by_degree(items.size());
      std::iota(by_degree.begin(), by_degree.end(), 0);
      std::stable_sort(by_degree.begin(), by_degree.end(), [&](int a, int b) {
        return m.graph.degree(items[a]) > m.graph.degree(items[b]);
      });
      const std::vector<std::vector<int>> extra{by_degree};
      for (auto& c : generate_cuts(k, extra)) cuts.push_back(std::move(c));
    }
  }
  return cuts;
}

AttackResult branch_bound_engine(const AttackModel& m, const std::vector<LiftedCoverCut>& cuts) {
  return Engine(m, cuts, false).run();
}

AttackResult solve_attack(const AttackModel& m, const AttackOptions& opt) {
  const std::vector<LiftedCoverCut> cuts = attack_cut_pool(m, opt);
  return Engine(m, cuts, false).run();
}

AttackResult solve_attack_relaxed(const AttackModel& m, const AttackOptions& opt) {
  const std::vector<LiftedCoverCut> cuts = attack_cut_pool(m, opt);
  return Engine(m, cuts, true).run();
}

}  // namespace resil
