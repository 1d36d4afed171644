#include "resil/mip_export.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "resil/error.hpp"

namespace resil {

std::string_view to_string(Formulation f) {
  switch (f) {
    case Formulation::kAttack: return "attack";
    case Formulation::kResponse: return "response";
    case Formulation::kReduced: return "reduced";
  }
  return "attack";
}

namespace {

std::string fixed(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string name(const char* prefix, int a) { return std::string(prefix) + "_" + std::to_string(a); }
std::string name(const char* prefix, int a, int b) { return name(prefix, a) + "_" + std::to_string(b); }
std::string name(const char* prefix, int a, int b, int c) { return name(prefix, a, b) + "_" + std::to_string(c); }

using Terms = std::vector<std::pair<double, std::string>>;

class LpWriter {
 public:
  void comment(const std::string& s) { out_ += "\\ " + s + "\n"; }

  void objective(bool maximize, const Terms& terms, double constant) {
    out_ += maximize ? "Maximize\n" : "Minimize\n";
    line(" obj:", terms, constant);
    out_ += "Subject To\n";
  }

  void row(const std::string& label, const Terms& terms, const char* sense, double rhs) {
    if (terms.empty()) {
      comment(label + " has no terms");
      return;
    }
    std::string head = " " + label + ":";
    line(head, terms, 0.0, false);
    out_.pop_back();
    out_ += " " + std::string(sense) + " " + fixed(rhs) + "\n";
  }

  void section(const char* title, const std::vector<std::string>& names) {
    if (names.empty()) return;
    out_ += title;
    out_ += "\n";
    for (size_t k = 0; k < names.size(); k += 8) {
      std::string l;
      for (size_t t = k; t < names.size() && t < k + 8; ++t) l += " " + names[t];
      out_ += l + "\n";
    }
  }

  void raw(const std::string& s) { out_ += s; }
  std::string finish() { return out_ + "End\n"; }

 private:
  void line(const std::string& head, const Terms& terms, double constant, bool with_constant = true) {
    std::string cur = head;
    int on_line = 0;
    for (const auto& [c, v] : terms) {
      if (on_line == 8) {
        out_ += cur + "\n";
        cur = "   ";
        on_line = 0;
      }
      cur += c < 0 ? " - " : " + ";
      cur += fixed(std::abs(c)) + " " + v;
      ++on_line;
    }
    if (with_constant && constant != 0.0) cur += (constant < 0 ? " - " : " + ") + fixed(std::abs(constant));
    out_ += cur + "\n";
  }

  std::string out_;
};

void guard(int n) {
  if (n > kExportNodeCap)
    fail(ErrorCode::kSizeGuard, "MIP export refuses " + std::to_string(n) + " nodes (cap " +
                                    std::to_string(kExportNodeCap) + ")");
}

}  // namespace

std::string export_attack_mip(const AttackModel& m) {
  m.validate();
  const Graph& g = m.graph;
  const int n = g.node_count();
  guard(n);
  const bool distributed = m.attackable.count() != n;
  LpWriter w;
  w.comment("resil MIP export: attack model");
  w.comment("nodes " + std::to_string(n) + ", labels |C| = " + std::to_string(n) +
            (distributed ? ", distributed attack" : ", targeted attack"));

  auto v = [](int i, int c) { return name("v", i + 1, c + 1); };
  auto y = [](int i, int j) { return name("y", i + 1, j + 1); };

  Terms obj;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) obj.emplace_back(1.0, v(i, c));
  obj.emplace_back(-1.0, "alpha");
  for (int c = 0; c < n; ++c) obj.emplace_back(1.0, name("b", c + 1));
  w.objective(true, obj, -static_cast<double>(n));

  for (int i = 0; i < n; ++i) {
    Terms t;
    for (int c = 0; c < n; ++c) t.emplace_back(1.0, v(i, c));
    if (!distributed) w.row(name("c4b", i + 1), t, "<=", 1.0);
    else if (m.attackable.contains(i)) w.row(name("c20a", i + 1), t, "<=", 1.0);
    else w.row(name("c20b", i + 1), t, "=", 1.0);
  }
  for (int c = 0; c < n; ++c) {
    Terms t;
    for (int i = 0; i < n; ++i) t.emplace_back(1.0, v(i, c));
    t.emplace_back(-1.0, "alpha");
    w.row(name("c4c", c + 1), t, "<=", 0.0);
  }
  for (int c = 0; c < n; ++c) {
    Terms t{{1.0, name("b", c + 1)}};
    for (int i = 0; i < n; ++i) t.emplace_back(-1.0, v(i, c));
    w.row(name("c4d", c + 1), t, "<=", 0.0);
  }
  for (int i = 0; i < n; ++i) {
    Terms t;
    for (int j = 0; j < n; ++j)
      if (j != i) t.emplace_back(1.0, y(i, j));
    for (int c = 0; c < n; ++c) t.emplace_back(-static_cast<double>(n - 1), v(i, c));
    w.row(name("c4e", i + 1), t, "<=", 0.0);
  }
  {
    Terms t;
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      total += g.attack_cost(i);
      for (int c = 0; c < n; ++c) t.emplace_back(-g.attack_cost(i), v(i, c));
    }
    w.row("c4f", t, "<=", m.budget - total);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) w.row(name("c4g", i + 1, j + 1), {{1.0, y(i, j)}, {-1.0, y(j, i)}}, "=", 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (!g.has_edge(i, j)) continue;
      Terms t;
      for (int c = 0; c < n; ++c) t.emplace_back(1.0, v(i, c));
      for (int c = 0; c < n; ++c) t.emplace_back(1.0, v(j, c));
      t.emplace_back(-1.0, y(i, j));
      w.row(name("c4h", i + 1, j + 1), t, "<=", 1.0);
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      if (!g.has_edge(i, j)) {
        w.row(name("c4i", i + 1, j + 1), {{1.0, y(i, j)}}, "<=", 0.0);
        continue;
      }
      for (int c = 0; c < n; ++c)
        w.row(name("c4i", i + 1, j + 1, c + 1), {{1.0, y(i, j)}, {1.0, v(i, c)}, {-1.0, v(j, c)}}, "<=", 1.0);
      for (int c = 0; c < n; ++c)
        w.row(name("c4j", i + 1, j + 1, c + 1), {{1.0, y(i, j)}, {-1.0, v(i, c)}, {1.0, v(j, c)}}, "<=", 1.0);
    }
  }

  w.raw("Bounds\n alpha >= 0\n");
  std::vector<std::string> bins;
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < n; ++c) bins.push_back(v(i, c));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) bins.push_back(y(i, j));
  for (int c = 0; c < n; ++c) bins.push_back(name("b", c + 1));
  w.section("Binaries", bins);
  w.section("Generals", {"alpha"});
  return w.finish();
}

std::string export_response_mip(const Graph& g, const NodeSet& removed, double budget) {
  const int n = g.node_count();
  guard(n);
  const ComponentPartition p = components(g, removed);
  const int s = p.count();
  const int x = removed.count();
  const double big_m = n + 1;
  const std::vector<int> member = p.membership(n);
  std::vector<int> survivors;
  for (int i = 0; i < n; ++i)
    if (!removed.contains(i)) survivors.push_back(i);
  const int nr = static_cast<int>(survivors.size());

  LpWriter w;
  w.comment("resil MIP export: response model");
  w.comment("survivors " + std::to_string(nr) + ", labels " + std::to_string(s) + ", |X| = " +
            std::to_string(x) + ", M = " + fixed(big_m) + ", epsilon = " + fixed(kExportEpsilon));

  auto v = [](int i, int c) { return name("v", i + 1, c + 1); };
  auto y = [](int i, int j) { return name("y", i + 1, j + 1); };
  auto q = [](int i, int j) { return name("q", i + 1, j + 1); };

  // Cross-component survivor pairs (i < j).
  std::vector<std::pair<int, int>> cross;
  for (int a = 0; a < nr; ++a)
    for (int b = a + 1; b < nr; ++b)
      if (member[survivors[a]] != member[survivors[b]]) cross.emplace_back(survivors[a], survivors[b]);

  Terms obj{{-1.0, "alpha"}};
  for (int c = 0; c < s; ++c) obj.emplace_back(1.0, name("b", c + 1));
  for (int c = 0; c < s; ++c) obj.emplace_back(kExportEpsilon, name("t", c + 1));
  w.objective(false, obj, -static_cast<double>(x));

  for (int c = 0; c < s; ++c) {
    Terms lo;
    for (int i : survivors) lo.emplace_back(1.0, v(i, c));
    Terms hi = lo;
    lo.emplace_back(-1.0, "alpha");
    w.row(name("c7b_lo", c + 1), lo, "<=", 0.0);
    for (auto& term : hi) term.first = -1.0;
    hi.insert(hi.begin(), {1.0, "alpha"});
    hi.emplace_back(big_m, name("t", c + 1));
    w.row(name("c7b_hi", c + 1), hi, "<=", big_m);
  }
  {
    Terms t;
    for (int c = 0; c < s; ++c) t.emplace_back(1.0, name("t", c + 1));
    w.row("c7c", t, ">=", 1.0);
  }
  for (int i : survivors) {
    Terms t;
    for (int c = 0; c < s; ++c) t.emplace_back(1.0, v(i, c));
    w.row(name("c7d", i + 1), t, "=", 1.0);
  }
  for (int c = 0; c < s; ++c) {
    Terms t;
    for (int i : survivors) t.emplace_back(1.0, v(i, c));
    t.emplace_back(-static_cast<double>(nr), name("b", c + 1));
    w.row(name("c7e", c + 1), t, "<=", 0.0);
  }
  if (std::isfinite(budget)) {
    Terms t;
    for (const auto& [i, j] : cross) {
      const auto d = g.link_cost(i, j);
      if (!d)
        fail(ErrorCode::kMissingCost, "no link cost for " + std::to_string(i + 1) + "-" + std::to_string(j + 1));
      t.emplace_back(*d, y(i, j));
    }
    w.row("c7f", t, "<=", budget);
  } else {
    w.comment("c7f omitted: unlimited response budget");
  }
  for (const auto& [i, j] : cross) w.row(name("c7g", i + 1, j + 1), {{1.0, y(i, j)}, {-1.0, y(j, i)}}, "=", 0.0);
  for (const auto& [i, j] : cross) w.row(name("c7h", i + 1, j + 1), {{1.0, q(i, j)}, {-1.0, q(j, i)}}, "=", 0.0);
  for (const auto& [i, j] : cross) {
    Terms between;
    for (int a : p.components[member[i]])
      for (int b : p.components[member[j]]) between.emplace_back(1.0, a < b ? y(a, b) : y(b, a));
    Terms lo{{1.0, q(i, j)}};
    for (const auto& term : between) lo.emplace_back(-1.0, term.second);
    w.row(name("c7i_lo", i + 1, j + 1), lo, "<=", 0.0);
    Terms hi = between;
    hi.emplace_back(-big_m, q(i, j));
    w.row(name("c7i_hi", i + 1, j + 1), hi, "<=", 0.0);
  }
  for (const auto& [i, j] : cross)
    for (int c = 0; c < s; ++c)
      w.row(name("c7j", i + 1, j + 1, c + 1), {{1.0, v(i, c)}, {1.0, v(j, c)}, {-1.0, q(i, j)}}, "<=", 1.0);
  for (const auto& [i, j] : cross)
    for (int c = 0; c < s; ++c)
      w.row(name("c7k", i + 1, j + 1, c + 1), {{1.0, q(i, j)}, {1.0, v(i, c)}, {-1.0, v(j, c)}}, "<=", 1.0);
  for (const auto& [i, j] : cross)
    for (int c = 0; c < s; ++c)
      w.row(name("c7l", i + 1, j + 1, c + 1), {{1.0, q(i, j)}, {-1.0, v(i, c)}, {1.0, v(j, c)}}, "<=", 1.0);

  w.raw("Bounds\n alpha >= 0\n");
  std::vector<std::string> bins;
  for (int i : survivors)
    for (int c = 0; c < s; ++c) bins.push_back(v(i, c));
  for (const auto& [i, j] : cross) {
    bins.push_back(y(i, j));
    bins.push_back(y(j, i));
  }
  for (const auto& [i, j] : cross) {
    bins.push_back(q(i, j));
    bins.push_back(q(j, i));
  }
  for (int c = 0; c < s; ++c) bins.push_back(name("b", c + 1));
  for (int c = 0; c < s; ++c) bins.push_back(name("t", c + 1));
  w.section("Binaries", bins);
  w.section("Generals", {"alpha"});
  return w.finish();
}

std::string export_reduced_mip(const ResponseModel& m, int node_count) {
  guard(node_count);
  const int s = m.component_count();
  if (s < 2) fail(ErrorCode::kInvalidArgument, "reduced export needs at least two components");
  const FlatIndex fi(s);
  const double big_m = node_count + 1;
  const std::vector<int> sizes = m.partition.sizes();
  const std::vector<double> d = m.flat_costs();
  auto xhat = [](int z) { return name("xhat", z); };

  LpWriter w;
  w.comment("resil MIP export: reduced response model");
  w.comment("components " + std::to_string(s) + ", links " + std::to_string(fi.length()) + ", |X| = " +
            std::to_string(m.cut_size) + ", M = " + fixed(big_m) + ", epsilon = " + fixed(kExportEpsilon));
  for (int z = 1; z <= fi.length(); ++z) {
    const auto [a, b] = fi.pair(z);
    const auto [i, j] = m.mceic.endpoint(a - 1, b - 1);
    w.comment(xhat(z) + ": components " + std::to_string(a) + "-" + std::to_string(b) + ", link " +
              std::to_string(i + 1) + "-" + std::to_string(j + 1) + ", cost " + fixed(d[z - 1]));
  }

  Terms obj{{-1.0, "alpha"}};
  for (int z = 1; z <= fi.length(); ++z) obj.emplace_back(-1.0, xhat(z));
  for (int c = 1; c <= s; ++c) obj.emplace_back(kExportEpsilon, name("t", c));
  w.objective(false, obj, static_cast<double>(s - m.cut_size));

  {
    Terms t;
    for (int c = 1; c <= s; ++c) t.emplace_back(1.0, name("t", c));
    w.row("c19b", t, ">=", 1.0);
  }
  for (int c = 1; c <= s; ++c) {
    Terms nb;
    for (int k = 1; k <= s; ++k) {
      if (k == c) continue;
      nb.emplace_back(static_cast<double>(sizes[k - 1]), xhat(fi.sigma(std::min(c, k), std::max(c, k))));
    }
    Terms lo = nb;
    lo.emplace_back(-1.0, "alpha");
    w.row(name("c19c_lo", c), lo, "<=", -static_cast<double>(sizes[c - 1]));
    Terms hi{{1.0, "alpha"}};
    for (const auto& term : nb) hi.emplace_back(-term.first, term.second);
    hi.emplace_back(big_m, name("t", c));
    w.row(name("c19c_hi", c), hi, "<=", sizes[c - 1] + big_m);
  }
  if (std::isfinite(m.budget)) {
    Terms t;
    for (int z = 1; z <= fi.length(); ++z) t.emplace_back(d[z - 1], xhat(z));
    w.row("c19d", t, "<=", m.budget);
  } else {
    w.comment("c19d omitted: unlimited response budget");
  }
  if (m.power_constraint) {
    for (int a = 1; a <= s; ++a) {
      for (int b = a + 1; b <= s; ++b) {
        if (m.component_class[a - 1] != ComponentClass::kLoadOnly ||
            m.component_class[b - 1] != ComponentClass::kLoadOnly)
          continue;
        Terms t{{1.0, xhat(fi.sigma(a, b))}};
        for (int gc = 1; gc <= s; ++gc) {
          if (m.component_class[gc - 1] != ComponentClass::kHasGenerator) continue;
          t.emplace_back(-1.0, xhat(fi.sigma(std::min(a, gc), std::max(a, gc))));
          t.emplace_back(-1.0, xhat(fi.sigma(std::min(b, gc), std::max(b, gc))));
        }
        w.row(name("c21", a, b), t, "<=", 0.0);
      }
    }
  }

  w.raw("Bounds\n alpha >= 0\n");
  std::vector<std::string> bins;
  for (int z = 1; z <= fi.length(); ++z) bins.push_back(xhat(z));
  for (int c = 1; c <= s; ++c) bins.push_back(name("t", c));
  w.section("Binaries", bins);
  return w.finish();
}

}  // namespace resil
