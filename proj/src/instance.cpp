#include "resil/instance.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "resil/error.hpp"
#include "resil/response.hpp"

namespace resil {

std::string_view to_string(AttackType t) {
  switch (t) {
    case AttackType::kTargeted: return "targeted";
    case AttackType::kDesignated: return "designated";
    case AttackType::kRandom: return "random";
    case AttackType::kDistributed: return "distributed";
  }
  return "targeted";
}

std::optional<AttackType> attack_type_from_string(std::string_view s) {
  for (AttackType t : {AttackType::kTargeted, AttackType::kDesignated, AttackType::kRandom,
                       AttackType::kDistributed}) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::string format_number(double v) {
  if (std::isinf(v) && v > 0) return "unlimited";
  if (v == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

InstanceFile::InstanceFile(int n)
    : nodes(n), attack_cost(n > 0 ? n : 0, 1.0), classes(n > 0 ? n : 0, NodeClass::kUnlabeled) {}

namespace {

std::string node_label(int i) { return std::to_string(i + 1); }

}  // namespace

void InstanceFile::normalize() {
  if (version != 1) fail(ErrorCode::kInputError, "unsupported version " + std::to_string(version));
  if (nodes < 1) fail(ErrorCode::kInputError, "instance needs at least one node");
  attack_cost.resize(nodes, 1.0);
  classes.resize(nodes, NodeClass::kUnlabeled);
  auto check = [&](int i) {
    if (i < 0 || i >= nodes) fail(ErrorCode::kInputError, "node " + node_label(i) + " out of range");
  };
  for (auto& [i, j] : edges) {
    check(i);
    check(j);
    if (i == j) fail(ErrorCode::kInputError, "self-loop at node " + node_label(i));
    if (i > j) std::swap(i, j);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    fail(ErrorCode::kInputError, "duplicate edge");
  for (double c : attack_cost)
    if (!(c >= 0.0) || std::isinf(c)) fail(ErrorCode::kInputError, "attack costs must be finite and >= 0");
  if (link_default && (!(*link_default >= 0.0) || std::isinf(*link_default)))
    fail(ErrorCode::kInputError, "link costs must be finite and >= 0");
  for (auto& l : links) {
    check(l.i);
    check(l.j);
    if (l.i == l.j) fail(ErrorCode::kInputError, "link cost on a self-pair");
    if (l.i > l.j) std::swap(l.i, l.j);
    if (!(l.cost >= 0.0) || std::isinf(l.cost)) fail(ErrorCode::kInputError, "link costs must be finite and >= 0");
  }
  std::sort(links.begin(), links.end(),
            [](const LinkCostEntry& a, const LinkCostEntry& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
  for (size_t k = 1; k < links.size(); ++k)
    if (links[k].i == links[k - 1].i && links[k].j == links[k - 1].j)
      fail(ErrorCode::kInputError, "duplicate link cost " + node_label(links[k].i) + "-" + node_label(links[k].j));
  if (budget_attack && !(*budget_attack >= 0.0)) fail(ErrorCode::kInputError, "attack budget must be >= 0");
  if (budget_response && !(*budget_response >= 0.0))
    fail(ErrorCode::kInputError, "response budget must be >= 0");
  for (int v : attack_nodes) check(v);
  std::sort(attack_nodes.begin(), attack_nodes.end());
  if (std::adjacent_find(attack_nodes.begin(), attack_nodes.end()) != attack_nodes.end())
    fail(ErrorCode::kInputError, "duplicate node in the attack selector");
  if ((attack == AttackType::kDesignated || attack == AttackType::kRandom) && attack_nodes.empty())
    fail(ErrorCode::kInputError, std::string(to_string(attack)) + " attack needs a nonempty node set");
  if (attack == AttackType::kTargeted && !attack_nodes.empty())
    fail(ErrorCode::kInputError, "targeted attack takes no node list");
  if (static_cast<int>(attack_nodes.size()) >= nodes &&
      (attack == AttackType::kDesignated || attack == AttackType::kRandom))
    fail(ErrorCode::kInputError, "attack removes every node");
}

Graph InstanceFile::graph() const {
  Graph g(nodes);
  for (const auto& [i, j] : edges) g.add_edge(i, j);
  for (int i = 0; i < nodes; ++i) {
    g.set_attack_cost(i, attack_cost[i]);
    g.set_node_class(i, classes[i]);
  }
  if (link_default) {
    for (int i = 0; i < nodes; ++i)
      for (int j = i + 1; j < nodes; ++j)
        if (!g.has_edge(i, j)) g.set_link_cost(i, j, *link_default);
  }
  for (const auto& l : links) g.set_link_cost(l.i, l.j, l.cost);
  return g;
}

double InstanceFile::attack_budget() const {
  return budget_attack ? *budget_attack : static_cast<double>(nodes / 2);
}

NodeSet InstanceFile::attackable() const {
  if (attack != AttackType::kDistributed) return NodeSet::full(nodes);
  NodeSet s(nodes);
  if (!attack_nodes.empty()) {
    for (int v : attack_nodes) s.insert(v);
    return s;
  }
  for (int v = 0; v < nodes; ++v) {
    const NodeClass c = classes[v];
    if (c == NodeClass::kAttackable || c == NodeClass::kGenerator || c == NodeClass::kHub) s.insert(v);
  }
  return s;
}

NodeSet InstanceFile::designated() const {
  NodeSet s(nodes);
  if (attack == AttackType::kDesignated || attack == AttackType::kRandom)
    for (int v : attack_nodes) s.insert(v);
  return s;
}

AttackModel InstanceFile::attack_model() const {
  AttackModel m{graph(), attack_budget(), attackable()};
  m.validate();
  return m;
}

std::optional<std::string> InstanceFile::reference_value(std::string_view key) const {
  for (const auto& [k, v] : reference)
    if (k == key) return v;
  return std::nullopt;
}

namespace {

enum class Section { kNone, kEdges, kCosts, kClasses, kBudgets, kAttack, kReference, kDone };

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  InstanceFile run() {
    std::istringstream in{std::string(text_)};
    std::string raw;
    while (std::getline(in, raw)) {
      ++line_;
      if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      tokens_.clear();
      std::istringstream ls(raw);
      for (std::string t; ls >> t;) tokens_.push_back(t);
      if (tokens_.empty()) continue;
      if (section_ == Section::kDone) error("content after END");
      if (header()) continue;
      body();
    }
    if (section_ != Section::kDone) {
      ++line_;
      error("missing END");
    }
    try {
      f_.normalize();
    } catch (const Error& e) {
      fail(ErrorCode::kInputError, std::string("instance: ") + e.what());
    }
    return std::move(f_);
  }

 private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorCode::kInputError, "line " + std::to_string(line_) + ": " + msg);
  }

  int integer(const std::string& s, const char* what) const {
    int v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) error(std::string("malformed ") + what + " '" + s + "'");
    return v;
  }

  double number(const std::string& s, const char* what) const {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || !std::isfinite(v))
      error(std::string("malformed ") + what + " '" + s + "'");
    if (v < 0.0) error(std::string(what) + " must be >= 0");
    return v;
  }

  int node(const std::string& s) const {
    if (f_.nodes < 1) error("NODES must precede node references");
    const int v = integer(s, "node");
    if (v < 1 || v > f_.nodes) error("node " + s + " out of range 1.." + std::to_string(f_.nodes));
    return v - 1;
  }

  void arity(size_t n) const {
    if (tokens_.size() != n)
      error("expected " + std::to_string(n) + " fields, got " + std::to_string(tokens_.size()));
  }

  bool header() {
    const std::string& h = tokens_[0];
    if (h.empty() || !std::all_of(h.begin(), h.end(), [](char c) { return c >= 'A' && c <= 'Z'; }))
      return false;
    if (h == "VERSION") {
      arity(2);
      if (have_version_) error("duplicate VERSION");
      have_version_ = true;
      f_.version = integer(tokens_[1], "version");
      if (f_.version != 1) error("unsupported version " + tokens_[1]);
      section_ = Section::kNone;
      return true;
    }
    if (!have_version_) error("VERSION must come first");
    if (h == "NODES") {
      arity(2);
      if (f_.nodes > 0) error("duplicate NODES");
      const int n = integer(tokens_[1], "node count");
      if (n < 1) error("node count must be >= 1");
      f_ = InstanceFile(n);
      f_.version = 1;
      section_ = Section::kNone;
      return true;
    }
    if (f_.nodes < 1) error("NODES must precede " + h);
    Section next;
    if (h == "EDGES") next = Section::kEdges;
    else if (h == "COSTS") next = Section::kCosts;
    else if (h == "CLASSES") next = Section::kClasses;
    else if (h == "BUDGETS") next = Section::kBudgets;
    else if (h == "ATTACK") next = Section::kAttack;
    else if (h == "REFERENCE") next = Section::kReference;
    else if (h == "END") next = Section::kDone;
    else error("unknown section " + h);
    if (next == Section::kEdges && tokens_.size() == 2) {
      expected_edges_ = integer(tokens_[1], "edge count");
    } else {
      arity(1);
    }
    if (!seen_.insert(h).second) error("duplicate section " + h);
    if (section_ == Section::kEdges) check_edge_count();
    section_ = next;
    if (next == Section::kDone) check_edge_count();
    return true;
  }

  void check_edge_count() {
    if (expected_edges_ >= 0 && expected_edges_ != static_cast<int>(f_.edges.size()))
      error("EDGES declared " + std::to_string(expected_edges_) + " edges, found " +
            std::to_string(f_.edges.size()));
    expected_edges_ = -1;
  }

  void body() {
    switch (section_) {
      case Section::kNone: error("data outside a section");
      case Section::kEdges: return edge();
      case Section::kCosts: return cost();
      case Section::kClasses: return node_class();
      case Section::kBudgets: return budget();
      case Section::kAttack: return attack();
      case Section::kReference: return reference();
      case Section::kDone: error("content after END");
    }
  }

  void edge() {
    arity(2);
    int i = node(tokens_[0]);
    int j = node(tokens_[1]);
    if (i == j) error("self-loop at node " + tokens_[0]);
    if (i > j) std::swap(i, j);
    if (!edges_.insert({i, j}).second) error("duplicate edge " + tokens_[0] + " " + tokens_[1]);
    f_.edges.emplace_back(i, j);
  }

  void cost() {
    if (tokens_[0] == "attack") {
      arity(3);
      const int i = node(tokens_[1]);
      if (!attack_costs_.insert(i).second) error("duplicate attack cost for node " + tokens_[1]);
      f_.attack_cost[i] = number(tokens_[2], "attack cost");
    } else if (tokens_[0] == "link") {
      if (tokens_.size() == 3 && tokens_[1] == "default") {
        if (f_.link_default) error("duplicate link default");
        f_.link_default = number(tokens_[2], "link cost");
        return;
      }
      arity(4);
      const int i = node(tokens_[1]);
      const int j = node(tokens_[2]);
      if (i == j) error("link cost on a self-pair");
      const double c = number(tokens_[3], "link cost");
      const auto key = std::minmax(i, j);
      auto it = link_seen_.find({key.first, key.second});
      if (it != link_seen_.end()) {
        if (it->second.oriented == std::make_pair(i, j)) error("duplicate link cost " + tokens_[1] + " " + tokens_[2]);
        if (it->second.cost != c)
          error("asymmetric link cost: d(" + tokens_[1] + "," + tokens_[2] + ")=" + tokens_[3] +
                " but d(" + tokens_[2] + "," + tokens_[1] + ")=" + format_number(it->second.cost) +
                " on line " + std::to_string(it->second.line));
        return;
      }
      link_seen_[{key.first, key.second}] = LinkSeen{{i, j}, c, line_};
      f_.links.push_back(LinkCostEntry{key.first, key.second, c});
    } else {
      error("unknown cost kind '" + tokens_[0] + "'");
    }
  }

  void node_class() {
    arity(2);
    const int i = node(tokens_[0]);
    const auto c = node_class_from_string(tokens_[1]);
    if (!c || *c == NodeClass::kUnlabeled) error("unknown node class '" + tokens_[1] + "'");
    if (!classed_.insert(i).second) error("duplicate class for node " + tokens_[0]);
    f_.classes[i] = *c;
  }

  void budget() {
    arity(2);
    if (tokens_[0] == "attack") {
      if (f_.budget_attack) error("duplicate attack budget");
      f_.budget_attack = number(tokens_[1], "attack budget");
    } else if (tokens_[0] == "response") {
      if (f_.budget_response) error("duplicate response budget");
      f_.budget_response =
          tokens_[1] == "unlimited" ? kUnlimitedBudget : number(tokens_[1], "response budget");
    } else {
      error("unknown budget kind '" + tokens_[0] + "'");
    }
  }

  void attack() {
    if (have_attack_) error("ATTACK takes a single line");
    have_attack_ = true;
    const auto t = attack_type_from_string(tokens_[0]);
    if (!t) error("unknown attack type '" + tokens_[0] + "'");
    f_.attack = *t;
    std::set<int> seen;
    for (size_t k = 1; k < tokens_.size(); ++k) {
      const int v = node(tokens_[k]);
      if (!seen.insert(v).second) error("duplicate node " + tokens_[k] + " in attack selector");
      f_.attack_nodes.push_back(v);
    }
    if ((*t == AttackType::kDesignated || *t == AttackType::kRandom) && f_.attack_nodes.empty())
      error(tokens_[0] + " attack needs a nonempty node set");
    if (*t == AttackType::kTargeted && !f_.attack_nodes.empty()) error("targeted attack takes no node list");
  }

  void reference() {
    if (tokens_.size() < 2) error("reference entry needs a key and a value");
    for (const auto& [k, v] : f_.reference)
      if (k == tokens_[0]) error("duplicate reference key " + tokens_[0]);
    std::string value;
    for (size_t k = 1; k < tokens_.size(); ++k) {
      if (k > 1) value += ' ';
      value += tokens_[k];
    }
    f_.reference.emplace_back(tokens_[0], value);
  }

  struct LinkSeen {
    std::pair<int, int> oriented;
    double cost;
    int line;
  };

  std::string_view text_;
  InstanceFile f_;
  Section section_ = Section::kNone;
  int line_ = 0;
  bool have_version_ = false;
  bool have_attack_ = false;
  int expected_edges_ = -1;
  std::vector<std::string> tokens_;
  std::set<std::string> seen_;
  std::set<std::pair<int, int>> edges_;
  std::set<int> attack_costs_;
  std::set<int> classed_;
  std::map<std::pair<int, int>, LinkSeen> link_seen_;
};

}  // namespace

InstanceFile parse_instance(std::string_view text) { return Parser(text).run(); }

std::string emit_instance(const InstanceFile& in) {
  InstanceFile f = in;
  f.normalize();
  std::string out = "VERSION 1\nNODES " + std::to_string(f.nodes) + "\n";
  out += "EDGES " + std::to_string(f.edges.size()) + "\n";
  for (const auto& [i, j] : f.edges) out += node_label(i) + " " + node_label(j) + "\n";

  std::string costs;
  for (int i = 0; i < f.nodes; ++i)
    if (f.attack_cost[i] != 1.0) costs += "attack " + node_label(i) + " " + format_number(f.attack_cost[i]) + "\n";
  if (f.link_default) costs += "link default " + format_number(*f.link_default) + "\n";
  for (const auto& l : f.links)
    costs += "link " + node_label(l.i) + " " + node_label(l.j) + " " + format_number(l.cost) + "\n";
  if (!costs.empty()) out += "COSTS\n" + costs;

  std::string classes;
  for (int i = 0; i < f.nodes; ++i)
    if (f.classes[i] != NodeClass::kUnlabeled)
      classes += node_label(i) + " " + std::string(to_string(f.classes[i])) + "\n";
  if (!classes.empty()) out += "CLASSES\n" + classes;

  if (f.budget_attack || f.budget_response) {
    out += "BUDGETS\n";
    if (f.budget_attack) out += "attack " + format_number(*f.budget_attack) + "\n";
    if (f.budget_response) out += "response " + format_number(*f.budget_response) + "\n";
  }

  out += "ATTACK\n" + std::string(to_string(f.attack));
  for (int v : f.attack_nodes) out += " " + node_label(v);
  out += "\n";

  if (!f.reference.empty()) {
    out += "REFERENCE\n";
    for (const auto& [k, v] : f.reference) out += k + " " + v + "\n";
  }
  out += "END\n";
  return out;
}

InstanceFile read_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::kInputError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_instance(ss.str());
  } catch (const Error& e) {
    fail(e.code(), path + ": " + e.what());
  }
}

}  // namespace resil
