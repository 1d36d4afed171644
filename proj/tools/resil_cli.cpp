// resil command-line front end. Talks to the library only through resil.h.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "resil/resil.h"

namespace {

struct InstanceDeleter {
  void operator()(resil_instance* p) const { resil_instance_free(p); }
};
struct ResultDeleter {
  void operator()(resil_result* p) const { resil_result_free(p); }
};
using Instance = std::unique_ptr<resil_instance, InstanceDeleter>;
using Result = std::unique_ptr<resil_result, ResultDeleter>;

// Thrown to unwind with a status; main() turns it into the exit code.
struct Failure {
  int code;
};

int exit_code(resil_status s) { return s == RESIL_BAD_ARGUMENT ? RESIL_INPUT_ERROR : static_cast<int>(s); }

void check(resil_status s) {
  if (s == RESIL_OK) return;
  std::cerr << "resil: " << resil_last_error() << "\n";
  throw Failure{exit_code(s)};
}

std::string take(char* s) {
  std::string out = s ? s : "";
  resil_string_free(s);
  return out;
}

std::optional<double> parse_budget(const std::string& s) {
  if (s.empty()) return std::nullopt;
  if (s == "unlimited" || s == "inf") return INFINITY;
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size() && v >= 0.0) return v;
  } catch (...) {
  }
  std::cerr << "resil: bad budget '" << s << "'\n";
  throw Failure{RESIL_INPUT_ERROR};
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "resil: cannot write " << path << "\n";
    throw Failure{RESIL_INPUT_ERROR};
  }
  out << text;
}

struct InstanceFlags {
  std::string budget_attack;
  std::string budget_response;
  std::string attack_type;
  std::vector<int> attackable;
  std::vector<int> cut_x;

  void add(CLI::App* app, bool with_cut_x = true) {
    app->add_option("--budget-attack", budget_attack, "Attack budget B^A");
    app->add_option("--budget-response", budget_response, "Response budget B^R (number or 'unlimited')");
    app->add_option("--attack-type", attack_type, "targeted | designated | random | distributed")
        ->check(CLI::IsMember({"targeted", "designated", "random", "distributed"}));
    app->add_option("--attackable", attackable, "Attackable nodes for a distributed attack")->delimiter(',');
    if (with_cut_x) app->add_option("--cut-x", cut_x, "Fixed removal set X (designated attack)")->delimiter(',');
  }

  void apply(resil_instance* inst) const {
    if (auto b = parse_budget(budget_attack)) check(resil_instance_set_budget_attack(inst, *b));
    if (auto b = parse_budget(budget_response)) check(resil_instance_set_budget_response(inst, *b));
    std::string type = attack_type;
    const std::vector<int>* nodes = nullptr;
    if (!cut_x.empty()) {
      if (type.empty()) type = "designated";
      nodes = &cut_x;
    }
    if (!attackable.empty()) {
      if (type.empty()) type = "distributed";
      if (type == "distributed") nodes = &attackable;
    }
    if (type.empty()) return;
    if ((type == "designated" || type == "random") && !nodes) {
      std::cerr << "resil: " << type << " attack needs --cut-x\n";
      throw Failure{RESIL_INPUT_ERROR};
    }
    check(resil_instance_set_attack(inst, type.c_str(), nodes ? nodes->data() : nullptr, nodes ? nodes->size() : 0));
  }
};

Instance load(const std::string& path, const InstanceFlags& flags) {
  resil_instance* raw = nullptr;
  check(resil_instance_load(path.c_str(), &raw));
  Instance inst(raw);
  flags.apply(inst.get());
  return inst;
}

std::string basename_of(const std::string& path) {
  std::string b = path.substr(path.find_last_of('/') + 1);
  if (const auto dot = b.rfind(".inst"); dot != std::string::npos && dot + 5 == b.size()) b.erase(dot);
  return b;
}

struct SolveFlags {
  bool power_constraint = false;
  bool oracle_check = false;
  bool no_cuts = false;
  bool timing = false;

  void add(CLI::App* app) {
    app->add_flag("--power-constraint", power_constraint, "Require generator support for load-only links");
    app->add_flag("--oracle-check", oracle_check, "Cross-check every stage against brute force");
    app->add_flag("--no-cuts", no_cuts, "Disable lifted cover cuts");
    app->add_flag("--timing", timing, "Include wall-clock fields in JSON");
  }

  resil_options options() const {
    resil_options o;
    resil_options_default(&o);
    o.power_constraint = power_constraint;
    o.oracle_check = oracle_check;
    o.use_cuts = !no_cuts;
    o.timing = timing;
    return o;
  }
};

int run_single(const std::string& path, const InstanceFlags& flags, const resil_options& o,
               const std::string& output) {
  Instance inst = load(path, flags);
  resil_result* raw = nullptr;
  const resil_status s = resil_run_pipeline(inst.get(), &o, &raw);
  if (!raw) check(s);
  Result res(raw);
  char* json = nullptr;
  check(resil_result_json(res.get(), &json));
  write_output(output, take(json));
  if (s != RESIL_OK) std::cerr << "resil: " << resil_last_error() << "\n";
  return exit_code(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Worst-case attack and link-addition response for network resilience"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(resil_version()));

  // gen
  auto* gen = app.add_subcommand("gen", "Generate random connected instances");
  uint64_t seed = 1;
  int count = 1;
  int nodes = 0;
  int edges = -1;
  int n_min = 6;
  int n_max = 12;
  double edge_factor = 1.5;
  std::string out_dir;
  std::string gen_output;
  std::string gen_budget_response;
  gen->add_option("--seed", seed, "RNG seed");
  gen->add_option("--count", count, "Number of instances")->check(CLI::PositiveNumber);
  gen->add_option("-n,--nodes", nodes, "Fixed node count");
  gen->add_option("--edges", edges, "Fixed edge count (with --nodes)");
  gen->add_option("--n-min", n_min, "Smallest node count");
  gen->add_option("--n-max", n_max, "Largest node count");
  gen->add_option("--edge-factor", edge_factor, "Upper edge count as a multiple of n");
  gen->add_option("--budget-response", gen_budget_response, "Response budget written to each instance");
  gen->add_option("--out-dir", out_dir, "Directory for inst_NNN.inst files");
  gen->add_option("-o,--output", gen_output, "Output file for a single instance");

  // attack / respond / pipeline share instance flags
  InstanceFlags attack_flags, respond_flags, pipe_flags, sweep_flags, export_flags;
  SolveFlags attack_solve, respond_solve, pipe_solve, sweep_solve;
  std::string attack_file, respond_file, sweep_file, export_file, rupture_file;
  std::vector<std::string> pipe_files;
  std::string attack_out, respond_out, pipe_out, sweep_out, export_out, cuts_out, rupture_out;

  auto* attack = app.add_subcommand("attack", "Solve the worst-case attack");
  attack->add_option("instance", attack_file, "Instance file")->required();
  attack_flags.add(attack, false);
  attack_solve.add(attack);
  attack->add_option("-o,--output", attack_out, "Output JSON file");

  auto* respond = app.add_subcommand("respond", "Attack (or fixed X) then link addition");
  respond->add_option("instance", respond_file, "Instance file")->required();
  respond_flags.add(respond);
  respond_solve.add(respond);
  respond->add_option("-o,--output", respond_out, "Output JSON file");

  auto* pipeline = app.add_subcommand("pipeline", "Attack, response and dynamic worst cut");
  std::string format = "json";
  int threads = 1;
  pipeline->add_option("instances", pipe_files, "Instance files")->required();
  pipe_flags.add(pipeline);
  pipe_solve.add(pipeline);
  pipeline->add_option("--format", format, "json | csv | table")->check(CLI::IsMember({"json", "csv", "table"}));
  pipeline->add_option("--threads", threads, "Worker threads for batches")->check(CLI::PositiveNumber);
  pipeline->add_option("-o,--output", pipe_out, "Output file");

  auto* sweep = app.add_subcommand("sweep", "Response budget sweep as CSV");
  std::vector<std::string> grid;
  sweep->add_option("instance", sweep_file, "Instance file")->required();
  sweep->add_option("--budgets", grid, "Budget grid, e.g. 0,0.5,1.5,unlimited")->delimiter(',')->required();
  sweep_flags.add(sweep);
  sweep_solve.add(sweep);
  sweep->add_option("-o,--output", sweep_out, "Output CSV file");

  auto* export_mip = app.add_subcommand("export-mip", "Write a MIP model in CPLEX LP format");
  std::string model = "reduced";
  bool export_power = false;
  export_mip->add_option("instance", export_file, "Instance file")->required();
  export_mip->add_option("--model", model, "attack | response | reduced")
      ->check(CLI::IsMember({"attack", "response", "reduced"}));
  export_flags.add(export_mip, false);
  export_mip->add_option("--cut-x", export_flags.cut_x, "Removal set for the response models")->delimiter(',');
  export_mip->add_flag("--power-constraint", export_power, "Add generator-coupling rows");
  export_mip->add_option("-o,--output", export_out, "Output file");

  auto* cuts = app.add_subcommand("cuts", "Audit lifted cover cuts of a knapsack row");
  std::vector<double> coeffs;
  double capacity = 0.0;
  cuts->add_option("--coeffs", coeffs, "Coefficients a_j")->delimiter(',')->required();
  cuts->add_option("--capacity", capacity, "Right-hand side b")->required();
  cuts->add_option("-o,--output", cuts_out, "Output JSON file");

  auto* rupture = app.add_subcommand("rupture", "Score a fixed removal set");
  std::vector<int> rupture_x;
  rupture->add_option("instance", rupture_file, "Instance file")->required();
  rupture->add_option("--cut-x", rupture_x, "Removal set X")->delimiter(',')->required();
  rupture->add_option("-o,--output", rupture_out, "Output JSON file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : RESIL_INPUT_ERROR;
  }

  try {
    if (gen->parsed()) {
      auto set_response = [&](resil_instance* inst) {
        if (auto b = parse_budget(gen_budget_response)) check(resil_instance_set_budget_response(inst, *b));
      };
      if (nodes > 0) {
        if (count != 1) {
          std::cerr << "resil: --nodes generates a single instance\n";
          return RESIL_INPUT_ERROR;
        }
        const int e = edges >= 0 ? edges : static_cast<int>(std::lround(edge_factor * nodes));
        resil_instance* raw = nullptr;
        check(resil_instance_generate(nodes, e, seed, &raw));
        Instance inst(raw);
        set_response(inst.get());
        char* text = nullptr;
        check(resil_instance_emit(inst.get(), &text));
        write_output(gen_output, take(text));
        return 0;
      }
      resil_bench_config c;
      resil_bench_config_default(&c);
      c.seed = seed;
      c.n_min = n_min;
      c.n_max = n_max;
      c.edge_factor = edge_factor;
      if (count > 1 && out_dir.empty()) {
        std::cerr << "resil: --count > 1 needs --out-dir\n";
        return RESIL_INPUT_ERROR;
      }
      if (!out_dir.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(out_dir, ec);
        if (ec) {
          std::cerr << "resil: cannot create " << out_dir << ": " << ec.message() << "\n";
          return RESIL_INPUT_ERROR;
        }
      }
      for (int k = 0; k < count; ++k) {
        resil_instance* raw = nullptr;
        check(resil_instance_generate_batch(&c, k, &raw));
        Instance inst(raw);
        set_response(inst.get());
        char* text = nullptr;
        check(resil_instance_emit(inst.get(), &text));
        if (out_dir.empty()) {
          write_output(gen_output, take(text));
        } else {
          char name[32];
          std::snprintf(name, sizeof name, "inst_%03d.inst", k + 1);
          write_output((std::filesystem::path(out_dir) / name).string(), take(text));
        }
      }
      return 0;
    }

    if (attack->parsed()) {
      resil_options o = attack_solve.options();
      o.run_response = 0;
      o.run_dynamic = 0;
      return run_single(attack_file, attack_flags, o, attack_out);
    }

    if (respond->parsed()) {
      resil_options o = respond_solve.options();
      o.run_dynamic = 0;
      return run_single(respond_file, respond_flags, o, respond_out);
    }

    if (pipeline->parsed()) {
      const resil_options o = pipe_solve.options();
      if (pipe_files.size() == 1 && format == "json") return run_single(pipe_files[0], pipe_flags, o, pipe_out);
      std::vector<Instance> owned;
      std::vector<const resil_instance*> ptrs;
      for (const auto& f : pipe_files) {
        owned.push_back(load(f, pipe_flags));
        ptrs.push_back(owned.back().get());
      }
      std::vector<resil_result*> raw(ptrs.size(), nullptr);
      const resil_status s = resil_run_batch(ptrs.data(), ptrs.size(), &o, threads, raw.data());
      if (s != RESIL_OK && s != RESIL_INFEASIBLE) check(s);
      std::vector<Result> results;
      for (auto* r : raw) results.emplace_back(r);
      std::string text;
      if (format == "csv") text = std::string(resil_csv_header()) + "\n";
      if (format == "table") text = std::string(resil_table_header()) + "\n";
      if (format == "json") text = "[\n";
      for (size_t k = 0; k < results.size(); ++k) {
        const std::string name = basename_of(pipe_files[k]);
        char* line = nullptr;
        if (format == "csv") {
          check(resil_result_csv_row(results[k].get(), name.c_str(), &line));
          text += take(line) + "\n";
        } else if (format == "table") {
          check(resil_result_table_row(results[k].get(), name.c_str(), &line));
          text += take(line) + "\n";
        } else {
          check(resil_result_json(results[k].get(), &line));
          std::string j = take(line);
          j.pop_back();
          text += j + (k + 1 < results.size() ? ",\n" : "\n");
        }
      }
      if (format == "json") text += "]\n";
      write_output(pipe_out, text);
      return exit_code(s);
    }

    if (sweep->parsed()) {
      Instance inst = load(sweep_file, sweep_flags);
      std::vector<double> budgets;
      for (const auto& g : grid) budgets.push_back(*parse_budget(g));
      const resil_options o = sweep_solve.options();
      char* csv = nullptr;
      check(resil_sweep_csv(inst.get(), budgets.data(), budgets.size(), &o, &csv));
      write_output(sweep_out, take(csv));
      return 0;
    }

    if (export_mip->parsed()) {
      InstanceFlags flags = export_flags;
      const std::vector<int> x = flags.cut_x;
      flags.cut_x.clear();
      Instance inst = load(export_file, flags);
      char* text = nullptr;
      check(resil_export_mip(inst.get(), model.c_str(), x.empty() ? nullptr : x.data(), x.size(),
                             export_power ? 1 : 0, &text));
      write_output(export_out, take(text));
      return 0;
    }

    if (cuts->parsed()) {
      char* text = nullptr;
      check(resil_cuts_audit(coeffs.data(), coeffs.size(), capacity, &text));
      write_output(cuts_out, take(text));
      return 0;
    }

    if (rupture->parsed()) {
      Instance inst = load(rupture_file, InstanceFlags{});
      char* text = nullptr;
      check(resil_rupture(inst.get(), rupture_x.data(), rupture_x.size(), &text));
      write_output(rupture_out, take(text));
      return 0;
    }
  } catch (const Failure& f) {
    return f.code;
  }
  return 0;
}
