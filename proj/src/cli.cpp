#include "bapa/cli.hpp"

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bapa/ba_eliminator.hpp"
#include "bapa/oracle.hpp"
#include "bapa/presburger.hpp"
#include "bapa/schema.hpp"
#include "bapa/text_format.hpp"

namespace bapa {

namespace {

std::string read_input(const std::string& path) {
  std::ostringstream ss;
  if (path == "-") {
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  ss << in.rdbuf();
  return ss.str();
}

struct Outcome {
  int code = 0;
  Formula input;
  Formula output;
};

Formula closed_input(const RunConfig& cfg, const std::string& text) {
  Formula f = parse_input(text).formula;
  return close_free(f, cfg.open_as_exists);
}

AlphaOptions alpha_options(const RunConfig& cfg) {
  return {cfg.mode, cfg.strategy, cfg.optimize};
}

Outcome execute(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  Outcome o;
  const std::string& c = cfg.command;
  if (c == "decide") {
    o.input = closed_input(cfg, text);
    Verdict v;
    if (cfg.stats && cfg.strategy == Strategy::Alpha) {
      o.output = alpha_translate(o.input, alpha_options(cfg));
      Formula g = cfg.mode == ModelClass::FiniteUniverse ? close_universe(o.output) : o.output;
      v = pa_decide(g);
    } else {
      v = decide(o.input, alpha_options(cfg));
    }
    out << verdict_name(v) << "\n";
    o.code = v == Verdict::Valid ? 0 : 1;
  } else if (c == "translate") {
    o.input = closed_input(cfg, text);
    o.output = alpha_translate(o.input, alpha_options(cfg));
    out << print_formula(o.output) << "\n";
  } else if (c == "ba-qe") {
    o.input = parse_input(text).formula;
    o.output = ba_eliminate(o.input);
    out << print_formula(o.output) << "\n";
  } else if (c == "pa-qe") {
    o.input = parse_input(text).formula;
    o.output = pa_qe(o.input);
    out << print_formula(o.output) << "\n";
  } else if (c == "vcgen") {
    Schema s = parse_schema(text, {cfg.assume_conjunctive});
    std::vector<Formula> vcs;
    if (cfg.proc) {
      vcs.push_back(correctness_vc(s, *cfg.proc));
    } else {
      for (const auto& p : s.procs) vcs.push_back(correctness_vc(s, p.name));
    }
    for (const auto& vc : vcs) out << print_formula(vc) << "\n";
    o.input = conj(vcs);
    o.output = o.input;
  } else if (c == "oracle") {
    o.input = closed_input(cfg, text);
    if (cfg.universe) {
      bool r = oracle(o.input, *cfg.universe);
      out << (r ? "true" : "false") << "\n";
      o.code = r ? 0 : 1;
    } else {
      bool all = true;
      for (const auto& [u, r] : oracle_sweep(o.input, cfg.sweep)) {
        out << "u=" << u << ": " << (r ? "true" : "false") << "\n";
        all = all && r;
      }
      o.code = all ? 0 : 1;
    }
    o.output = f_bool(o.code == 0);
  } else {
    throw Error("unknown command '" + c + "'");
  }
  return o;
}

}  // namespace

int run_command(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  auto t0 = std::chrono::steady_clock::now();
  try {
    std::string text = read_input(cfg.file);
    Outcome o = execute(cfg, text, out);
    if (cfg.stats) {
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                      .count();
      Metrics in = measure(o.input);
      Metrics res = o.output ? measure(o.output) : Metrics{};
      nlohmann::json j = {{"input_size", in.size},
                          {"set_vars", in.set_vars},
                          {"alternations_in", in.alternations},
                          {"output_size", res.size},
                          {"alternations_out", res.alternations},
                          {"elapsed_ms", ms}};
      out << j.dump() << "\n";
    }
    return o.code;
  } catch (const ParseError& e) {
    err << cfg.file << ":" << e.what() << "\n";
  } catch (const std::exception& e) {
    err << cfg.file << ": error: " << e.what() << "\n";
  }
  return 2;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Decision procedures for sets with cardinality constraints", "bapa"};
  app.require_subcommand(1);
  RunConfig cfg;
  std::string mode = "finite", strategy = "alpha", open_as = "forall";

  auto common = [&](CLI::App* sub) {
    sub->add_option("file", cfg.file, "input file, - for stdin")->required();
    sub->add_option("--mode", mode, "model class")
        ->check(CLI::IsMember({"finite", "infinite", "all"}));
    sub->add_option("--strategy", strategy, "elimination strategy")
        ->check(CLI::IsMember({"alpha", "interleaved"}));
    sub->add_flag("--optimize", cfg.optimize, "cubes only over co-occurring set variables");
    sub->add_option("--open-as", open_as, "closure of free variables")
        ->check(CLI::IsMember({"forall", "exists"}));
    sub->add_flag("--stats", cfg.stats, "append a JSON stats line");
  };
  for (const char* name : {"decide", "translate", "ba-qe", "pa-qe"}) common(app.add_subcommand(name));
  CLI::App* vc = app.add_subcommand("vcgen", "verification conditions of a schema");
  common(vc);
  vc->add_option("--proc", cfg.proc, "single procedure");
  vc->add_flag("--assume-conjunctive", cfg.assume_conjunctive, "assume F as F & skip");
  CLI::App* orc = app.add_subcommand("oracle", "finite-model enumeration");
  common(orc);
  orc->add_option("--universe", cfg.universe, "universe size");
  orc->add_option("--sweep", cfg.sweep, "largest universe of the sweep");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e, out, err);
    return rc == 0 ? 0 : 2;
  }
  cfg.command = app.get_subcommands().front()->get_name();
  cfg.mode = mode == "finite"     ? ModelClass::FiniteUniverse
             : mode == "infinite" ? ModelClass::InfiniteUniverse
                                  : ModelClass::AllModels;
  cfg.strategy = strategy == "alpha" ? Strategy::Alpha : Strategy::Interleaved;
  cfg.open_as_exists = open_as == "exists";
  return run_command(cfg, out, err);
}

}  // namespace bapa
