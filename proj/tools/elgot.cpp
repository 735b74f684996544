// elgot: command-line front end for the interpreters and the law suites.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "elgot/bsp.hpp"
#include "elgot/laws.hpp"
#include "elgot/while_lang.hpp"

namespace {

using namespace elgot;

constexpr int exit_ok = 0;
constexpr int exit_failures = 1;
constexpr int exit_usage = 2;

struct Options {
  std::string base = "finset";
  std::string state_set = "s0,s1";
  std::string input;
  std::size_t depth = 6;
  std::size_t fuel = 10;
  std::uint64_t seed = 42;
  std::size_t samples = 100;
  std::string format = "text";
  bool trace = false;
  std::string suite = "all";
  std::string report;
  std::string file;
  std::string interpretation;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

BaseMonad base_monad(const Options& o) {
  if (o.base != "nondetstate") return make_instance(o.base, std::nullopt);
  std::vector<std::string> names;
  std::stringstream in(o.state_set);
  for (std::string s; std::getline(in, s, ',');) {
    if (!s.empty()) names.push_back(s);
  }
  return make_instance(o.base, Carrier::atoms("S", names));
}

int cmd_run(const Options& o) {
  StmtPtr prog = parse_program(slurp(o.file));
  if (o.trace) std::cerr << "program: " << prog->to_string() << "\n";
  Env env = Env::standard(base_monad(o), 8, o.depth);
  std::cout << run(prog, env, Value::atom(o.input.empty() ? "0" : o.input), o.depth) << "\n";
  return exit_ok;
}

int cmd_bsp(const Options& o) {
  BspSpec spec = load_bsp(o.file);
  std::optional<std::size_t> root;
  if (!o.input.empty()) {
    try {
      root = std::stoul(o.input);
    } catch (const std::exception&) {
      throw ConfigError("--input for bsp must be a state index, got '" + o.input + "'");
    }
  }
  Lts lts = solve_and_unfold(spec, o.depth, root);
  if (o.trace) {
    for (const auto& n : lts.nodes) {
      std::cerr << n.name << " depth " << n.depth
                << (n.state ? " state " + std::to_string(*n.state) : std::string(" unidentified")) << "\n";
    }
  }
  if (o.format == "dot") {
    std::cout << lts.to_dot();
  } else if (o.format == "csv") {
    std::cout << lts.to_csv();
  } else {
    std::cout << lts.to_text();
  }
  return exit_ok;
}

int cmd_laws(const Options& o) {
  GenConfig cfg;
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  cfg.depth = o.depth;
  std::vector<SuiteReport> reports = run_named_suite(o.suite, cfg);
  std::size_t failures = 0;
  for (const auto& r : reports) {
    std::cout << r.text();
    failures += r.failures();
  }
  std::cout << (failures ? "FAILED " : "passed ") << reports.size() << " suite runs, " << failures
            << " failing checks\n";
  if (!o.report.empty()) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& r : reports) doc.push_back(nlohmann::ordered_json::parse(r.to_json()));
    std::ofstream out(o.report);
    if (!out) throw LoadError("cannot write " + o.report);
    out << doc.dump(2) << "\n";
  }
  return failures ? exit_failures : exit_ok;
}

int cmd_handle(const Options& o) {
  BaseMonad base = base_monad(o);
  Env env = Env::standard(base, 8, o.depth);
  const Resumption& r = env.monad();
  Tree t = parse_tree(r, slurp(o.file));
  EffectInterpretation ups = EffectInterpretation::named(o.interpretation, r.signature(), base);
  Handler xi(r, MonadMorphism::identity(base), ups);
  HandleResult res = xi.handle(t, o.fuel);
  if (o.trace) std::cerr << "fuel " << res.fuel << ", " << res.reached << " nodes reached\n";
  std::cout << base.render(res.value) << (res.converged ? "" : " (approximate)") << "\n";
  return exit_ok;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env_seed = std::getenv("ELGOT_SEED")) {
    try {
      o.seed = std::stoull(env_seed);
    } catch (const std::exception&) {
      std::cerr << "error: ELGOT_SEED is not an integer\n";
      return exit_usage;
    }
  }

  CLI::App app{"Elgot monads, resumptions and handlers"};
  app.require_subcommand(1);
  auto add_base = [&](CLI::App* c) {
    c->add_option("--base", o.base, "base monad")->check(CLI::IsMember({"maybe", "finset", "nondetstate"}));
    c->add_option("--state-set", o.state_set, "comma-separated states for nondetstate");
  };

  CLI::App* run = app.add_subcommand("run", "interpret a while program and print its truncated tree");
  run->add_option("program", o.file, "program file")->required();
  add_base(run);
  run->add_option("--input", o.input, "initial value (0..7)");
  run->add_option("--depth", o.depth, "truncation depth");
  run->add_flag("--trace", o.trace, "print the parsed program to stderr");

  CLI::App* bsp = app.add_subcommand("bsp", "solve a process definition and export its unfolding");
  bsp->add_option("spec", o.file, "specification file (text or JSON)")->required();
  bsp->add_option("--input", o.input, "root state (default: all)");
  bsp->add_option("--depth", o.depth, "unfolding depth");
  bsp->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "dot", "csv"}));
  bsp->add_flag("--trace", o.trace, "list nodes on stderr");

  CLI::App* laws = app.add_subcommand("laws", "run the law suites");
  laws->add_option("--suite", o.suite, "suite name or 'all'");
  laws->add_option("--seed", o.seed, "random seed (default $ELGOT_SEED or 42)");
  laws->add_option("--samples", o.samples, "samples per suite");
  laws->add_option("--depth", o.depth, "bisimulation depth");
  laws->add_option("--report", o.report, "write a JSON report");
  laws->add_flag("--trace", o.trace, "accepted for uniformity");

  CLI::App* handle = app.add_subcommand("handle", "evaluate a finite tree under a named interpretation");
  handle->add_option("tree", o.file, "tree file in the truncation format")->required();
  handle->add_option("interpretation", o.interpretation, "first | any | deadlock")->required();
  add_base(handle);
  handle->add_option("--fuel", o.fuel, "evaluation fuel");
  handle->add_option("--depth", o.depth, "bisimulation depth");
  handle->add_flag("--trace", o.trace, "print fuel and reached nodes to stderr");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*run) return cmd_run(o);
    if (*bsp) return cmd_bsp(o);
    if (*laws) return cmd_laws(o);
    return cmd_handle(o);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  }
}
