// krc: Krohn-Rhodes complexity tool.
//
//   krc green      <input>
//   krc bounds     <input>
//   krc complexity <input>
//   krc eval       <input> --k 0
//   krc flow-verify <input> <flow file> [--gm 0]
//   krc divides    <input> <input>
//
// <input> is a file, '-' for stdin, or builtin:<name> (U, Z2, T3, SIS3, ...).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "kr/report.hpp"

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path);
  if (!in) throw kr::Error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

kr::InputDocument load(const std::string& spec) {
  if (spec.rfind("builtin:", 0) == 0) return kr::builtin_document(spec.substr(8));
  return kr::parse_input(slurp(spec));
}

template <class T>
void env_override(const char* name, T& v) {
  if (const char* s = std::getenv(name)) v = static_cast<T>(std::stoull(s));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Krohn-Rhodes complexity of finite semigroups"};
  app.require_subcommand(1);

  kr::RunConfig cfg;
  env_override("KR_BUDGET_STATES", cfg.budget_states);
  env_override("KR_BUDGET_NODES", cfg.budget_nodes);
  std::string format = "text";
  std::string input, second;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", input, "semigroup file, '-' or builtin:<name>")->required();
    sub->add_option("--k", cfg.k, "eval level");
    sub->add_option("--budget-states", cfg.budget_states, "state cap per eval build");
    sub->add_option("--budget-nodes", cfg.budget_nodes, "search node cap");
    sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--seed", cfg.seed, "seed recorded in the report");
  };
  for (const char* name : {"green", "bounds", "complexity", "eval"}) common(app.add_subcommand(name));
  auto* fv = app.add_subcommand("flow-verify", "check a flow file against a GM image");
  common(fv);
  fv->add_option("flow", second, "flow file")->required();
  fv->add_option("--gm", cfg.gm, "GM image index");
  auto* dv = app.add_subcommand("divides", "does the first semigroup divide the second");
  common(dv);
  dv->add_option("target", second, "semigroup file, '-' or builtin:<name>")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every usage error is a hard error.
    return app.exit(e) == 0 ? 0 : static_cast<int>(kr::ExitCode::HardError);
  }
  std::string command = app.get_subcommands().front()->get_name();

  kr::Report rep;
  try {
    kr::InputDocument doc = load(input);
    std::optional<kr::InputDocument> other;
    std::string flow;
    if (command == "divides") other = load(second);
    if (command == "flow-verify") flow = slurp(second);
    rep = kr::run(command, doc, cfg, other, flow);
  } catch (const std::exception& e) {
    rep = kr::error_report(command, e.what());
  }
  std::string out = format == "json" ? kr::emit_json(rep) : kr::emit_text(rep);
  (rep.code == kr::ExitCode::HardError && format == "text" ? std::cerr : std::cout) << out;
  return static_cast<int>(rep.code);
}
