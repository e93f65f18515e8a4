#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"

#include "cantordyn/commands.hpp"
#include "cantordyn/error.hpp"

namespace {

const std::map<std::string, std::string> kDescriptions{
    {"validate", "Check map conditions and forward invariance"},
    {"orbit", "Orbit of a point, with membership checks"},
    {"recurrent", "Build a recurrent point from cover stages"},
    {"minimal", "Minimal subsystem and almost-periodicity bounds"},
    {"decode-halting", "Build the halting product and decode each bit"},
    {"dodge", "Periodic orbit avoiding P, or a non-AP subclass of P"},
    {"meet-avoid", "Meet or avoid the first open request"},
    {"force-least", "Force the least witness of a predicate"},
    {"ap-point", "Generic almost periodic point for a request list"},
    {"reduce-tree", "Compare gadget recurrent nodes with tree paths"},
};

std::string read_file(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-depth symbolic dynamics constructions with re-verified certificates"};
  app.require_subcommand(1);

  cantordyn::CommandOptions options;
  std::string spec_path;
  std::string requests_path;
  std::string halting_path;
  std::string predicate_path;
  std::string out_path;
  std::size_t depth = 0;
  std::size_t stages = 0;
  std::size_t cmax = 0;
  std::string point;

  for (const std::string& name : cantordyn::command_names()) {
    CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
    if (name == "decode-halting") {
      sub->add_option("--halting", halting_path, "Halting simulation file")->required()->check(CLI::ExistingFile);
    } else {
      sub->add_option("spec", spec_path, "System spec file")->required()->check(CLI::ExistingFile);
    }
    sub->add_option("--depth", depth, "Working depth (column depth for decode-halting)");
    sub->add_option("--stages", stages, "Stage count: orbit steps, removal word length, sigma stages, gadget depth");
    sub->add_option("--cmax", cmax, "Cylinder budget (max period for dodge)");
    sub->add_option("--requests", requests_path, "OpenRequest list file")->check(CLI::ExistingFile);
    sub->add_option("--seed", options.seed, "Seed for sampled checks");
    sub->add_flag("--trace", options.trace, "Include stage-by-stage detail");
    sub->add_option("--out", out_path, "Write the report to this file");
    if (name == "force-least") {
      sub->add_option("--phi", predicate_path, "Predicate file")->required()->check(CLI::ExistingFile);
    }
    if (name == "orbit") sub->add_option("--point", point, "Depth-N start word");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  options.command = chosen->get_name();
  if (chosen->count("--depth")) options.depth = depth;
  if (chosen->count("--stages")) options.stages = stages;
  if (chosen->count("--cmax")) options.cmax = cmax;
  if (chosen->get_option_no_throw("--point") && chosen->count("--point")) options.point = point;

  cantordyn::CommandResult result;
  try {
    options.spec_text = read_file(spec_path);
    options.requests_text = read_file(requests_path);
    options.halting_text = read_file(halting_path);
    options.predicate_text = read_file(predicate_path);
    result = cantordyn::run_command(options);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (out_path.empty()) {
    std::cout << result.report;
  } else {
    std::ofstream out(out_path);
    out << result.report;
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 2;
    }
  }
  if (!result.verified) {
    std::cerr << "not verified: " << result.failure << "\n";
    return 1;
  }
  return 0;
}
