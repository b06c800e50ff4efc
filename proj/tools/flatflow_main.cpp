#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "flatflow/commands.hpp"
#include "flatflow/error.hpp"

int main(int argc, char** argv) {
  CLI::App app{"flatflow: two-phase flow in flat domains"};
  app.require_subcommand(1);

  std::string scenario;
  std::string out_dir;
  auto* run = app.add_subcommand("run", "run a scenario and dump fields");
  run->add_option("scenario", scenario, "scenario file")->required();
  run->add_option("--out", out_dir, "directory for field dumps");

  std::string a, b, metric = "l1";
  auto* compare = app.add_subcommand("compare", "distance between two runs' final fields");
  compare->add_option("a", a)->required();
  compare->add_option("b", b)->required();
  compare->add_option("--metric", metric)->check(CLI::IsMember({"l1", "linf"}));

  std::vector<double> gammas;
  auto* conv = app.add_subcommand("convergence", "aspect-ratio sweep against the reduced model");
  conv->add_option("scenario", scenario)->required();
  conv->add_option("--gammas", gammas)->required()->delimiter(',');

  std::string grids;
  auto* bench = app.add_subcommand("bench", "timing of full vs reduced model");
  bench->add_option("scenario", scenario)->required();
  bench->add_option("--grids", grids, "e.g. 100x100,200x100")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      std::optional<std::filesystem::path> dir;
      if (!out_dir.empty()) dir = out_dir;
      return flatflow::cmd_run(scenario, dir, std::cout);
    }
    if (*compare) return flatflow::cmd_compare(a, b, metric, std::cout);
    if (*conv) return flatflow::cmd_convergence(scenario, gammas, std::cout);
    if (*bench) {
      return flatflow::cmd_bench(scenario, flatflow::parse_grid_list(grids), std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
