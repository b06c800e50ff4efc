#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "flatflow/grid.hpp"
#include "flatflow/scenario.hpp"

namespace flatflow {

// Scenario documents are line oriented:
//
//   model = VE
//   nx = 200
//   [inflow]
//   background = 0
//   0.4 0.6 -> 0.9
//
// Top-level lines are `key = value`. The [inflow], [permeability] and
// [porosity] sections hold `lo hi -> value` rows over z (planar sections
// also take `x0 x1 z0 z1 -> value`); `[scenario]` returns to the top level.
// `#` starts a comment.

Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& scenario);
Scenario load_scenario(const std::filesystem::path& path);

/// Header `# nx=<nx> nz=<nz> time=<t>`, then nz lines of nx values with
/// 17 significant digits, bottom layer first.
std::string format_field(const ScalarField& field, double time);
void write_field(const ScalarField& field, double time, const std::filesystem::path& path);

struct FieldDump {
  ScalarField field;
  double time;
};
FieldDump parse_field(std::string_view text);
FieldDump read_field(const std::filesystem::path& path);

}  // namespace flatflow
