#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "flatflow/grid.hpp"
#include "flatflow/physics.hpp"

namespace flatflow {

enum class ModelKind { TP, VE, VI, MS, BTP, BVE };

std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept;
bool is_brinkman(ModelKind kind) noexcept;

enum class InitialCondition {
  Zero,   ///< resident phase everywhere
  Decay,  ///< rapid decay from the inflow values, used by the Brinkman runs
};

/// Brinkman coefficients of the dimensionless equations: beta_x = mu_e/L^2,
/// beta_z = mu_e/H^2 and the diffusion weights eps = sqrt(beta).
struct BrinkmanParams {
  double beta_x = 0.0;
  double beta_z = 0.0;
  double eps_x = 0.0;
  double eps_z = 0.0;
  double mu_e = 0.0;

  static BrinkmanParams from_viscosity(double mu_e, double height, double length);
  static BrinkmanParams from_betas(double beta_x, double beta_z);
};

/// How a scenario specifies its Brinkman coefficients: either physically
/// (mu_e with height H and length L) or by explicit betas. Explicit values
/// win over derived ones.
struct BrinkmanSpec {
  std::optional<double> mu_e;
  std::optional<double> height;
  std::optional<double> length;
  std::optional<double> beta_x;
  std::optional<double> beta_z;
  std::optional<double> eps_x;
  std::optional<double> eps_z;
  /// Drop the horizontal terms (beta_x = eps_x = 0).
  bool vertical_only = false;

  bool operator==(const BrinkmanSpec&) const = default;
};

struct Scenario {
  ModelKind model = ModelKind::VE;
  int nx = 0;
  int nz = 0;
  double gamma = 1.0;
  double viscosity_ratio = 0.0;
  double end_time = 0.0;
  double cfl_factor = 0.45;
  ZProfile inflow;
  PlanarProfile permeability;
  PlanarProfile porosity;
  std::optional<BrinkmanSpec> brinkman;
  std::vector<double> snapshot_times;
  std::optional<InitialCondition> initial;
  double pressure_tol = 1e-10;
  double helmholtz_tol = 1e-12;
  /// BTP only: solve the Helmholtz systems for the physical velocity each step.
  bool recover_velocity = true;

  bool operator==(const Scenario&) const = default;

  InitialCondition initial_condition() const noexcept;
};

/// Throws ValidationError naming the offending field.
void validate(const Scenario& scenario);

/// Resolves the Brinkman coefficients; for BTP a missing length is taken
/// as height / gamma. Returns zeros when the scenario carries no Brinkman
/// block.
BrinkmanParams brinkman_params(const Scenario& scenario);

/// Copy with a different aspect ratio. When the Brinkman block is given
/// through mu_e and height, the length follows as height / gamma.
Scenario with_gamma(const Scenario& scenario, double gamma);

/// Discrete data derived from a scenario.
struct Setup {
  Grid grid;
  FluidModel fluid;
  ScalarField kappa;
  ScalarField porosity;
  std::vector<double> inflow;  ///< per layer, bottom first
  ScalarField initial;
};

Setup make_setup(const Scenario& scenario);

}  // namespace flatflow
