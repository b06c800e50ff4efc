#include "flatflow/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "flatflow/brinkman_solver.hpp"
#include "flatflow/error.hpp"

namespace flatflow {

std::string_view to_string(ModelKind kind) noexcept {
  switch (kind) {
    case ModelKind::TP: return "TP";
    case ModelKind::VE: return "VE";
    case ModelKind::VI: return "VI";
    case ModelKind::MS: return "MS";
    case ModelKind::BTP: return "BTP";
    case ModelKind::BVE: return "BVE";
  }
  return "?";
}

std::optional<ModelKind> parse_model_kind(std::string_view text) noexcept {
  for (auto k : {ModelKind::TP, ModelKind::VE, ModelKind::VI, ModelKind::MS, ModelKind::BTP,
                 ModelKind::BVE}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

bool is_brinkman(ModelKind kind) noexcept {
  return kind == ModelKind::BTP || kind == ModelKind::BVE;
}

InitialCondition Scenario::initial_condition() const noexcept {
  if (initial) return *initial;
  return is_brinkman(model) ? InitialCondition::Decay : InitialCondition::Zero;
}

BrinkmanParams BrinkmanParams::from_viscosity(double mu_e, double height, double length) {
  BrinkmanParams p = from_betas(mu_e / (length * length), mu_e / (height * height));
  p.mu_e = mu_e;
  return p;
}

BrinkmanParams BrinkmanParams::from_betas(double beta_x, double beta_z) {
  BrinkmanParams p;
  p.beta_x = beta_x;
  p.beta_z = beta_z;
  p.eps_x = std::sqrt(beta_x);
  p.eps_z = std::sqrt(beta_z);
  return p;
}

namespace {

void require(bool ok, const char* field, const std::string& message) {
  if (!ok) throw ValidationError(field, std::string(field) + ": " + message);
}

bool in_unit(double a) { return a >= 0.0 && a <= 1.0; }

void validate_pieces(const ZProfile& p, const char* field, double lo_value, double hi_value,
                     bool open_low) {
  auto value_ok = [&](double v) {
    return std::isfinite(v) && (open_low ? v > lo_value : v >= lo_value) && v <= hi_value;
  };
  require(value_ok(p.background), field, "background value out of range");
  for (std::size_t a = 0; a < p.pieces.size(); ++a) {
    const auto& pa = p.pieces[a];
    require(in_unit(pa.lo) && in_unit(pa.hi) && pa.lo < pa.hi, field,
            "interval must satisfy 0 <= lo < hi <= 1");
    require(value_ok(pa.value), field, "value out of range");
    for (std::size_t b = a + 1; b < p.pieces.size(); ++b) {
      const auto& pb = p.pieces[b];
      require(std::min(pa.hi, pb.hi) <= std::max(pa.lo, pb.lo), field, "intervals overlap");
    }
  }
}

void validate_rects(const PlanarProfile& p, const char* field, double hi_value) {
  auto value_ok = [&](double v) { return std::isfinite(v) && v > 0.0 && v <= hi_value; };
  require(value_ok(p.background), field, "background value out of range");
  for (std::size_t a = 0; a < p.rects.size(); ++a) {
    const auto& ra = p.rects[a];
    require(in_unit(ra.x0) && in_unit(ra.x1) && ra.x0 < ra.x1 && in_unit(ra.z0) &&
                in_unit(ra.z1) && ra.z0 < ra.z1,
            field, "rectangle must lie inside the unit square");
    require(value_ok(ra.value), field, "value out of range");
    for (std::size_t b = a + 1; b < p.rects.size(); ++b) {
      const auto& rb = p.rects[b];
      const bool disjoint = std::min(ra.x1, rb.x1) <= std::max(ra.x0, rb.x0) ||
                            std::min(ra.z1, rb.z1) <= std::max(ra.z0, rb.z0);
      require(disjoint, field, "rectangles overlap");
    }
  }
}

}  // namespace

void validate(const Scenario& s) {
  require(s.nx >= 1, "nx", "must be a positive integer");
  require(s.nz >= 1, "nz", "must be a positive integer");
  require(s.gamma > 0.0 && std::isfinite(s.gamma), "gamma", "must be positive");
  require(s.viscosity_ratio > 0.0 && std::isfinite(s.viscosity_ratio), "viscosity_ratio",
          "must be positive");
  require(s.end_time >= 0.0 && std::isfinite(s.end_time), "end_time", "must be nonnegative");
  require(s.cfl_factor > 0.0 && s.cfl_factor <= 0.5, "cfl", "must lie in (0, 0.5]");
  require(s.pressure_tol > 0.0, "pressure_tol", "must be positive");
  require(s.helmholtz_tol > 0.0, "helmholtz_tol", "must be positive");
  validate_pieces(s.inflow, "inflow", 0.0, 1.0, false);
  validate_rects(s.permeability, "permeability", INFINITY);
  validate_rects(s.porosity, "porosity", 1.0);
  for (double t : s.snapshot_times) {
    require(t >= 0.0 && t <= s.end_time, "snapshots", "times must lie in [0, end_time]");
  }
  if (is_brinkman(s.model)) {
    require(s.brinkman.has_value(), "brinkman", "Brinkman models need mu_e/height/length or betas");
  }
  if (s.brinkman) {
    const auto& b = *s.brinkman;
    const bool explicit_betas = b.beta_x.has_value() || b.beta_z.has_value();
    if (explicit_betas) {
      require(b.beta_x.value_or(0.0) >= 0.0, "beta_x", "must be nonnegative");
      require(b.beta_z.value_or(0.0) >= 0.0, "beta_z", "must be nonnegative");
    } else {
      require(b.mu_e.has_value() && *b.mu_e >= 0.0, "mu_e", "must be given and nonnegative");
      require(b.height.has_value() && *b.height > 0.0, "height", "must be given and positive");
      const bool length_ok =
          (b.length.has_value() && *b.length > 0.0) || s.model == ModelKind::BTP;
      require(length_ok, "length", "must be given and positive");
    }
    require(b.eps_x.value_or(0.0) >= 0.0, "eps_x", "must be nonnegative");
    require(b.eps_z.value_or(0.0) >= 0.0, "eps_z", "must be nonnegative");
  }
}

BrinkmanParams brinkman_params(const Scenario& s) {
  if (!s.brinkman) return {};
  const auto& b = *s.brinkman;
  BrinkmanParams p;
  if (b.beta_x || b.beta_z) {
    p = BrinkmanParams::from_betas(b.beta_x.value_or(0.0), b.beta_z.value_or(0.0));
    p.mu_e = b.mu_e.value_or(0.0);
  } else {
    const double height = b.height.value_or(1.0);
    const double length = b.length.value_or(height / s.gamma);
    p = BrinkmanParams::from_viscosity(b.mu_e.value_or(0.0), height, length);
  }
  if (b.eps_x) p.eps_x = *b.eps_x;
  if (b.eps_z) p.eps_z = *b.eps_z;
  if (b.vertical_only) {
    p.beta_x = 0.0;
    p.eps_x = 0.0;
  }
  return p;
}

Scenario with_gamma(const Scenario& scenario, double gamma) {
  Scenario out = scenario;
  out.gamma = gamma;
  if (out.brinkman && out.brinkman->height && !out.brinkman->beta_x && !out.brinkman->beta_z) {
    out.brinkman->length = *out.brinkman->height / gamma;
  }
  return out;
}

Setup make_setup(const Scenario& s) {
  validate(s);
  const Grid grid(s.nx, s.nz);
  Setup setup{grid,
              FluidModel(s.viscosity_ratio),
              cell_average(s.permeability, grid),
              cell_average(s.porosity, grid),
              layer_average(s.inflow, s.nz),
              ScalarField(grid)};
  if (s.initial_condition() == InitialCondition::Decay) {
    setup.initial = bve_initial_condition(setup.inflow, grid);
  }
  return setup;
}

}  // namespace flatflow
