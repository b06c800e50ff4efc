#include "flatflow/physics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "flatflow/error.hpp"

namespace flatflow {

namespace {

constexpr int kBoundSamples = 20000;
constexpr double kBoundMargin = 1.01;

void check_saturation(double s, const char* fn) {
  if (!(s >= 0.0 && s <= 1.0)) {
    throw DomainError(std::string(fn) + ": saturation " + std::to_string(s) +
                      " outside [0, 1]");
  }
}

}  // namespace

FluidModel::FluidModel(double viscosity_ratio) : m_(viscosity_ratio) {
  if (!(viscosity_ratio > 0.0) || !std::isfinite(viscosity_ratio)) {
    throw DomainError("viscosity ratio must be positive and finite");
  }
}

double fractional_flow(double s, const FluidModel& model) {
  check_saturation(s, "fractional_flow");
  return model.fractional_flow_at(s);
}

double total_mobility(double s, const FluidModel& model) {
  check_saturation(s, "total_mobility");
  return model.total_mobility_at(s);
}

double diffusion_H(double s, double kappa, const FluidModel& model) {
  check_saturation(s, "diffusion_H");
  if (!(kappa > 0.0)) throw DomainError("diffusion_H: permeability must be positive");
  return model.diffusion_at(s, kappa);
}

double fractional_flow_derivative_bound(const FluidModel& model) {
  double sup = 0.0;
  for (int k = 0; k <= kBoundSamples; ++k) {
    const double s = static_cast<double>(k) / kBoundSamples;
    sup = std::max(sup, std::abs(model.fractional_flow_slope_at(s)));
  }
  return kBoundMargin * sup;
}

double diffusion_bound(const FluidModel& model) {
  double sup = 0.0;
  for (int k = 0; k <= kBoundSamples; ++k) {
    const double s = static_cast<double>(k) / kBoundSamples;
    sup = std::max(sup, model.diffusion_at(s, 1.0));
  }
  return kBoundMargin * sup;
}

}  // namespace flatflow
