#pragma once

namespace flatflow {

/// Quadratic relative permeabilities with viscosity ratio M = mu_d / mu_i
/// (defending over invading).
class FluidModel {
 public:
  explicit FluidModel(double viscosity_ratio);

  double viscosity_ratio() const noexcept { return m_; }

  // Unchecked kernels for solver inner loops. The argument is clamped to
  // [0, 1] so that round-off excursions and pseudo-parabolic overshoots
  // evaluate at the nearest admissible saturation.
  double total_mobility_at(double s) const noexcept {
    s = clamp01(s);
    return m_ * s * s + (1.0 - s) * (1.0 - s);
  }
  double fractional_flow_at(double s) const noexcept {
    s = clamp01(s);
    const double a = m_ * s * s;
    return a / (a + (1.0 - s) * (1.0 - s));
  }
  double fractional_flow_slope_at(double s) const noexcept {
    s = clamp01(s);
    const double d = m_ * s * s + (1.0 - s) * (1.0 - s);
    return 2.0 * m_ * s * (1.0 - s) / (d * d);
  }
  double diffusion_at(double s, double kappa) const noexcept {
    s = clamp01(s);
    const double a = m_ * s * s;
    const double b = (1.0 - s) * (1.0 - s);
    return kappa * a * b / (a + b);
  }

 private:
  static double clamp01(double s) noexcept { return s < 0.0 ? 0.0 : (s > 1.0 ? 1.0 : s); }
  double m_;
};

/// f(s) = M s^2 / (M s^2 + (1 - s)^2). Throws DomainError outside [0, 1].
double fractional_flow(double s, const FluidModel& model);

/// lambda_tot(s) = M s^2 + (1 - s)^2.
double total_mobility(double s, const FluidModel& model);

/// H(s) = kappa * M s^2 (1 - s)^2 / (M s^2 + (1 - s)^2).
double diffusion_H(double s, double kappa, const FluidModel& model);

/// Upper bound on sup |f'| over [0, 1]: dense sampling with a 1% margin.
double fractional_flow_derivative_bound(const FluidModel& model);

/// Upper bound on sup H(s) for kappa = 1, sampled the same way.
double diffusion_bound(const FluidModel& model);

}  // namespace flatflow
