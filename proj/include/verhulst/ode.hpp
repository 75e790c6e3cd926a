#pragma once

// Fixed-step integration of the logistic equation and of the niche-ratio
// equation dR/dt = -k R, started from t = 0. Reports are measured against
// the closed form at the integrator's own grid points.

#include <cstddef>
#include <string_view>

#include "verhulst/model.hpp"

namespace verhulst {

enum class Method { RK4, Euler };

std::string_view to_string(Method method) noexcept;

/// Runaway guard on the number of steps.
inline constexpr double kMaxSteps = 1e8;

struct IntegratorConfig {
  double step = 0.01;
  Method method = Method::RK4;
  double t_end = 0.0;  ///< Integration runs over [0, t_end]; t_end == 0 yields a single point.
};

struct IntegrationReport {
  Trajectory trajectory;
  double max_abs_error = 0.0;
  double l2_error = 0.0;  ///< Root mean square of the pointwise errors.
  std::size_t steps = 0;
};

/// Integrates dP/dt = k P (1 - P/M) from P(0) = P0.
/// Throws SingularRegion when a NegativeStart asymptote lies in [0, t_end]
/// and StepOverflow when t_end / step exceeds kMaxSteps.
IntegrationReport integrate_logistic(const LogisticParams& params, const IntegratorConfig& config);

/// Integrates dR/dt = -k R from R0 and maps each point back through P = M / (1 + R).
/// Additionally throws MapSingularity if 1 + R changes sign within a step.
IntegrationReport integrate_ratio(const LogisticParams& params, const IntegratorConfig& config);

}  // namespace verhulst
