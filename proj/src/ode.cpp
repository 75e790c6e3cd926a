#include "verhulst/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace verhulst {

namespace {

template <class Rhs>
double advance(Method method, const Rhs& rhs, double t, double y, double h) {
  if (method == Method::Euler) return y + h * rhs(t, y);
  const double k1 = rhs(t, y);
  const double k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
  const double k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
  const double k4 = rhs(t + h, y + h * k3);
  return y + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Grid 0 = t_0 < t_1 < ... < t_n = t_end with spacing `step`; the final
// interval is shortened when t_end is not a multiple of the step.
std::vector<double> time_grid(const IntegratorConfig& config) {
  if (!std::isfinite(config.step) || config.step <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, "integration step must be finite and positive");
  }
  if (!std::isfinite(config.t_end) || config.t_end < 0.0) {
    throw Error(ErrorKind::InvalidArgument, "t_end must be finite and non-negative");
  }
  const double span = config.t_end / config.step;
  if (span > kMaxSteps) {
    throw Error(ErrorKind::StepOverflow, "t_end / step = " + std::to_string(span) +
                                             " exceeds the step limit");
  }
  // Absorb representation error so that 15 / 0.01 gives 1500 steps, not 1501.
  const auto steps = static_cast<std::size_t>(std::ceil(span * (1.0 - 1e-12)));
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i < steps; ++i) grid[i] = static_cast<double>(i) * config.step;
  grid[steps] = config.t_end;
  return grid;
}

void check_interval(const LogisticParams& params, const IntegratorConfig& config) {
  const Branch branch = classify(params);
  if (branch.tag == BranchTag::NegativeStart && *branch.tau0 <= config.t_end) {
    throw Error(ErrorKind::SingularRegion,
                "interval [0, " + std::to_string(config.t_end) +
                    "] contains the asymptote at t = " + std::to_string(*branch.tau0));
  }
}

IntegrationReport make_report(const LogisticParams& params, const std::vector<double>& grid,
                              const std::vector<double>& values) {
  IntegrationReport report{Trajectory(params), 0.0, 0.0, grid.size() - 1};
  report.trajectory.reserve(grid.size());
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    report.trajectory.append(grid[i], values[i]);
    const double err = std::abs(values[i] - eval(params, grid[i]));
    report.max_abs_error = std::max(report.max_abs_error, err);
    sum_sq += err * err;
  }
  report.l2_error = std::sqrt(sum_sq / static_cast<double>(grid.size()));
  return report;
}

}  // namespace

std::string_view to_string(Method method) noexcept {
  return method == Method::RK4 ? "RK4" : "Euler";
}

IntegrationReport integrate_logistic(const LogisticParams& params, const IntegratorConfig& config) {
  const std::vector<double> grid = time_grid(config);
  check_interval(params, config);

  const auto rhs = [&params](double, double p) { return growth_rate(params, p); };
  std::vector<double> values(grid.size());
  values[0] = params.initial();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    values[i] = advance(config.method, rhs, grid[i - 1], values[i - 1], grid[i] - grid[i - 1]);
  }
  return make_report(params, grid, values);
}

IntegrationReport integrate_ratio(const LogisticParams& params, const IntegratorConfig& config) {
  const Branch branch = classify(params);
  if (!branch.ratio_r0) {
    throw Error(ErrorKind::WrongBranch, "niche ratio is undefined for P0 = 0");
  }
  const std::vector<double> grid = time_grid(config);
  check_interval(params, config);

  const double k = params.rate();
  const auto rhs = [k](double, double r) { return -k * r; };
  const double m = params.capacity();

  std::vector<double> values(grid.size());
  double r = *branch.ratio_r0;
  values[0] = params.initial();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double next = advance(config.method, rhs, grid[i - 1], r, grid[i] - grid[i - 1]);
    if ((1.0 + r) * (1.0 + next) <= 0.0) {
      throw Error(ErrorKind::MapSingularity,
                  "1 + R changes sign between t = " + std::to_string(grid[i - 1]) +
                      " and t = " + std::to_string(grid[i]));
    }
    r = next;
    values[i] = m / (1.0 + r);
  }
  return make_report(params, grid, values);
}

}  // namespace verhulst
