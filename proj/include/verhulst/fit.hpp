#pragma once

// Parameter estimation for the logistic model from (t, P) observations.
//
// Two estimators are provided:
//  - fit_ratio_linear: with the capacity known, log R = log R0 - k t is a
//    straight line, so ordinary least squares on (t, log R) gives k and R0.
//  - fit_full: Levenberg-Marquardt on the P-space residuals of
//    M / (1 + R0 e^{-kt}) over (log M, log k, log |R0|).

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "verhulst/model.hpp"

namespace verhulst {

struct Observation {
  double t;
  double population;
};

/// Observations with finite values and strictly increasing time.
class TimeSeries {
 public:
  TimeSeries() = default;
  /// Throws InvalidData naming the first offending index.
  explicit TimeSeries(std::vector<Observation> points);

  /// Sorts by time first; duplicate times are still rejected.
  static TimeSeries sorted(std::vector<Observation> points);

  std::span<const Observation> points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  /// The same observations with every time shifted by `delta`.
  TimeSeries shifted(double delta) const;

 private:
  std::vector<Observation> points_;
};

/// Samples `eval(params, t)` at `count` evenly spaced times on [t_start, t_end].
TimeSeries sample_series(const LogisticParams& params, double t_start, double t_end,
                         std::size_t count);

enum class FitMethod { RatioLinearized, NonlinearLS };

std::string_view to_string(FitMethod method) noexcept;

struct FitResult {
  LogisticParams params;
  FitMethod method;
  double rss;  ///< Sum of squared P-space residuals.
  bool converged;
  std::size_t iterations;
};

/// Least-squares line through the (t, log R) points of a series.
struct RatioLine {
  std::vector<Observation> log_ratio;  ///< (t, log((M - P) / P)) per observation
  double slope;
  double intercept;
  double max_deviation;  ///< largest |log R - line| over the points
};

/// Throws CapacityTooSmall if any P >= capacity, DegenerateData if any P <= 0,
/// if fewer than 3 points are given, or if the times have zero variance.
RatioLine ratio_line(const TimeSeries& data, double capacity);

/// Throws as `ratio_line`, plus DegenerateData when the fitted slope is not
/// negative (k would not be positive).
FitResult fit_ratio_linear(const TimeSeries& data, double known_capacity);

inline constexpr std::size_t kMaxFitIterations = 200;

/// Damped Gauss-Newton fit of (M, k, P0). Without `init` the start comes from
/// the linearized fit at M = 1.05 max(P). An `init` on the AboveCapacity branch
/// fits decay from above; NegativeStart and frozen inits throw WrongBranch.
/// Failure to converge, or a curve insensitive to one of the parameters,
/// is reported through `converged == false` with the best parameters found.
FitResult fit_full(const TimeSeries& data, std::optional<LogisticParams> init = std::nullopt);

/// Sum of squared residuals of `data` against `eval(params, t)`.
double residual_sum_of_squares(const TimeSeries& data, const LogisticParams& params);

}  // namespace verhulst
