#pragma once

// Closed-form solutions of the logistic equation dP/dt = k P (1 - P/M).
//
// Every real initial population P0 falls on exactly one solution branch:
//
//   FrozenZero      P0 == 0          P(t) == 0
//   Interior        0 < P0 < M       P(t) = M/2 (1 + tanh(k (t - tau0) / 2))
//   FrozenCapacity  P0 == M          P(t) == M
//   AboveCapacity   P0 > M           P(t) = M/2 (1 + coth(k (t - tau0) / 2)), tau0 <= 0
//   NegativeStart   P0 < 0           same coth form, tau0 >= 0, asymptote at t = tau0
//
// tau0 is the time at which the niche ratio R = (M - P)/P has magnitude one.
// Time carries no unit of its own; it is measured in the unit of 1/k.

#include <optional>
#include <string_view>
#include <vector>

#include "verhulst/error.hpp"

namespace verhulst {

/// Evaluations with |k (t - tau0) / 2| below this are rejected as singular.
inline constexpr double kSingularityGuard = 1e-12;

/// One model instance (M, k, P0). Construction enforces M > 0 and k > 0,
/// both finite; P0 may be any finite real.
class LogisticParams {
 public:
  LogisticParams(double capacity, double rate, double initial);

  double capacity() const noexcept { return capacity_; }
  double rate() const noexcept { return rate_; }
  double initial() const noexcept { return initial_; }

  friend bool operator==(const LogisticParams&, const LogisticParams&) = default;

 private:
  double capacity_;
  double rate_;
  double initial_;
};

enum class BranchTag { Interior, AboveCapacity, NegativeStart, FrozenZero, FrozenCapacity };

std::string_view to_string(BranchTag tag) noexcept;

/// Solution family of a parameter set together with its derived constants.
/// `ratio_r0` is absent only for FrozenZero, `s0` is present only on the coth
/// branches and `tau0` is absent only on the frozen branches.
struct Branch {
  BranchTag tag;
  std::optional<double> ratio_r0;
  std::optional<double> s0;
  std::optional<double> tau0;
};

/// Exact comparisons, no epsilon: P0 == M is a user-declared degenerate model.
Branch classify(const LogisticParams& params) noexcept;

/// Unbounded exponential growth (or decay for negative rate): initial * e^{rate t}.
double exponential_model(double initial, double rate, double t) noexcept;

/// M / (1 + R0 e^{-kt}) evaluated as written. This is the reference form; it
/// overflows for large negative t and is kept as an oracle for the others.
double eval_standard(const LogisticParams& params, double t);

/// Interior branch only.
double eval_tanh(const LogisticParams& params, double t);

/// AboveCapacity and NegativeStart branches only. Throws SingularInput
/// inside the guard around t = tau0.
double eval_coth(const LogisticParams& params, double t);

/// Total evaluator; dispatches on the branch. Preferred entry point.
double eval(const LogisticParams& params, double t);

/// Niche ratio R(t) = R0 e^{-kt}. Undefined on FrozenZero.
double ratio(const LogisticParams& params, double t);

/// dP/dt = k P (1 - P/M) at population P.
double growth_rate(const LogisticParams& params, double population) noexcept;

/// The same rate written as M k / 4 - (k / M) (P - M/2)^2.
double growth_rate_completed_square(const LogisticParams& params, double population) noexcept;

struct GrowthPeak {
  double time;
  double population;
  double rate;
};

/// Inflection point (tau0, M/2, M k / 4) of an Interior solution.
GrowthPeak max_growth_point(const LogisticParams& params);

struct Sample {
  double t;
  double population;
};

/// Time-ordered samples of one solution. `append` enforces strictly
/// increasing time and refuses points inside the singularity guard.
class Trajectory {
 public:
  explicit Trajectory(const LogisticParams& params);

  void append(double t, double population);
  void reserve(std::size_t n) { samples_.reserve(n); }

  const LogisticParams& params() const noexcept { return params_; }
  const std::vector<Sample>& samples() const noexcept { return samples_; }
  const std::optional<double>& singular_time() const noexcept { return singular_time_; }

 private:
  LogisticParams params_;
  std::vector<Sample> samples_;
  std::optional<double> singular_time_;
};

}  // namespace verhulst
