#include "verhulst/model.hpp"

#include <cmath>
#include <string>

namespace verhulst {

namespace {

bool is_coth_branch(BranchTag tag) noexcept {
  return tag == BranchTag::AboveCapacity || tag == BranchTag::NegativeStart;
}

// log R0 on the Interior branch, log S0 on the coth branches. Working with the
// logarithm directly keeps k (t - tau0) = k t - log R0 free of a k/k round trip.
double log_offset(const LogisticParams& params) noexcept {
  const double m = params.capacity();
  const double p0 = params.initial();
  return p0 < m && p0 > 0.0 ? std::log((m - p0) / p0) : std::log((p0 - m) / p0);
}

// Half argument k (t - tau0) / 2 of the hyperbolic forms.
double half_phase(const LogisticParams& params, double t) noexcept {
  return 0.5 * (params.rate() * t - log_offset(params));
}

// 1 + tanh(x). The lower tail goes through the exponential identity
// 1 + tanh(x) = 2 / (1 + e^{-2x}) so values near zero keep relative precision.
double one_plus_tanh(double x) noexcept {
  if (x >= 0.0) return 1.0 + std::tanh(x);
  return 2.0 / (1.0 + std::exp(-2.0 * x));
}

// 1 + coth(x), x != 0. Lower arch uses 1 + coth(x) = -2 / expm1(-2x).
double one_plus_coth(double x) noexcept {
  if (x > 0.0) return 1.0 + 1.0 / std::tanh(x);
  return -2.0 / std::expm1(-2.0 * x);
}

void require_not_singular(double x, double t) {
  if (std::abs(x) < kSingularityGuard) {
    throw Error(ErrorKind::SingularInput,
                "t = " + std::to_string(t) + " lies on the coth asymptote");
  }
}

}  // namespace

LogisticParams::LogisticParams(double capacity, double rate, double initial)
    : capacity_(capacity), rate_(rate), initial_(initial) {
  if (!std::isfinite(capacity) || capacity <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, "capacity M must be finite and positive");
  }
  if (!std::isfinite(rate) || rate <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, "rate k must be finite and positive");
  }
  if (!std::isfinite(initial)) {
    throw Error(ErrorKind::InvalidArgument, "initial population P0 must be finite");
  }
  if (initial != 0.0 && !std::isfinite((capacity - initial) / initial)) {
    throw Error(ErrorKind::InvalidArgument,
                "initial population P0 is too close to zero for the ratio (M - P0) / P0");
  }
}

std::string_view to_string(BranchTag tag) noexcept {
  switch (tag) {
    case BranchTag::Interior: return "Interior";
    case BranchTag::AboveCapacity: return "AboveCapacity";
    case BranchTag::NegativeStart: return "NegativeStart";
    case BranchTag::FrozenZero: return "FrozenZero";
    case BranchTag::FrozenCapacity: return "FrozenCapacity";
  }
  return "Unknown";
}

Branch classify(const LogisticParams& params) noexcept {
  const double m = params.capacity();
  const double k = params.rate();
  const double p0 = params.initial();

  if (p0 == 0.0) return {BranchTag::FrozenZero, std::nullopt, std::nullopt, std::nullopt};
  if (p0 == m) return {BranchTag::FrozenCapacity, 0.0, std::nullopt, std::nullopt};

  const double r0 = (m - p0) / p0;
  if (p0 > 0.0 && p0 < m) {
    return {BranchTag::Interior, r0, std::nullopt, std::log(r0) / k};
  }
  const double s0 = (p0 - m) / p0;
  const BranchTag tag = p0 > m ? BranchTag::AboveCapacity : BranchTag::NegativeStart;
  return {tag, r0, s0, std::log(s0) / k};
}

double exponential_model(double initial, double rate, double t) noexcept {
  return initial * std::exp(rate * t);
}

double eval_standard(const LogisticParams& params, double t) {
  const Branch branch = classify(params);
  if (branch.tag == BranchTag::FrozenZero) {
    throw Error(ErrorKind::WrongBranch, "R0 is undefined for P0 = 0");
  }
  const double r0 = *branch.ratio_r0;
  if (r0 < 0.0) require_not_singular(half_phase(params, t), t);

  const double denom = 1.0 + r0 * std::exp(-params.rate() * t);
  if (denom == 0.0) {
    throw Error(ErrorKind::SingularInput, "1 + R0 e^{-kt} vanishes at t = " + std::to_string(t));
  }
  return params.capacity() / denom;
}

double eval_tanh(const LogisticParams& params, double t) {
  if (classify(params).tag != BranchTag::Interior) {
    throw Error(ErrorKind::WrongBranch, "tanh form requires 0 < P0 < M");
  }
  // The initial condition holds exactly.
  if (t == 0.0) return params.initial();
  return 0.5 * params.capacity() * one_plus_tanh(half_phase(params, t));
}

double eval_coth(const LogisticParams& params, double t) {
  if (!is_coth_branch(classify(params).tag)) {
    throw Error(ErrorKind::WrongBranch, "coth form requires P0 < 0 or P0 > M");
  }
  const double x = half_phase(params, t);
  require_not_singular(x, t);
  if (t == 0.0) return params.initial();
  return 0.5 * params.capacity() * one_plus_coth(x);
}

double eval(const LogisticParams& params, double t) {
  switch (classify(params).tag) {
    case BranchTag::FrozenZero: return 0.0;
    case BranchTag::FrozenCapacity: return params.capacity();
    case BranchTag::Interior: return eval_tanh(params, t);
    case BranchTag::AboveCapacity:
    case BranchTag::NegativeStart: return eval_coth(params, t);
  }
  return 0.0;
}

double ratio(const LogisticParams& params, double t) {
  const Branch branch = classify(params);
  if (!branch.ratio_r0) {
    throw Error(ErrorKind::WrongBranch, "niche ratio is undefined for P0 = 0");
  }
  return exponential_model(*branch.ratio_r0, -params.rate(), t);
}

double growth_rate(const LogisticParams& params, double population) noexcept {
  return params.rate() * population * (1.0 - population / params.capacity());
}

double growth_rate_completed_square(const LogisticParams& params, double population) noexcept {
  const double m = params.capacity();
  const double k = params.rate();
  const double offset = population - 0.5 * m;
  return m * k / 4.0 - (k / m) * offset * offset;
}

GrowthPeak max_growth_point(const LogisticParams& params) {
  const Branch branch = classify(params);
  if (branch.tag != BranchTag::Interior) {
    throw Error(ErrorKind::WrongBranch, "maximum growth point exists only for 0 < P0 < M");
  }
  const double m = params.capacity();
  return {*branch.tau0, 0.5 * m, m * params.rate() / 4.0};
}

Trajectory::Trajectory(const LogisticParams& params) : params_(params) {
  const Branch branch = classify(params);
  if (branch.tag == BranchTag::NegativeStart) singular_time_ = branch.tau0;
}

void Trajectory::append(double t, double population) {
  if (!samples_.empty() && !(t > samples_.back().t)) {
    throw Error(ErrorKind::InvalidData, "trajectory times must be strictly increasing");
  }
  if (singular_time_) require_not_singular(0.5 * params_.rate() * (t - *singular_time_), t);
  samples_.push_back({t, population});
}

}  // namespace verhulst
