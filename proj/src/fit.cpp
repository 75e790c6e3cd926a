#include "verhulst/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace verhulst {

TimeSeries::TimeSeries(std::vector<Observation> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Observation& p = points_[i];
    if (!std::isfinite(p.t) || !std::isfinite(p.population)) {
      throw Error(ErrorKind::InvalidData, "point " + std::to_string(i) + " is not finite");
    }
    if (i > 0 && !(p.t > points_[i - 1].t)) {
      throw Error(ErrorKind::InvalidData,
                  "point " + std::to_string(i) + ": time is not strictly increasing");
    }
  }
}

TimeSeries TimeSeries::sorted(std::vector<Observation> points) {
  std::stable_sort(points.begin(), points.end(),
                   [](const Observation& a, const Observation& b) { return a.t < b.t; });
  return TimeSeries(std::move(points));
}

TimeSeries TimeSeries::shifted(double delta) const {
  std::vector<Observation> moved(points_.begin(), points_.end());
  for (Observation& p : moved) p.t += delta;
  return TimeSeries(std::move(moved));
}

TimeSeries sample_series(const LogisticParams& params, double t_start, double t_end,
                         std::size_t count) {
  if (count < 2 || !(t_end > t_start)) {
    throw Error(ErrorKind::InvalidArgument, "sampling needs at least 2 points and t_end > t_start");
  }
  std::vector<Observation> points(count);
  const double dt = (t_end - t_start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = i + 1 == count ? t_end : t_start + static_cast<double>(i) * dt;
    points[i] = {t, eval(params, t)};
  }
  return TimeSeries(std::move(points));
}

std::string_view to_string(FitMethod method) noexcept {
  return method == FitMethod::RatioLinearized ? "RatioLinearized" : "NonlinearLS";
}

double residual_sum_of_squares(const TimeSeries& data, const LogisticParams& params) {
  double rss = 0.0;
  for (const Observation& p : data.points()) {
    const double r = p.population - eval(params, p.t);
    rss += r * r;
  }
  return rss;
}

namespace {

struct Line {
  double slope;
  double intercept;
};

Line least_squares_line(std::span<const Observation> points) {
  double t_mean = 0.0;
  double y_mean = 0.0;
  for (const Observation& p : points) {
    t_mean += p.t;
    y_mean += p.population;
  }
  const auto n = static_cast<double>(points.size());
  t_mean /= n;
  y_mean /= n;

  double sxx = 0.0;
  double sxy = 0.0;
  for (const Observation& p : points) {
    sxx += (p.t - t_mean) * (p.t - t_mean);
    sxy += (p.t - t_mean) * (p.population - y_mean);
  }
  if (!(sxx > 0.0)) {
    throw Error(ErrorKind::DegenerateData, "observation times have zero variance");
  }
  const double slope = sxy / sxx;
  return {slope, y_mean - slope * t_mean};
}

}  // namespace

RatioLine ratio_line(const TimeSeries& data, double capacity) {
  if (!std::isfinite(capacity) || capacity <= 0.0) {
    throw Error(ErrorKind::InvalidArgument, "capacity must be finite and positive");
  }
  if (data.size() < 3) {
    throw Error(ErrorKind::DegenerateData, "at least 3 observations are required");
  }
  RatioLine out{{}, 0.0, 0.0, 0.0};
  out.log_ratio.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const Observation& p = data.points()[i];
    if (p.population >= capacity) {
      throw Error(ErrorKind::CapacityTooSmall,
                  "observation " + std::to_string(i) + " has P = " + std::to_string(p.population) +
                      " >= capacity " + std::to_string(capacity));
    }
    if (p.population <= 0.0) {
      throw Error(ErrorKind::DegenerateData,
                  "observation " + std::to_string(i) + " has non-positive P");
    }
    out.log_ratio.push_back({p.t, std::log((capacity - p.population) / p.population)});
  }
  const Line line = least_squares_line(out.log_ratio);
  out.slope = line.slope;
  out.intercept = line.intercept;
  for (const Observation& q : out.log_ratio) {
    out.max_deviation =
        std::max(out.max_deviation, std::abs(q.population - (line.intercept + line.slope * q.t)));
  }
  return out;
}

FitResult fit_ratio_linear(const TimeSeries& data, double known_capacity) {
  const RatioLine line = ratio_line(data, known_capacity);
  if (!(line.slope < 0.0)) {
    throw Error(ErrorKind::DegenerateData,
                "log R does not decrease with time; growth rate would not be positive");
  }
  const double r0 = std::exp(line.intercept);
  const LogisticParams params(known_capacity, -line.slope, known_capacity / (1.0 + r0));
  return {params, FitMethod::RatioLinearized, residual_sum_of_squares(data, params), true, 1};
}

namespace {

// Unknowns (log M, log k, log |R0|); the sign of R0 is fixed for the whole fit.
using Theta = Eigen::Vector3d;

class LogisticResiduals {
 public:
  LogisticResiduals(const TimeSeries& data, double sign) : data_(data), sign_(sign) {}

  std::size_t size() const { return data_.size(); }

  // Model values; returns false if any point falls on or past the asymptote.
  bool model(const Theta& theta, Eigen::VectorXd& values, Eigen::VectorXd* e_over_d) const {
    const double m = std::exp(theta[0]);
    const double k = std::exp(theta[1]);
    for (std::size_t i = 0; i < size(); ++i) {
      const double e = sign_ * std::exp(theta[2] - k * data_.points()[i].t);
      const double d = 1.0 + e;
      if (!(d > 0.0) || !std::isfinite(d)) return false;
      const auto row = static_cast<Eigen::Index>(i);
      values[row] = m / d;
      if (e_over_d) (*e_over_d)[row] = e / d;
    }
    return true;
  }

  double rss(const Theta& theta) const {
    Eigen::VectorXd values(static_cast<Eigen::Index>(size()));
    if (!model(theta, values, nullptr)) return std::numeric_limits<double>::infinity();
    return (observed() - values).squaredNorm();
  }

  // Residual vector (observed - model) and Jacobian of the model in theta.
  void linearize(const Theta& theta, Eigen::VectorXd& residual, Eigen::MatrixX3d& jacobian) const {
    const auto n = static_cast<Eigen::Index>(size());
    Eigen::VectorXd values(n);
    Eigen::VectorXd e_over_d(n);
    model(theta, values, &e_over_d);
    const double k = std::exp(theta[1]);
    residual = observed() - values;
    jacobian.resize(n, 3);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double t = data_.points()[static_cast<std::size_t>(i)].t;
      jacobian(i, 0) = values[i];
      jacobian(i, 1) = values[i] * k * t * e_over_d[i];
      jacobian(i, 2) = -values[i] * e_over_d[i];
    }
  }

  Eigen::VectorXd observed() const {
    Eigen::VectorXd y(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < size(); ++i) {
      y[static_cast<Eigen::Index>(i)] = data_.points()[i].population;
    }
    return y;
  }

  LogisticParams params(const Theta& theta) const {
    const double m = std::exp(theta[0]);
    return LogisticParams(m, std::exp(theta[1]), m / (1.0 + sign_ * std::exp(theta[2])));
  }

 private:
  const TimeSeries& data_;
  double sign_;
};

struct Start {
  Theta theta;
  double sign;
};

Start start_from(const LogisticParams& init) {
  const Branch branch = classify(init);
  Theta theta(std::log(init.capacity()), std::log(init.rate()), 0.0);
  if (branch.tag == BranchTag::Interior) {
    theta[2] = std::log(*branch.ratio_r0);
    return {theta, 1.0};
  }
  if (branch.tag == BranchTag::AboveCapacity) {
    theta[2] = std::log(*branch.s0);
    return {theta, -1.0};
  }
  throw Error(ErrorKind::WrongBranch, "fit start must be an Interior or AboveCapacity model");
}

// Linearized start at M = 1.05 max(P). Points outside (0, M) are skipped; if
// the remaining ratio line does not fall, the inflection is put mid-series
// with k set by the time span.
Start self_start(const TimeSeries& data) {
  double max_p = -std::numeric_limits<double>::infinity();
  for (const Observation& p : data.points()) max_p = std::max(max_p, p.population);
  if (!(max_p > 0.0)) {
    throw Error(ErrorKind::DegenerateData, "no positive observations to start from");
  }
  const double m0 = 1.05 * max_p;

  std::vector<Observation> usable;
  for (const Observation& p : data.points()) {
    if (p.population > 0.0 && p.population < m0) {
      usable.push_back({p.t, std::log((m0 - p.population) / p.population)});
    }
  }

  const auto& pts = data.points();
  const double span = pts.back().t - pts.front().t;
  double k0 = 4.0 / span;
  double log_r0 = k0 * 0.5 * (pts.front().t + pts.back().t);
  if (usable.size() >= 3) {
    const Line line = least_squares_line(usable);
    if (line.slope < 0.0) {
      k0 = -line.slope;
      log_r0 = line.intercept;
    }
  }
  return {Theta(std::log(m0), std::log(k0), log_r0), 1.0};
}

}  // namespace

FitResult fit_full(const TimeSeries& data, std::optional<LogisticParams> init) {
  if (data.size() < 4) {
    throw Error(ErrorKind::DegenerateData, "at least 4 observations are required");
  }
  const Start start = init ? start_from(*init) : self_start(data);
  const LogisticResiduals problem(data, start.sign);

  Theta theta = start.theta;
  double rss = problem.rss(theta);
  if (!std::isfinite(rss)) {
    throw Error(ErrorKind::DegenerateData, "starting model is singular on the data");
  }

  constexpr double kRelativeTolerance = 1e-12;
  constexpr double kMaxDamping = 1e16;
  double lambda = 1e-3;
  bool converged = false;
  std::size_t iterations = 0;

  Eigen::VectorXd residual;
  Eigen::MatrixX3d jacobian;
  while (iterations < kMaxFitIterations) {
    ++iterations;
    problem.linearize(theta, residual, jacobian);
    const Eigen::Matrix3d normal = jacobian.transpose() * jacobian;
    const Eigen::Vector3d gradient = jacobian.transpose() * residual;
    const Eigen::Vector3d scale =
        normal.diagonal().cwiseMax(1e-12 * normal.diagonal().maxCoeff()).cwiseMax(1e-300);

    bool accepted = false;
    double candidate_rss = rss;
    Theta candidate = theta;
    while (lambda <= kMaxDamping) {
      Eigen::Matrix3d damped = normal;
      damped.diagonal() += lambda * scale;
      candidate = theta + damped.ldlt().solve(gradient);
      candidate_rss = problem.rss(candidate);
      if (candidate_rss < rss) {
        accepted = true;
        lambda = std::max(lambda / 10.0, 1e-12);
        break;
      }
      lambda *= 10.0;
    }
    if (!accepted) {
      // No descent direction survives any damping: stationary to working precision.
      converged = true;
      break;
    }
    const double change = (rss - candidate_rss) / rss;
    theta = candidate;
    rss = candidate_rss;
    if (rss == 0.0 || change < kRelativeTolerance) {
      converged = true;
      break;
    }
  }

  // A parameter that barely moves the curve is not identified by the data.
  problem.linearize(theta, residual, jacobian);
  const double data_norm = problem.observed().norm();
  for (Eigen::Index j = 0; j < 3; ++j) {
    if (jacobian.col(j).norm() < 1e-9 * data_norm) converged = false;
  }

  LogisticParams best = problem.params(theta);
  double best_rss = residual_sum_of_squares(data, best);
  if (init) {
    const double init_rss = residual_sum_of_squares(data, *init);
    if (init_rss < best_rss) {
      best = *init;
      best_rss = init_rss;
    }
  }
  return {best, FitMethod::NonlinearLS, best_rss, converged, iterations};
}

}  // namespace verhulst
