#include "verhulst/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "verhulst/csv_io.hpp"
#include "verhulst/fit.hpp"

namespace verhulst::cli {

namespace {

using nlohmann::json;

// Flag combinations CLI11 cannot express as per-option checks.
struct FlagError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// JSON numbers carry the same 12 significant digits as the CSV output.
json number(double value) { return std::stod(format_number(value)); }

json optional_number(const std::optional<double>& value) {
  return value ? number(*value) : json(nullptr);
}

const LogisticParams& require_params(const CliConfig& config) {
  if (!config.params) throw FlagError("--M, --k and --P0 are required");
  return *config.params;
}

json meta_object(const LogisticParams& params) {
  const Branch branch = classify(params);
  return {{"branch", std::string(to_string(branch.tag))},
          {"tau0", optional_number(branch.tau0)},
          {"M", number(params.capacity())},
          {"k", number(params.rate())},
          {"P0", number(params.initial())}};
}

void write_csv_row(std::ostream& out, std::initializer_list<std::string> fields) {
  bool first = true;
  for (const std::string& f : fields) {
    if (!first) out << ',';
    out << f;
    first = false;
  }
  out << '\n';
}

}  // namespace

void cmd_sample(const CliConfig& config, std::ostream& out) {
  const LogisticParams& params = require_params(config);
  const SampleGrid& grid = config.grid;
  if (grid.points < 2) throw FlagError("--points must be at least 2");
  if (!(grid.t_end > grid.t_start)) throw FlagError("--to must be greater than --from");

  const bool has_ratio = classify(params).ratio_r0.has_value();
  const double dt = (grid.t_end - grid.t_start) / static_cast<double>(grid.points - 1);

  json rows = json::array();
  if (config.format == OutputFormat::Csv) out << "t,P,R,dPdt\n";
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double t =
        i + 1 == grid.points ? grid.t_end : grid.t_start + static_cast<double>(i) * dt;
    const std::optional<double> r =
        has_ratio ? std::optional<double>(ratio(params, t)) : std::nullopt;
    std::optional<double> p;
    try {
      p = eval(params, t);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::SingularInput) throw;
    }
    const std::optional<double> rate =
        p ? std::optional<double>(growth_rate(params, *p)) : std::nullopt;

    if (config.format == OutputFormat::Csv) {
      write_csv_row(out, {format_number(t), p ? format_number(*p) : "singular",
                          r ? format_number(*r) : "", rate ? format_number(*rate) : "singular"});
    } else {
      rows.push_back(
          {{"t", number(t)}, {"P", optional_number(p)}, {"R", optional_number(r)},
           {"dPdt", optional_number(rate)}});
    }
  }
  if (config.format == OutputFormat::Json) {
    out << json{{"meta", meta_object(params)}, {"rows", rows}}.dump(2) << '\n';
  }
}

void cmd_eval(const CliConfig& config, std::ostream& out) {
  const LogisticParams& params = require_params(config);
  if (config.eval_times.empty()) throw FlagError("--t is required");

  json rows = json::array();
  std::ostringstream csv;
  csv << "t,P\n";
  for (const double t : config.eval_times) {
    const double p = eval(params, t);
    write_csv_row(csv, {format_number(t), format_number(p)});
    rows.push_back({{"t", number(t)}, {"P", number(p)}});
  }
  if (config.format == OutputFormat::Csv) {
    out << csv.str();
  } else {
    out << json{{"meta", meta_object(params)}, {"rows", rows}}.dump(2) << '\n';
  }
}

void cmd_integrate(const CliConfig& config, std::ostream& out) {
  const LogisticParams& params = require_params(config);
  const IntegrationReport report = config.route == Route::Ratio
                                       ? integrate_ratio(params, config.integrator)
                                       : integrate_logistic(params, config.integrator);

  if (config.format == OutputFormat::Csv) {
    out << "t,P,err\n";
    for (const Sample& s : report.trajectory.samples()) {
      write_csv_row(out, {format_number(s.t), format_number(s.population),
                          format_number(std::abs(s.population - eval(params, s.t)))});
    }
    return;
  }
  json rows = json::array();
  for (const Sample& s : report.trajectory.samples()) {
    rows.push_back({{"t", number(s.t)},
                    {"P", number(s.population)},
                    {"err", number(std::abs(s.population - eval(params, s.t)))}});
  }
  json meta = meta_object(params);
  meta["method"] = std::string(to_string(config.integrator.method));
  meta["route"] = config.route == Route::Ratio ? "ratio" : "logistic";
  meta["step"] = number(config.integrator.step);
  meta["steps"] = report.steps;
  meta["max_abs_error"] = number(report.max_abs_error);
  meta["l2_error"] = number(report.l2_error);
  out << json{{"meta", meta}, {"rows", rows}}.dump(2) << '\n';
}

void cmd_info(const CliConfig& config, std::ostream& out) {
  const LogisticParams& params = require_params(config);
  const Branch branch = classify(params);
  std::optional<GrowthPeak> peak;
  if (branch.tag == BranchTag::Interior) peak = max_growth_point(params);

  if (config.format == OutputFormat::Csv) {
    out << "field,value\n";
    write_csv_row(out, {"branch", std::string(to_string(branch.tag))});
    write_csv_row(out, {"M", format_number(params.capacity())});
    write_csv_row(out, {"k", format_number(params.rate())});
    write_csv_row(out, {"P0", format_number(params.initial())});
    if (branch.ratio_r0) write_csv_row(out, {"R0", format_number(*branch.ratio_r0)});
    if (branch.s0) write_csv_row(out, {"S0", format_number(*branch.s0)});
    if (branch.tau0) write_csv_row(out, {"tau0", format_number(*branch.tau0)});
    if (peak) {
      write_csv_row(out, {"t_max", format_number(peak->time)});
      write_csv_row(out, {"P_mid", format_number(peak->population)});
      write_csv_row(out, {"max_rate", format_number(peak->rate)});
    }
    return;
  }
  json doc = meta_object(params);
  doc["R0"] = optional_number(branch.ratio_r0);
  doc["S0"] = optional_number(branch.s0);
  doc["max_growth"] = peak ? json{{"time", number(peak->time)},
                                  {"population", number(peak->population)},
                                  {"rate", number(peak->rate)}}
                           : json(nullptr);
  out << doc.dump(2) << '\n';
}

int cmd_fit(const CliConfig& config, std::istream& in, std::ostream& out) {
  TimeSeries data;
  if (config.input_path == "-") {
    data = read_time_series(in, config.sort);
  } else {
    std::ifstream file(config.input_path);
    if (!file) {
      throw Error(ErrorKind::InvalidData, "cannot open '" + config.input_path + "'");
    }
    data = read_time_series(file, config.sort);
  }

  const FitResult result =
      config.capacity ? fit_ratio_linear(data, *config.capacity) : fit_full(data);
  const LogisticParams& p = result.params;

  if (config.format == OutputFormat::Csv) {
    out << "M,k,P0,rss,method,converged,iterations\n";
    write_csv_row(out, {format_number(p.capacity()), format_number(p.rate()),
                        format_number(p.initial()), format_number(result.rss),
                        std::string(to_string(result.method)),
                        result.converged ? "true" : "false", std::to_string(result.iterations)});
  } else {
    const json doc{{"M", number(p.capacity())},
                   {"k", number(p.rate())},
                   {"P0", number(p.initial())},
                   {"rss", number(result.rss)},
                   {"method", std::string(to_string(result.method))},
                   {"converged", result.converged},
                   {"iterations", result.iterations},
                   {"meta", meta_object(p)}};
    out << doc.dump(2) << '\n';
  }
  return result.converged ? kOk : kNoConvergence;
}

int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Closed-form, integrated and fitted logistic growth curves", "verhulst"};
  app.require_subcommand(1);

  CliConfig config;
  double capacity = 0.0;
  double rate = 0.0;
  double initial = 0.0;
  std::string format = "csv";
  std::string output_path;
  std::string method = "rk4";
  std::string route = "logistic";
  double capacity_flag = 0.0;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    sub->add_option("--output", output_path, "Write output to this file instead of stdout");
  };
  const auto add_params = [&](CLI::App* sub) {
    sub->add_option("--M", capacity, "Carrying capacity M (> 0)")->required();
    sub->add_option("--k", rate, "Growth rate k (> 0)")->required();
    sub->add_option("--P0", initial, "Population at t = 0")->required();
    add_common(sub);
  };

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate P(t) at the given times");
  add_params(eval_cmd);
  eval_cmd->add_option("--t", config.eval_times, "Evaluation time(s)")->required();

  CLI::App* sample_cmd = app.add_subcommand("sample", "Tabulate t, P, R, dP/dt on a uniform grid");
  add_params(sample_cmd);
  sample_cmd->add_option("--from", config.grid.t_start, "First grid time")->capture_default_str();
  sample_cmd->add_option("--to", config.grid.t_end, "Last grid time")->capture_default_str();
  sample_cmd->add_option("--points", config.grid.points, "Number of grid points (>= 2)")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000000}))
      ->capture_default_str();

  CLI::App* integrate_cmd =
      app.add_subcommand("integrate", "Integrate the ODE numerically and compare to the closed form");
  add_params(integrate_cmd);
  integrate_cmd->add_option("--step", config.integrator.step, "Fixed step size")
      ->capture_default_str();
  integrate_cmd->add_option("--t-end", config.integrator.t_end, "End of the interval [0, t_end]")
      ->capture_default_str();
  integrate_cmd->add_option("--method", method, "Stepper")
      ->check(CLI::IsMember({"rk4", "euler"}, CLI::ignore_case))
      ->capture_default_str();
  integrate_cmd->add_option("--route", route, "Integrate P directly or the niche ratio R")
      ->check(CLI::IsMember({"logistic", "ratio"}, CLI::ignore_case))
      ->capture_default_str();

  CLI::App* fit_cmd = app.add_subcommand("fit", "Estimate M, k, P0 from a t,P CSV file");
  add_common(fit_cmd);
  fit_cmd->add_option("input,--input", config.input_path, "CSV file, '-' for stdin")
      ->capture_default_str();
  CLI::Option* capacity_opt = fit_cmd->add_option(
      "--capacity", capacity_flag, "Known capacity M; selects the linearized fit");
  fit_cmd->add_flag("--sort", config.sort, "Accept rows out of time order");

  CLI::App* info_cmd = app.add_subcommand("info", "Branch, tau0 and maximum growth point");
  add_params(info_cmd);

  std::ostringstream buffer;
  int code = kOk;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));

    config.format = format == "json" ? OutputFormat::Json : OutputFormat::Csv;
    config.integrator.method = CLI::detail::to_lower(method) == "euler" ? Method::Euler : Method::RK4;
    config.route = CLI::detail::to_lower(route) == "ratio" ? Route::Ratio : Route::Logistic;
    if (capacity_opt->count() > 0) config.capacity = capacity_flag;
    if (!fit_cmd->parsed()) config.params = LogisticParams(capacity, rate, initial);

    if (eval_cmd->parsed()) {
      config.subcommand = Subcommand::Eval;
      cmd_eval(config, buffer);
    } else if (sample_cmd->parsed()) {
      config.subcommand = Subcommand::Sample;
      cmd_sample(config, buffer);
    } else if (integrate_cmd->parsed()) {
      config.subcommand = Subcommand::Integrate;
      cmd_integrate(config, buffer);
    } else if (fit_cmd->parsed()) {
      config.subcommand = Subcommand::Fit;
      code = cmd_fit(config, in, buffer);
    } else {
      config.subcommand = Subcommand::Info;
      cmd_info(config, buffer);
    }
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    return status == 0 ? kOk : kFlagError;
  } catch (const FlagError& e) {
    err << "error: " << e.what() << '\n';
    return kFlagError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::SingularInput:
      case ErrorKind::SingularRegion:
      case ErrorKind::MapSingularity: return kSingular;
      case ErrorKind::InvalidArgument:
      case ErrorKind::StepOverflow: return kFlagError;
      default: return kInputError;
    }
  }

  if (!output_path.empty()) {
    std::ofstream file(output_path, std::ios::binary);
    if (!(file << buffer.str())) {
      err << "error: cannot write '" << output_path << "'\n";
      return kInputError;
    }
  } else {
    out << buffer.str();
  }
  if (code == kNoConvergence) err << "warning: fit did not converge\n";
  return code;
}

}  // namespace verhulst::cli
