#pragma once

// Command-line front end: eval, sample, integrate, fit and info subcommands.
//
// Exit codes: 0 success, 1 input error, 2 flag error, 3 fit did not converge
// (result still printed), 4 singular evaluation point.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "verhulst/model.hpp"
#include "verhulst/ode.hpp"

namespace verhulst::cli {

enum ExitCode : int {
  kOk = 0,
  kInputError = 1,
  kFlagError = 2,
  kNoConvergence = 3,
  kSingular = 4,
};

enum class Subcommand { Eval, Sample, Integrate, Fit, Info };
enum class OutputFormat { Csv, Json };
enum class Route { Logistic, Ratio };

struct SampleGrid {
  double t_start = 0.0;
  double t_end = 10.0;
  std::size_t points = 101;
};

struct CliConfig {
  Subcommand subcommand = Subcommand::Info;
  std::optional<LogisticParams> params;
  std::string input_path = "-";  ///< "-" reads standard input
  OutputFormat format = OutputFormat::Csv;
  SampleGrid grid;
  std::vector<double> eval_times;
  IntegratorConfig integrator{0.01, Method::RK4, 10.0};
  Route route = Route::Logistic;
  std::optional<double> capacity;
  bool sort = false;
};

/// Rows (t, P, R, dPdt); rows on the asymptote carry `singular` in P and dPdt.
void cmd_sample(const CliConfig& config, std::ostream& out);
/// Rows (t, P); throws SingularInput at the asymptote.
void cmd_eval(const CliConfig& config, std::ostream& out);
/// Rows (t, P, err) of the numerical solution.
void cmd_integrate(const CliConfig& config, std::ostream& out);
/// Branch, R0 or S0, tau0 and, on the Interior branch, the maximum growth point.
void cmd_info(const CliConfig& config, std::ostream& out);
/// Returns kOk or kNoConvergence; the result is printed either way.
int cmd_fit(const CliConfig& config, std::istream& in, std::ostream& out);

/// Parses `args` (without the program name), runs the subcommand and maps
/// errors to exit codes. Diagnostics go to `err`.
int run(std::span<const std::string> args, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace verhulst::cli
