#pragma once

// Command-line front end: argument parsing, command execution and report output.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace cqmc::cli {

/// Invalid command line. Maps to exit status 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { Text, Json, Csv };

struct Command {
  std::string name;  // critical, fixed-points, trajectory, boundary, evaluate, correlation, gap,
                     // phase-diagram, verify
  int k = 2;
  std::optional<double> theta;
  std::optional<double> beta;
  int n = 1;
  int N = 1;
  double x0 = 1.0;
  double y0 = 1.0;
  int steps = 10000;
  std::string kind = "alpha0";
  std::optional<double> alpha;
  std::string observable;
  double theta_min = 1.5;
  double theta_max = 6.0;
  double theta_step = 0.1;
  std::optional<std::string> out;
  Format format = Format::Text;
  bool timing = false;
};

/// Parses arguments (without the program name). Throws UsageError.
Command parse(const std::vector<std::string>& args);

struct Report {
  std::string command;
  std::string version;
  nlohmann::json params;
  nlohmann::json result;
  std::optional<double> elapsed_ms;

  friend bool operator==(const Report&, const Report&) = default;
};

void to_json(nlohmann::json& j, const Report& r);
void from_json(const nlohmann::json& j, Report& r);

struct Outcome {
  Report report;
  int status = 0;
};

/// Runs a parsed command. Library errors propagate as cqmc::Error.
Outcome execute(const Command& c);

/// Renders a report in the requested format.
std::string render(const Report& r, Format format);

/// Full pipeline: parse, execute, render to `out` (or the --out file), diagnostics to `err`.
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Rounds to 12 significant digits.
double round12(double v);

}  // namespace cqmc::cli
