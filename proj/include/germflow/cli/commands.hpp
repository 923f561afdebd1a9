#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "germflow/cli/report.hpp"

namespace germflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerdictFailed = 1;
inline constexpr int kExitUsage = 2;

// Resolved run parameters: flags override `job` lines of the germ file, which
// override the defaults below.
struct JobConfig {
  std::string command;
  std::string spec_path;
  std::string pert_path;
  std::string report_path;
  std::string trace_path;
  std::string plot_path;
  double r = 3.0;
  double delta = 1.0;
  double width = 0.5;
  double radius = 0.5;
  int d = -1;  // perturbation degree, r when negative
  std::size_t samples = 20000;
  std::size_t seeds = 500;
  std::size_t contact_samples = 500;
  std::size_t field_samples = 10000;
  std::uint64_t seed = 42;
  std::string frame = "auto";
  double c_min = 1e-6;
  double slope_slack = 0.1;
  double residual_tol = 1e-6;
  double round_trip_tol = 1e-7;
  double envelope_slack = 0.05;
  std::vector<double> nu;
  double epsilon = 0.5;
  double nd_width = 0.1;
  std::string bridge = "proof";

  Json to_json() const;
};

struct CommandResult {
  int exit_code = kExitUsage;
  Report report;
  std::string summary;
};

// Runs one subcommand; args excludes the program name. The report goes to
// --report when given (with a one-line summary on out), otherwise to out.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace germflow::cli
