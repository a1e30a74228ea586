#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "revcurv/geodesic.hpp"
#include "revcurv/profile.hpp"
#include "revcurv/report.hpp"

namespace revcurv {

struct RunConfig {
  double delta = 0.1;
  double a = 0.0;
  int grid_n = 4096;
  int quad_order = 64;
  double step_tol = kDefaultStepTol;
  std::uint64_t seed = 0;
  std::vector<std::string> regions;  ///< region specs; empty means default_regions()
  std::filesystem::path out_dir = "revcurv_out";
  bool baseline = false;

  ConstructionParams params() const;
  /// Throws PreconditionError naming the offending field.
  void validate() const;
  /// A cap, a hemisphere, a cap intersection and a square.
  static std::vector<std::string> default_regions();
};

struct RunResult {
  VerificationReport report;
  int exit_status = 0;  ///< 0 iff every record passed
  std::vector<std::filesystem::path> files;
};

/// Runs every suite in a fixed order and writes report.txt plus data files to
/// out_dir. Throws PreconditionError for an invalid config before writing
/// anything. A profile that fails to build ends the run with a partial report.
RunResult run_report(const RunConfig& config);

}  // namespace revcurv
