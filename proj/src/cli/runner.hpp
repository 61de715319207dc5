#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace slitmap::cli {

/// One command-line job.  Field semantics per command are documented in
/// docs/formats.md; unset numeric options fall back to command defaults.
struct JobSpec {
  std::string command;  // encode decode chain transform invert check-slit
                        // weld convolve fourier levy
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path out;

  double tol = 1e-6;
  int grid_n = 0;
  std::vector<double> eps_schedule;
  double horizon = 0.0;
  std::string mode;       // convolve: classical|monotone; transform: G|F
  double at = 0.0;        // chain: start time s
  std::filesystem::path points_path;
  std::vector<double> x_values;
  bool check_embedding = false;
};

/// Exit status: 0 success, 2 input/parse error, 3 numeric non-convergence
/// (diagnostic file written next to the output), 4 negative verdict of a
/// check command (check-slit, weld).
int run(const JobSpec& job);

}  // namespace slitmap::cli
