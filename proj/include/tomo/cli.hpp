#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace tomo::cli {

/// Flags shared by every subcommand.
struct ExperimentConfig {
  std::string command;
  std::string body_path;
  std::vector<std::string> xi;  // comma-separated coordinates, one entry per direction
  std::vector<double> t;
  std::string grid;             // "720" for circles, "48x96" for spheres, or a point count
  double tol = -1.0;            // negative: per-command default
  std::uint64_t seed = 1;
  std::string method = "auto";
  long samples = 200000;
  std::string out;
  std::string format;           // csv | json; empty: per-command default
  std::string expect;
};

/// Exit codes: 0 success, 1 error or usage, 2 verdict differs from --expect.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace tomo::cli
