// The `webflat` command line: argument handling, dispatch and exit codes.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace webflat::cli {

enum ExitCode : int {
  kFlat = 0,
  kNonFlat = 1,
  kInconclusive = 2,
  kBadInput = 3,   // unreadable or invalid foliation/web, including repeated members
  kUsage = 4,      // bad flags or missing operands
  kInternal = 5,
};

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  int samples = 200;
  std::uint64_t seed = 20240611;
  double flat_tol = 1e-8;
  double nonflat_floor = 1e-4;
  int precision_bits = 106;
  int probe_decades = 4;
  std::string out;  // empty: standard output
  std::string format = "json";
};

/// Runs one invocation. Reports go to `out` (or the --out file), diagnostics
/// and progress to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace webflat::cli
