// The reproduction matrix behind `webflat paper-suite`.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "webflat_cli/report.hpp"

namespace webflat::cli {

struct SuiteConfig {
  int samples = 200;
  std::uint64_t seed = 20240611;
  double flat_tol = 1e-8;
  double nonflat_floor = 1e-4;
  int precision_bits = 106;
  int probe_decades = 4;

  curv::FlatnessConfig flatness() const;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  Json data;               // verdicts and measured quantities
  double seconds = 0.0;    // wall time, kept out of the report
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  bool all_passed() const;
  Json to_json() const;
};

/// Runs every entry; an entry that throws is recorded as failed and the
/// suite continues. `progress` is called after each entry.
SuiteResult run_suite(const SuiteConfig& config,
                      const std::function<void(const CriterionResult&)>& progress = {});

/// The entries one at a time, by id (1 to 10).
CriterionResult run_criterion(int id, const SuiteConfig& config);
inline constexpr int kSuiteSize = 10;

}  // namespace webflat::cli
