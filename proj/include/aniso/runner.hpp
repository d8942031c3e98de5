#pragma once

#include "aniso/config.hpp"
#include "aniso/report.hpp"

namespace aniso {

struct RunResult {
  std::vector<ReportRecord> records;
  std::vector<std::string> failing_checks;
  bool all_pass() const { return failing_checks.empty(); }
};

// Executes the configured checks deterministically, writes atom files and the
// line-oriented report under out_dir (when set), and returns all records.
RunResult run(const RunConfig& config);

}  // namespace aniso
