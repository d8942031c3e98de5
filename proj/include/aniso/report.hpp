#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace aniso {

// One verification record: the check name, the triplet and scale it ran at,
// the seed for replay, the measured constant, the tolerance it was held to,
// and the verdict. pass is true exactly when the check's predicate held at
// the stated tolerance. Serialized as one key=value line; no timestamps, so
// identical configs produce byte-identical reports.
struct ReportRecord {
  std::string check;
  double p = 0;
  double q = 0;  // +inf allowed
  int s = 0;
  int k = 0;
  std::uint64_t seed = 0;
  double constant = 0;
  double tolerance = 0;
  bool pass = false;
  std::string meta;  // free-form token, no spaces

  friend bool operator==(const ReportRecord&, const ReportRecord&) = default;
};

std::string to_line(const ReportRecord& record);
ReportRecord parse_record_line(const std::string& line);

// Canonical order: (check, p, q, s, k, seed, meta).
void sort_records(std::vector<ReportRecord>& records);

// Writes header, sorted records, and a summary footer.
void write_report(const std::filesystem::path& path,
                  std::span<const ReportRecord> records);
std::vector<ReportRecord> read_report(const std::filesystem::path& path);

std::vector<ReportRecord> merge_reports(
    std::span<const std::vector<ReportRecord>> parts);

}  // namespace aniso
