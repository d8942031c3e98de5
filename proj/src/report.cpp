#include "aniso/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>

#include "aniso/errors.hpp"

namespace aniso {

namespace {

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  return std::stod(s);
}

}  // namespace

std::string to_line(const ReportRecord& r) {
  std::ostringstream os;
  os << "check=" << r.check << " p=" << fmt_double(r.p)
     << " q=" << fmt_double(r.q) << " s=" << r.s << " k=" << r.k
     << " seed=" << r.seed << " constant=" << fmt_double(r.constant)
     << " tolerance=" << fmt_double(r.tolerance)
     << " pass=" << (r.pass ? 1 : 0)
     << " meta=" << (r.meta.empty() ? "-" : r.meta);
  return os.str();
}

ReportRecord parse_record_line(const std::string& line) {
  ReportRecord r;
  std::istringstream is(line);
  std::string token;
  bool saw_check = false;
  while (is >> token) {
    const auto eq = token.find('=');
    if (eq == std::string::npos)
      throw FileFormat("malformed report token: " + token);
    const std::string key = token.substr(0, eq);
    const std::string value = token.substr(eq + 1);
    if (key == "check") {
      r.check = value;
      saw_check = true;
    } else if (key == "p") {
      r.p = parse_double(value);
    } else if (key == "q") {
      r.q = parse_double(value);
    } else if (key == "s") {
      r.s = std::stoi(value);
    } else if (key == "k") {
      r.k = std::stoi(value);
    } else if (key == "seed") {
      r.seed = std::stoull(value);
    } else if (key == "constant") {
      r.constant = parse_double(value);
    } else if (key == "tolerance") {
      r.tolerance = parse_double(value);
    } else if (key == "pass") {
      r.pass = value == "1";
    } else if (key == "meta") {
      r.meta = value == "-" ? "" : value;
    } else {
      throw FileFormat("unknown report key: " + key);
    }
  }
  if (!saw_check) throw FileFormat("report line without check name");
  return r;
}

void sort_records(std::vector<ReportRecord>& records) {
  std::stable_sort(records.begin(), records.end(),
                   [](const ReportRecord& a, const ReportRecord& b) {
                     return std::tie(a.check, a.p, a.q, a.s, a.k, a.seed, a.meta) <
                            std::tie(b.check, b.p, b.q, b.s, b.k, b.seed, b.meta);
                   });
}

void write_report(const std::filesystem::path& path,
                  std::span<const ReportRecord> records) {
  std::vector<ReportRecord> sorted(records.begin(), records.end());
  sort_records(sorted);
  std::ofstream os(path);
  if (!os) throw FileFormat("cannot open " + path.string() + " for writing");
  os << "# aniso report v1\n";
  std::size_t passed = 0;
  for (const auto& r : sorted) {
    os << to_line(r) << "\n";
    if (r.pass) ++passed;
  }
  os << "# summary total=" << sorted.size() << " pass=" << passed
     << " fail=" << (sorted.size() - passed) << "\n";
  if (!os) throw FileFormat("write failed for " + path.string());
}

std::vector<ReportRecord> read_report(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw FileFormat("cannot open " + path.string());
  std::vector<ReportRecord> out;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    out.push_back(parse_record_line(line));
  }
  return out;
}

std::vector<ReportRecord> merge_reports(
    std::span<const std::vector<ReportRecord>> parts) {
  std::vector<ReportRecord> all;
  for (const auto& part : parts) all.insert(all.end(), part.begin(), part.end());
  sort_records(all);
  return all;
}

}  // namespace aniso
