#include "aniso/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aniso/errors.hpp"

namespace aniso {

using nlohmann::json;

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> checks = {
      "pointwise", "two_regime", "origin", "hl",
      "multiplier", "rearrange", "lorentz"};
  return checks;
}

namespace {

Eigen::MatrixXd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw ConfigParse("matrix must be a nonempty array of rows");
  const std::size_t n = j.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n)
      throw ConfigParse("matrix rows must all have length " + std::to_string(n));
    for (std::size_t c = 0; c < n; ++c) {
      if (!j[i][c].is_number()) throw ConfigParse("matrix entries must be numbers");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
          j[i][c].get<double>();
    }
  }
  return m;
}

double q_from_json(const json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf")
      return std::numeric_limits<double>::infinity();
    throw ConfigParse("q must be a number or \"inf\"");
  }
  if (!j.is_number()) throw ConfigParse("q must be a number or \"inf\"");
  return j.get<double>();
}

}  // namespace

RunConfig parse_config_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigParse(std::string("config is not valid JSON: ") + e.what());
  }

  RunConfig cfg;
  try {
    if (!j.contains("matrix")) throw ConfigParse("config requires a matrix");
    cfg.matrix = matrix_from_json(j["matrix"]);

    if (j.contains("margins")) {
      const auto& m = j["margins"];
      if (m.contains("lower")) cfg.dilation_opts.lower_margin = m["lower"].get<double>();
      if (m.contains("upper")) cfg.dilation_opts.upper_margin = m["upper"].get<double>();
    }
    if (j.contains("quasinorm")) {
      const auto& q = j["quasinorm"];
      if (q.contains("ratio")) cfg.quasinorm_opts.ratio = q["ratio"].get<double>();
      if (q.contains("terms")) cfg.quasinorm_opts.terms = q["terms"].get<int>();
    }
    if (j.contains("triplet")) {
      const auto& t = j["triplet"];
      if (t.contains("p")) cfg.p = t["p"].get<double>();
      if (t.contains("q")) cfg.q = q_from_json(t["q"]);
      if (t.contains("s")) {
        if (t["s"].is_string()) {
          if (t["s"].get<std::string>() != "auto")
            throw ConfigParse("s must be an integer or \"auto\"");
          cfg.s = -1;
        } else {
          cfg.s = t["s"].get<int>();
        }
      }
    }
    if (j.contains("atoms")) {
      const auto& a = j["atoms"];
      if (a.contains("k_lo")) cfg.k_lo = a["k_lo"].get<int>();
      if (a.contains("k_hi")) cfg.k_hi = a["k_hi"].get<int>();
      if (a.contains("seeds")) {
        const auto& s = a["seeds"];
        if (!s.is_array() || s.size() != 2)
          throw ConfigParse("seeds must be [lo, hi]");
        cfg.seed_lo = s[0].get<std::uint64_t>();
        cfg.seed_hi = s[1].get<std::uint64_t>();
      }
      if (a.contains("grid_res")) cfg.grid_res = a["grid_res"].get<int>();
      if (a.contains("center")) {
        const auto& c = a["center"];
        if (!c.is_array()) throw ConfigParse("center must be an array");
        cfg.center.resize(static_cast<Eigen::Index>(c.size()));
        for (std::size_t i = 0; i < c.size(); ++i)
          cfg.center[static_cast<Eigen::Index>(i)] = c[i].get<double>();
      }
    }
    if (j.contains("annuli")) {
      const auto& a = j["annuli"];
      if (a.contains("m_lo")) cfg.m_lo = a["m_lo"].get<int>();
      if (a.contains("m_hi")) cfg.m_hi = a["m_hi"].get<int>();
      if (a.contains("points")) cfg.annulus_points = a["points"].get<int>();
      if (a.contains("seed")) cfg.annulus_seed = a["seed"].get<std::uint64_t>();
    }
    if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
    if (j.contains("checks")) {
      if (!j["checks"].is_array()) throw ConfigParse("checks must be an array");
      cfg.checks.clear();
      for (const auto& c : j["checks"]) cfg.checks.push_back(c.get<std::string>());
    }
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();
    if (j.contains("emit_atoms")) cfg.emit_atoms = j["emit_atoms"].get<bool>();
  } catch (const json::exception& e) {
    throw ConfigParse(std::string("config field error: ") + e.what());
  }

  validate_config(cfg);
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigParse("cannot open config file " + path.string());
  std::stringstream buffer;
  buffer << is.rdbuf();
  return parse_config_json(buffer.str());
}

Eigen::MatrixXd parse_matrix_string(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream rows_stream(text);
  std::string row;
  while (std::getline(rows_stream, row, ';')) {
    std::vector<double> entries;
    std::stringstream entry_stream(row);
    std::string cell;
    while (std::getline(entry_stream, cell, ',')) {
      try {
        entries.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw ConfigParse("bad matrix entry: " + cell);
      }
    }
    rows.push_back(std::move(entries));
  }
  if (rows.empty()) throw ConfigParse("empty matrix string");
  const std::size_t n = rows.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n)
      throw ConfigParse("matrix rows must all have length " + std::to_string(n));
    for (std::size_t c = 0; c < n; ++c)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) = rows[i][c];
  }
  return m;
}

std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text) {
  const auto pos = text.find("..");
  try {
    if (pos == std::string::npos) {
      const std::uint64_t v = std::stoull(text);
      return {v, v};
    }
    const std::uint64_t lo = std::stoull(text.substr(0, pos));
    const std::uint64_t hi = std::stoull(text.substr(pos + 2));
    if (hi < lo) throw ConfigParse("seed range is reversed: " + text);
    return {lo, hi};
  } catch (const ConfigParse&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigParse("bad seed range: " + text);
  }
}

std::vector<std::string> parse_checks_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(item);
  }
  const auto& known = known_checks();
  for (const auto& c : out)
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw ConfigParse("unknown check: " + c);
  return out;
}

void validate_config(const RunConfig& cfg) {
  if (cfg.matrix.rows() == 0 || cfg.matrix.rows() != cfg.matrix.cols())
    throw ConfigParse("matrix must be square and nonempty");
  if (!(cfg.p > 0.0 && cfg.p <= 1.0)) throw ConfigParse("p must lie in (0, 1]");
  if (!(cfg.q > cfg.p && cfg.q >= 1.0)) throw ConfigParse("q must satisfy q >= 1, q > p");
  if (cfg.k_hi < cfg.k_lo) throw ConfigParse("k range is reversed");
  if (cfg.seed_hi < cfg.seed_lo) throw ConfigParse("seed range is reversed");
  if (cfg.grid_res < 16) throw ConfigParse("grid_res must be at least 16");
  if (cfg.m_hi < cfg.m_lo) throw ConfigParse("annulus range is reversed");
  if (cfg.annulus_points < 1) throw ConfigParse("annulus points must be positive");
  if (!(cfg.epsilon > 0.0)) throw ConfigParse("epsilon must be positive");
  if (cfg.center.size() != 0 && cfg.center.size() != cfg.matrix.rows())
    throw ConfigParse("center dimension does not match the matrix");
  const auto& known = known_checks();
  for (const auto& c : cfg.checks)
    if (std::find(known.begin(), known.end(), c) == known.end())
      throw ConfigParse("unknown check: " + c);
}

}  // namespace aniso
