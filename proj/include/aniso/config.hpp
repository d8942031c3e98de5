#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/quasinorm.hpp"

namespace aniso {

// One experiment: a dilation, a triplet, an atom sweep, a shell family, and
// a selection of checks. Parsed from JSON; CLI flags override single fields.
struct RunConfig {
  Eigen::MatrixXd matrix;  // required, row-major in config
  DilationOptions dilation_opts;
  QuasiNormOptions quasinorm_opts;

  double p = 0.5;
  double q = 2.0;  // +inf allowed ("inf" in config)
  int s = -1;      // -1 = auto: resolved via min_moment_order

  int k_lo = -3;
  int k_hi = 3;
  std::uint64_t seed_lo = 1;
  std::uint64_t seed_hi = 50;
  int grid_res = 64;
  Eigen::VectorXd center;  // empty = origin

  int m_lo = -12;
  int m_hi = 12;
  int annulus_points = 128;
  std::uint64_t annulus_seed = 2025;

  double epsilon = 0.1;
  std::vector<std::string> checks;
  std::filesystem::path out_dir;
  bool emit_atoms = true;
};

const std::vector<std::string>& known_checks();

RunConfig parse_config_json(const std::string& text);
RunConfig parse_config_file(const std::filesystem::path& path);

// "a,b;c,d" -> row-major matrix. Throws ConfigParse on ragged input.
Eigen::MatrixXd parse_matrix_string(const std::string& text);
// "a..b"
std::pair<std::uint64_t, std::uint64_t> parse_seed_range(const std::string& text);
// comma-separated check names, validated against known_checks()
std::vector<std::string> parse_checks_list(const std::string& text);

void validate_config(const RunConfig& config);

}  // namespace aniso
