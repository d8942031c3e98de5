#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

#include "aniso/quasinorm.hpp"

namespace aniso {

// floor((1/p - 1) / zeta_-), the smallest admissible moment order for p.
int min_moment_order(double p, const DilationMatrix& dilation);

struct AdmissibleTriplet {
  double p = 1.0;
  double q = 2.0;  // may be +infinity
  int s = 0;

  static AdmissibleTriplet make(double p, double q, int s,
                                const DilationMatrix& dilation);
  bool q_is_inf() const { return std::isinf(q); }
};

// All multi-indices alpha in n variables with |alpha| <= max_degree,
// graded-lexicographic.
std::vector<std::vector<int>> moment_multi_indices(int dim, int max_degree);

// A sampled (p,q,s)-atom on the anisotropic lattice {x0 + A^k u_i}, where the
// u_i form a uniform grid over the bounding box of B_0 (grid_res points per
// axis, cell centers). Samples vanish off x0 + B_k, all discrete moments of
// order <= s vanish, and the discrete L^q norm equals b^{k(1/q - 1/p)}.
// Immutable after construction.
class Atom {
 public:
  static Atom generate(const QuasiNorm& quasinorm, const AdmissibleTriplet& triplet,
                       const Eigen::VectorXd& center, int scale, int grid_res,
                       std::uint64_t seed);

  const QuasiNorm& quasinorm() const { return quasinorm_; }
  const DilationMatrix& dilation() const { return quasinorm_.dilation(); }
  int dim() const { return quasinorm_.dim(); }
  const AdmissibleTriplet& triplet() const { return triplet_; }
  const Eigen::VectorXd& center() const { return center_; }
  int scale() const { return scale_; }
  int grid_res() const { return grid_res_; }
  std::uint64_t seed() const { return seed_; }

  // Flat row-major over the full grid (last axis fastest); zero off support.
  const std::vector<double>& samples() const { return samples_; }
  // Flat indices of lattice points inside B_0 (u-coordinates).
  const std::vector<std::uint32_t>& support() const { return support_; }
  // Per-point axis indices for support points, support.size() x dim.
  const std::vector<std::uint16_t>& support_axis_indices() const {
    return support_axis_idx_;
  }

  const Eigen::VectorXd& box_half_widths() const { return half_widths_; }
  double axis_spacing(int d) const { return 2.0 * half_widths_[d] / grid_res_; }
  double axis_coordinate(int d, int idx) const {
    return -half_widths_[d] + (idx + 0.5) * axis_spacing(d);
  }
  double cell_volume() const { return cell_volume_; }
  // Quadrature weight per lattice point in x-space: b^k * cell_volume.
  double point_measure() const { return point_measure_; }

  Eigen::VectorXd lattice_u(std::uint32_t flat) const;
  Eigen::VectorXd lattice_x(std::uint32_t flat) const;  // x0 + A^k u

  double lq_norm(double q) const;  // discrete; q may be +infinity
  double l1_norm() const { return lq_norm(1.0); }
  double lq_target() const;        // b^{k(1/q - 1/p)}

  // f_j(x) = b^{j/p} a(A^j x): same u-lattice, samples scaled by b^{j/p},
  // scale k - j, center A^-j x0. Exact on samples.
  Atom dilated(int j) const;

  // Same samples at a shifted center (translation).
  Atom recentered(const Eigen::VectorXd& new_center) const;

 private:
  Atom() = default;
  friend Atom atom_from_parts(QuasiNorm quasinorm, AdmissibleTriplet triplet,
                              Eigen::VectorXd center, int scale, int grid_res,
                              std::uint64_t seed, std::vector<double> samples);
  void finalize_geometry();

  QuasiNorm quasinorm_;
  AdmissibleTriplet triplet_;
  Eigen::VectorXd center_;
  int scale_ = 0;
  int grid_res_ = 0;
  std::uint64_t seed_ = 0;
  Eigen::VectorXd half_widths_;
  double cell_volume_ = 0;
  double point_measure_ = 0;
  std::vector<double> samples_;
  std::vector<std::uint32_t> support_;
  std::vector<std::uint16_t> support_axis_idx_;
};

// Assembles an atom from stored parts (file loading, tests). Recomputes the
// lattice geometry from the quasinorm; samples are taken as-is.
Atom atom_from_parts(QuasiNorm quasinorm, AdmissibleTriplet triplet,
                     Eigen::VectorXd center, int scale, int grid_res,
                     std::uint64_t seed, std::vector<double> samples);

struct AtomCheckReport {
  bool support_ok = false;
  bool moments_ok = false;
  bool size_ok = false;
  bool degenerate = false;
  double max_moment_residual = 0;  // relative to sum |a| |x^alpha| w
  double size_residual = 0;        // relative deviation of ||a||_q from target
  double lq_norm = 0;
  double lq_target = 0;
  bool pass() const { return support_ok && moments_ok && size_ok && !degenerate; }
};

AtomCheckReport check_atom(const Atom& atom, double moment_tol = 1e-8,
                           double size_tol = 1e-10);

// Finite combination sum lambda_i a_i of atoms sharing a triplet.
struct AtomicCombination {
  std::vector<Atom> atoms;
  std::vector<double> coefficients;

  // (sum |lambda_i|^p)^{1/p} with p from the shared triplet.
  double lp_norm() const;
  void validate() const;  // shared triplet, matching sizes
};

// Atom file I/O. Header: n, A entries row-major, k, x0, p, q, s, grid shape,
// base cell volume, seed; samples follow as flat 64-bit floats in lattice
// row-major order (little-endian binary, or a plain-text variant). Loading
// rebuilds the quasinorm from the stored matrix; a cell-volume mismatch
// (for example from non-default construction options) raises FileFormat.
enum class AtomFileFormat { Binary, Text };

void save_atom(const Atom& atom, const std::filesystem::path& path,
               AtomFileFormat format = AtomFileFormat::Binary);
Atom load_atom(const std::filesystem::path& path,
               const DilationOptions& dilation_opts = {},
               const QuasiNormOptions& quasinorm_opts = {});

}  // namespace aniso
