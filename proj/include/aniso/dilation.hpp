#pragma once

#include <Eigen/Dense>
#include <vector>

#include "aniso/errors.hpp"

namespace aniso {

// Exponent margins placing lambda_- and lambda_+ strictly inside the open
// intervals (1, |lambda_1|) and (|lambda_n|, infinity). The margins are part
// of the construction and are recorded wherever derived constants are
// reported, since zeta_+/- (and everything downstream) depend on them.
struct DilationOptions {
  double lower_margin = 0.99;  // lambda_- = |lambda_1|^lower_margin
  double upper_margin = 1.01;  // lambda_+ = |lambda_n|^upper_margin
};

// A validated expansive matrix together with the spectral quantities every
// other module consumes: b = |det A|, sorted eigenvalue moduli, the margin
// values lambda_-/lambda_+ and the eccentricities zeta_-/zeta_+.
//
// Immutable after construction; integer powers A^k for |k| <= kMaxPower are
// cached eagerly so all operations are const and safe to share across
// threads.
class DilationMatrix {
 public:
  static constexpr int kMaxPower = 64;
  static constexpr double kExpansiveTol = 1e-12;

  static DilationMatrix validate(const Eigen::MatrixXd& entries,
                                 const DilationOptions& opts = {});

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double det_abs() const { return det_abs_; }

  // ascending: |lambda_1| <= ... <= |lambda_n|
  const std::vector<double>& eig_moduli() const { return eig_moduli_; }
  double lambda_minus() const { return lambda_minus_; }
  double lambda_plus() const { return lambda_plus_; }
  double zeta_minus() const { return zeta_minus_; }
  double zeta_plus() const { return zeta_plus_; }
  const DilationOptions& options() const { return opts_; }

  // Transpose with identical determinant, moduli and eccentricities. The
  // spectral fields are copied, not recomputed, so they match exactly.
  DilationMatrix adjoint() const;

  // Cached A^k. Throws PowerOutOfRange for |k| > kMaxPower.
  const Eigen::MatrixXd& power(int k) const;

  Eigen::VectorXd power_apply(int k, const Eigen::VectorXd& x) const;

 private:
  DilationMatrix() = default;
  void build_powers();

  Eigen::MatrixXd entries_;
  double det_abs_ = 0;
  std::vector<double> eig_moduli_;
  double lambda_minus_ = 0, lambda_plus_ = 0;
  double zeta_minus_ = 0, zeta_plus_ = 0;
  DilationOptions opts_;
  std::vector<Eigen::MatrixXd> pow_pos_;  // A^0 .. A^kMaxPower
  std::vector<Eigen::MatrixXd> pow_neg_;  // A^-1 .. A^-kMaxPower
};

}  // namespace aniso
