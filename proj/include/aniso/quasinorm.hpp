#pragma once

#include <Eigen/Dense>
#include <span>
#include <utility>
#include <vector>

#include "aniso/dilation.hpp"
#include "aniso/errors.hpp"

namespace aniso {

struct QuasiNormOptions {
  double ratio = 0.0;     // contraction ratio r in (1, lambda_-); 0 -> sqrt(lambda_-)
  int terms = 0;          // series length J; 0 -> smallest J with r^J ||A^-J||_op <= tail_tol
  double tail_tol = 1e-3;
};

// The canonical quasi-norm of a dilation: a positive-definite form Q and a
// level c define the unit-volume ellipsoid B_0 = {x : x^T Q x <= c}; the
// nested family is B_k = A^k(B_0) and rho(x) = b^j on B_{j+1} \ B_j.
//
// Q is the truncated series sum_{j=0}^{J} r^{2j} (A^-j)^T (A^-j), which makes
// |A^-1 x|_Q <= r^-1 |x|_Q up to a certified truncation tail; the certificate
// (positive semidefiniteness of r^-2 Q - A^-T Q A^-1) is checked at build
// time and guarantees the nesting B_k subset B_{k+1}.
//
// Immutable after build; all evaluations are pure.
class QuasiNorm {
 public:
  static QuasiNorm build(const DilationMatrix& dilation,
                         const QuasiNormOptions& opts = {});

  const DilationMatrix& dilation() const { return dilation_; }
  int dim() const { return dilation_.dim(); }
  double det_abs() const { return dilation_.det_abs(); }
  const Eigen::MatrixXd& form() const { return form_; }
  const Eigen::MatrixXd& form_inverse() const { return form_inverse_; }
  double level() const { return level_; }
  double ratio() const { return ratio_; }
  int terms() const { return terms_; }
  // smallest eigenvalue of r^-2 Q - A^-T Q A^-1 (>= -1e-10 by construction)
  double contraction_certificate() const { return certificate_; }

  // (A^-m x)^T Q (A^-m x); membership x in B_m is quad(m, x) <= level().
  double quad(int m, const Eigen::VectorXd& x) const;
  bool member(int m, const Eigen::VectorXd& x) const {
    return quad(m, x) <= level_;
  }

  // The unique j with x in B_{j+1} \ B_j. Throws ZeroVector on x = 0.
  int step_index(const Eigen::VectorXd& x) const;

  // b^step_index(x) for x != 0, 0 for x = 0.
  double rho(const Eigen::VectorXd& x) const;

  // Axis-aligned bounding-box half-widths of B_k. |k| <= DilationMatrix::kMaxPower.
  Eigen::VectorXd box_half_widths(int k = 0) const;

 private:
  QuasiNorm() = default;
  // A^-m x for arbitrary m, applied in cached chunks.
  Eigen::VectorXd apply_negative_power(int m, const Eigen::VectorXd& x) const;

  DilationMatrix dilation_;
  Eigen::MatrixXd form_;
  Eigen::MatrixXd form_inverse_;
  double level_ = 0;
  double ratio_ = 0;
  int terms_ = 0;
  double certificate_ = 0;
};

// Smallest c_A for which the two-sided comparison with the Euclidean norm
//   rho >= 1:  c_A^-1 rho^zeta_- <= |x| <= c_A rho^zeta_+
//   rho <  1:  c_A^-1 rho^zeta_+ <= |x| <= c_A rho^zeta_-
// holds on every sample, plus the violation count at that constant (zero by
// construction). Throws EmptySamples / ZeroVector.
struct ComparisonFit {
  double c_A = 0;
  long violations = 0;
};
ComparisonFit verify_comparison(const QuasiNorm& q,
                                std::span<const Eigen::VectorXd> samples);

// Violations of the same inequalities at a given constant (for held-out sets).
long count_comparison_violations(const QuasiNorm& q,
                                 std::span<const Eigen::VectorXd> samples,
                                 double c_A);

// max over pairs of rho(x + y) / (rho(x) + rho(y)); 0/0 counts as 0.
double doubling_estimate(
    const QuasiNorm& q,
    std::span<const std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs);

}  // namespace aniso
