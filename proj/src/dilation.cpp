#include "aniso/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace aniso {

DilationMatrix DilationMatrix::validate(const Eigen::MatrixXd& entries,
                                        const DilationOptions& opts) {
  if (entries.rows() == 0 || entries.rows() != entries.cols())
    throw SingularInput("dilation matrix must be square and nonempty");
  if (!entries.allFinite())
    throw SingularInput("dilation matrix has non-finite entries");
  if (!(opts.lower_margin > 0.0 && opts.lower_margin < 1.0) ||
      !(opts.upper_margin > 1.0))
    throw Error("dilation margins must satisfy 0 < lower < 1 < upper");

  const int n = static_cast<int>(entries.rows());

  double det = entries.determinant();
  if (det == 0.0 || !std::isfinite(det))
    throw SingularInput("dilation matrix has zero determinant");

  Eigen::EigenSolver<Eigen::MatrixXd> eig(entries, /*computeEigenvectors=*/false);
  if (eig.info() != Eigen::Success)
    throw SingularInput("eigenvalue computation failed");

  std::vector<double> moduli(n);
  for (int i = 0; i < n; ++i) moduli[i] = std::abs(eig.eigenvalues()[i]);
  std::sort(moduli.begin(), moduli.end());

  for (double m : moduli)
    if (m <= 1.0 + kExpansiveTol)
      throw NotExpansive("eigenvalue modulus " + std::to_string(m) +
                         " not strictly greater than 1");

  DilationMatrix d;
  d.entries_ = entries;
  d.det_abs_ = std::abs(det);
  d.eig_moduli_ = std::move(moduli);
  d.opts_ = opts;
  d.lambda_minus_ = std::pow(d.eig_moduli_.front(), opts.lower_margin);
  d.lambda_plus_ = std::pow(d.eig_moduli_.back(), opts.upper_margin);
  const double log_b = std::log(d.det_abs_);
  d.zeta_minus_ = std::log(d.lambda_minus_) / log_b;
  d.zeta_plus_ = std::log(d.lambda_plus_) / log_b;

  // Internal consistency: b = prod |lambda_i| and zeta_- < 1/n < zeta_+.
  double prod = 1.0;
  for (double m : d.eig_moduli_) prod *= m;
  if (std::abs(prod - d.det_abs_) > 1e-10 * d.det_abs_)
    throw SingularInput("determinant inconsistent with eigenvalue moduli");
  if (!(d.zeta_minus_ < 1.0 / n && 1.0 / n < d.zeta_plus_))
    throw Error("eccentricities do not straddle 1/n");

  d.build_powers();
  return d;
}

void DilationMatrix::build_powers() {
  const int n = dim();
  pow_pos_.clear();
  pow_neg_.clear();
  pow_pos_.reserve(kMaxPower + 1);
  pow_neg_.reserve(kMaxPower);
  pow_pos_.push_back(Eigen::MatrixXd::Identity(n, n));
  for (int k = 1; k <= kMaxPower; ++k) pow_pos_.push_back(pow_pos_.back() * entries_);
  Eigen::MatrixXd inv = entries_.partialPivLu().solve(Eigen::MatrixXd::Identity(n, n));
  pow_neg_.push_back(inv);
  for (int k = 2; k <= kMaxPower; ++k) pow_neg_.push_back(pow_neg_.back() * inv);
}

DilationMatrix DilationMatrix::adjoint() const {
  DilationMatrix d;
  d.entries_ = entries_.transpose();
  d.det_abs_ = det_abs_;
  d.eig_moduli_ = eig_moduli_;
  d.lambda_minus_ = lambda_minus_;
  d.lambda_plus_ = lambda_plus_;
  d.zeta_minus_ = zeta_minus_;
  d.zeta_plus_ = zeta_plus_;
  d.opts_ = opts_;
  // (A^k)^T = (A^T)^k, so the adjoint powers are transposed copies.
  d.pow_pos_.reserve(pow_pos_.size());
  d.pow_neg_.reserve(pow_neg_.size());
  for (const auto& m : pow_pos_) d.pow_pos_.push_back(m.transpose());
  for (const auto& m : pow_neg_) d.pow_neg_.push_back(m.transpose());
  return d;
}

const Eigen::MatrixXd& DilationMatrix::power(int k) const {
  if (k > kMaxPower || k < -kMaxPower)
    throw PowerOutOfRange("requested power " + std::to_string(k) +
                          " exceeds cache bound " + std::to_string(kMaxPower));
  return k >= 0 ? pow_pos_[static_cast<std::size_t>(k)]
                : pow_neg_[static_cast<std::size_t>(-k - 1)];
}

Eigen::VectorXd DilationMatrix::power_apply(int k, const Eigen::VectorXd& x) const {
  return power(k) * x;
}

}  // namespace aniso
