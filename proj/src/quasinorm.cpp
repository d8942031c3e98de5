#include "aniso/quasinorm.hpp"

#include <cmath>
#include <limits>

namespace aniso {

namespace {

// Volume of the unit n-ball.
double unit_ball_volume(int n) {
  return std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

double operator_norm(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

}  // namespace

QuasiNorm QuasiNorm::build(const DilationMatrix& dilation,
                           const QuasiNormOptions& opts) {
  const int n = dilation.dim();
  const double lambda_minus = dilation.lambda_minus();

  double r = opts.ratio == 0.0 ? std::sqrt(lambda_minus) : opts.ratio;
  if (!(r > 1.0 && r < lambda_minus))
    throw BadRatio("ratio must lie strictly inside (1, lambda_-)");

  const Eigen::MatrixXd inv = dilation.power(-1);

  // Accumulate Q = sum_j r^{2j} (A^-j)^T A^-j, stopping (in auto mode) at the
  // smallest J with r^J ||A^-J||_op <= tail_tol.
  constexpr int kMaxTerms = 4096;
  Eigen::MatrixXd q = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd a_negj = Eigen::MatrixXd::Identity(n, n);
  double r_pow = 1.0;
  int terms = -1;
  const int requested = opts.terms;
  if (requested < 0) throw BadRatio("terms must be nonnegative");
  for (int j = 0; j <= (requested > 0 ? requested : kMaxTerms); ++j) {
    if (j > 0) {
      a_negj = a_negj * inv;
      r_pow *= r;
    }
    q += (r_pow * r_pow) * (a_negj.transpose() * a_negj);
    if (requested > 0) {
      if (j == requested) {
        terms = j;
        break;
      }
    } else if (j >= 1 && r_pow * operator_norm(a_negj) <= opts.tail_tol) {
      terms = j;
      break;
    }
  }
  if (terms < 0)
    throw ContractionFailed("series did not reach the tail tolerance within " +
                            std::to_string(kMaxTerms) + " terms");

  QuasiNorm result;
  result.dilation_ = dilation;
  result.form_ = 0.5 * (q + q.transpose());  // symmetrize roundoff
  result.ratio_ = r;
  result.terms_ = terms;

  // Contraction certificate: r^-2 Q - A^-T Q A^-1 must be PSD, which is what
  // makes membership monotone in the scale index.
  Eigen::MatrixXd cert = result.form_ / (r * r) -
                         inv.transpose() * result.form_ * inv;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ces(0.5 * (cert + cert.transpose()));
  result.certificate_ = ces.eigenvalues().minCoeff();
  if (result.certificate_ < -1e-10)
    throw ContractionFailed("contraction certificate failed (increase terms)");

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qes(result.form_);
  if (qes.eigenvalues().minCoeff() <= 0.0)
    throw ContractionFailed("form is not positive definite");

  // Level c so that |B_0| = 1: vol = c^{n/2} V_n / sqrt(det Q).
  const double det_q = result.form_.determinant();
  result.level_ = std::pow(std::sqrt(det_q) / unit_ball_volume(n), 2.0 / n);
  result.form_inverse_ =
      result.form_.ldlt().solve(Eigen::MatrixXd::Identity(n, n));
  return result;
}

Eigen::VectorXd QuasiNorm::apply_negative_power(int m,
                                                const Eigen::VectorXd& x) const {
  // z = A^-m x, multiplying by cached blocks of at most kMaxPower steps.
  constexpr int kChunk = DilationMatrix::kMaxPower;
  Eigen::VectorXd z = x;
  int remaining = m;
  while (remaining != 0) {
    int step = std::clamp(remaining, -kChunk, kChunk);
    z = dilation_.power(-step) * z;
    remaining -= step;
  }
  return z;
}

double QuasiNorm::quad(int m, const Eigen::VectorXd& x) const {
  Eigen::VectorXd z = apply_negative_power(m, x);
  return z.dot(form_ * z);
}

int QuasiNorm::step_index(const Eigen::VectorXd& x) const {
  if (x.size() != dim()) throw Error("dimension mismatch in step_index");
  if (!x.allFinite()) throw SingularInput("step_index of non-finite vector");
  if (x.isZero(0.0)) throw ZeroVector("step_index of the zero vector");

  // member(m) = x in B_m is monotone in m. Find the smallest member by
  // doubling outward from 0, then binary search inside the bracket.
  constexpr int kGuard = 1 << 20;
  int lo, hi;  // member(lo) false, member(hi) true
  if (member(0, x)) {
    hi = 0;
    int width = 1;
    lo = -1;
    while (member(lo, x)) {
      hi = lo;
      width *= 2;
      lo = hi - width;
      if (lo < -kGuard) throw Error("step_index search did not terminate");
    }
  } else {
    lo = 0;
    int width = 1;
    hi = 1;
    while (!member(hi, x)) {
      lo = hi;
      width *= 2;
      hi = lo + width;
      if (hi > kGuard) throw Error("step_index search did not terminate");
    }
  }
  while (hi - lo > 1) {
    int mid = lo + (hi - lo) / 2;
    if (member(mid, x))
      hi = mid;
    else
      lo = mid;
  }
  return hi - 1;  // x in B_hi \ B_{hi-1}
}

double QuasiNorm::rho(const Eigen::VectorXd& x) const {
  if (x.isZero(0.0)) return 0.0;
  return std::pow(det_abs(), static_cast<double>(step_index(x)));
}

Eigen::VectorXd QuasiNorm::box_half_widths(int k) const {
  // Bounding box of {x : x^T Q_k x <= c} with Q_k = (A^-k)^T Q A^-k is
  // h_d = sqrt(c * (A^k Q^-1 A^k^T)_dd).
  const Eigen::MatrixXd& ak = dilation_.power(k);
  Eigen::MatrixXd cov = ak * form_inverse_ * ak.transpose();
  return (level_ * cov.diagonal().array()).sqrt();
}

ComparisonFit verify_comparison(const QuasiNorm& q,
                                std::span<const Eigen::VectorXd> samples) {
  if (samples.empty()) throw EmptySamples("verify_comparison on empty sample set");
  double c_a = 0.0;
  for (const auto& x : samples) {
    if (x.isZero(0.0)) throw ZeroVector("verify_comparison sample is zero");
    const double en = x.norm();
    const double r = q.rho(x);
    const double zm = q.dilation().zeta_minus();
    const double zp = q.dilation().zeta_plus();
    double need_lower, need_upper;
    if (r >= 1.0) {
      need_lower = std::pow(r, zm) / en;  // c_A >= rho^zeta_- / |x|
      need_upper = en / std::pow(r, zp);  // c_A >= |x| / rho^zeta_+
    } else {
      need_lower = std::pow(r, zp) / en;
      need_upper = en / std::pow(r, zm);
    }
    c_a = std::max(c_a, std::max(need_lower, need_upper));
  }
  ComparisonFit fit;
  fit.c_A = c_a;
  fit.violations = count_comparison_violations(q, samples, c_a);
  return fit;
}

long count_comparison_violations(const QuasiNorm& q,
                                 std::span<const Eigen::VectorXd> samples,
                                 double c_A) {
  long violations = 0;
  for (const auto& x : samples) {
    if (x.isZero(0.0)) throw ZeroVector("comparison sample is zero");
    const double en = x.norm();
    const double r = q.rho(x);
    const double zm = q.dilation().zeta_minus();
    const double zp = q.dilation().zeta_plus();
    double need_lower, need_upper;
    if (r >= 1.0) {
      need_lower = std::pow(r, zm) / en;
      need_upper = en / std::pow(r, zp);
    } else {
      need_lower = std::pow(r, zp) / en;
      need_upper = en / std::pow(r, zm);
    }
    if (need_lower > c_A || need_upper > c_A) ++violations;
  }
  return violations;
}

double doubling_estimate(
    const QuasiNorm& q,
    std::span<const std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs) {
  double worst = 0.0;
  for (const auto& [x, y] : pairs) {
    const double denom = q.rho(x) + q.rho(y);
    const double num = q.rho(x + y);
    if (denom == 0.0) continue;  // x = y = 0 forces num = 0
    worst = std::max(worst, num / denom);
  }
  return worst;
}

}  // namespace aniso
