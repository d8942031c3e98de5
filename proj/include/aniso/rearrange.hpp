#pragma once

#include <span>
#include <string>
#include <vector>

#include "aniso/errors.hpp"
#include "aniso/quasinorm.hpp"

namespace aniso {

// |f| sampled at quadrature points with positive per-sample measures.
struct MeasuredField {
  std::vector<double> values;
  std::vector<double> measures;
  std::string domain;  // "lattice" or "annuli"
};

// Decreasing step function f*(t): levels v_1 > v_2 > ... on consecutive
// measure intervals. Right-continuous; f* = 0 beyond the support measure.
// Exact for step functions, which makes the rearrangement identities
// identities rather than approximations.
class RearrangementProfile {
 public:
  static RearrangementProfile from_field(const MeasuredField& field);

  double value(double t) const;        // f*(t)
  double integral(double t) const;     // int_0^t f*(u) du
  double distribution(double s) const; // |{f* > s}| = d_f(s)

  const std::vector<double>& levels() const { return levels_; }
  // cumulative measures; breakpoints()[i] closes the interval of levels()[i]
  const std::vector<double>& breakpoints() const { return cum_; }
  double support_measure() const { return cum_.empty() ? 0.0 : cum_.back(); }
  double total_measure() const { return total_; }

 private:
  std::vector<double> levels_;
  std::vector<double> cum_;
  std::vector<double> prefix_integral_;
  double total_ = 0;
};

// d_f(t) = sum of measures where |value| > t. Throws NonpositiveThreshold.
double distribution(const MeasuredField& field, double t);

RearrangementProfile rearrangement(const MeasuredField& field);

// max over all breakpoints of | (|f|^lambda)*(t) - (f*(t))^lambda |.
// Zero exactly: a monotone map preserves the sort order.
double power_identity_check(const MeasuredField& field, double lambda);

// lhs = int_0^t (sum_j f_j)*(u) du, rhs = sum_j int_0^t f_j*(u) du.
// Fields must share the measure grid; throws GridMismatch.
std::pair<double, double> subadditivity_check(
    std::span<const MeasuredField> fields, double t);

// int_0^infinity f*(t) g*(t) dt, exact piecewise product integral.
double pairing_integral(const RearrangementProfile& f,
                        const RearrangementProfile& g);

// Profile of g = 1/rho* built from the exact shell measures b^m (b-1) for
// m in [m_lo, m_hi].
RearrangementProfile rho_reciprocal_profile(const QuasiNorm& qstar, int m_lo,
                                            int m_hi);

// Sweep of t * g*(t) over log-spaced t in [t_lo, t_hi]: the two-sided
// constants of g* ~ 1/t.
struct TwoSidedBounds {
  double c1 = 0;  // min of t g*(t)
  double c2 = 0;  // max of t g*(t)
};
TwoSidedBounds reciprocal_envelope_bounds(const RearrangementProfile& profile,
                                          double t_lo, double t_hi,
                                          int npoints);

// Exact dilation scaling law: the field with values b^{-eps k} f and
// measures b^k mu has rearrangement G*(t) = b^{-eps k} F*(b^{-k} t).
// Returns the max relative deviation over both profiles' intervals.
double scaling_law_check(const MeasuredField& field, int k, double eps,
                         double det_abs);

// One shell of |f_hat| samples for the Lorentz functionals.
struct AnnulusField {
  double rho_star = 0;
  std::vector<double> abs_values;
  double point_measure = 0;
};

// Log-spaced t grid for the outer integrals, truncated to [t_min, t_max].
struct TGrid {
  double t_min = 1e-6;
  double t_max = 1e6;
  int per_decade = 200;

  std::vector<double> points() const;
  TGrid scaled(double factor) const {
    return TGrid{t_min * factor, t_max * factor, per_decade};
  }
};

// The two Lorentz-type functionals of F_eps(xi) = rho*(xi)^{-lambda}
// |f_hat(xi)| with lambda = 1/p - 1 + eps:
//   a32_integral = int t^{eps p - 1} F*(t)^p dt
//   a34_integral = int t^{eps p - 2} [ int_0^t F*(u)^p du ] dt
// The inner integral is exact from the step profile; the outer integrals use
// the log-trapezoid rule on the grid. majorization_min is the minimum of
// H(t) - t F*(t)^p over the grid (nonnegative up to roundoff since F* is
// decreasing), the step that turns the a34 bound into the a32 bound.
struct LorentzResult {
  double lambda = 0;
  double a32_integral = 0;
  double a34_integral = 0;
  double a32 = 0;  // a32_integral^{1/p}
  double a34 = 0;  // a34_integral^{1/p}
  double majorization_min = 0;
};

LorentzResult lorentz_functional(std::span<const AnnulusField> fields, double p,
                                 double eps, const TGrid& grid = {});

// F_eps as a measured field (values rho*^{-lambda} |f_hat|).
MeasuredField field_from_annuli(std::span<const AnnulusField> fields,
                                double lambda);

}  // namespace aniso
