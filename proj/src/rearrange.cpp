#include "aniso/rearrange.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace aniso {

RearrangementProfile RearrangementProfile::from_field(const MeasuredField& field) {
  if (field.values.size() != field.measures.size())
    throw GridMismatch("field values/measures size mismatch");
  std::vector<std::pair<double, double>> items;  // (|value|, measure)
  items.reserve(field.values.size());
  double total = 0.0;
  for (std::size_t i = 0; i < field.values.size(); ++i) {
    const double mu = field.measures[i];
    if (!(mu > 0.0)) throw GridMismatch("measures must be positive");
    total += mu;
    const double v = std::abs(field.values[i]);
    if (v > 0.0) items.emplace_back(v, mu);
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  RearrangementProfile p;
  p.total_ = total;
  double cum = 0.0, integral = 0.0;
  for (std::size_t i = 0; i < items.size();) {
    const double level = items[i].first;
    double mu = 0.0;
    while (i < items.size() && items[i].first == level) {
      mu += items[i].second;
      ++i;
    }
    cum += mu;
    integral += level * mu;
    p.levels_.push_back(level);
    p.cum_.push_back(cum);
    p.prefix_integral_.push_back(integral);
  }
  return p;
}

double RearrangementProfile::value(double t) const {
  if (t < 0.0) throw Error("rearrangement evaluated at negative t");
  // first interval whose closing breakpoint exceeds t
  auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
  if (it == cum_.end()) return 0.0;
  return levels_[static_cast<std::size_t>(it - cum_.begin())];
}

double RearrangementProfile::integral(double t) const {
  if (t < 0.0) throw Error("rearrangement integral at negative t");
  auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
  if (it == cum_.end()) return prefix_integral_.empty() ? 0.0 : prefix_integral_.back();
  const std::size_t i = static_cast<std::size_t>(it - cum_.begin());
  const double left = i == 0 ? 0.0 : cum_[i - 1];
  const double before = i == 0 ? 0.0 : prefix_integral_[i - 1];
  return before + levels_[i] * (t - left);
}

double RearrangementProfile::distribution(double s) const {
  // measure of {t : f*(t) > s}; levels are strictly decreasing
  auto it = std::lower_bound(
      levels_.begin(), levels_.end(), s,
      [](double level, double threshold) { return level > threshold; });
  if (it == levels_.begin()) return 0.0;
  return cum_[static_cast<std::size_t>(it - levels_.begin()) - 1];
}

double distribution(const MeasuredField& field, double t) {
  if (!(t > 0.0)) throw NonpositiveThreshold("distribution threshold must be > 0");
  if (field.values.size() != field.measures.size())
    throw GridMismatch("field values/measures size mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < field.values.size(); ++i)
    if (std::abs(field.values[i]) > t) sum += field.measures[i];
  return sum;
}

RearrangementProfile rearrangement(const MeasuredField& field) {
  return RearrangementProfile::from_field(field);
}

double power_identity_check(const MeasuredField& field, double lambda) {
  if (!(lambda > 0.0)) throw BadExponent("lambda must be positive");
  MeasuredField powered = field;
  for (double& v : powered.values) v = std::pow(std::abs(v), lambda);
  RearrangementProfile base = rearrangement(field);
  RearrangementProfile pow_profile = rearrangement(powered);

  double worst = 0.0;
  auto probe = [&](double t) {
    const double lhs = pow_profile.value(t);
    const double rhs = std::pow(base.value(t), lambda);
    worst = std::max(worst, std::abs(lhs - rhs));
  };
  probe(0.0);
  for (double t : base.breakpoints()) probe(t);
  for (double t : pow_profile.breakpoints()) probe(t);
  return worst;
}

std::pair<double, double> subadditivity_check(
    std::span<const MeasuredField> fields, double t) {
  if (fields.empty()) throw EmptySamples("no fields");
  const auto& mu0 = fields.front().measures;
  for (const auto& f : fields) {
    if (f.measures.size() != mu0.size())
      throw GridMismatch("fields must share the measure grid");
    for (std::size_t i = 0; i < mu0.size(); ++i)
      if (f.measures[i] != mu0[i])
        throw GridMismatch("fields must share the measure grid");
  }
  MeasuredField sum = fields.front();
  for (double& v : sum.values) v = std::abs(v);
  for (std::size_t j = 1; j < fields.size(); ++j)
    for (std::size_t i = 0; i < sum.values.size(); ++i)
      sum.values[i] += std::abs(fields[j].values[i]);

  const double lhs = rearrangement(sum).integral(t);
  double rhs = 0.0;
  for (const auto& f : fields) rhs += rearrangement(f).integral(t);
  return {lhs, rhs};
}

double pairing_integral(const RearrangementProfile& f,
                        const RearrangementProfile& g) {
  // piecewise-constant product over merged breakpoints
  const double end = std::min(f.support_measure(), g.support_measure());
  double acc = 0.0, t = 0.0;
  std::size_t fi = 0, gi = 0;
  const auto& fb = f.breakpoints();
  const auto& gb = g.breakpoints();
  while (t < end) {
    if (fi >= fb.size() || gi >= gb.size()) break;
    const double next_f = fb[fi];
    const double next_g = gb[gi];
    const double next = std::min(end, std::min(next_f, next_g));
    acc += f.levels()[fi] * g.levels()[gi] * (next - t);
    t = next;
    if (fi < fb.size() && next == fb[fi]) ++fi;
    if (gi < gb.size() && next == gb[gi]) ++gi;
  }
  return acc;
}

RearrangementProfile rho_reciprocal_profile(const QuasiNorm& qstar, int m_lo,
                                            int m_hi) {
  if (m_hi < m_lo) throw EmptyAnnuli("empty shell range");
  const double b = qstar.det_abs();
  MeasuredField field;
  field.domain = "annuli";
  for (int m = m_lo; m <= m_hi; ++m) {
    field.values.push_back(std::pow(b, static_cast<double>(-m)));
    field.measures.push_back(std::pow(b, static_cast<double>(m)) * (b - 1.0));
  }
  return rearrangement(field);
}

TwoSidedBounds reciprocal_envelope_bounds(const RearrangementProfile& profile,
                                          double t_lo, double t_hi,
                                          int npoints) {
  if (!(t_lo > 0.0 && t_hi > t_lo) || npoints < 2)
    throw Error("bad envelope sweep parameters");
  TwoSidedBounds out;
  out.c1 = std::numeric_limits<double>::infinity();
  out.c2 = 0.0;
  const double step = std::log(t_hi / t_lo) / (npoints - 1);
  for (int i = 0; i < npoints; ++i) {
    const double t = t_lo * std::exp(i * step);
    const double tg = t * profile.value(t);
    out.c1 = std::min(out.c1, tg);
    out.c2 = std::max(out.c2, tg);
  }
  return out;
}

double scaling_law_check(const MeasuredField& field, int k, double eps,
                         double det_abs) {
  if (!(eps > 0.0)) throw BadExponent("eps must be positive");
  if (!(det_abs > 1.0)) throw ScaleMismatch("det_abs must exceed 1");
  const double value_factor = std::pow(det_abs, -eps * k);
  const double measure_factor = std::pow(det_abs, k);

  MeasuredField dilated = field;
  for (double& v : dilated.values) v *= value_factor;
  for (double& mu : dilated.measures) mu *= measure_factor;

  RearrangementProfile f_star = rearrangement(field);
  RearrangementProfile g_star = rearrangement(dilated);

  // Compare G*(t) against b^{-eps k} F*(b^{-k} t) at interior points of both
  // profiles' intervals; midpoints avoid roundoff straddling a breakpoint.
  double worst = 0.0;
  auto probe = [&](double t) {
    if (!(t > 0.0)) return;
    const double lhs = g_star.value(t);
    const double rhs = value_factor * f_star.value(t / measure_factor);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-300});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  };
  auto probe_profile = [&](const RearrangementProfile& prof, double factor) {
    double left = 0.0;
    for (double bp : prof.breakpoints()) {
      probe(0.5 * (left + bp) * factor);
      left = bp;
    }
    probe(left * 1.5 * factor);  // beyond the support: both sides zero
  };
  probe_profile(g_star, 1.0);
  probe_profile(f_star, measure_factor);
  return worst;
}

MeasuredField field_from_annuli(std::span<const AnnulusField> fields,
                                double lambda) {
  MeasuredField out;
  out.domain = "annuli";
  for (const auto& shell : fields) {
    const double rho_pow = std::pow(shell.rho_star, -lambda);
    for (double v : shell.abs_values) {
      out.values.push_back(rho_pow * std::abs(v));
      out.measures.push_back(shell.point_measure);
    }
  }
  return out;
}

std::vector<double> TGrid::points() const {
  if (!(t_min > 0.0 && t_max > t_min) || per_decade < 2)
    throw Error("bad t-grid parameters");
  const double decades = std::log10(t_max / t_min);
  const int count = static_cast<int>(std::lround(decades * per_decade)) + 1;
  std::vector<double> out(static_cast<std::size_t>(count));
  const double dlog = decades / (count - 1);
  for (int i = 0; i < count; ++i)
    out[static_cast<std::size_t>(i)] = t_min * std::pow(10.0, i * dlog);
  return out;
}

LorentzResult lorentz_functional(std::span<const AnnulusField> fields, double p,
                                 double eps, const TGrid& grid) {
  if (!(p > 0.0 && p < 1.0)) throw BadExponent("p must lie in (0, 1)");
  if (!(eps > 0.0)) throw BadExponent("eps must be positive");
  if (fields.empty()) throw EmptyAnnuli("no annulus fields");

  LorentzResult res;
  res.lambda = 1.0 / p - 1.0 + eps;
  MeasuredField f_eps = field_from_annuli(fields, res.lambda);
  RearrangementProfile star = rearrangement(f_eps);

  // Exact inner integral H(t) = int_0^t F*(u)^p du from the step profile.
  const auto& levels = star.levels();
  const auto& cums = star.breakpoints();
  std::vector<double> pow_levels(levels.size());
  std::vector<double> pow_prefix(levels.size());
  double acc = 0.0, left = 0.0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    pow_levels[i] = std::pow(levels[i], p);
    acc += pow_levels[i] * (cums[i] - left);
    pow_prefix[i] = acc;
    left = cums[i];
  }
  auto h_of = [&](double t) {
    auto it = std::upper_bound(cums.begin(), cums.end(), t);
    if (it == cums.end()) return pow_prefix.empty() ? 0.0 : pow_prefix.back();
    const std::size_t i = static_cast<std::size_t>(it - cums.begin());
    const double lo = i == 0 ? 0.0 : cums[i - 1];
    const double before = i == 0 ? 0.0 : pow_prefix[i - 1];
    return before + pow_levels[i] * (t - lo);
  };
  auto star_pow = [&](double t) {
    auto it = std::upper_bound(cums.begin(), cums.end(), t);
    if (it == cums.end()) return 0.0;
    return pow_levels[static_cast<std::size_t>(it - cums.begin())];
  };

  const std::vector<double> ts = grid.points();
  std::vector<double> f32(ts.size()), f34(ts.size());
  res.majorization_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const double t = ts[i];
    const double fp = star_pow(t);
    const double h = h_of(t);
    // integrands in tau = log t: dt = t dtau
    f32[i] = std::pow(t, eps * p - 1.0) * fp * t;
    f34[i] = std::pow(t, eps * p - 2.0) * h * t;
    res.majorization_min = std::min(res.majorization_min, h - t * fp);
  }
  double i32 = 0.0, i34 = 0.0;
  for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
    const double dtau = std::log(ts[i + 1] / ts[i]);
    i32 += 0.5 * (f32[i] + f32[i + 1]) * dtau;
    i34 += 0.5 * (f34[i] + f34[i + 1]) * dtau;
  }
  res.a32_integral = i32;
  res.a34_integral = i34;
  res.a32 = std::pow(i32, 1.0 / p);
  res.a34 = std::pow(i34, 1.0 / p);
  return res;
}

}  // namespace aniso
