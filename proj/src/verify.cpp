#include "aniso/verify.hpp"

#include <algorithm>
#include <cmath>

#include "aniso/rng.hpp"

namespace aniso {

FrequencyAnnulus sample_annulus(const QuasiNorm& qstar, int level, int npoints,
                                std::uint64_t seed) {
  if (npoints < 1) throw EmptyAnnuli("annulus needs at least one point");
  const int n = qstar.dim();
  const double b = qstar.det_abs();
  const Eigen::VectorXd box = qstar.box_half_widths(0);
  const Eigen::MatrixXd map = qstar.dilation().power(level + 1);

  Rng rng(Rng::mix(seed, static_cast<std::uint64_t>(level + (1 << 20))));
  FrequencyAnnulus annulus;
  annulus.level = level;
  annulus.points.reserve(static_cast<std::size_t>(npoints));

  const long max_attempts = 4000L * npoints;
  long attempts = 0;
  Eigen::VectorXd y(n);
  while (static_cast<int>(annulus.points.size()) < npoints) {
    if (++attempts > max_attempts)
      throw Error("annulus rejection sampling stalled at level " +
                  std::to_string(level));
    for (int d = 0; d < n; ++d) y[d] = rng.uniform(-box[d], box[d]);
    if (y.isZero(0.0)) continue;
    Eigen::VectorXd xi = map * y;
    if (qstar.step_index(xi) == level) annulus.points.push_back(std::move(xi));
  }
  annulus.point_measure =
      std::pow(b, static_cast<double>(level)) * (b - 1.0) / npoints;
  return annulus;
}

std::vector<FrequencyAnnulus> sample_annuli(const QuasiNorm& qstar, int m_lo,
                                            int m_hi, int npoints,
                                            std::uint64_t seed) {
  if (m_hi < m_lo) throw EmptyAnnuli("empty annulus range");
  std::vector<FrequencyAnnulus> out;
  out.reserve(static_cast<std::size_t>(m_hi - m_lo + 1));
  for (int m = m_lo; m <= m_hi; ++m)
    out.push_back(sample_annulus(qstar, m, npoints, seed));
  return out;
}

FrequencyAnnulus dilate_annulus(const QuasiNorm& qstar,
                                const FrequencyAnnulus& annulus, int j) {
  FrequencyAnnulus out;
  out.level = annulus.level + j;
  const Eigen::MatrixXd& map = qstar.dilation().power(j);
  out.points.reserve(annulus.points.size());
  for (const auto& xi : annulus.points) out.points.push_back(map * xi);
  out.point_measure =
      annulus.point_measure * std::pow(qstar.det_abs(), static_cast<double>(j));
  return out;
}

SpectraOnAnnuli compute_spectra(const Atom& atom,
                                std::span<const FrequencyAnnulus> annuli) {
  if (annuli.empty()) throw EmptyAnnuli("no annuli provided");
  SpectraOnAnnuli out;
  out.det_abs = atom.quasinorm().det_abs();
  out.norm_proxy = 1.0;
  for (const auto& annulus : annuli) {
    SpectralSamples s = ft(atom, annulus.points);
    out.levels.push_back(annulus.level);
    out.point_measures.push_back(annulus.point_measure);
    out.values.push_back(std::move(s.values));
  }
  return out;
}

SpectraOnAnnuli compute_spectra(const AtomicCombination& combination,
                                std::span<const FrequencyAnnulus> annuli) {
  combination.validate();
  if (combination.atoms.empty()) throw EmptySamples("empty combination");
  SpectraOnAnnuli out = compute_spectra(combination.atoms.front(), annuli);
  for (auto& per_annulus : out.values)
    for (auto& v : per_annulus) v *= combination.coefficients.front();
  for (std::size_t i = 1; i < combination.atoms.size(); ++i) {
    SpectraOnAnnuli next = compute_spectra(combination.atoms[i], annuli);
    for (std::size_t a = 0; a < out.values.size(); ++a)
      for (std::size_t j = 0; j < out.values[a].size(); ++j)
        out.values[a][j] += combination.coefficients[i] * next.values[a][j];
  }
  out.norm_proxy = combination.lp_norm();
  return out;
}

double pointwise_ratio(const SpectraOnAnnuli& spectra, double p) {
  if (spectra.values.empty()) throw EmptyAnnuli("no spectra");
  const double expo = 1.0 / p - 1.0;
  double sup = 0.0;
  for (std::size_t a = 0; a < spectra.values.size(); ++a) {
    const double rho_pow =
        std::pow(spectra.det_abs, spectra.levels[a] * expo);
    for (const auto& v : spectra.values[a])
      sup = std::max(sup, std::abs(v) / rho_pow);
  }
  return sup / spectra.norm_proxy;
}

double pointwise_ratio(const Atom& atom,
                       std::span<const FrequencyAnnulus> annuli) {
  return pointwise_ratio(compute_spectra(atom, annuli), atom.triplet().p);
}

double pointwise_ratio(const AtomicCombination& combination,
                       std::span<const FrequencyAnnulus> annuli) {
  return pointwise_ratio(compute_spectra(combination, annuli),
                         combination.atoms.front().triplet().p);
}

TwoRegimeConstants two_regime_check(const Atom& atom,
                                    const SpectraOnAnnuli& spectra) {
  const double b = spectra.det_abs;
  const double p = atom.triplet().p;
  const int s = atom.triplet().s;
  const int k = atom.scale();
  const double zeta = atom.dilation().zeta_minus();
  const double far_denom = std::pow(b, k * (1.0 - 1.0 / p));
  const double near_base =
      far_denom * std::pow(b, (s + 1) * k * zeta);

  TwoRegimeConstants out;
  for (std::size_t a = 0; a < spectra.values.size(); ++a) {
    const int m = spectra.levels[a];
    const double near_denom =
        near_base * std::pow(b, m * (s + 1) * zeta);
    for (const auto& v : spectra.values[a]) {
      const double mag = std::abs(v);
      out.c_far = std::max(out.c_far, mag / far_denom);
      if (m <= -k) out.c_near = std::max(out.c_near, mag / near_denom);
    }
  }
  return out;
}

TwoRegimeConstants two_regime_check(const Atom& atom,
                                    std::span<const FrequencyAnnulus> annuli) {
  return two_regime_check(atom, compute_spectra(atom, annuli));
}

DecayFitReport origin_decay(const SpectraOnAnnuli& spectra, double p, int s,
                            double zeta_minus, double noise_floor) {
  const double expo = 1.0 / p - 1.0;
  // per-shell sup of |f_hat| / rho*^{1/p-1}, normalized like pointwise_ratio
  std::vector<std::pair<double, double>> pts;  // (log rho*, log ratio)
  for (std::size_t a = 0; a < spectra.values.size(); ++a) {
    const double log_rho = spectra.levels[a] * std::log(spectra.det_abs);
    const double rho_pow = std::exp(log_rho * expo);
    double sup = 0.0;
    for (const auto& v : spectra.values[a])
      sup = std::max(sup, std::abs(v) / rho_pow);
    sup /= spectra.norm_proxy;
    if (sup > noise_floor) pts.emplace_back(log_rho, std::log(sup));
  }

  DecayFitReport rep;
  rep.required_slope = 0.9 * ((s + 1) * zeta_minus - (1.0 / p - 1.0));
  rep.points_used = static_cast<int>(pts.size());
  if (pts.size() < 2) {
    // everything at quadrature noise: decay is vacuously satisfied
    rep.slope = 0.0;
    rep.pass = true;
    return rep;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double nn = static_cast<double>(pts.size());
  rep.slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
  rep.pass = rep.slope >= rep.required_slope;
  return rep;
}

DecayFitReport origin_decay(const Atom& atom,
                            std::span<const FrequencyAnnulus> annuli,
                            double noise_floor) {
  return origin_decay(compute_spectra(atom, annuli), atom.triplet().p,
                      atom.triplet().s, atom.dilation().zeta_minus(),
                      noise_floor);
}

double hl_integral(const SpectraOnAnnuli& spectra, double p, int m_lo,
                   int m_hi) {
  double total = 0.0;
  for (std::size_t a = 0; a < spectra.values.size(); ++a) {
    const int m = spectra.levels[a];
    if (m < m_lo || m > m_hi) continue;
    const double rho_pow = std::pow(spectra.det_abs, m * (p - 2.0));
    double shell = 0.0;
    for (const auto& v : spectra.values[a])
      shell += std::pow(std::abs(v), p);
    total += shell * rho_pow * spectra.point_measures[a];
  }
  return total;
}

std::vector<std::pair<int, double>> hl_annulus_profile(
    const SpectraOnAnnuli& spectra, double p) {
  std::vector<std::pair<int, double>> out;
  for (std::size_t a = 0; a < spectra.values.size(); ++a) {
    const int m = spectra.levels[a];
    const double rho_pow = std::pow(spectra.det_abs, m * (p - 2.0));
    double shell = 0.0;
    for (const auto& v : spectra.values[a])
      shell += std::pow(std::abs(v), p);
    out.emplace_back(m, shell * rho_pow * spectra.point_measures[a]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// C-infinity ramp: 0 for t <= 0, 1 for t >= 1.
double smooth_ramp(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / t);
  const double b = std::exp(-1.0 / (1.0 - t));
  return a / (a + b);
}

}  // namespace

double AnnulusBump::value(const Eigen::VectorXd& xi) const {
  if (xi.isZero(0.0)) return 0.0;
  const int j = qstar_.step_index(xi);
  if (j >= 2 || j <= -2) return 0.0;
  if (j == 0) return 1.0;
  // Continuous shell coordinate: position of xi between the boundaries of
  // its shell, from the two quadratic forms that bracket it.
  const double c = qstar_.level();
  const double q_in = qstar_.quad(j, xi) / c;        // > 1
  const double q_out = qstar_.quad(j + 1, xi) / c;   // <= 1
  const double v = std::log(q_in);
  const double u = -std::log(q_out);
  const double frac = v / (u + v);
  const double level = j + frac;
  if (level <= 0.0) return smooth_ramp(level + 1.0);  // inner collar
  return smooth_ramp(2.0 - level);                    // outer collar
}

AnnulusBump make_annulus_test(const QuasiNorm& qstar) {
  return AnnulusBump(qstar);
}

double calibrate_multiplier_constant(const AnnulusBump& bump, double p,
                                     std::span<const FrequencyAnnulus> annuli) {
  if (annuli.empty()) throw EmptyAnnuli("calibration needs sampled annuli");
  const double b = bump.quasinorm().det_abs();
  const double expo = 1.0 / p - 1.0;
  double sup = 0.0;
  for (const auto& annulus : annuli) {
    const double rho_pow = std::pow(b, annulus.level * expo);
    for (const auto& xi : annulus.points)
      sup = std::max(sup, bump.value(xi) / rho_pow);
  }
  return sup;
}

MultiplierVerdict multiplier_annulus_bound(
    const AnnulusBump& bump, std::span<const MultiplierSample> samples,
    int level, double op_norm_proxy, double calibrated_constant) {
  if (samples.empty()) throw EmptySamples("no multiplier samples");
  const QuasiNorm& qstar = bump.quasinorm();
  const Eigen::MatrixXd back = qstar.dilation().power(-level);
  MultiplierVerdict verdict;
  for (const auto& sample : samples) {
    if (qstar.step_index(sample.freq) != level)
      throw ScaleMismatch("multiplier sample is not on the requested shell");
    const double factor = bump.value(back * sample.freq);
    verdict.sup_abs =
        std::max(verdict.sup_abs, std::abs(sample.value) * factor);
  }
  verdict.bound = calibrated_constant * op_norm_proxy;
  verdict.pass = verdict.sup_abs <= verdict.bound;
  return verdict;
}

}  // namespace aniso
