#include "aniso/fourier.hpp"

#include <cmath>

namespace aniso {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

std::complex<double> int_pow(std::complex<double> base, int e) {
  std::complex<double> acc(1.0, 0.0);
  for (int i = 0; i < e; ++i) acc *= base;
  return acc;
}

// Shared evaluator: values of the quadrature
//   sum_i W(y_i) a_i e^{-2 pi i <y_i, xi>} * b^{k-j} * cellvol,
// where y_i = A^-j x_i = A^-j x0 + A^{k-j} u_i are the sample points of
// D_A^j a, and W is the optional per-axis monomial weight (-2 pi i y)^alpha
// (only allowed at unit scale j = k, where the y-lattice is axis-aligned).
// Also accumulates the half-resolution sum (even-index sublattice, weight
// 2^n) for the Richardson error estimate.
struct EvalResult {
  std::vector<std::complex<double>> values;
  double quad_error_bound = 0.0;
};

EvalResult evaluate(const Atom& atom, int j, const std::vector<int>* alpha,
                    std::span<const Eigen::VectorXd> freqs) {
  const int n = atom.dim();
  const int res = atom.grid_res();
  const auto& samples = atom.samples();
  const auto& support = atom.support();
  const auto& axis_idx = atom.support_axis_indices();
  const double b = atom.quasinorm().det_abs();
  const double weight =
      std::pow(b, static_cast<double>(atom.scale() - j)) * atom.cell_volume();
  const double coarse_weight = weight * std::pow(2.0, n);

  Eigen::MatrixXd freq_map =
      atom.dilation().power(atom.scale() - j).transpose();
  Eigen::VectorXd shifted_center = atom.dilation().power(-j) * atom.center();

  // per-axis lattice coordinates
  std::vector<std::vector<double>> u_axis(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    u_axis[static_cast<std::size_t>(d)].resize(static_cast<std::size_t>(res));
    for (int i = 0; i < res; ++i)
      u_axis[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)] =
          atom.axis_coordinate(d, i);
  }

  // per-axis monomial weights (unit scale only)
  std::vector<std::vector<std::complex<double>>> mono;
  if (alpha != nullptr) {
    if (j != atom.scale())
      throw Error("derivative weights require the unit-scale transform");
    mono.assign(static_cast<std::size_t>(n), {});
    for (int d = 0; d < n; ++d) {
      auto& md = mono[static_cast<std::size_t>(d)];
      md.resize(static_cast<std::size_t>(res));
      const int deg = (*alpha)[static_cast<std::size_t>(d)];
      for (int i = 0; i < res; ++i) {
        const double yd = shifted_center[d] +
                          u_axis[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)];
        md[static_cast<std::size_t>(i)] =
            int_pow(std::complex<double>(0.0, -kTwoPi * yd), deg);
      }
    }
  }

  EvalResult out;
  out.values.resize(freqs.size());
  std::vector<std::complex<double>> table(
      static_cast<std::size_t>(n) * static_cast<std::size_t>(res));

  for (std::size_t f = 0; f < freqs.size(); ++f) {
    const Eigen::VectorXd& xi = freqs[f];
    Eigen::VectorXd eta = freq_map * xi;
    const double center_phase = shifted_center.dot(xi);
    const std::complex<double> phase0 =
        std::polar(1.0, -kTwoPi * center_phase);

    for (int d = 0; d < n; ++d) {
      for (int i = 0; i < res; ++i) {
        const double ud =
            u_axis[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)];
        std::complex<double> ph = std::polar(1.0, -kTwoPi * ud * eta[d]);
        if (alpha != nullptr)
          ph *= mono[static_cast<std::size_t>(d)][static_cast<std::size_t>(i)];
        table[static_cast<std::size_t>(d * res + i)] = ph;
      }
    }

    std::complex<double> acc(0.0, 0.0), acc_coarse(0.0, 0.0);
    for (std::size_t s = 0; s < support.size(); ++s) {
      const double a_val = samples[support[s]];
      if (a_val == 0.0) continue;
      std::complex<double> ph = table[static_cast<std::size_t>(
          axis_idx[s * static_cast<std::size_t>(n)])];
      bool even = (axis_idx[s * static_cast<std::size_t>(n)] % 2) == 0;
      for (int d = 1; d < n; ++d) {
        const std::uint16_t idx =
            axis_idx[s * static_cast<std::size_t>(n) + static_cast<std::size_t>(d)];
        ph *= table[static_cast<std::size_t>(d * res + idx)];
        even = even && (idx % 2) == 0;
      }
      acc += a_val * ph;
      if (even) acc_coarse += a_val * ph;
    }
    out.values[f] = phase0 * (weight * acc);
    const std::complex<double> coarse = phase0 * (coarse_weight * acc_coarse);
    out.quad_error_bound =
        std::max(out.quad_error_bound, std::abs(out.values[f] - coarse));
  }
  return out;
}

// Crude magnitude bound ||D^j a||_1 * prod (2 pi extent_d)^alpha_d, asserted
// on every result.
void check_magnitudes(const Atom& atom, int j, const std::vector<int>* alpha,
                      const std::vector<std::complex<double>>& values) {
  const int n = atom.dim();
  const double b = atom.quasinorm().det_abs();
  const double weight =
      std::pow(b, static_cast<double>(atom.scale() - j)) * atom.cell_volume();
  double l1 = 0.0;
  for (std::uint32_t flat : atom.support()) l1 += std::abs(atom.samples()[flat]);
  l1 *= weight;
  double bound = l1;
  if (alpha != nullptr) {
    const Eigen::VectorXd shifted_center =
        atom.dilation().power(-j) * atom.center();
    for (int d = 0; d < n; ++d) {
      const double extent =
          std::abs(shifted_center[d]) + atom.box_half_widths()[d];
      for (int rep = 0; rep < (*alpha)[static_cast<std::size_t>(d)]; ++rep)
        bound *= kTwoPi * extent;
    }
  }
  for (const auto& v : values) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error("non-finite spectral value");
    if (std::abs(v) > bound * (1.0 + 1e-9) + 1e-300)
      throw Error("spectral value exceeds its crude magnitude bound");
  }
}

}  // namespace

SpectralSamples ft(const Atom& atom, std::span<const Eigen::VectorXd> freqs) {
  EvalResult r = evaluate(atom, 0, nullptr, freqs);
  check_magnitudes(atom, 0, nullptr, r.values);
  SpectralSamples out;
  out.freqs.assign(freqs.begin(), freqs.end());
  out.values = std::move(r.values);
  out.deriv_order.assign(static_cast<std::size_t>(atom.dim()), 0);
  out.quad_error_bound = r.quad_error_bound;
  return out;
}

SpectralSamples ft_derivative(const Atom& atom, std::span<const int> alpha,
                              std::span<const Eigen::VectorXd> freqs) {
  if (static_cast<int>(alpha.size()) != atom.dim())
    throw Error("multi-index dimension mismatch");
  int order = 0;
  for (int a : alpha) {
    if (a < 0) throw Error("negative entry in multi-index");
    order += a;
  }
  if (order > atom.triplet().s)
    throw OrderTooHigh("|alpha| exceeds the atom's moment order s");
  const std::vector<int> alpha_v(alpha.begin(), alpha.end());
  EvalResult r = evaluate(atom, atom.scale(), &alpha_v, freqs);
  check_magnitudes(atom, atom.scale(), &alpha_v, r.values);
  SpectralSamples out;
  out.freqs.assign(freqs.begin(), freqs.end());
  out.values = std::move(r.values);
  out.deriv_order = alpha_v;
  out.quad_error_bound = r.quad_error_bound;
  return out;
}

SpectralSamples dilated_transform(const Atom& atom, int j,
                                  std::span<const Eigen::VectorXd> freqs) {
  EvalResult r = evaluate(atom, j, nullptr, freqs);
  SpectralSamples out;
  out.freqs.assign(freqs.begin(), freqs.end());
  out.values = std::move(r.values);
  out.deriv_order.assign(static_cast<std::size_t>(atom.dim()), 0);
  out.quad_error_bound = r.quad_error_bound;
  return out;
}

double check_commutation(const Atom& atom, int j,
                         std::span<const Eigen::VectorXd> freqs) {
  if (std::abs(j) > 10)
    throw PowerOutOfRange("commutation check bounded to |j| <= 10");
  SpectralSamples base = dilated_transform(atom, 0, freqs);

  const Eigen::MatrixXd adj_pow = atom.dilation().power(j).transpose();
  std::vector<Eigen::VectorXd> mapped(freqs.size());
  for (std::size_t i = 0; i < freqs.size(); ++i) mapped[i] = adj_pow * freqs[i];
  SpectralSamples dil = dilated_transform(atom, j, mapped);

  const double bj =
      std::pow(atom.quasinorm().det_abs(), static_cast<double>(j));
  double worst = 0.0;
  for (std::size_t i = 0; i < freqs.size(); ++i)
    worst = std::max(worst, std::abs(bj * dil.values[i] - base.values[i]));
  return worst;
}

double lemma31_ratio(const Atom& atom, std::span<const int> alpha,
                     std::span<const Eigen::VectorXd> freqs) {
  SpectralSamples deriv = ft_derivative(atom, alpha, freqs);
  int order = 0;
  for (int a : alpha) order += a;
  const double b = atom.quasinorm().det_abs();
  const double inv_q =
      atom.triplet().q_is_inf() ? 0.0 : 1.0 / atom.triplet().q;
  const double scale_factor =
      std::pow(b, -atom.scale() * inv_q) * atom.lq_norm(atom.triplet().q);
  const int decay = atom.triplet().s - order + 1;

  double worst = 0.0;
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    const double en = freqs[i].norm();
    const double denom =
        scale_factor * std::min(1.0, std::pow(en, static_cast<double>(decay)));
    if (denom == 0.0) continue;  // xi = 0: numerator vanishes with it
    worst = std::max(worst, std::abs(deriv.values[i]) / denom);
  }
  return worst;
}

}  // namespace aniso
