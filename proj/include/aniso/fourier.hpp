#pragma once

#include <complex>
#include <span>
#include <vector>

#include "aniso/atoms.hpp"

namespace aniso {

// Values of a Fourier transform (or a derivative of one) on a frequency list.
struct SpectralSamples {
  std::vector<Eigen::VectorXd> freqs;
  std::vector<std::complex<double>> values;
  std::vector<int> deriv_order;   // multi-index alpha, one entry per axis
  double quad_error_bound = 0.0;  // Richardson half-resolution comparison
};

// hat a at the given frequencies: sum_i a(x_i) e^{-2 pi i <x_i, xi>} w over
// the atom lattice. The contract is the plain sum; internally the phases are
// factored per axis, which reassociates but does not change the quadrature.
SpectralSamples ft(const Atom& atom, std::span<const Eigen::VectorXd> freqs);

// partial^alpha (F D_A^k a) at the given frequencies: quadrature of
// (-2 pi i x)^alpha (D_A^k a)(x), the unit-support rescaling of the atom.
// Throws OrderTooHigh for |alpha| > s.
SpectralSamples ft_derivative(const Atom& atom, std::span<const int> alpha,
                              std::span<const Eigen::VectorXd> freqs);

// F(D_A^j a) at the given frequencies (no derivative weight); exposed for
// tests and the commutation check. j = 0 reproduces ft up to the phase sum.
SpectralSamples dilated_transform(const Atom& atom, int j,
                                  std::span<const Eigen::VectorXd> freqs);

// max over freqs of |b^j (F D_A^j a)((A*)^j xi) - hat a(xi)|; an exact
// change of variables of the same finite sum, so the residual is roundoff.
double check_commutation(const Atom& atom, int j,
                         std::span<const Eigen::VectorXd> freqs);

// sup over freqs of |partial^alpha (F D_A^k a)(xi)| /
// [b^{-k/q} ||a||_q min(1, |xi|^{s - |alpha| + 1})]; the empirical C(s).
// Frequencies with a zero denominator (xi = 0) are skipped.
double lemma31_ratio(const Atom& atom, std::span<const int> alpha,
                     std::span<const Eigen::VectorXd> freqs);

}  // namespace aniso
