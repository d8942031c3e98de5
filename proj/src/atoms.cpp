#include "aniso/atoms.hpp"

#include <cmath>
#include <functional>
#include <numeric>

#include "aniso/rng.hpp"

namespace aniso {

int min_moment_order(double p, const DilationMatrix& dilation) {
  if (!(p > 0.0 && p <= 1.0))
    throw BadExponent("p must lie in (0, 1]");
  return static_cast<int>(
      std::floor((1.0 / p - 1.0) / dilation.zeta_minus()));
}

AdmissibleTriplet AdmissibleTriplet::make(double p, double q, int s,
                                          const DilationMatrix& dilation) {
  if (!(p > 0.0 && p <= 1.0)) throw BadExponent("p must lie in (0, 1]");
  if (!(q >= 1.0)) throw NotAdmissible("q must lie in [1, inf]");
  if (!(p < q)) throw NotAdmissible("p < q required");
  if (s < 0 || s < min_moment_order(p, dilation))
    throw NotAdmissible("s below the admissible moment order");
  return AdmissibleTriplet{p, q, s};
}

std::vector<std::vector<int>> moment_multi_indices(int dim, int max_degree) {
  std::vector<std::vector<int>> out;
  std::vector<int> idx(dim, 0);
  for (int deg = 0; deg <= max_degree; ++deg) {
    // enumerate all alpha with |alpha| == deg, lexicographic
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == dim - 1) {
        idx[pos] = left;
        out.push_back(idx);
        return;
      }
      for (int v = left; v >= 0; --v) {
        idx[pos] = v;
        rec(pos + 1, left - v);
      }
    };
    rec(0, deg);
  }
  return out;
}

void Atom::finalize_geometry() {
  const int n = dim();
  half_widths_ = quasinorm_.box_half_widths(0);
  cell_volume_ = 1.0;
  for (int d = 0; d < n; ++d) cell_volume_ *= 2.0 * half_widths_[d] / grid_res_;
  point_measure_ =
      std::pow(quasinorm_.det_abs(), static_cast<double>(scale_)) * cell_volume_;

  // Support mask: u in B_0, i.e. u^T Q u <= c.
  const std::size_t total = static_cast<std::size_t>(
      std::llround(std::pow(static_cast<double>(grid_res_), n)));
  support_.clear();
  support_axis_idx_.clear();
  std::vector<int> axis(n, 0);
  Eigen::VectorXd u(n);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat;
    for (int d = n - 1; d >= 0; --d) {
      axis[d] = static_cast<int>(rem % grid_res_);
      rem /= grid_res_;
    }
    for (int d = 0; d < n; ++d) u[d] = axis_coordinate(d, axis[d]);
    if (u.dot(quasinorm_.form() * u) <= quasinorm_.level()) {
      support_.push_back(static_cast<std::uint32_t>(flat));
      for (int d = 0; d < n; ++d)
        support_axis_idx_.push_back(static_cast<std::uint16_t>(axis[d]));
    }
  }
}

Eigen::VectorXd Atom::lattice_u(std::uint32_t flat) const {
  const int n = dim();
  Eigen::VectorXd u(n);
  std::size_t rem = flat;
  for (int d = n - 1; d >= 0; --d) {
    u[d] = axis_coordinate(d, static_cast<int>(rem % grid_res_));
    rem /= grid_res_;
  }
  return u;
}

Eigen::VectorXd Atom::lattice_x(std::uint32_t flat) const {
  return center_ + dilation().power(scale_) * lattice_u(flat);
}

double Atom::lq_norm(double q) const {
  if (std::isinf(q)) {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
  }
  double acc = 0.0;
  for (std::uint32_t flat : support_)
    acc += std::pow(std::abs(samples_[flat]), q);
  return std::pow(acc * point_measure_, 1.0 / q);
}

double Atom::lq_target() const {
  const double inv_q = triplet_.q_is_inf() ? 0.0 : 1.0 / triplet_.q;
  return std::pow(quasinorm_.det_abs(), scale_ * (inv_q - 1.0 / triplet_.p));
}

Atom Atom::generate(const QuasiNorm& quasinorm, const AdmissibleTriplet& triplet,
                    const Eigen::VectorXd& center, int scale, int grid_res,
                    std::uint64_t seed) {
  // Revalidate admissibility against the bound dilation.
  AdmissibleTriplet t = AdmissibleTriplet::make(triplet.p, triplet.q, triplet.s,
                                                quasinorm.dilation());
  if (grid_res < 16) throw TooCoarse("grid_res must be at least 16 per axis");
  if (std::abs(scale) > DilationMatrix::kMaxPower)
    throw PowerOutOfRange("atom scale exceeds the power cache");
  if (center.size() != quasinorm.dim())
    throw Error("center dimension mismatch");

  Atom a;
  a.quasinorm_ = quasinorm;
  a.triplet_ = t;
  a.center_ = center;
  a.scale_ = scale;
  a.grid_res_ = grid_res;
  a.seed_ = seed;
  const std::size_t total = static_cast<std::size_t>(
      std::llround(std::pow(static_cast<double>(grid_res), quasinorm.dim())));
  a.samples_.assign(total, 0.0);
  a.finalize_geometry();

  const std::size_t nsupp = a.support_.size();
  const int n = quasinorm.dim();
  const auto indices = moment_multi_indices(n, t.s);
  const std::size_t nmom = indices.size();
  if (nsupp < 2 * nmom)
    throw TooCoarse("fewer than 2x support points per moment constraint");

  // Seeded draw on the support.
  Rng rng(seed);
  Eigen::VectorXd v(nsupp);
  for (std::size_t i = 0; i < nsupp; ++i) v[i] = rng.symmetric();

  // Vanishing moments: project onto the orthogonal complement (discrete L^2,
  // uniform cell weights) of polynomials of degree <= s on the support.
  // The basis uses box-normalized coordinates u/h for conditioning; the span
  // equals that of x^alpha restricted to the support.
  Eigen::MatrixXd vm(nsupp, nmom);
  for (std::size_t i = 0; i < nsupp; ++i) {
    for (std::size_t m = 0; m < nmom; ++m) {
      double val = 1.0;
      for (int d = 0; d < n; ++d) {
        const int deg = indices[m][static_cast<std::size_t>(d)];
        if (deg == 0) continue;
        const double ud = a.axis_coordinate(
                              d, a.support_axis_idx_[i * n + static_cast<std::size_t>(d)]) /
                          a.half_widths_[d];
        for (int rep = 0; rep < deg; ++rep) val *= ud;
      }
      vm(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = val;
    }
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(vm);
  if (qr.rank() < static_cast<Eigen::Index>(nmom))
    throw TooCoarse("moment system is rank-deficient at this resolution");
  Eigen::MatrixXd basis =
      qr.householderQ() * Eigen::MatrixXd::Identity(
                              static_cast<Eigen::Index>(nsupp),
                              static_cast<Eigen::Index>(nmom));
  // Undo the column pivoting implicitly: Q1 spans col(vm) regardless.
  Eigen::VectorXd projected = v - basis * (basis.transpose() * v);

  const double before = v.norm();
  const double after = projected.norm();
  if (!(after > 1e-10 * before))
    throw DegenerateProjection("projection annihilated the sample; retry seed");

  // Rescale to meet the size condition with equality.
  for (std::size_t i = 0; i < nsupp; ++i)
    a.samples_[a.support_[i]] = projected[static_cast<Eigen::Index>(i)];
  const double norm = a.lq_norm(t.q);
  const double factor = a.lq_target() / norm;
  for (std::uint32_t flat : a.support_) a.samples_[flat] *= factor;
  return a;
}

Atom Atom::dilated(int j) const {
  if (std::abs(j) > DilationMatrix::kMaxPower ||
      std::abs(scale_ - j) > DilationMatrix::kMaxPower)
    throw PowerOutOfRange("dilation step exceeds the power cache");
  Atom out = *this;
  out.scale_ = scale_ - j;
  out.center_ = dilation().power(-j) * center_;
  const double factor =
      std::pow(quasinorm_.det_abs(), static_cast<double>(j) / triplet_.p);
  for (double& v : out.samples_) v *= factor;
  out.point_measure_ =
      std::pow(quasinorm_.det_abs(), static_cast<double>(out.scale_)) *
      out.cell_volume_;
  return out;
}

Atom Atom::recentered(const Eigen::VectorXd& new_center) const {
  if (new_center.size() != center_.size())
    throw Error("center dimension mismatch");
  Atom out = *this;
  out.center_ = new_center;
  return out;
}

Atom atom_from_parts(QuasiNorm quasinorm, AdmissibleTriplet triplet,
                     Eigen::VectorXd center, int scale, int grid_res,
                     std::uint64_t seed, std::vector<double> samples) {
  Atom a;
  a.quasinorm_ = std::move(quasinorm);
  a.triplet_ = triplet;
  a.center_ = std::move(center);
  a.scale_ = scale;
  a.grid_res_ = grid_res;
  a.seed_ = seed;
  a.samples_ = std::move(samples);
  a.finalize_geometry();
  const std::size_t total = static_cast<std::size_t>(std::llround(
      std::pow(static_cast<double>(grid_res), a.quasinorm_.dim())));
  if (a.samples_.size() != total)
    throw FileFormat("sample count does not match the grid shape");
  return a;
}

AtomCheckReport check_atom(const Atom& atom, double moment_tol, double size_tol) {
  AtomCheckReport rep;
  const int n = atom.dim();
  const auto& samples = atom.samples();
  const double w = atom.point_measure();

  // Support: samples must vanish off x0 + B_k, i.e. off the u-support.
  std::vector<bool> in_support(samples.size(), false);
  for (std::uint32_t flat : atom.support()) in_support[flat] = true;
  rep.support_ok = true;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (!in_support[i] && samples[i] != 0.0) rep.support_ok = false;

  double linf = 0.0;
  for (double v : samples) linf = std::max(linf, std::abs(v));
  rep.degenerate = (linf == 0.0);

  // Discrete vanishing moments in x-coordinates, relative to sum |a||x^a|w.
  const auto indices = moment_multi_indices(n, atom.triplet().s);
  rep.max_moment_residual = 0.0;
  for (const auto& alpha : indices) {
    double num = 0.0, den = 0.0;
    for (std::uint32_t flat : atom.support()) {
      const double v = samples[flat];
      if (v == 0.0) continue;
      Eigen::VectorXd x = atom.lattice_x(flat);
      double mono = 1.0;
      for (int d = 0; d < n; ++d)
        for (int rep_i = 0; rep_i < alpha[static_cast<std::size_t>(d)]; ++rep_i)
          mono *= x[d];
      num += v * mono * w;
      den += std::abs(v) * std::abs(mono) * w;
    }
    const double residual = den > 0.0 ? std::abs(num) / den : 0.0;
    rep.max_moment_residual = std::max(rep.max_moment_residual, residual);
  }
  rep.moments_ok = rep.max_moment_residual <= moment_tol;

  rep.lq_norm = atom.lq_norm(atom.triplet().q);
  rep.lq_target = atom.lq_target();
  rep.size_residual = std::abs(rep.lq_norm - rep.lq_target) / rep.lq_target;
  rep.size_ok = !rep.degenerate && rep.size_residual <= size_tol;
  return rep;
}

double AtomicCombination::lp_norm() const {
  validate();
  const double p = atoms.empty() ? 1.0 : atoms.front().triplet().p;
  double acc = 0.0;
  for (double c : coefficients) acc += std::pow(std::abs(c), p);
  return std::pow(acc, 1.0 / p);
}

void AtomicCombination::validate() const {
  if (atoms.size() != coefficients.size())
    throw Error("combination size mismatch");
  for (const auto& a : atoms) {
    if (a.triplet().p != atoms.front().triplet().p ||
        a.triplet().q != atoms.front().triplet().q ||
        a.triplet().s != atoms.front().triplet().s)
      throw Error("combination atoms must share a triplet");
  }
}

}  // namespace aniso
