#include "aniso/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

#include "aniso/atoms.hpp"
#include "aniso/parallel.hpp"
#include "aniso/rearrange.hpp"
#include "aniso/rng.hpp"
#include "aniso/verify.hpp"

namespace aniso {

namespace {

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double fit_slope(const std::vector<std::pair<double, double>>& pts) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct Context {
  const RunConfig& cfg;
  DilationMatrix dilation;
  QuasiNorm qnorm;
  QuasiNorm qstar;
  AdmissibleTriplet triplet;
  Eigen::VectorXd center;
  std::string annuli_meta;

  std::vector<Atom> atoms;         // main sweep, k cycling over [k_lo, k_hi]
  std::vector<FrequencyAnnulus> annuli;
  std::vector<SpectraOnAnnuli> spectra;
  bool spectra_ready = false;

  std::vector<Atom> unit_atoms;    // k = 0 sweep for the Lorentz functionals
  std::vector<SpectraOnAnnuli> unit_spectra;
  bool unit_ready = false;

  explicit Context(const RunConfig& config)
      : cfg(config),
        dilation(DilationMatrix::validate(config.matrix, config.dilation_opts)),
        qnorm(QuasiNorm::build(dilation, config.quasinorm_opts)),
        qstar(QuasiNorm::build(dilation.adjoint(), config.quasinorm_opts)) {
    const int s = cfg.s < 0 ? min_moment_order(cfg.p, dilation) : cfg.s;
    triplet = AdmissibleTriplet::make(cfg.p, cfg.q, s, dilation);
    center = cfg.center.size() == 0
                 ? Eigen::VectorXd::Zero(dilation.dim()).eval()
                 : cfg.center;
    std::ostringstream meta;
    meta << "annuli[" << cfg.m_lo << "," << cfg.m_hi << "]x" << cfg.annulus_points;
    annuli_meta = meta.str();
  }

  Atom make_atom_retry(int k, std::uint64_t seed) const {
    for (int attempt = 0;; ++attempt) {
      try {
        const std::uint64_t used =
            attempt == 0 ? seed : Rng::mix(seed, 0xA70Cull + attempt);
        return Atom::generate(qnorm, triplet, center, k, cfg.grid_res, used);
      } catch (const DegenerateProjection&) {
        if (attempt >= 8) throw;
      }
    }
  }

  int scale_for(std::size_t i) const {
    const int span = cfg.k_hi - cfg.k_lo + 1;
    return cfg.k_lo + static_cast<int>(i % static_cast<std::size_t>(span));
  }

  void ensure_atoms() {
    if (!atoms.empty()) return;
    const std::size_t count = cfg.seed_hi - cfg.seed_lo + 1;
    atoms.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      atoms.push_back(make_atom_retry(scale_for(i), cfg.seed_lo + i));
  }

  void ensure_annuli() {
    if (!annuli.empty()) return;
    annuli = sample_annuli(qstar, cfg.m_lo, cfg.m_hi, cfg.annulus_points,
                           cfg.annulus_seed);
  }

  void ensure_spectra() {
    if (spectra_ready) return;
    ensure_atoms();
    ensure_annuli();
    spectra.resize(atoms.size());
    parallel_for(atoms.size(), [&](std::size_t i) {
      spectra[i] = compute_spectra(atoms[i], annuli);
    });
    spectra_ready = true;
  }

  void ensure_unit_sweep() {
    if (unit_ready) return;
    ensure_annuli();
    const std::size_t count = cfg.seed_hi - cfg.seed_lo + 1;
    unit_atoms.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
      unit_atoms.push_back(
          make_atom_retry(0, Rng::mix(cfg.seed_lo + i, 0x0171ull)));
    unit_spectra.resize(unit_atoms.size());
    parallel_for(unit_atoms.size(), [&](std::size_t i) {
      unit_spectra[i] = compute_spectra(unit_atoms[i], annuli);
    });
    unit_ready = true;
  }

  ReportRecord record(const std::string& check, const Atom& a, double constant,
                      double tolerance, bool pass, std::string meta = {}) const {
    ReportRecord r;
    r.check = check;
    r.p = a.triplet().p;
    r.q = a.triplet().q;
    r.s = a.triplet().s;
    r.k = a.scale();
    r.seed = a.seed();
    r.constant = constant;
    r.tolerance = tolerance;
    r.pass = pass;
    r.meta = meta.empty() ? annuli_meta : std::move(meta);
    return r;
  }

  ReportRecord summary(const std::string& check, double constant,
                       double tolerance, bool pass, std::string meta) const {
    ReportRecord r;
    r.check = check;
    r.p = triplet.p;
    r.q = triplet.q;
    r.s = triplet.s;
    r.k = 0;
    r.seed = 0;
    r.constant = constant;
    r.tolerance = tolerance;
    r.pass = pass;
    r.meta = std::move(meta);
    return r;
  }
};

bool check_pointwise(Context& ctx, std::vector<ReportRecord>& out) {
  ctx.ensure_spectra();
  bool all = true;
  std::vector<double> ratios(ctx.atoms.size());
  for (std::size_t i = 0; i < ctx.atoms.size(); ++i) {
    ratios[i] = pointwise_ratio(ctx.spectra[i], ctx.triplet.p);
    const bool ok = std::isfinite(ratios[i]);
    all = all && ok;
    out.push_back(ctx.record("pointwise", ctx.atoms[i], ratios[i],
                             std::numeric_limits<double>::infinity(), ok));
  }
  const double spread = median(ratios) > 0 ? *std::max_element(ratios.begin(), ratios.end()) / median(ratios)
                                           : 0.0;
  const bool spread_ok = spread <= 10.0;
  all = all && spread_ok;
  out.push_back(ctx.summary("pointwise.spread", spread, 10.0, spread_ok,
                            "max_over_median"));

  // exact dilation invariance on the first atom, matched annuli
  const Atom dil = ctx.atoms.front().dilated(1);
  std::vector<FrequencyAnnulus> mapped;
  mapped.reserve(ctx.annuli.size());
  for (const auto& a : ctx.annuli) mapped.push_back(dilate_annulus(ctx.qstar, a, 1));
  const double moved = pointwise_ratio(dil, mapped);
  const double rel = std::abs(moved - ratios.front()) /
                     std::max(ratios.front(), 1e-300);
  const bool dil_ok = rel <= 1e-6;
  all = all && dil_ok;
  out.push_back(ctx.summary("pointwise.dilation", rel, 1e-6, dil_ok, "j=1"));
  return all;
}

bool check_two_regime(Context& ctx, std::vector<ReportRecord>& out) {
  ctx.ensure_spectra();
  bool all = true;
  for (std::size_t i = 0; i < ctx.atoms.size(); ++i) {
    const TwoRegimeConstants c = two_regime_check(ctx.atoms[i], ctx.spectra[i]);
    const bool ok = std::isfinite(c.c_near) && std::isfinite(c.c_far);
    all = all && ok;
    out.push_back(ctx.record("two_regime.near", ctx.atoms[i], c.c_near,
                             std::numeric_limits<double>::infinity(), ok));
    out.push_back(ctx.record("two_regime.far", ctx.atoms[i], c.c_far,
                             std::numeric_limits<double>::infinity(), ok));
  }

  // C_near is invariant under the exact dilation, on matched annuli.
  const Atom base = ctx.atoms.front();
  const Atom dil = base.dilated(2);
  std::vector<FrequencyAnnulus> mapped;
  for (const auto& a : ctx.annuli) mapped.push_back(dilate_annulus(ctx.qstar, a, 2));
  const TwoRegimeConstants c0 = two_regime_check(base, ctx.spectra.front());
  const TwoRegimeConstants c2 = two_regime_check(dil, mapped);
  const double rel = std::abs(c2.c_near - c0.c_near) / std::max(c0.c_near, 1e-300);
  const bool ok = rel <= 1e-6;
  all = all && ok;
  out.push_back(ctx.summary("two_regime.dilation", rel, 1e-6, ok, "j=2"));
  return all;
}

bool check_origin(Context& ctx, std::vector<ReportRecord>& out) {
  ctx.ensure_spectra();
  const double b = ctx.dilation.det_abs();
  const int lo = static_cast<int>(std::ceil(std::log(1e-6) / std::log(b)));
  const int hi = static_cast<int>(std::floor(std::log(1e-1) / std::log(b)));
  bool all = true;
  for (std::size_t i = 0; i < ctx.atoms.size(); ++i) {
    // keep only the near-origin shells for the fit
    SpectraOnAnnuli near;
    near.det_abs = ctx.spectra[i].det_abs;
    near.norm_proxy = ctx.spectra[i].norm_proxy;
    for (std::size_t a = 0; a < ctx.spectra[i].levels.size(); ++a) {
      const int m = ctx.spectra[i].levels[a];
      if (m < lo || m > hi) continue;
      near.levels.push_back(m);
      near.point_measures.push_back(ctx.spectra[i].point_measures[a]);
      near.values.push_back(ctx.spectra[i].values[a]);
    }
    if (near.levels.size() < 2) {
      all = false;
      out.push_back(ctx.record("origin", ctx.atoms[i], 0.0, 0.0, false,
                               "insufficient_shells"));
      continue;
    }
    const DecayFitReport rep =
        origin_decay(near, ctx.triplet.p, ctx.triplet.s,
                     ctx.dilation.zeta_minus());
    all = all && rep.pass;
    out.push_back(ctx.record("origin", ctx.atoms[i], rep.slope,
                             rep.required_slope, rep.pass));
  }
  return all;
}

bool check_hl(Context& ctx, std::vector<ReportRecord>& out) {
  ctx.ensure_spectra();
  const double p = ctx.triplet.p;
  const double b = ctx.dilation.det_abs();
  bool all = true;

  std::vector<double> totals(ctx.atoms.size());
  for (std::size_t i = 0; i < ctx.atoms.size(); ++i) {
    totals[i] = hl_integral(ctx.spectra[i], p, ctx.cfg.m_lo, ctx.cfg.m_hi);
    const bool ok = std::isfinite(totals[i]);
    all = all && ok;
    out.push_back(ctx.record("hl", ctx.atoms[i], totals[i],
                             std::numeric_limits<double>::infinity(), ok));
  }
  const double spread =
      median(totals) > 0
          ? *std::max_element(totals.begin(), totals.end()) / median(totals)
          : 0.0;
  const bool spread_ok = spread <= 10.0;
  all = all && spread_ok;
  out.push_back(ctx.summary("hl.spread", spread, 10.0, spread_ok,
                            "max_over_median"));

  // geometric decay of shell contributions beyond the support scale
  if (p < 1.0) {
    const double required = 0.5 * (p - 1.0) * std::log(b);
    for (std::size_t i = 0; i < ctx.atoms.size(); ++i) {
      const int k = ctx.atoms[i].scale();
      std::vector<std::pair<double, double>> pts;
      for (const auto& [m, contribution] : hl_annulus_profile(ctx.spectra[i], p))
        if (m >= k + 2 && contribution > 0)
          pts.emplace_back(m, std::log(contribution));
      if (pts.size() < 3) continue;
      const double slope = fit_slope(pts);
      const bool ok = slope <= required;
      all = all && ok;
      out.push_back(
          ctx.record("hl.decay", ctx.atoms[i], slope, required, ok));
    }
  }

  // combinations against the fitted single-atom constant
  if (ctx.atoms.size() >= 5) {
    const double fitted = *std::max_element(totals.begin(), totals.end());
    Rng rng(Rng::mix(ctx.cfg.annulus_seed, 0xC0B0ull));
    for (int combo = 0; combo < 10; ++combo) {
      SpectraOnAnnuli sum;
      double lp_pow = 0.0;
      for (int pick = 0; pick < 5; ++pick) {
        const std::size_t idx = rng.bits() % ctx.atoms.size();
        double coeff = rng.symmetric();
        if (coeff == 0.0) coeff = 0.5;
        lp_pow += std::pow(std::abs(coeff), p);
        if (pick == 0) {
          sum = ctx.spectra[idx];
          for (auto& shell : sum.values)
            for (auto& v : shell) v *= coeff;
        } else {
          for (std::size_t a = 0; a < sum.values.size(); ++a)
            for (std::size_t j = 0; j < sum.values[a].size(); ++j)
              sum.values[a][j] += coeff * ctx.spectra[idx].values[a][j];
        }
      }
      const double total = hl_integral(sum, p, ctx.cfg.m_lo, ctx.cfg.m_hi);
      const double bound = fitted * lp_pow;
      const bool ok = total <= bound * (1.0 + 1e-9);
      all = all && ok;
      ReportRecord r = ctx.summary("hl.combination", total, bound, ok,
                                   "atoms=5");
      r.seed = static_cast<std::uint64_t>(combo);
      out.push_back(r);
    }
  }
  return all;
}

bool check_multiplier(Context& ctx, std::vector<ReportRecord>& out) {
  ctx.ensure_annuli();
  const double b = ctx.dilation.det_abs();
  const AnnulusBump bump = make_annulus_test(ctx.qstar);
  bool all = true;

  // bump properties on the sampled shells
  double support_violation = 0.0, range_violation = 0.0, plateau_violation = 0.0;
  for (const auto& annulus : ctx.annuli) {
    for (const auto& xi : annulus.points) {
      const double g = bump.value(xi);
      if (annulus.level == 0) plateau_violation = std::max(plateau_violation, std::abs(g - 1.0));
      if (annulus.level >= 2 || annulus.level <= -2)
        support_violation = std::max(support_violation, std::abs(g));
      range_violation = std::max(range_violation, std::max(-g, g - 1.0));
    }
  }
  const bool bump_ok = support_violation == 0.0 && plateau_violation == 0.0 &&
                       range_violation <= 0.0;
  all = all && bump_ok;
  out.push_back(ctx.summary("multiplier.bump",
                            std::max(support_violation, plateau_violation),
                            0.0, bump_ok, "support,plateau,range"));

  // calibration from the shells covering the bump support
  std::vector<FrequencyAnnulus> calib;
  for (const auto& a : ctx.annuli)
    if (a.level >= -2 && a.level <= 2) calib.push_back(a);
  if (calib.empty()) {
    out.push_back(ctx.summary("multiplier.calibration", 0.0, 0.0, false,
                              "no_shells_in_range"));
    return false;
  }
  const double calibrated =
      calibrate_multiplier_constant(bump, ctx.triplet.p, calib);

  // identity multiplier on the unit shell
  const FrequencyAnnulus* unit = nullptr;
  for (const auto& a : ctx.annuli)
    if (a.level == 0) unit = &a;
  if (unit != nullptr) {
    std::vector<MultiplierSample> samples;
    for (const auto& xi : unit->points) samples.push_back({xi, 1.0});
    const MultiplierVerdict v =
        multiplier_annulus_bound(bump, samples, 0, 1.0, calibrated);
    all = all && v.pass;
    out.push_back(ctx.summary("multiplier.identity", v.sup_abs, v.bound,
                              v.pass, "m=1"));
  }

  // synthetic unbounded multiplier m = 1/rho*: shell suprema grow like b^-k
  bool flagged = false;
  bool growth_ok = true;
  for (const auto& annulus : ctx.annuli) {
    const int k = annulus.level;
    if (k > -1 || k < std::max(ctx.cfg.m_lo, -8)) continue;
    std::vector<MultiplierSample> samples;
    const double rho = std::pow(b, static_cast<double>(k));
    for (const auto& xi : annulus.points) samples.push_back({xi, 1.0 / rho});
    const MultiplierVerdict v =
        multiplier_annulus_bound(bump, samples, k, 1.0, calibrated);
    if (!v.pass) flagged = true;
    const double normalized = v.sup_abs * rho;  // should be 1 within factor b
    if (!(normalized >= 1.0 / b && normalized <= b)) growth_ok = false;
    // informational record; the gate is the flagged+growth summary below
    ReportRecord r = ctx.summary("multiplier.synthetic", v.sup_abs, v.bound,
                                 true, "rho_inverse");
    r.k = k;
    out.push_back(r);
  }
  all = all && flagged && growth_ok;
  out.push_back(ctx.summary("multiplier.flagged", flagged ? 1.0 : 0.0, 1.0,
                            flagged && growth_ok, "unbounded_detected"));
  return all;
}

bool check_rearrange(Context& ctx, std::vector<ReportRecord>& out) {
  const double b = ctx.dilation.det_abs();
  bool all = true;
  Rng rng(Rng::mix(ctx.cfg.annulus_seed, 0x4EA4ull));

  auto random_field = [&](std::size_t n, Rng& r) {
    MeasuredField f;
    f.domain = "lattice";
    f.values.resize(n);
    f.measures.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      f.values[i] = r.uniform(0.0, 2.0);
      f.measures[i] = r.uniform(0.25, 1.75);
    }
    return f;
  };

  // exact power identity
  double worst_power = 0.0;
  for (int rep = 0; rep < 20; ++rep) {
    MeasuredField f = random_field(200, rng);
    for (double lambda : {0.5, 1.0, 2.0, ctx.triplet.p})
      worst_power = std::max(worst_power, power_identity_check(f, lambda));
  }
  const bool power_ok = worst_power == 0.0;
  all = all && power_ok;
  out.push_back(ctx.summary("rearrange.power_identity", worst_power, 0.0,
                            power_ok, "20x4"));

  // exact scaling law on synthetic fields
  double worst_scaling = 0.0;
  for (int rep = 0; rep < 10; ++rep) {
    MeasuredField f = random_field(150, rng);
    for (int k = -2; k <= 2; ++k)
      worst_scaling = std::max(
          worst_scaling, scaling_law_check(f, k, ctx.cfg.epsilon, b));
  }
  const bool scaling_ok = worst_scaling <= 1e-12;
  all = all && scaling_ok;
  out.push_back(ctx.summary("rearrange.scaling_law", worst_scaling, 1e-12,
                            scaling_ok, "k[-2,2]"));

  // subadditivity on shared grids
  long subadd_failures = 0;
  for (int rep = 0; rep < 100; ++rep) {
    MeasuredField f1 = random_field(120, rng);
    MeasuredField f2 = f1;
    MeasuredField f3 = f1;
    for (auto& v : f2.values) v = rng.uniform(0.0, 2.0);
    for (auto& v : f3.values) v = rng.uniform(0.0, 2.0);
    const MeasuredField fields[] = {f1, f2, f3};
    double total = 0.0;
    for (double mu : f1.measures) total += mu;
    const auto [lhs, rhs] =
        subadditivity_check(fields, rng.uniform(0.1, 1.0) * total);
    if (!(lhs <= rhs + 1e-12 * std::max(1.0, rhs))) ++subadd_failures;
  }
  const bool subadd_ok = subadd_failures == 0;
  all = all && subadd_ok;
  out.push_back(ctx.summary("rearrange.subadditivity",
                            static_cast<double>(subadd_failures), 0.0,
                            subadd_ok, "100_tuples"));

  // Hardy-Littlewood pairing
  long pairing_failures = 0;
  for (int rep = 0; rep < 50; ++rep) {
    MeasuredField f = random_field(120, rng);
    MeasuredField g = f;
    for (auto& v : g.values) v = rng.uniform(0.0, 2.0);
    double direct = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
      direct += f.values[i] * g.values[i] * f.measures[i];
    const double paired = pairing_integral(rearrangement(f), rearrangement(g));
    if (!(direct <= paired + 1e-10 * std::max(1.0, paired))) ++pairing_failures;
  }
  const bool pairing_ok = pairing_failures == 0;
  all = all && pairing_ok;
  out.push_back(ctx.summary("rearrange.pairing",
                            static_cast<double>(pairing_failures), 0.0,
                            pairing_ok, "50_pairs"));

  // two-sided envelope of the reciprocal profile
  const int m_cap = std::min(-ctx.cfg.m_lo, ctx.cfg.m_hi);
  if (m_cap >= 2) {
    RearrangementProfile g = rho_reciprocal_profile(ctx.qstar, -m_cap, m_cap);
    const TwoSidedBounds bounds = reciprocal_envelope_bounds(
        g, (b - 1.0) * std::pow(b, -m_cap), std::pow(b, m_cap), 1000);
    const bool env_ok = bounds.c2 / bounds.c1 <= b * b;
    all = all && env_ok;
    out.push_back(ctx.summary("rearrange.reciprocal", bounds.c2 / bounds.c1,
                              b * b, env_ok, "t_times_gstar"));
  }
  return all;
}

bool check_lorentz(Context& ctx, std::vector<ReportRecord>& out) {
  ctx.ensure_unit_sweep();
  const double p = ctx.triplet.p;
  if (!(p < 1.0)) {
    out.push_back(ctx.summary("lorentz", 0.0, 0.0, true, "skipped_p_equals_1"));
    return true;
  }
  const double eps = ctx.cfg.epsilon;
  const double b = ctx.dilation.det_abs();
  bool all = true;

  auto annulus_fields = [&](const SpectraOnAnnuli& s) {
    std::vector<AnnulusField> fields(s.levels.size());
    for (std::size_t a = 0; a < s.levels.size(); ++a) {
      fields[a].rho_star = std::pow(b, static_cast<double>(s.levels[a]));
      fields[a].point_measure = s.point_measures[a];
      fields[a].abs_values.reserve(s.values[a].size());
      for (const auto& v : s.values[a])
        fields[a].abs_values.push_back(std::abs(v));
    }
    return fields;
  };

  const TGrid grid;
  std::vector<double> a34_values(ctx.unit_atoms.size());
  for (std::size_t i = 0; i < ctx.unit_atoms.size(); ++i) {
    const auto fields = annulus_fields(ctx.unit_spectra[i]);
    const LorentzResult res = lorentz_functional(fields, p, eps, grid);
    a34_values[i] = res.a34;
    const bool major_ok =
        res.majorization_min >= -1e-12 * std::max(1.0, res.a34_integral) &&
        res.a34_integral >= res.a32_integral * (1.0 - 1e-12);
    const bool ok = std::isfinite(res.a34) && major_ok;
    all = all && ok;
    out.push_back(ctx.record("lorentz", ctx.unit_atoms[i], res.a34,
                             std::numeric_limits<double>::infinity(), ok,
                             "a34"));
  }
  const double spread =
      median(a34_values) > 0
          ? *std::max_element(a34_values.begin(), a34_values.end()) /
                median(a34_values)
          : 0.0;
  const bool spread_ok = spread <= 10.0;
  all = all && spread_ok;
  out.push_back(ctx.summary("lorentz.spread", spread, 10.0, spread_ok,
                            "max_over_median"));

  // exact invariance under dilation, matched shells and mapped t-grid
  {
    const int j = 2;
    const Atom dil = ctx.unit_atoms.front().dilated(j);
    std::vector<FrequencyAnnulus> mapped;
    for (const auto& a : ctx.annuli)
      mapped.push_back(dilate_annulus(ctx.qstar, a, j));
    const SpectraOnAnnuli moved = compute_spectra(dil, mapped);
    const auto base_fields = annulus_fields(ctx.unit_spectra.front());
    const auto moved_fields = annulus_fields(moved);
    const LorentzResult base = lorentz_functional(base_fields, p, eps, grid);
    const LorentzResult shifted = lorentz_functional(
        moved_fields, p, eps, grid.scaled(std::pow(b, j)));
    const double rel =
        std::abs(shifted.a34 - base.a34) / std::max(base.a34, 1e-300);
    const bool ok = rel <= 1e-6;
    all = all && ok;
    out.push_back(ctx.summary("lorentz.dilation", rel, 1e-6, ok, "j=2"));
  }
  return all;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  validate_config(cfg);
  Context ctx(cfg);
  RunResult result;

  // canonical check order
  const std::vector<std::string> order = known_checks();
  std::vector<std::string> selected;
  for (const auto& name : order)
    if (std::find(cfg.checks.begin(), cfg.checks.end(), name) != cfg.checks.end())
      selected.push_back(name);

  for (const auto& name : selected) {
    bool pass = false;
    if (name == "pointwise") pass = check_pointwise(ctx, result.records);
    else if (name == "two_regime") pass = check_two_regime(ctx, result.records);
    else if (name == "origin") pass = check_origin(ctx, result.records);
    else if (name == "hl") pass = check_hl(ctx, result.records);
    else if (name == "multiplier") pass = check_multiplier(ctx, result.records);
    else if (name == "rearrange") pass = check_rearrange(ctx, result.records);
    else if (name == "lorentz") pass = check_lorentz(ctx, result.records);
    if (!pass) result.failing_checks.push_back(name);
  }

  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    if (cfg.emit_atoms && !ctx.atoms.empty()) {
      const auto atom_dir = cfg.out_dir / "atoms";
      std::filesystem::create_directories(atom_dir);
      for (const auto& atom : ctx.atoms) {
        std::ostringstream name;
        name << "atom_k" << atom.scale() << "_seed" << atom.seed() << ".atm";
        save_atom(atom, atom_dir / name.str());
      }
    }
    write_report(cfg.out_dir / "report.txt", result.records);
  }
  sort_records(result.records);
  return result;
}

}  // namespace aniso
