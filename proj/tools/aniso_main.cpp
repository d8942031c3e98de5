// aniso: config-driven harness for anisotropic dilation structures, sampled
// Hardy-space atoms, and the Fourier-side verification sweeps.
//
// Subcommands: run, norm, atom gen, atom check, ft, verify <check>, rearr,
// report merge. Exit status 0 iff everything asked for passed; 1 for failing
// checks, 2 for config errors, 3 for other failures.

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "aniso/atoms.hpp"
#include "aniso/config.hpp"
#include "aniso/fourier.hpp"
#include "aniso/report.hpp"
#include "aniso/runner.hpp"
#include "aniso/verify.hpp"

namespace {

using namespace aniso;

struct CommonOptions {
  std::string config_path;
  std::string matrix_string;
  std::string out_dir;
  std::string seed_range;
  std::string checks_list;
};

RunConfig load_config(const CommonOptions& opts, bool require_matrix = true) {
  RunConfig cfg;
  bool have_config = false;
  if (!opts.config_path.empty()) {
    cfg = parse_config_file(opts.config_path);
    have_config = true;
  }
  if (!opts.matrix_string.empty()) {
    cfg.matrix = parse_matrix_string(opts.matrix_string);
    if (cfg.center.size() != 0 && cfg.center.size() != cfg.matrix.rows())
      cfg.center.resize(0);
    have_config = true;
  }
  if (!have_config && require_matrix)
    throw ConfigParse("provide --config or --matrix");
  if (!opts.out_dir.empty()) cfg.out_dir = opts.out_dir;
  if (!opts.seed_range.empty()) {
    auto [lo, hi] = parse_seed_range(opts.seed_range);
    cfg.seed_lo = lo;
    cfg.seed_hi = hi;
  }
  if (!opts.checks_list.empty()) cfg.checks = parse_checks_list(opts.checks_list);
  validate_config(cfg);
  return cfg;
}

int run_and_report(const RunConfig& cfg) {
  RunResult result = run(cfg);
  std::size_t passed = 0;
  for (const auto& r : result.records)
    if (r.pass) ++passed;
  std::cout << "records: " << result.records.size() << " pass: " << passed
            << " fail: " << (result.records.size() - passed) << "\n";
  if (!result.all_pass()) {
    std::cerr << "failing checks:";
    for (const auto& name : result.failing_checks) std::cerr << ' ' << name;
    std::cerr << "\n";
    return 1;
  }
  return 0;
}

Eigen::VectorXd parse_vector(const std::vector<double>& values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i)
    v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

int cmd_norm(const CommonOptions& opts, const std::vector<double>& coords) {
  RunConfig cfg = load_config(opts);
  if (static_cast<Eigen::Index>(coords.size()) != cfg.matrix.rows())
    throw ConfigParse("norm expects one coordinate per dimension");
  DilationMatrix d = DilationMatrix::validate(cfg.matrix, cfg.dilation_opts);
  QuasiNorm qn = QuasiNorm::build(d, cfg.quasinorm_opts);
  QuasiNorm qs = QuasiNorm::build(d.adjoint(), cfg.quasinorm_opts);
  Eigen::VectorXd x = parse_vector(coords);
  if (x.isZero(0.0)) {
    std::printf("rho_A=0\nrho_star=0\n");
    return 0;
  }
  const int j = qn.step_index(x);
  const int js = qs.step_index(x);
  std::printf("rho_A=%.17g\nstep_A=%d\nrho_star=%.17g\nstep_star=%d\n",
              qn.rho(x), j, qs.rho(x), js);
  return 0;
}

int cmd_atom_gen(const CommonOptions& opts, const std::string& out_path,
                 bool text, double p, const std::string& q_str,
                 const std::string& s_str, int k, int grid_res,
                 std::uint64_t seed, const std::vector<double>& center) {
  RunConfig cfg = load_config(opts);
  DilationMatrix d = DilationMatrix::validate(cfg.matrix, cfg.dilation_opts);
  QuasiNorm qn = QuasiNorm::build(d, cfg.quasinorm_opts);
  const double q = q_str == "inf" ? std::numeric_limits<double>::infinity()
                                  : std::stod(q_str);
  const int s = s_str == "auto" ? min_moment_order(p, d) : std::stoi(s_str);
  AdmissibleTriplet triplet = AdmissibleTriplet::make(p, q, s, d);
  Eigen::VectorXd x0 = center.empty()
                           ? Eigen::VectorXd::Zero(d.dim()).eval()
                           : parse_vector(center);
  Atom atom = Atom::generate(qn, triplet, x0, k, grid_res, seed);
  save_atom(atom, out_path,
            text ? AtomFileFormat::Text : AtomFileFormat::Binary);
  std::printf("wrote %s (k=%d seed=%llu s=%d)\n", out_path.c_str(), k,
              static_cast<unsigned long long>(seed), s);
  return 0;
}

int cmd_atom_check(const std::string& path) {
  Atom atom = load_atom(path);
  AtomCheckReport rep = check_atom(atom);
  std::printf("support=%s moments=%s size=%s degenerate=%s\n",
              rep.support_ok ? "ok" : "FAIL", rep.moments_ok ? "ok" : "FAIL",
              rep.size_ok ? "ok" : "FAIL", rep.degenerate ? "yes" : "no");
  std::printf("max_moment_residual=%.3e size_residual=%.3e lq_norm=%.12g target=%.12g\n",
              rep.max_moment_residual, rep.size_residual, rep.lq_norm,
              rep.lq_target);
  return rep.pass() ? 0 : 1;
}

int cmd_ft(const std::string& atom_path, const std::string& freq_list) {
  Atom atom = load_atom(atom_path);
  Eigen::MatrixXd rows = parse_matrix_string(freq_list);  // rows = frequencies
  std::vector<Eigen::VectorXd> freqs;
  for (Eigen::Index i = 0; i < rows.rows(); ++i)
    freqs.push_back(rows.row(i).transpose());
  SpectralSamples s = ft(atom, freqs);
  for (std::size_t i = 0; i < freqs.size(); ++i) {
    std::printf("xi=");
    for (Eigen::Index d = 0; d < freqs[i].size(); ++d)
      std::printf(d == 0 ? "%.12g" : ",%.12g", freqs[i][d]);
    std::printf(" re=%.17g im=%.17g\n", s.values[i].real(), s.values[i].imag());
  }
  std::printf("quad_error_bound=%.6e\n", s.quad_error_bound);
  return 0;
}

int cmd_report_merge(const std::string& out_path,
                     const std::vector<std::string>& inputs) {
  std::vector<std::vector<ReportRecord>> parts;
  for (const auto& path : inputs) parts.push_back(read_report(path));
  std::vector<ReportRecord> merged = merge_reports(parts);
  write_report(out_path, merged);
  std::printf("merged %zu records into %s\n", merged.size(), out_path.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"anisotropic dilation / Hardy-atom Fourier verification toolkit"};
  app.require_subcommand(1);

  CommonOptions common;
  std::vector<double> norm_coords;
  std::string atom_out, atom_q = "2", atom_s = "auto", atom_path, freq_list;
  std::vector<double> atom_center;
  bool atom_text = false;
  double atom_p = 0.5;
  int atom_k = 0, atom_grid = 64;
  std::uint64_t atom_seed = 1;
  std::string verify_check;
  std::string merge_out;
  std::vector<std::string> merge_inputs;

  auto add_common = [&](CLI::App* cmd, bool with_run_flags) {
    cmd->add_option("--config", common.config_path, "JSON config file");
    cmd->add_option("--matrix", common.matrix_string,
                    "dilation matrix, rows separated by ';' (\"a,b;c,d\")");
    if (with_run_flags) {
      cmd->add_option("--out", common.out_dir, "output directory");
      cmd->add_option("--seeds", common.seed_range, "seed range a..b");
      cmd->add_option("--checks", common.checks_list,
                      "comma-separated check list");
    }
  };

  CLI::App* run_cmd = app.add_subcommand("run", "run the configured checks");
  add_common(run_cmd, true);

  CLI::App* norm_cmd =
      app.add_subcommand("norm", "print rho_A, rho_*, and step indices");
  add_common(norm_cmd, false);
  norm_cmd->add_option("coords", norm_coords, "point coordinates")->expected(-1);

  CLI::App* atom_cmd = app.add_subcommand("atom", "atom utilities");
  CLI::App* gen_cmd = atom_cmd->add_subcommand("gen", "generate an atom file");
  add_common(gen_cmd, false);
  gen_cmd->add_option("--out", atom_out, "output path")->required();
  gen_cmd->add_flag("--text", atom_text, "write the plain-text variant");
  gen_cmd->add_option("--p", atom_p, "exponent p in (0,1]");
  gen_cmd->add_option("--q", atom_q, "exponent q in [1,inf] or 'inf'");
  gen_cmd->add_option("--s", atom_s, "moment order or 'auto'");
  gen_cmd->add_option("--k", atom_k, "support scale");
  gen_cmd->add_option("--grid-res", atom_grid, "lattice points per axis");
  gen_cmd->add_option("--seed", atom_seed, "generator seed");
  gen_cmd->add_option("--center", atom_center, "support center coordinates");
  CLI::App* check_cmd = atom_cmd->add_subcommand("check", "verify an atom file");
  check_cmd->add_option("file", atom_path, "atom file")->required();

  CLI::App* ft_cmd = app.add_subcommand("ft", "evaluate an atom transform");
  ft_cmd->add_option("--atom", atom_path, "atom file")->required();
  ft_cmd->add_option("--freqs", freq_list,
                     "frequencies, points separated by ';' (\"a,b;c,d\")")
      ->required();

  CLI::App* verify_cmd = app.add_subcommand("verify", "run a single check");
  add_common(verify_cmd, true);
  verify_cmd->add_option("check", verify_check, "check name")->required();

  CLI::App* rearr_cmd =
      app.add_subcommand("rearr", "run the rearrangement checks");
  add_common(rearr_cmd, true);

  CLI::App* report_cmd = app.add_subcommand("report", "report utilities");
  CLI::App* merge_cmd = report_cmd->add_subcommand("merge", "merge reports");
  merge_cmd->add_option("out", merge_out, "merged output path")->required();
  merge_cmd->add_option("inputs", merge_inputs, "input reports")
      ->required()
      ->expected(-1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      return run_and_report(load_config(common));
    }
    if (norm_cmd->parsed()) return cmd_norm(common, norm_coords);
    if (atom_cmd->parsed()) {
      if (gen_cmd->parsed())
        return cmd_atom_gen(common, atom_out, atom_text, atom_p, atom_q,
                            atom_s, atom_k, atom_grid, atom_seed, atom_center);
      if (check_cmd->parsed()) return cmd_atom_check(atom_path);
      std::cerr << "atom requires a subcommand (gen, check)\n";
      return 2;
    }
    if (ft_cmd->parsed()) return cmd_ft(atom_path, freq_list);
    if (verify_cmd->parsed()) {
      RunConfig cfg = load_config(common);
      cfg.checks = parse_checks_list(verify_check);
      return run_and_report(cfg);
    }
    if (rearr_cmd->parsed()) {
      RunConfig cfg = load_config(common);
      cfg.checks = {"rearrange"};
      return run_and_report(cfg);
    }
    if (report_cmd->parsed()) {
      if (merge_cmd->parsed()) return cmd_report_merge(merge_out, merge_inputs);
      std::cerr << "report requires a subcommand (merge)\n";
      return 2;
    }
  } catch (const ConfigParse& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
