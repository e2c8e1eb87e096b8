#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sgi/analytic.hpp"
#include "sgi/config_io.hpp"
#include "sgi/constants.hpp"
#include "sgi/core.hpp"
#include "sgi/csv_io.hpp"
#include "sgi/fock.hpp"
#include "sgi/montecarlo.hpp"
#include "sgi/noise.hpp"
#include "sgi/parallel.hpp"
#include "sgi/qfho.hpp"

namespace {

using namespace sgi;

struct CliOpts {
  std::string config_path;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool with_mc = false;
  std::size_t runs = 0;
  std::size_t grid = 0;
  std::string convention_flag;
  bool no_timestamp = false;
};

std::string out_path(const CliOpts& cli, const std::string& name) {
  return (std::filesystem::path(cli.out_dir) / name).string();
}

const char* convention_name(PsdConvention c) {
  return c == PsdConvention::Paper ? "paper" : "wk2pi";
}

double sweep_omega(const AppConfig& cfg) {
  if (cfg.noise && cfg.noise->omega > 0.0) return cfg.noise->omega;
  return cfg.reference_omega();
}

int cmd_derive(const AppConfig& cfg) {
  if (!cfg.physical) throw config_error("derive needs a 'physical' section");
  const TrapParams trap = derive_trap(*cfg.physical);

  std::printf("trap frequency omega        %.6g rad/s\n", trap.omega);
  std::printf("coupling lambda             %.6g J\n", trap.lambda);
  std::printf("coupling u                  %.6g\n", trap.u);
  std::printf("wavepacket width            %.6g m\n", trap.wavepacket_width);
  std::printf("superposition size          %.6g m\n", trap.superposition_size);
  std::printf("equilibrium offset          %.6g m\n", trap.equilibrium);

  if (cfg.temperature) {
    const ThermalState th = thermal_occupation(*cfg.temperature, trap.omega);
    std::printf("thermal occupation n        %.6g\n", th.occupation);
    std::printf("temperature                 %.6g K\n", th.temperature);
  } else if (cfg.occupation) {
    const ThermalState th = thermal_from_occupation(*cfg.occupation, trap.omega);
    std::printf("thermal occupation n        %.6g\n", th.occupation);
    std::printf("temperature                 %.6g K\n", th.temperature);
  }
  return 0;
}

int cmd_transfer(const AppConfig& cfg, const CliOpts& cli) {
  const TransferSection& t = cfg.transfer;
  const std::size_t npts = static_cast<std::size_t>(t.x_max / t.x_step + 0.5) + 1;

  if (t.kind == "dephase") {
    CsvWriter w(out_path(cli, "fig1_transfer.csv"), !cli.no_timestamp);
    w.meta("kind", "dephase");
    w.meta("u", t.u);
    w.header({"x", "transfer"});
    const TransferKind k = TransferKind::dephase(t.u);
    for (std::size_t i = 0; i < npts; ++i) {
      const double x = static_cast<double>(i) * t.x_step;
      w.row({x, transfer_eval(k, x)});
    }
  } else {
    CsvWriter w(out_path(cli, "fig4_transfer.csv"), !cli.no_timestamp);
    w.meta("kind", "mismatch");
    w.header({"x", "transfer_re", "transfer_im"});
    const TransferKind kr = TransferKind::mismatch_re();
    const TransferKind ki = TransferKind::mismatch_im();
    for (std::size_t i = 0; i < npts; ++i) {
      const double x = static_cast<double>(i) * t.x_step;
      w.row({x, transfer_eval(kr, x), transfer_eval(ki, x)});
    }
  }
  return 0;
}

int cmd_psd(const AppConfig& cfg, const CliOpts& cli) {
  double sigma2 = 1e-4;
  double omega0 = 0.0;
  double w = 1000.0;
  if (cfg.noise) {
    if (cfg.noise->sigma2 > 0.0) sigma2 = cfg.noise->sigma2;
    omega0 = cfg.noise->omega0;
    w = sweep_omega(cfg);
  }
  const std::vector<double> gammas{0.1, 1.0, 10.0};

  CsvWriter out(out_path(cli, "fig3_psd.csv"), !cli.no_timestamp);
  out.meta("model", "lorentzian");
  out.meta("sigma2", sigma2);
  out.meta("omega", w);
  out.meta("omega0", omega0);
  out.header({"omega_rad_per_s", "psd_gamma_0.1", "psd_gamma_1", "psd_gamma_10"});

  std::vector<PsdModel> models;
  for (double g : gammas) models.push_back(PsdModel::lorentzian(sigma2, g, omega0, w));
  const double step = w / 500.0;
  for (std::size_t i = 0; i <= 1500; ++i) {
    const double Omega = static_cast<double>(i) * step;
    out.row({Omega, psd_eval(models[0], Omega), psd_eval(models[1], Omega),
             psd_eval(models[2], Omega)});
  }
  return 0;
}

struct McColumn {
  double value = 0.0;
  double se = 0.0;
};

McColumn mc_point(const AppConfig& cfg, double sigma, std::uint64_t seed) {
  const SweepSection& sw = cfg.sweep;
  McConfig m;
  m.runs = sw.mc_runs;
  m.grid_n = sw.mc_grid;
  m.master_seed = seed;
  m.mode = sw.mode;
  m.psd = PsdModel::white(sigma * sigma, sweep_omega(cfg));
  m.u = sw.u;
  m.occupation = sw.mode == NoiseMode::SpinDependent ? sw.occupation : 0.0;
  const McSummary s = run_ensemble(m);

  McColumn col;
  if (sw.mode == NoiseMode::SpinIndependent && cfg.convention == PsdConvention::Paper) {
    // Report on the printed normalization: contrast from the rescaled
    // phase-variance estimate rather than the raw ensemble mean.
    col.value = std::exp(-0.5 * s.gamma_hat.value);
    col.se = 0.5 * col.value * s.gamma_hat.std_error;
  } else {
    col.value = s.contrast.value;
    col.se = s.contrast.std_error;
  }
  return col;
}

int cmd_contrast_sweep(const AppConfig& cfg, const CliOpts& cli) {
  const SweepSection& sw = cfg.sweep;
  const double w = sweep_omega(cfg);
  const bool si = sw.mode == NoiseMode::SpinIndependent;

  std::vector<double> sigmas{0.0};
  const double lo = si ? 1e-5 : 1e-4;
  const double hi = si ? 3e-3 : 1e-1;
  for (std::size_t j = 0; j < sw.points; ++j)
    sigmas.push_back(lo * std::pow(hi / lo, static_cast<double>(j) /
                                                static_cast<double>(sw.points - 1)));

  const std::vector<double> gammas = si ? std::vector<double>{1.0, 10.0, 100.0}
                                        : std::vector<double>{0.01, 1.0, 100.0};
  std::vector<std::string> columns{"sigma", "white"};
  for (double g : gammas) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "lorentz_gamma_%g", g);
    columns.push_back(buf);
  }
  if (cli.with_mc) {
    columns.push_back("mc_white");
    columns.push_back("mc_white_se");
  }

  std::vector<std::vector<double>> rows(sigmas.size());
  parallel_chunks(sigmas.size(), [&](std::size_t a, std::size_t b) {
    for (std::size_t j = a; j < b; ++j) {
      const double s2 = sigmas[j] * sigmas[j];
      std::vector<double> row{sigmas[j]};
      if (si) {
        row.push_back(
            gamma_spin_independent(PsdModel::white(s2, w), sw.u, cfg.convention)
                .contrast);
        for (double g : gammas)
          row.push_back(gamma_spin_independent(PsdModel::lorentzian(s2, g, 0.0, w),
                                               sw.u, cfg.convention)
                            .contrast);
      } else {
        row.push_back(
            contrast_spin_dependent(PsdModel::white(s2, w), sw.occupation).contrast);
        for (double g : gammas)
          row.push_back(
              contrast_spin_dependent(PsdModel::lorentzian(s2, g, 0.0, w), sw.occupation)
                  .contrast);
      }
      rows[j] = row;
    }
  });

  if (cli.with_mc) {
    for (std::size_t j = 0; j < sigmas.size(); ++j) {
      const McColumn col = mc_point(cfg, sigmas[j], cfg.mc.master_seed + j);
      rows[j].push_back(col.value);
      rows[j].push_back(col.se);
    }
  }

  const std::string name = si ? "fig2_contrast.csv" : "fig5_contrast.csv";
  CsvWriter out(out_path(cli, name), !cli.no_timestamp);
  out.meta("mode", si ? "spin_independent" : "spin_dependent");
  out.meta("omega", w);
  out.meta("convention", convention_name(cfg.convention));
  if (si)
    out.meta("u", sw.u);
  else
    out.meta("occupation", sw.occupation);
  if (cli.with_mc) {
    out.meta("mc_runs", static_cast<double>(sw.mc_runs));
    out.meta("mc_estimator",
             si && cfg.convention == PsdConvention::Paper ? "exp(-gamma_hat/2)"
                                                          : "abs(mean_beta)");
  }
  out.header(columns);
  for (const auto& row : rows) out.row(row);

  if (!si) {
    // Companion occupation sweep at fixed sigma = 1e-2.
    CsvWriter occ(out_path(cli, "fig5_contrast_occupation.csv"), !cli.no_timestamp);
    occ.meta("mode", "spin_dependent");
    occ.meta("sigma", 1e-2);
    occ.meta("omega", w);
    occ.header({"occupation", "contrast_white"});
    const PsdModel white = PsdModel::white(1e-4, w);
    for (std::size_t i = 0; i <= 100; ++i) {
      const double n = 10.0 * static_cast<double>(i);
      occ.row({n, contrast_spin_dependent(white, n).contrast});
    }
  }
  return 0;
}

int cmd_mc(const AppConfig& cfg, const CliOpts& cli) {
  if (!cfg.noise) throw config_error("mc needs a 'noise' section");
  const double w = sweep_omega(cfg);

  McConfig m;
  m.runs = cfg.mc.runs;
  m.grid_n = cfg.mc.grid ? cfg.mc.grid : cfg.grid_steps;
  m.master_seed = cfg.mc.master_seed;
  m.mode = cfg.mc.mode;
  m.psd = cfg.noise->build(w);
  m.u = cfg.mc.u;
  m.occupation = cfg.resolved_occupation(0.0);

  std::optional<CsvWriter> runs_csv;
  RunSink sink;
  if (cfg.mc.per_run_csv) {
    runs_csv.emplace(out_path(cli, "mc_runs.csv"), !cli.no_timestamp);
    runs_csv->meta("master_seed", static_cast<double>(m.master_seed));
    runs_csv->meta("mode",
                   m.mode == NoiseMode::SpinIndependent ? "spin_independent"
                                                        : "spin_dependent");
    runs_csv->header({"run", "re_beta", "im_beta", "dphi", "re_dzeta", "im_dzeta"});
    sink = [&runs_csv](std::size_t r, const RunRecord& rec) {
      runs_csv->row({static_cast<double>(r), rec.beta.real(), rec.beta.imag(),
                     rec.dphi, rec.re_dzeta, rec.im_dzeta});
    };
  }

  const McSummary s = run_ensemble(m, sink);

  if (cfg.mc.noise_csv) {
    const TimeGrid grid(m.grid_n, m.psd.omega);
    write_noise_csv(synthesize(m.psd, grid, m.master_seed, 0),
                    out_path(cli, "mc_noise_stream0.csv"));
  }

  const ContrastResult analytic =
      m.mode == NoiseMode::SpinIndependent
          ? gamma_spin_independent(m.psd, m.u, cfg.convention)
          : contrast_spin_dependent(m.psd, m.occupation);
  const CompareReport rep = compare_analytic(s, analytic, m.mode);

  nlohmann::json j = nlohmann::json::parse(mc_summary_to_json(s));
  if (!cli.no_timestamp) j["generated"] = utc_timestamp();
  j["comparison"] = {{"z_gamma", rep.z_gamma},
                     {"z_var_re", rep.z_var_re},
                     {"z_var_im", rep.z_var_im},
                     {"z_contrast", rep.z_contrast},
                     {"pass", rep.pass},
                     {"detail", rep.detail},
                     {"convention", convention_name(cfg.convention)}};
  std::ofstream out(out_path(cli, "mc_summary.json"));
  if (!out) throw config_error("cannot open " + out_path(cli, "mc_summary.json"));
  out << j.dump(2) << "\n";

  std::printf("%s\n", rep.detail.c_str());
  std::printf("%s\n", rep.pass ? "PASS" : "FAIL");
  return rep.pass ? 0 : 1;
}

int cmd_tolerance(const AppConfig& cfg, const CliOpts& cli) {
  const double u = cfg.tolerance.u
                       ? *cfg.tolerance.u
                       : (cfg.physical ? derive_trap(*cfg.physical).u : 100.0);
  const double n = cfg.tolerance.occupation ? *cfg.tolerance.occupation
                                            : cfg.resolved_occupation(100.0);
  const double w = sweep_omega(cfg);
  const double target = cfg.tolerance.target;

  std::function<PsdModel(double)> family;
  std::string model_name = "white";
  if (cfg.noise && cfg.noise->model == "lorentzian") {
    const double g = cfg.noise->gamma;
    const double w0 = cfg.noise->omega0;
    family = [g, w0, w](double s) { return PsdModel::lorentzian(s * s, g, w0, w); };
    char buf[48];
    std::snprintf(buf, sizeof buf, "lorentzian_gamma_%g", g);
    model_name = buf;
  } else if (cfg.noise && cfg.noise->model == "tabulated") {
    throw config_error("tolerance needs a scalable noise model (white or lorentzian)");
  } else {
    family = [w](double s) { return PsdModel::white(s * s, w); };
  }

  ToleranceProblem si{NoiseMode::SpinIndependent, family, u, n};
  ToleranceProblem sd{NoiseMode::SpinDependent, family, u, n};
  const double sigma_si = tolerance_solve(si, target);
  const double sigma_sd = tolerance_solve(sd, target);

  std::printf("model                        %s\n", model_name.c_str());
  std::printf("target contrast              %.6g\n", target);
  std::printf("coupling u                   %.6g\n", u);
  std::printf("thermal occupation n         %.6g\n", n);
  std::printf("sigma_max spin-independent   %.6g\n", sigma_si);
  std::printf("sigma_max spin-dependent     %.6g\n", sigma_sd);

  CsvWriter out(out_path(cli, "tolerance.csv"), !cli.no_timestamp);
  out.meta("model", model_name);
  out.meta("u", u);
  out.meta("occupation", n);
  out.header({"target", "sigma_max_spin_independent", "sigma_max_spin_dependent"});
  out.row({target, sigma_si, sigma_sd});
  return 0;
}

struct OracleCase {
  std::string id;
  NoiseMode mode = NoiseMode::SpinIndependent;
  double u = 0.0;
  std::complex<double> alpha{0.0, 0.0};
  PsdModel psd;
  std::uint64_t seed = 0;
  std::size_t dim = 128;
};

int cmd_oracle(const AppConfig& cfg, const CliOpts& cli) {
  const double w = sweep_omega(cfg);
  const std::size_t N = cfg.oracle.grid;
  const std::size_t substeps = cfg.oracle.substeps;
  const std::size_t dim = cfg.oracle.dim;

  std::vector<OracleCase> cases;
  cases.push_back({"free_evolution", NoiseMode::SpinIndependent, 0.0, {1.5, 0.0},
                   PsdModel::white(0.0, w), 11, 64});
  cases.push_back({"noise_free_drive", NoiseMode::SpinIndependent, 1.0, {0.5, 0.0},
                   PsdModel::white(0.0, w), 12, 64});
  cases.push_back({"white_si", NoiseMode::SpinIndependent, 1.0, {0.8, 0.3},
                   PsdModel::white(1e-4, w), 13, dim});
  cases.push_back({"white_sd", NoiseMode::SpinDependent, 1.0, {0.5, 0.0},
                   PsdModel::white(1e-4, w), 14, dim});
  cases.push_back({"ou_si", NoiseMode::SpinIndependent, 2.0, {2.0, 0.0},
                   PsdModel::lorentzian(1e-2, 1.0, 0.0, w), 15, dim});
  cases.push_back({"ou_sd", NoiseMode::SpinDependent, 2.0, {2.0, 0.0},
                   PsdModel::lorentzian(1e-2, 1.0, 0.0, w), 16, dim});
  cases.push_back({"spectral_si", NoiseMode::SpinIndependent, 1.5, {1.0, 1.0},
                   PsdModel::lorentzian(2.5e-3, 0.5, 2.0 * w, w), 17, dim});

  std::ofstream report(out_path(cli, "oracle_report.txt"));
  if (!report) throw config_error("cannot open " + out_path(cli, "oracle_report.txt"));
  auto emit = [&](const std::string& line) {
    std::printf("%s\n", line.c_str());
    report << line << "\n";
  };

  const TimeGrid grid(N, w);
  bool all_pass = true;
  for (const OracleCase& oc : cases) {
    DriveSpec drive;
    drive.u = oc.u;
    drive.mode = oc.mode;
    drive.noise = synthesize(oc.psd, grid, oc.seed, 0);

    const BranchSolution left = solve_branch_stepwise(drive, Branch::Left, grid);
    const BranchSolution right = solve_branch_stepwise(drive, Branch::Right, grid);
    const OverlapResult ov = overlap(left, right, oc.alpha);
    const std::complex<double> analytic = *ov.overlap_at_alpha;

    auto numeric_at = [&](std::size_t d, std::size_t sub) {
      PropagatorConfig pc;
      pc.dim = d;
      pc.substeps = sub;
      const FockState l = propagate(coherent_state(oc.alpha, d), drive, Branch::Left,
                                    grid, pc);
      const FockState r = propagate(coherent_state(oc.alpha, d), drive, Branch::Right,
                                    grid, pc);
      return overlap_numeric(r, l);
    };

    const std::complex<double> numeric = numeric_at(oc.dim, substeps);
    const std::complex<double> refined = numeric_at(oc.dim * 2, substeps * 2);
    const double diff = std::abs(numeric - analytic);
    const double gate = std::abs(refined - numeric);
    const bool pass = diff <= 1e-5 && gate < 1e-6;
    all_pass = all_pass && pass;

    char line[256];
    std::snprintf(line, sizeof line,
                  "%-18s analytic=(%+.8f%+.8fi) numeric=(%+.8f%+.8fi) "
                  "diff=%.3e gate=%.3e %s",
                  oc.id.c_str(), analytic.real(), analytic.imag(), numeric.real(),
                  numeric.imag(), diff, gate, pass ? "PASS" : "FAIL");
    emit(line);
  }
  emit(all_pass ? "oracle: all cases PASS" : "oracle: FAIL");
  return all_pass ? 0 : 1;
}

int cmd_validate(const AppConfig& cfg, const CliOpts& cli) {
  (void)cli;
  const double w = sweep_omega(cfg);
  int failures = 0;
  auto check = [&failures](const char* name, bool ok, double measured, double bound) {
    std::printf("%s %-42s measured=%.3e bound=%.3e\n", ok ? "ok  " : "FAIL", name,
                measured, bound);
    if (!ok) ++failures;
  };

  {  // transfer-kernel limits against the series patches
    const TransferKind fd = TransferKind::dephase(100.0);
    const double f0 = transfer_eval(fd, 0.0);
    const double f1 = transfer_eval(fd, 1.0);
    const double r0 = std::abs(f0 / (32.0 * M_PI * 1e4) - 1.0);
    const double r1 = std::abs(f1 / (8.0 * M_PI * 1e4) - 1.0);
    check("transfer_limit_F0", r0 < 1e-8, r0, 1e-8);
    check("transfer_limit_F1", r1 < 1e-8, r1, 1e-8);
    const double fr1 = transfer_eval(TransferKind::mismatch_re(), 1.0);
    const double fi1 = transfer_eval(TransferKind::mismatch_im(), 1.0);
    const double rr = std::abs(fr1 / (4.0 * M_PI * M_PI) - 1.0);
    const double ri = std::abs(fi1 / (4.0 * M_PI * M_PI) - 1.0);
    check("transfer_limit_Fre1", rr < 1e-8, rr, 1e-8);
    check("transfer_limit_Fim1", ri < 1e-8, ri, 1e-8);
  }

  {  // white-noise closed forms against quadrature
    const PsdModel white = PsdModel::white(1e-6, w);
    const double gq = psd_transfer_integral(white, TransferKind::dephase(10.0)).value;
    const double rg = std::abs(gq / (24.0 * M_PI * 100.0 * 1e-6) - 1.0);
    check("white_dephasing_quadrature", rg < 1e-6, rg, 1e-6);
    const double vr = psd_transfer_integral(white, TransferKind::mismatch_re()).value;
    const double vi = psd_transfer_integral(white, TransferKind::mismatch_im()).value;
    const double rr = std::abs(vr / (4.0 * M_PI * M_PI * 1e-6) - 1.0);
    const double ri = std::abs(vi / (4.0 * M_PI * M_PI * 1e-6) - 1.0);
    check("white_mismatch_re_quadrature", rr < 1e-6, rr, 1e-6);
    check("white_mismatch_im_quadrature", ri < 1e-6, ri, 1e-6);
  }

  {  // synthesis reproducibility and white variance
    const TimeGrid grid(1024, w);
    const PsdModel white = PsdModel::white(1e-4, w);
    const NoiseSeries a = synthesize(white, grid, 42, 7);
    const NoiseSeries b = synthesize(white, grid, 42, 7);
    bool same = a.values == b.values;
    check("noise_reproducible", same, same ? 0.0 : 1.0, 0.0);

    double var = 0.0;
    for (double v : a.values) var += v * v;
    var /= static_cast<double>(a.values.size());
    const double expected = M_PI * white.sigma2 / (w * grid.dt());
    const double rel = std::abs(var / expected - 1.0);
    const double bound = 5.0 * std::sqrt(2.0 / static_cast<double>(a.values.size()));
    check("white_sample_variance", rel < bound, rel, bound);
  }

  {  // exponential autocorrelation of the Ornstein-Uhlenbeck synthesis
    const TimeGrid grid(256, w);
    const PsdModel ou = PsdModel::lorentzian(1e-2, 1.0, 0.0, w);
    std::vector<NoiseSeries> ens;
    for (std::uint64_t r = 0; r < 256; ++r) ens.push_back(synthesize(ou, grid, 99, r));
    const AutocorrEstimate est = estimate_autocorr(ens, 8);
    const double ref = autocorr(ou, 8.0 * grid.dt()).value;
    const double z = std::abs(est.value - ref) / est.std_error;
    check("ou_autocorr_lag8", z < 5.0, z, 5.0);
  }

  {  // channel silence: displacement in SI mode, phase in SD mode
    McConfig m;
    m.runs = 200;
    m.grid_n = 256;
    m.master_seed = 2024;
    m.mode = NoiseMode::SpinIndependent;
    m.psd = PsdModel::white(1e-4, w);
    m.u = 1.0;
    m.occupation = 0.0;
    const McSummary si = run_ensemble(m);
    check("si_displacement_silent", si.max_abs_dzeta < 1e-8, si.max_abs_dzeta, 1e-8);

    m.mode = NoiseMode::SpinDependent;
    m.occupation = 10.0;
    const McSummary sd = run_ensemble(m);
    const double bound = 1e-8 * (1.0 + m.u * m.u);
    check("sd_phase_silent", sd.max_abs_dphi < bound, sd.max_abs_dphi, bound);
  }

  {  // thermal independence of the spin-independent channel
    McConfig m;
    m.runs = 50;
    m.grid_n = 256;
    m.master_seed = 5150;
    m.mode = NoiseMode::SpinIndependent;
    m.psd = PsdModel::white(1e-4, w);
    m.u = 1.0;
    const IndependenceReport rep = thermal_independence_check(m, 100.0);
    check("thermal_independence", rep.pass, rep.max_delta, 1e-12);
  }

  {  // Monte Carlo vs analytic, both channels
    McConfig m;
    m.runs = 400;
    m.grid_n = 512;
    m.master_seed = 12345;
    m.mode = NoiseMode::SpinIndependent;
    m.psd = PsdModel::white(1e-4, w);
    m.u = 1.0;
    m.occupation = 0.0;
    const McSummary si = run_ensemble(m);
    const CompareReport csi =
        compare_analytic(si, gamma_spin_independent(m.psd, m.u), m.mode);
    check("mc_vs_analytic_si", csi.pass, std::max(csi.z_gamma, csi.z_contrast), 3.0);

    m.mode = NoiseMode::SpinDependent;
    m.master_seed = 777;
    m.psd = PsdModel::white(9e-4, w);
    m.occupation = 10.0;
    const McSummary sd = run_ensemble(m);
    const CompareReport csd =
        compare_analytic(sd, contrast_spin_dependent(m.psd, m.occupation), m.mode);
    const double zmax = std::max({csd.z_var_re, csd.z_var_im, csd.z_contrast});
    check("mc_vs_analytic_sd", csd.pass, zmax, 3.0);
  }

  {  // small Fock cross-check
    const TimeGrid grid(128, w);
    DriveSpec drive;
    drive.u = 1.0;
    drive.mode = NoiseMode::SpinIndependent;
    drive.noise = synthesize(PsdModel::white(1e-4, w), grid, 31, 0);
    const BranchSolution l = solve_branch_stepwise(drive, Branch::Left, grid);
    const BranchSolution r = solve_branch_stepwise(drive, Branch::Right, grid);
    const std::complex<double> analytic = *overlap(l, r, {0.5, 0.0}).overlap_at_alpha;
    PropagatorConfig pc;
    pc.dim = 64;
    pc.substeps = 4;
    const FockState fl =
        propagate(coherent_state({0.5, 0.0}, 64), drive, Branch::Left, grid, pc);
    const FockState fr =
        propagate(coherent_state({0.5, 0.0}, 64), drive, Branch::Right, grid, pc);
    const double diff = std::abs(overlap_numeric(fr, fl) - analytic);
    check("fock_overlap", diff < 1e-5, diff, 1e-5);
  }

  {  // guard rails
    bool threw = false;
    try {
      PsdModel::white(-1.0, w).validate();
    } catch (const config_error&) {
      threw = true;
    }
    check("psd_guard_negative_sigma2", threw, threw ? 0.0 : 1.0, 0.0);
  }

  if (failures == 0)
    std::printf("validate: all checks passed\n");
  else
    std::printf("validate: %d check(s) FAILED\n", failures);
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stern-Gerlach interferometer spin-contrast toolkit"};
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand name

  CliOpts cli;
  app.add_option("--config", cli.config_path, "JSON configuration file");
  app.add_option("--out", cli.out_dir, "output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", cli.seed, "master seed override");
  app.add_flag("--mc", cli.with_mc, "add Monte Carlo columns to sweeps");
  auto* runs_opt = app.add_option("--runs", cli.runs, "Monte Carlo run-count override");
  auto* grid_opt = app.add_option("--grid", cli.grid, "time-grid step override");
  app.add_option("--psd-convention", cli.convention_flag,
                 "PSD normalization, paper|wk2pi")
      ->check(CLI::IsMember({"paper", "wk2pi"}));
  app.add_flag("--no-timestamp", cli.no_timestamp,
               "suppress the generated= comment line");

  auto* c_derive = app.add_subcommand("derive", "derive trap and coupling parameters");
  auto* c_transfer = app.add_subcommand("transfer", "tabulate a transfer kernel");
  auto* c_psd = app.add_subcommand("psd", "tabulate Lorentzian PSD curves");
  auto* c_sweep = app.add_subcommand("contrast-sweep", "contrast vs noise amplitude");
  auto* c_mc = app.add_subcommand("mc", "Monte Carlo ensemble with analytic comparison");
  auto* c_tol = app.add_subcommand("tolerance", "invert the contrast target to sigma_max");
  auto* c_oracle = app.add_subcommand("oracle", "Fock-space propagator cross-check");
  auto* c_validate = app.add_subcommand("validate", "run the property suite");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    AppConfig cfg = cli.config_path.empty() ? AppConfig{} : load_config(cli.config_path);
    cli.seed_set = seed_opt->count() > 0;
    if (cli.seed_set) cfg.mc.master_seed = cli.seed;
    if (runs_opt->count() > 0) {
      if (cli.runs < 2) throw config_error("--runs must be at least 2");
      cfg.mc.runs = cli.runs;
      cfg.sweep.mc_runs = cli.runs;
    }
    if (grid_opt->count() > 0) {
      if (cli.grid < 16) throw config_error("--grid must be at least 16");
      cfg.grid_steps = cli.grid;
      cfg.mc.grid = cli.grid;
      cfg.sweep.mc_grid = cli.grid;
    }
    if (cli.convention_flag == "paper") cfg.convention = PsdConvention::Paper;
    if (cli.convention_flag == "wk2pi") cfg.convention = PsdConvention::Wk2pi;

    std::filesystem::create_directories(cli.out_dir);

    if (*c_derive) return cmd_derive(cfg);
    if (*c_transfer) return cmd_transfer(cfg, cli);
    if (*c_psd) return cmd_psd(cfg, cli);
    if (*c_sweep) return cmd_contrast_sweep(cfg, cli);
    if (*c_mc) return cmd_mc(cfg, cli);
    if (*c_tol) return cmd_tolerance(cfg, cli);
    if (*c_oracle) return cmd_oracle(cfg, cli);
    if (*c_validate) return cmd_validate(cfg, cli);
    return 2;
  } catch (const config_error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
