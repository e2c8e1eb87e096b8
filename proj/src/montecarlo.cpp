#include "sgi/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <vector>

#include "json.hpp"

#include "sgi/parallel.hpp"

namespace sgi {

namespace {

RunRecord evaluate_run(const McConfig& cfg, const TimeGrid& grid, std::size_t r) {
  DriveSpec drive;
  drive.u = cfg.u;
  drive.mode = cfg.mode;
  drive.noise = synthesize(cfg.psd, grid, cfg.master_seed, r);
  const BranchSolution left = solve_branch(drive, Branch::Left, grid);
  const BranchSolution right = solve_branch(drive, Branch::Right, grid);
  const OverlapResult ov = thermal_beta(left, right, cfg.occupation);

  RunRecord rec;
  rec.beta = ov.beta_thermal;
  rec.dphi = ov.delta_phi + ov.bch_phase;
  rec.re_dzeta = ov.delta_zeta.real();
  rec.im_dzeta = ov.delta_zeta.imag();
  if (cfg.mode == NoiseMode::SpinDependent &&
      std::abs(rec.dphi) > 1e-8 * (1.0 + cfg.u * cfg.u))
    throw std::runtime_error("spin-dependent drive produced a relative phase");
  return rec;
}

double safe_z(double diff, double se) {
  if (se > 0.0) return std::abs(diff) / se;
  return std::abs(diff) <= 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
}

const char* mode_name(NoiseMode m) {
  return m == NoiseMode::SpinIndependent ? "spin_independent" : "spin_dependent";
}

}  // namespace

void McConfig::validate() const {
  if (runs < 2) throw config_error("Monte Carlo needs at least 2 runs");
  if (grid_n < 16) throw config_error("Monte Carlo grid needs at least 16 steps");
  psd.validate();
  if (!(u > 0.0)) throw config_error("drive amplitude u must be positive");
  if (occupation < 0.0) throw config_error("thermal occupation must be non-negative");
}

McSummary run_ensemble(const McConfig& cfg, const RunSink& sink) {
  cfg.validate();
  const TimeGrid grid(cfg.grid_n, cfg.psd.omega);
  const std::size_t R = cfg.runs;

  std::vector<RunRecord> records(R);
  parallel_chunks(R, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) records[r] = evaluate_run(cfg, grid, r);
  });

  McSummary s;
  s.config = cfg;

  std::complex<double> beta_sum{0.0, 0.0};
  double dphi_sum = 0.0, re2_sum = 0.0, im2_sum = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    const RunRecord& rec = records[r];
    if (sink) sink(r, rec);
    beta_sum += rec.beta;
    dphi_sum += rec.dphi;
    re2_sum += rec.re_dzeta * rec.re_dzeta;
    im2_sum += rec.im_dzeta * rec.im_dzeta;
    s.max_abs_dzeta = std::max(s.max_abs_dzeta,
                               std::hypot(rec.re_dzeta, rec.im_dzeta));
    s.max_abs_dphi = std::max(s.max_abs_dphi, std::abs(rec.dphi));
  }
  const double Rd = static_cast<double>(R);
  s.mean_beta = beta_sum / Rd;
  const double dphi_mean = dphi_sum / Rd;
  s.mean_re2_dzeta.value = re2_sum / Rd;
  s.mean_im2_dzeta.value = im2_sum / Rd;

  double var_re_beta = 0.0, var_im_beta = 0.0, var_dphi = 0.0;
  double var_re2 = 0.0, var_im2 = 0.0;
  for (const RunRecord& rec : records) {
    const double dre = rec.beta.real() - s.mean_beta.real();
    const double dim = rec.beta.imag() - s.mean_beta.imag();
    var_re_beta += dre * dre;
    var_im_beta += dim * dim;
    const double dp = rec.dphi - dphi_mean;
    var_dphi += dp * dp;
    const double d2r = rec.re_dzeta * rec.re_dzeta - s.mean_re2_dzeta.value;
    const double d2i = rec.im_dzeta * rec.im_dzeta - s.mean_im2_dzeta.value;
    var_re2 += d2r * d2r;
    var_im2 += d2i * d2i;
  }
  const double denom = Rd - 1.0;
  var_re_beta /= denom;
  var_im_beta /= denom;
  var_dphi /= denom;
  var_re2 /= denom;
  var_im2 /= denom;

  s.mean_beta_se_re = std::sqrt(var_re_beta / Rd);
  s.mean_beta_se_im = std::sqrt(var_im_beta / Rd);

  s.contrast.value = std::abs(s.mean_beta);
  if (s.contrast.value > 0.0) {
    const double re = s.mean_beta.real(), im = s.mean_beta.imag();
    s.contrast.std_error = std::sqrt(re * re * var_re_beta + im * im * var_im_beta) /
                           (s.contrast.value * std::sqrt(Rd));
  } else {
    s.contrast.std_error = std::sqrt((var_re_beta + var_im_beta) / Rd);
  }

  s.dphi_variance.value = var_dphi;
  s.dphi_variance.std_error = var_dphi * std::sqrt(2.0 / denom);
  s.gamma_hat.value = s.dphi_variance.value / kDephasingVarianceOverGamma;
  s.gamma_hat.std_error = s.dphi_variance.std_error / kDephasingVarianceOverGamma;

  s.mean_re2_dzeta.std_error = std::sqrt(var_re2 / Rd);
  s.mean_im2_dzeta.std_error = std::sqrt(var_im2 / Rd);
  return s;
}

CompareReport compare_analytic(const McSummary& mc, const ContrastResult& analytic,
                               NoiseMode mode) {
  if (mc.config.mode != mode)
    throw std::invalid_argument("ensemble mode does not match the requested comparison");

  CompareReport rep;
  char line[256];
  if (mode == NoiseMode::SpinIndependent) {
    if (analytic.var_re != 0.0 || analytic.var_im != 0.0)
      throw std::invalid_argument(
          "analytic result carries mismatch variances; expected a dephasing result");
    double gamma_ref = analytic.gamma;
    if (analytic.convention == PsdConvention::Wk2pi)
      gamma_ref /= kDephasingVarianceOverGamma;
    rep.z_gamma = safe_z(mc.gamma_hat.value - gamma_ref, mc.gamma_hat.std_error);
    const double expected_contrast = std::exp(-M_PI * gamma_ref);
    rep.z_contrast = safe_z(mc.contrast.value - expected_contrast,
                            mc.contrast.std_error);
    std::snprintf(line, sizeof line,
                  "gamma_hat=%.6e ref=%.6e z=%.2f | contrast=%.6e ref=%.6e z=%.2f",
                  mc.gamma_hat.value, gamma_ref, rep.z_gamma, mc.contrast.value,
                  expected_contrast, rep.z_contrast);
    rep.detail = line;
    rep.pass = rep.z_gamma <= 3.0 && rep.z_contrast <= 3.0;
  } else {
    if (analytic.gamma != 0.0)
      throw std::invalid_argument(
          "analytic result carries a dephasing rate; expected a mismatch result");
    rep.z_var_re = safe_z(mc.mean_re2_dzeta.value - analytic.var_re,
                          mc.mean_re2_dzeta.std_error);
    rep.z_var_im = safe_z(mc.mean_im2_dzeta.value - analytic.var_im,
                          mc.mean_im2_dzeta.std_error);
    rep.z_contrast = safe_z(mc.contrast.value - analytic.contrast,
                            mc.contrast.std_error);
    std::snprintf(line, sizeof line,
                  "var_re=%.6e ref=%.6e z=%.2f | var_im=%.6e ref=%.6e z=%.2f | "
                  "contrast=%.6e ref=%.6e z=%.2f",
                  mc.mean_re2_dzeta.value, analytic.var_re, rep.z_var_re,
                  mc.mean_im2_dzeta.value, analytic.var_im, rep.z_var_im,
                  mc.contrast.value, analytic.contrast, rep.z_contrast);
    rep.detail = line;
    rep.pass = rep.z_var_re <= 3.0 && rep.z_var_im <= 3.0 && rep.z_contrast <= 3.0;
  }
  return rep;
}

IndependenceReport thermal_independence_check(const McConfig& cfg, double n1) {
  if (cfg.mode == NoiseMode::SpinDependent)
    throw std::invalid_argument(
        "thermal independence holds only for the spin-independent channel");
  if (n1 < 0.0) throw std::invalid_argument("occupation must be non-negative");
  cfg.validate();

  const TimeGrid grid(cfg.grid_n, cfg.psd.omega);
  std::vector<double> deltas(cfg.runs);
  parallel_chunks(cfg.runs, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t r = lo; r < hi; ++r) {
      DriveSpec drive;
      drive.u = cfg.u;
      drive.mode = cfg.mode;
      drive.noise = synthesize(cfg.psd, grid, cfg.master_seed, r);
      const BranchSolution left = solve_branch(drive, Branch::Left, grid);
      const BranchSolution right = solve_branch(drive, Branch::Right, grid);
      const std::complex<double> b0 = thermal_beta(left, right, 0.0).beta_thermal;
      const std::complex<double> b1 = thermal_beta(left, right, n1).beta_thermal;
      deltas[r] = std::abs(b0 - b1);
    }
  });

  IndependenceReport rep;
  for (double d : deltas) rep.max_delta = std::max(rep.max_delta, d);
  rep.pass = rep.max_delta < 1e-12;
  return rep;
}

std::string mc_summary_to_json(const McSummary& s) {
  using nlohmann::json;
  json j;
  j["schema"] = "sgcontrast.mc_summary.v1";
  j["runs"] = s.config.runs;
  j["grid_steps"] = s.config.grid_n;
  j["master_seed"] = s.config.master_seed;
  j["mode"] = mode_name(s.config.mode);
  j["u"] = s.config.u;
  j["occupation"] = s.config.occupation;

  json psd;
  switch (s.config.psd.kind) {
    case PsdModel::Kind::White:
      psd["model"] = "white";
      psd["sigma2"] = s.config.psd.sigma2;
      break;
    case PsdModel::Kind::Lorentzian:
      psd["model"] = "lorentzian";
      psd["sigma2"] = s.config.psd.sigma2;
      psd["gamma"] = s.config.psd.gamma;
      psd["omega0"] = s.config.psd.omega0;
      break;
    case PsdModel::Kind::Tabulated:
      psd["model"] = "tabulated";
      psd["points"] = s.config.psd.table.size();
      break;
  }
  psd["omega"] = s.config.psd.omega;
  j["psd"] = psd;

  j["mean_beta"] = {{"re", s.mean_beta.real()},
                    {"im", s.mean_beta.imag()},
                    {"se_re", s.mean_beta_se_re},
                    {"se_im", s.mean_beta_se_im}};
  auto est = [](const Estimate& e) {
    return nlohmann::json{{"value", e.value}, {"se", e.std_error}};
  };
  j["contrast"] = est(s.contrast);
  j["dphi_variance"] = est(s.dphi_variance);
  j["gamma_hat"] = est(s.gamma_hat);
  j["mean_re2_dzeta"] = est(s.mean_re2_dzeta);
  j["mean_im2_dzeta"] = est(s.mean_im2_dzeta);
  j["diagnostics"] = {{"max_abs_dzeta", s.max_abs_dzeta},
                      {"max_abs_dphi", s.max_abs_dphi}};
  return j.dump(2) + "\n";
}

}  // namespace sgi
