#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>

#include "sgi/analytic.hpp"
#include "sgi/qfho.hpp"

namespace sgi {

struct McConfig {
  std::size_t runs = 0;
  std::size_t grid_n = 0;  // time steps per run
  std::uint64_t master_seed = 0;
  NoiseMode mode = NoiseMode::SpinIndependent;
  PsdModel psd;
  double u = 0.0;
  double occupation = 0.0;

  void validate() const;
};

struct RunRecord {
  std::complex<double> beta{0.0, 0.0};  // thermal overlap of this realization
  double dphi = 0.0;                    // delta_phi + bch_phase
  double re_dzeta = 0.0;
  double im_dzeta = 0.0;
};

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct McSummary {
  McConfig config;

  std::complex<double> mean_beta{0.0, 0.0};
  double mean_beta_se_re = 0.0;
  double mean_beta_se_im = 0.0;
  Estimate contrast;       // |mean_beta|
  Estimate dphi_variance;  // raw sample variance of the relative phase
  Estimate gamma_hat;      // dphi_variance / (2 pi), comparable to the analytic Gamma
  Estimate mean_re2_dzeta;
  Estimate mean_im2_dzeta;

  // Channel silence diagnostics: the displacement mismatch cancels in the
  // spin-independent mode, the relative phase in the spin-dependent mode.
  double max_abs_dzeta = 0.0;
  double max_abs_dphi = 0.0;
};

using RunSink = std::function<void(std::size_t run, const RunRecord&)>;

// Ensemble over noise realizations; run r uses RNG stream r of master_seed, so
// the result is bit-identical regardless of thread count. The sink, if given,
// is invoked in run-index order after the ensemble completes.
McSummary run_ensemble(const McConfig& cfg, const RunSink& sink = nullptr);

struct CompareReport {
  double z_gamma = 0.0;
  double z_var_re = 0.0;
  double z_var_im = 0.0;
  double z_contrast = 0.0;
  bool pass = false;
  std::string detail;
};

// Z-tests of the ensemble against the analytic prediction for the same
// channel; every applicable |z| must be <= 3. Throws std::invalid_argument if
// the analytic result belongs to the other channel or the modes disagree.
CompareReport compare_analytic(const McSummary& mc, const ContrastResult& analytic,
                               NoiseMode mode);

struct IndependenceReport {
  double max_delta = 0.0;  // max over runs of |beta(n=0) - beta(n=n1)|
  bool pass = false;
};

// Spin-independent contrast must not depend on the thermal occupation; checks
// paired realizations (same stream) at n = 0 and n = n1 against 1e-12.
// Spin-dependent configs are rejected.
IndependenceReport thermal_independence_check(const McConfig& cfg, double n1);

std::string mc_summary_to_json(const McSummary& summary);

}  // namespace sgi
