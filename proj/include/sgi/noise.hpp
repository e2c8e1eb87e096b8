#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sgi/core.hpp"

namespace sgi {

// One-sided PSD of the dimensionless noise du(t). Sampling convention:
// R(tau) = integral_0^inf S(Omega) cos(Omega tau) dOmega, so the Lorentzian
// model has R(0) = sigma^2 exactly and white noise is the delta-correlated
// limit with weight pi sigma^2 / omega.
struct PsdModel {
  enum class Kind { White, Lorentzian, Tabulated };

  Kind kind = Kind::White;
  double omega = 0.0;   // reference trap frequency, rad/s
  double sigma2 = 0.0;  // process variance (White, Lorentzian)
  double gamma = 0.0;   // Lorentzian linewidth in units of omega
  double omega0 = 0.0;  // Lorentzian center, rad/s
  std::vector<std::pair<double, double>> table;  // (Omega rad/s, S 1/(rad/s)), Omega increasing

  static PsdModel white(double sigma2, double omega);
  static PsdModel lorentzian(double sigma2, double gamma, double omega0, double omega);
  static PsdModel tabulated(std::vector<std::pair<double, double>> table, double omega);

  void validate() const;
  bool same_model(const PsdModel& other) const;
};

// Sampled noise realization on the grid nodes; regenerating from
// (model, grid, seed, stream) is bit-identical.
struct NoiseSeries {
  TimeGrid grid{2, 1.0};  // placeholder grid until synthesis fills it in
  std::vector<double> values;  // length grid.nodes()
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

struct AutocorrValue {
  double value = 0.0;
  // White noise is delta-correlated; value then holds the delta weight
  // pi sigma^2 / omega instead of a pointwise R(tau).
  bool delta_weight = false;
};

struct AutocorrEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// S(Omega) for Omega >= 0.
double psd_eval(const PsdModel& model, double Omega);

AutocorrValue autocorr(const PsdModel& model, double tau);

// Numeric cosine transform of psd_eval; validation path for the closed forms.
double autocorr_numeric(const PsdModel& model, double tau);

NoiseSeries synthesize(const PsdModel& model, const TimeGrid& grid,
                       std::uint64_t seed, std::uint64_t stream = 0);

// Unbiased cross-realization estimator of R(lag * dt) with standard error.
AutocorrEstimate estimate_autocorr(const std::vector<NoiseSeries>& ensemble,
                                   std::size_t lag);

// Audit export, columns t,du.
void write_noise_csv(const NoiseSeries& series, const std::string& path);

}  // namespace sgi
