#pragma once

#include <complex>
#include <functional>

#include "sgi/noise.hpp"
#include "sgi/qfho.hpp"
#include "sgi/quadrature.hpp"

namespace sgi {

// Dephasing kernel F(x) = (32 u^2/pi) sin^2(pi x)/(x^3-x)^2 and the mismatch
// kernels F_re(x) = 16 sin^2(pi x)/(x^2-1)^2, F_im(x) = 16 sin^2(pi x)/(x-1/x)^2,
// x = Omega/omega. The removable singularities at x = 0 and x = 1 are evaluated
// through stable sinc forms: F(0) = 32 pi u^2, F(1) = 8 pi u^2,
// F_re(0) = F_im(0) = 0, F_re(1) = F_im(1) = 4 pi^2.
struct TransferKind {
  enum class Variant { Dephase, MismatchRe, MismatchIm };
  Variant variant = Variant::Dephase;
  double u = 1.0;  // used by Dephase only

  static TransferKind dephase(double u) { return {Variant::Dephase, u}; }
  static TransferKind mismatch_re() { return {Variant::MismatchRe, 1.0}; }
  static TransferKind mismatch_im() { return {Variant::MismatchIm, 1.0}; }
};

// Two one-sided-PSD normalizations are in common use, differing by whether the
// Wiener-Khinchin transform carries a 1/(2 pi). The transfer functions above
// use the one where white-noise dephasing is Gamma = 24 pi u^2 sigma^2
// ("paper"); the noise synthesizer realizes R(tau) = int S cos(Omega tau) dOmega,
// under which the raw phase variance of sampled realizations is exactly
// 2 pi * Gamma for every PSD ("wk2pi" reporting). Mismatch variances are
// identical under both readings.
enum class PsdConvention { Paper, Wk2pi };

inline constexpr double kDephasingVarianceOverGamma = 2.0 * M_PI;

struct ContrastResult {
  enum class Method { ClosedForm, Quadrature, MonteCarlo };

  double gamma = 0.0;    // dephasing parameter (spin-independent channel)
  double var_re = 0.0;   // E[Re^2 delta zeta]
  double var_im = 0.0;   // E[Im^2 delta zeta]
  std::complex<double> beta{0.0, 0.0};
  double contrast = 0.0;  // |beta|
  Method method = Method::ClosedForm;
  double error_estimate = 0.0;
  PsdConvention convention = PsdConvention::Paper;
};

double transfer_eval(const TransferKind& kind, double x);

// integral_0^inf S(Omega) K(Omega/omega) dOmega by adaptive panels on [0, 40]
// plus a computed oscillatory tail (white PSDs have no spectral decay, so the
// tail is evaluated, not bounded).
quad::Result psd_transfer_integral(const PsdModel& psd, const TransferKind& kind);

// Gamma and contrast exp(-Gamma/2); white closed form, else quadrature.
ContrastResult gamma_spin_independent(const PsdModel& psd, double u,
                                      PsdConvention convention = PsdConvention::Paper);

// E[Re^2 dz], E[Im^2 dz]; white -> (4 pi^2 sigma^2, 4 pi^2 sigma^2) exactly.
ContrastResult mismatch_variances(const PsdModel& psd);

// C = ([1+(1+2n) var_re][1+(1+2n) var_im])^{-1/2}.
ContrastResult contrast_spin_dependent(const PsdModel& psd, double n);

// sigma |-> PSD family for tolerance inversion (sigma is the noise standard
// deviation; the family fixes everything else).
struct ToleranceProblem {
  NoiseMode mode = NoiseMode::SpinIndependent;
  std::function<PsdModel(double sigma)> family;
  double u = 0.0;  // spin-independent channel
  double n = 0.0;  // spin-dependent channel
};

// Bisection on sigma to relative 1e-4 such that the contrast equals target.
double tolerance_solve(const ToleranceProblem& problem, double target,
                       double sigma_lo = 1e-8, double sigma_hi = 1.0);

}  // namespace sgi
