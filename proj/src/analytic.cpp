#include "sgi/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sgi {

namespace {

// sin(z)/z with a series patch for small |z|.
double sinc(double z) {
  if (std::abs(z) < 1e-4) {
    const double z2 = z * z;
    return 1.0 - z2 / 6.0 * (1.0 - z2 / 20.0);
  }
  return std::sin(z) / z;
}

// Smooth cofactor kappa with K(x) = kappa(x) sin^2(pi x); valid away from
// x in {0, 1}, used only on the tail x >= 2.
double kappa_eval(const TransferKind& kind, double x) {
  switch (kind.variant) {
    case TransferKind::Variant::Dephase: {
      const double p = x * x * x - x;
      return (32.0 * kind.u * kind.u / M_PI) / (p * p);
    }
    case TransferKind::Variant::MismatchRe: {
      const double q = x * x - 1.0;
      return 16.0 / (q * q);
    }
    case TransferKind::Variant::MismatchIm: {
      const double q = x * x - 1.0;
      return 16.0 * x * x / (q * q);
    }
  }
  return 0.0;
}

double table_integral_estimate(const PsdModel& psd) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < psd.table.size(); ++i)
    acc += 0.5 * (psd.table[i].second + psd.table[i + 1].second) *
           (psd.table[i + 1].first - psd.table[i].first);
  return acc;
}

}  // namespace

double transfer_eval(const TransferKind& kind, double x) {
  if (x < 0.0) throw std::invalid_argument("transfer_eval requires x >= 0");
  switch (kind.variant) {
    case TransferKind::Variant::Dephase: {
      const double c = 32.0 * kind.u * kind.u * M_PI;
      if (x < 0.5) {
        const double q = x * x - 1.0;
        const double s = sinc(M_PI * x);
        return c * s * s / (q * q);
      }
      const double s = sinc(M_PI * (x - 1.0));
      const double q = x * (x + 1.0);
      return c * s * s / (q * q);
    }
    case TransferKind::Variant::MismatchRe:
    case TransferKind::Variant::MismatchIm: {
      double v;
      if (std::abs(x - 1.0) < 0.5) {
        const double s = sinc(M_PI * (x - 1.0));
        v = 16.0 * M_PI * M_PI * s * s / ((x + 1.0) * (x + 1.0));
      } else {
        const double sn = std::sin(M_PI * x);
        const double q = x * x - 1.0;
        v = 16.0 * sn * sn / (q * q);
      }
      if (kind.variant == TransferKind::Variant::MismatchIm) v *= x * x;
      return v;
    }
  }
  return 0.0;
}

quad::Result psd_transfer_integral(const PsdModel& psd, const TransferKind& kind) {
  psd.validate();
  const double w = psd.omega;
  const double X = 40.0;

  double s2_scale = psd.sigma2;
  if (psd.kind == PsdModel::Kind::Tabulated) s2_scale = table_integral_estimate(psd);
  const double kscale = (kind.variant == TransferKind::Variant::Dephase)
                            ? 32.0 * kind.u * kind.u
                            : 16.0;
  const double target_abs = 1e-10 * std::max(kscale * s2_scale, 1e-300);

  auto f = [&](double x) { return w * psd_eval(psd, w * x) * transfer_eval(kind, x); };

  std::vector<double> cuts{0.0, 0.5, 1.0, 1.5, 2.0};
  if (psd.kind == PsdModel::Kind::Lorentzian) {
    const double x0 = psd.omega0 / w;
    for (double c : {x0 - 5.0 * psd.gamma, x0, x0 + 5.0 * psd.gamma})
      if (c > 0.0 && c < X) cuts.push_back(c);
  }
  cuts.push_back(X);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  quad::Result total;
  const double panel_tol = target_abs / (2.0 * static_cast<double>(cuts.size()));
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    quad::Result r = quad::integrate(f, cuts[i], cuts[i + 1], panel_tol, 17);
    total.value += r.value;
    total.error += r.error;
    total.converged = total.converged && r.converged;
  }

  if (psd.kind == PsdModel::Kind::Tabulated) {
    const double xmax = psd.table.back().first / w;
    if (xmax > X) {
      quad::Result r = quad::integrate(f, X, xmax, target_abs / 2.0, 17);
      total.value += r.value;
      total.error += r.error;
      total.converged = total.converged && r.converged;
    }
  } else if (s2_scale > 0.0) {
    auto rho = [&](double x) { return w * psd_eval(psd, w * x) * kappa_eval(kind, x); };
    quad::Result tail = quad::tail_sin2(rho, X, target_abs / 2.0);
    total.value += tail.value;
    total.error += tail.error;
    total.converged = total.converged && tail.converged;
  }
  return total;
}

ContrastResult gamma_spin_independent(const PsdModel& psd, double u,
                                      PsdConvention convention) {
  if (!(u > 0.0)) throw std::invalid_argument("u must be positive");
  ContrastResult r;
  r.convention = convention;
  if (psd.kind == PsdModel::Kind::White) {
    r.gamma = 24.0 * M_PI * u * u * psd.sigma2;
    r.method = ContrastResult::Method::ClosedForm;
  } else {
    quad::Result q = psd_transfer_integral(psd, TransferKind::dephase(u));
    r.gamma = q.value;
    r.error_estimate = q.error;
    r.method = ContrastResult::Method::Quadrature;
  }
  if (convention == PsdConvention::Wk2pi) {
    r.gamma *= kDephasingVarianceOverGamma;
    r.error_estimate *= kDephasingVarianceOverGamma;
  }
  r.contrast = std::exp(-0.5 * r.gamma);
  r.beta = r.contrast;
  return r;
}

ContrastResult mismatch_variances(const PsdModel& psd) {
  ContrastResult r;
  if (psd.kind == PsdModel::Kind::White) {
    r.var_re = 4.0 * M_PI * M_PI * psd.sigma2;
    r.var_im = r.var_re;
    r.method = ContrastResult::Method::ClosedForm;
    return r;
  }
  quad::Result qr = psd_transfer_integral(psd, TransferKind::mismatch_re());
  quad::Result qi = psd_transfer_integral(psd, TransferKind::mismatch_im());
  r.var_re = qr.value;
  r.var_im = qi.value;
  r.error_estimate = qr.error + qi.error;
  r.method = ContrastResult::Method::Quadrature;
  return r;
}

ContrastResult contrast_spin_dependent(const PsdModel& psd, double n) {
  if (n < 0.0) throw std::invalid_argument("occupation must be non-negative");
  ContrastResult r = mismatch_variances(psd);
  const double q = 1.0 + 2.0 * n;
  const double a = 1.0 + q * r.var_re;
  const double b = 1.0 + q * r.var_im;
  r.contrast = 1.0 / std::sqrt(a * b);
  r.beta = r.contrast;
  r.error_estimate = 0.5 * r.contrast * q * r.error_estimate;
  return r;
}

double tolerance_solve(const ToleranceProblem& problem, double target,
                       double sigma_lo, double sigma_hi) {
  if (!(target > 0.0) || !(target < 1.0))
    throw std::invalid_argument("target contrast must lie in (0, 1)");
  if (!problem.family) throw std::invalid_argument("tolerance problem needs a PSD family");

  auto contrast_at = [&](double sigma) {
    const PsdModel psd = problem.family(sigma);
    if (problem.mode == NoiseMode::SpinIndependent)
      return gamma_spin_independent(psd, problem.u).contrast;
    return contrast_spin_dependent(psd, problem.n).contrast;
  };

  double c_lo = contrast_at(sigma_lo);
  double c_hi = contrast_at(sigma_hi);
  if (!(c_lo >= target && target >= c_hi))
    throw std::runtime_error("target contrast not bracketed on the sigma interval");

  double lo = sigma_lo, hi = sigma_hi;
  while ((hi - lo) > 1e-4 * 0.5 * (hi + lo)) {
    const double mid = std::sqrt(lo * hi);  // sigma spans decades; bisect in log
    if (contrast_at(mid) >= target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace sgi
