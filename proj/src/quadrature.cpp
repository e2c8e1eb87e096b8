#include "sgi/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

namespace sgi::quad {

namespace {
using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
}

Result integrate(const std::function<double(double)>& f, double a, double b,
                 double target_abs_error, unsigned max_depth) {
  Result r;
  if (a == b) return r;
  double err = 0.0;
  r.value = GK::integrate(f, a, b, max_depth, 1e-12, &err);
  r.error = err;
  r.converged = err <= target_abs_error;
  return r;
}

Result tail_smooth(const std::function<double(double)>& rho, double X,
                   double target_abs_error) {
  auto g = [&rho](double y) {
    const double x = 1.0 / y;
    return rho(x) * x * x;
  };
  return integrate(g, 0.0, 1.0 / X, target_abs_error);
}

Result tail_cos(const std::function<double(double)>& rho, double X, double w,
                double target_abs_error) {
  Result out;
  if (!(w > 0.0)) throw std::invalid_argument("tail_cos requires w > 0");

  // First zero of cos(w x) at or beyond X.
  const double k = std::ceil((w * X - M_PI_2) / M_PI);
  const double b0 = (M_PI_2 + std::max(0.0, k) * M_PI) / w;
  auto f = [&rho, w](double x) { return rho(x) * std::cos(w * x); };

  const double panel_tol = target_abs_error / 16.0;
  Result head = integrate(f, X, b0, panel_tol);
  out.error = head.error;

  // Half-wave panels beyond b0 alternate in sign; accelerate the partial sums
  // by iterated averaging.
  const double h = M_PI / w;
  constexpr int kMaxTerms = 48;
  std::vector<double> partial;
  partial.reserve(kMaxTerms);
  double running = 0.0;
  double best = 0.0, prev_best = 0.0;
  bool have_prev = false;
  for (int j = 0; j < kMaxTerms; ++j) {
    const double a = b0 + j * h;
    Result term = integrate(f, a, a + h, panel_tol);
    out.error += term.error;
    running += term.value;
    partial.push_back(running);

    std::vector<double> row = partial;
    while (row.size() > 1) {
      for (std::size_t i = 0; i + 1 < row.size(); ++i) row[i] = 0.5 * (row[i] + row[i + 1]);
      row.pop_back();
    }
    prev_best = best;
    best = row.front();
    if (have_prev && std::abs(best - prev_best) < 0.25 * target_abs_error && j >= 6) {
      out.error += std::abs(best - prev_best);
      out.value = head.value + best;
      out.converged = out.error <= target_abs_error;
      return out;
    }
    have_prev = true;
  }
  out.value = head.value + best;
  out.error += std::abs(best - prev_best);
  out.converged = out.error <= target_abs_error;
  return out;
}

Result tail_sin2(const std::function<double(double)>& rho, double X,
                 double target_abs_error) {
  Result smooth = tail_smooth(rho, X, target_abs_error / 2.0);
  Result osc = tail_cos(rho, X, 2.0 * M_PI, target_abs_error / 2.0);
  Result out;
  out.value = 0.5 * smooth.value - 0.5 * osc.value;
  out.error = 0.5 * smooth.error + 0.5 * osc.error;
  out.converged = out.error <= target_abs_error;
  return out;
}

}  // namespace sgi::quad
