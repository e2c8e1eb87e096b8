#pragma once

#include <functional>

namespace sgi::quad {

struct Result {
  double value = 0.0;
  double error = 0.0;  // absolute error estimate
  bool converged = true;
};

// Adaptive Gauss-Kronrod (15-point) on a finite interval.
Result integrate(const std::function<double(double)>& f, double a, double b,
                 double target_abs_error, unsigned max_depth = 15);

// integral_X^inf rho(x) dx for smooth rho ~ c/x^p with p >= 2, via x -> 1/x.
Result tail_smooth(const std::function<double(double)>& rho, double X,
                   double target_abs_error);

// integral_X^inf rho(x) cos(w x) dx, w > 0, rho smooth and decaying (~x^-2 or
// faster). Head up to the first zero of cos, then half-wave partial sums
// accelerated by iterated averaging (Euler transform of the alternating tail).
Result tail_cos(const std::function<double(double)>& rho, double X, double w,
                double target_abs_error);

// integral_X^inf rho(x) sin^2(pi x) dx.
Result tail_sin2(const std::function<double(double)>& rho, double X,
                 double target_abs_error);

}  // namespace sgi::quad
