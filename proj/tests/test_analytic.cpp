#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "sgi/analytic.hpp"
#include "sgi/core.hpp"

using namespace sgi;

namespace {
constexpr double kOmega = 1000.0;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }
}  // namespace

TEST_CASE("transfer kernels hit their removable-singularity limits") {
  const double u = 100.0;
  const TransferKind fd = TransferKind::dephase(u);
  const TransferKind fr = TransferKind::mismatch_re();
  const TransferKind fi = TransferKind::mismatch_im();

  CHECK(rel(transfer_eval(fd, 0.0), 32.0 * M_PI * u * u) < 1e-12);
  CHECK(rel(transfer_eval(fd, 1.0), 8.0 * M_PI * u * u) < 1e-12);
  CHECK(transfer_eval(fr, 0.0) == 0.0);
  CHECK(transfer_eval(fi, 0.0) == 0.0);
  CHECK(rel(transfer_eval(fr, 1.0), 4.0 * M_PI * M_PI) < 1e-12);
  CHECK(rel(transfer_eval(fi, 1.0), 4.0 * M_PI * M_PI) < 1e-12);

  // the stable branch joins the direct rational form continuously
  for (double x0 : {0.0, 1.0}) {
    for (double s : {-1.0, 1.0}) {
      const double x = x0 + s * 1e-6;
      if (x < 0.0) continue;
      const double direct_d =
          32.0 * u * u / M_PI *
          std::pow(std::sin(M_PI * x) / (x * x * x - x), 2.0);
      const double direct_r =
          16.0 * std::pow(std::sin(M_PI * x) / (x * x - 1.0), 2.0);
      CHECK(rel(transfer_eval(fd, x), direct_d) < 1e-8);
      CHECK(rel(transfer_eval(fr, x), direct_r) < 1e-8);
      CHECK(rel(transfer_eval(fi, x), x * x * direct_r) < 1e-8);
    }
  }

  CHECK_THROWS_AS(transfer_eval(fd, -0.1), std::invalid_argument);
}

TEST_CASE("generic x values follow the rational closed forms") {
  const TransferKind fd = TransferKind::dephase(2.0);
  const TransferKind fr = TransferKind::mismatch_re();
  const TransferKind fi = TransferKind::mismatch_im();
  for (double x : {0.3, 0.7, 1.4, 2.5, 7.25}) {
    const double s2 = std::pow(std::sin(M_PI * x), 2.0);
    CHECK(rel(transfer_eval(fd, x),
              32.0 * 4.0 / M_PI * s2 / std::pow(x * x * x - x, 2.0)) < 1e-12);
    CHECK(rel(transfer_eval(fr, x), 16.0 * s2 / std::pow(x * x - 1.0, 2.0)) < 1e-12);
    CHECK(rel(transfer_eval(fi, x), 16.0 * x * x * s2 / std::pow(x * x - 1.0, 2.0)) <
          1e-12);
  }
}

TEST_CASE("white-noise quadrature reproduces the closed forms") {
  for (double u : {1.0, 10.0, 100.0}) {
    for (double s2 : {1e-4, 1e-3}) {
      const PsdModel white = PsdModel::white(s2, kOmega);
      const quad::Result g = psd_transfer_integral(white, TransferKind::dephase(u));
      CHECK(g.converged);
      CHECK(rel(g.value, 24.0 * M_PI * u * u * s2) < 1e-6);

      const quad::Result vr = psd_transfer_integral(white, TransferKind::mismatch_re());
      const quad::Result vi = psd_transfer_integral(white, TransferKind::mismatch_im());
      CHECK(rel(vr.value, 4.0 * M_PI * M_PI * s2) < 1e-6);
      CHECK(rel(vi.value, 4.0 * M_PI * M_PI * s2) < 1e-6);
    }
  }
}

TEST_CASE("white-noise contrast results use the closed forms directly") {
  const double u = 100.0;
  const double s2 = 1e-8;
  const PsdModel white = PsdModel::white(s2, kOmega);

  const ContrastResult g = gamma_spin_independent(white, u);
  CHECK(g.method == ContrastResult::Method::ClosedForm);
  CHECK(rel(g.gamma, 24.0 * M_PI * u * u * s2) < 1e-14);
  CHECK(rel(g.contrast, std::exp(-0.5 * g.gamma)) < 1e-14);
  CHECK(g.convention == PsdConvention::Paper);

  const ContrastResult m = mismatch_variances(white);
  CHECK(m.method == ContrastResult::Method::ClosedForm);
  CHECK(rel(m.var_re, 4.0 * M_PI * M_PI * s2) < 1e-14);
  CHECK(rel(m.var_im, 4.0 * M_PI * M_PI * s2) < 1e-14);

  CHECK_THROWS_AS(gamma_spin_independent(white, 0.0), std::invalid_argument);
}

TEST_CASE("raw-variance reporting scales the dephasing channel by 2 pi") {
  const PsdModel white = PsdModel::white(1e-6, kOmega);
  const ContrastResult paper = gamma_spin_independent(white, 10.0, PsdConvention::Paper);
  const ContrastResult raw = gamma_spin_independent(white, 10.0, PsdConvention::Wk2pi);
  CHECK(rel(raw.gamma, kDephasingVarianceOverGamma * paper.gamma) < 1e-13);
  CHECK(raw.convention == PsdConvention::Wk2pi);

  const PsdModel ou = PsdModel::lorentzian(1e-6, 1.0, 0.0, kOmega);
  const ContrastResult paper_ou = gamma_spin_independent(ou, 10.0, PsdConvention::Paper);
  const ContrastResult raw_ou = gamma_spin_independent(ou, 10.0, PsdConvention::Wk2pi);
  CHECK(rel(raw_ou.gamma, 2.0 * M_PI * paper_ou.gamma) < 1e-12);
}

TEST_CASE("centered-Lorentzian channel integrals match frozen references") {
  // references computed with an independent high-order quadrature, u = 1,
  // normalized by u^2 sigma^2 (dephasing) and sigma^2 (mismatch)
  struct Row {
    double gamma, g_ref, vr_ref, vi_ref, tol;
  };
  const Row rows[] = {
      {0.01, 99.23831072, 0.7383939195, 0.2512535729, 1e-6},
      {1.0, 38.72913816, 14.56263573, 10.57010550, 1e-6},
      {10.0, 4.784153423, 2.489174458, 2.409966583, 1e-6},
      {100.0, 0.4799840016, 0.2513023621, 0.2505024817, 3e-6},
  };
  const double s2 = 1e-4;
  for (const Row& row : rows) {
    const PsdModel ou = PsdModel::lorentzian(s2, row.gamma, 0.0, kOmega);
    const ContrastResult g = gamma_spin_independent(ou, 1.0);
    CHECK(g.method == ContrastResult::Method::Quadrature);
    CHECK(rel(g.gamma / s2, row.g_ref) < row.tol);
    const ContrastResult m = mismatch_variances(ou);
    CHECK(rel(m.var_re / s2, row.vr_ref) < row.tol);
    CHECK(rel(m.var_im / s2, row.vi_ref) < row.tol);
  }
}

TEST_CASE("spin-dependent contrast combines both mismatch channels") {
  const double n = 100.0;
  const double s2 = 1e-4;  // sigma = 1e-2

  const PsdModel white = PsdModel::white(s2, kOmega);
  const ContrastResult cw = contrast_spin_dependent(white, n);
  const double v = 4.0 * M_PI * M_PI * s2;
  CHECK(rel(cw.contrast, 1.0 / (1.0 + (1.0 + 2.0 * n) * v)) < 1e-12);
  CHECK(rel(cw.contrast, 0.5575639648) < 1e-9);
  CHECK(cw.beta.real() == doctest::Approx(cw.contrast).epsilon(1e-12));
  CHECK(cw.beta.imag() == 0.0);

  // n = 0 keeps the vacuum floor
  const ContrastResult c0 = contrast_spin_dependent(white, 0.0);
  CHECK(rel(c0.contrast, 1.0 / (1.0 + v)) < 1e-12);

  CHECK_THROWS_AS(contrast_spin_dependent(white, -1.0), std::invalid_argument);
}

TEST_CASE("spin-dependent loss peaks for linewidths near the trap frequency") {
  const double n = 100.0;
  const double s2 = 1e-4;
  const double c_narrow =
      contrast_spin_dependent(PsdModel::lorentzian(s2, 0.01, 0.0, kOmega), n).contrast;
  const double c_mid =
      contrast_spin_dependent(PsdModel::lorentzian(s2, 1.0, 0.0, kOmega), n).contrast;
  const double c_wide =
      contrast_spin_dependent(PsdModel::lorentzian(s2, 100.0, 0.0, kOmega), n).contrast;

  CHECK(rel(c_narrow, 0.990164) < 1e-4);
  CHECK(rel(c_mid, 0.798760) < 1e-4);
  CHECK(rel(c_wide, 0.994982) < 1e-4);
  CHECK(c_mid < c_narrow);
  CHECK(c_mid < c_wide);
}

TEST_CASE("dephasing weakens monotonically as the linewidth grows") {
  double prev = 1e300;
  for (double gamma : {1.0, 10.0, 100.0}) {
    const PsdModel ou = PsdModel::lorentzian(1e-4, gamma, 0.0, kOmega);
    const double g = gamma_spin_independent(ou, 1.0).gamma;
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("tolerance inversion recovers the interferometer noise budget") {
  const double u = 183.356;
  const double n = 100.0;

  ToleranceProblem si;
  si.mode = NoiseMode::SpinIndependent;
  si.u = u;
  si.family = [](double sigma) { return PsdModel::white(sigma * sigma, kOmega); };
  const double sigma_si = tolerance_solve(si, 0.95);
  CHECK(rel(sigma_si, 2.01175e-4) < 1e-3);
  // closed-form inverse: sigma = sqrt(-2 ln C / (24 pi u^2))
  const double exact_si = std::sqrt(-2.0 * std::log(0.95) / (24.0 * M_PI * u * u));
  CHECK(rel(sigma_si, exact_si) < 2e-4);

  ToleranceProblem sd;
  sd.mode = NoiseMode::SpinDependent;
  sd.n = n;
  sd.family = [](double sigma) { return PsdModel::white(sigma * sigma, kOmega); };
  const double sigma_sd = tolerance_solve(sd, 0.95);
  CHECK(rel(sigma_sd, 2.57539e-3) < 1e-3);
  const double exact_sd = std::sqrt((1.0 / 0.95 - 1.0) /
                                    ((1.0 + 2.0 * n) * 4.0 * M_PI * M_PI));
  CHECK(rel(sigma_sd, exact_sd) < 2e-4);

  CHECK_THROWS_AS(tolerance_solve(si, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(tolerance_solve(si, 0.0), std::invalid_argument);

  ToleranceProblem empty;
  CHECK_THROWS_AS(tolerance_solve(empty, 0.95), std::invalid_argument);

  // a target no sigma in the bracket can reach reports a bracketing failure
  CHECK_THROWS_AS(tolerance_solve(si, 0.95, 1e-2, 1.0), std::runtime_error);
}
