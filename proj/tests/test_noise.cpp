#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "sgi/noise.hpp"

using namespace sgi;

namespace {
constexpr double kOmega = 1000.0;
}

TEST_CASE("psd_eval matches the model closed forms") {
  const PsdModel white = PsdModel::white(1e-4, kOmega);
  CHECK(psd_eval(white, 0.0) == doctest::Approx(1e-7).epsilon(1e-14));
  CHECK(psd_eval(white, 5e4) == doctest::Approx(1e-7).epsilon(1e-14));

  const PsdModel lor = PsdModel::lorentzian(1e-4, 0.1, 0.0, kOmega);
  CHECK(psd_eval(lor, 0.0) == doctest::Approx(6.366197724e-7).epsilon(1e-9));
  // half maximum at Omega = gamma * omega
  CHECK(psd_eval(lor, 0.1 * kOmega) ==
        doctest::Approx(0.5 * psd_eval(lor, 0.0)).epsilon(1e-12));

  // peak value scales as 1/gamma at the center
  const PsdModel lor10 = PsdModel::lorentzian(1e-4, 10.0, 0.0, kOmega);
  CHECK(psd_eval(lor, 0.0) ==
        doctest::Approx(100.0 * psd_eval(lor10, 0.0)).epsilon(1e-12));
}

TEST_CASE("tabulated psd interpolates linearly and vanishes outside support") {
  const std::vector<std::pair<double, double>> table{
      {100.0, 1e-7}, {200.0, 3e-7}, {400.0, 0.0}};
  const PsdModel tab = PsdModel::tabulated(table, kOmega);
  CHECK(psd_eval(tab, 150.0) == doctest::Approx(2e-7).epsilon(1e-12));
  CHECK(psd_eval(tab, 300.0) == doctest::Approx(1.5e-7).epsilon(1e-12));
  CHECK(psd_eval(tab, 50.0) == 0.0);
  CHECK(psd_eval(tab, 500.0) == 0.0);
}

TEST_CASE("autocorrelation closed forms") {
  const PsdModel white = PsdModel::white(1e-4, kOmega);
  const AutocorrValue delta = autocorr(white, 0.5);
  CHECK(delta.delta_weight);
  CHECK(delta.value == doctest::Approx(M_PI * 1e-4 / kOmega).epsilon(1e-14));

  const PsdModel ou = PsdModel::lorentzian(1e-4, 2.0, 0.0, kOmega);
  CHECK_FALSE(autocorr(ou, 0.0).delta_weight);
  CHECK(autocorr(ou, 0.0).value == doctest::Approx(1e-4).epsilon(1e-12));
  const double tau = 7.7e-4;  // in seconds; gamma omega tau = 1.54
  CHECK(autocorr(ou, tau).value ==
        doctest::Approx(1e-4 * std::exp(-2.0 * kOmega * tau)).epsilon(1e-12));
}

TEST_CASE("numeric cosine transform agrees with the exponential closed form") {
  for (double gamma : {0.1, 1.0, 10.0}) {
    const PsdModel ou = PsdModel::lorentzian(1e-4, gamma, 0.0, kOmega);
    for (double wtau : {0.0, 0.3, 2.0}) {
      const double tau = wtau / kOmega;
      const double ref = 1e-4 * std::exp(-gamma * kOmega * tau);
      CHECK(autocorr_numeric(ou, tau) == doctest::Approx(ref).epsilon(1e-6));
    }
  }
  CHECK_THROWS(autocorr_numeric(PsdModel::white(1e-4, kOmega), 0.1));
}

TEST_CASE("synthesis is deterministic per (seed, stream)") {
  const TimeGrid grid(256, kOmega);
  const PsdModel ou = PsdModel::lorentzian(1e-4, 1.0, 0.0, kOmega);
  const NoiseSeries a = synthesize(ou, grid, 123, 5);
  const NoiseSeries b = synthesize(ou, grid, 123, 5);
  CHECK(a.values == b.values);  // bit identical
  const NoiseSeries c = synthesize(ou, grid, 123, 6);
  CHECK(a.values != c.values);
  const NoiseSeries d = synthesize(ou, grid, 124, 5);
  CHECK(a.values != d.values);
}

TEST_CASE("synthesis guards") {
  const PsdModel white = PsdModel::white(1e-4, kOmega);
  CHECK_THROWS_AS(synthesize(white, TimeGrid(8, kOmega), 1, 0), config_error);
  CHECK_THROWS_AS(PsdModel::white(-1e-4, kOmega).validate(), config_error);
  CHECK_THROWS_AS(PsdModel::lorentzian(1e-4, 0.0, 0.0, kOmega).validate(),
                  config_error);

  const NoiseSeries zero = synthesize(PsdModel::white(0.0, kOmega),
                                      TimeGrid(64, kOmega), 9, 0);
  for (double v : zero.values) CHECK(v == 0.0);
}

TEST_CASE("white synthesis has the delta-limit sample variance and is Gaussian") {
  const std::size_t N = 16384;
  const TimeGrid grid(N, kOmega);
  const PsdModel white = PsdModel::white(1e-4, kOmega);
  const NoiseSeries s = synthesize(white, grid, 2026, 0);

  const double expected = M_PI * white.sigma2 / (kOmega * grid.dt());  // N sigma^2/2
  double m1 = 0.0;
  for (double v : s.values) m1 += v;
  m1 /= static_cast<double>(s.values.size());
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : s.values) {
    const double d = v - m1;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  const double n = static_cast<double>(s.values.size());
  m2 /= n;
  m3 /= n;
  m4 /= n;

  const double rel_var = std::abs(m2 / expected - 1.0);
  CHECK(rel_var < 5.0 * std::sqrt(2.0 / n));
  const double skew = m3 / std::pow(m2, 1.5);
  const double exkurt = m4 / (m2 * m2) - 3.0;
  CHECK(std::abs(skew) < 0.1);
  CHECK(std::abs(exkurt) < 0.2);
}

TEST_CASE("Ornstein-Uhlenbeck synthesis reproduces the exponential autocorrelation") {
  const TimeGrid grid(256, kOmega);
  const PsdModel ou = PsdModel::lorentzian(4e-4, 1.0, 0.0, kOmega);
  std::vector<NoiseSeries> ens;
  for (std::uint64_t r = 0; r < 400; ++r) ens.push_back(synthesize(ou, grid, 55, r));

  for (std::size_t lag : {0, 4, 16, 64}) {
    const AutocorrEstimate est = estimate_autocorr(ens, lag);
    const double ref = autocorr(ou, static_cast<double>(lag) * grid.dt()).value;
    CHECK(std::abs(est.value - ref) <= 5.0 * est.std_error);
  }
}

TEST_CASE("spectral synthesis variance matches the integrated psd") {
  const TimeGrid grid(32, kOmega);
  const PsdModel shifted = PsdModel::lorentzian(1e-4, 0.5, 2.0 * kOmega, kOmega);
  std::vector<NoiseSeries> ens;
  for (std::uint64_t r = 0; r < 600; ++r)
    ens.push_back(synthesize(shifted, grid, 77, r));

  // R(0) = sigma^2 (1 + (2/pi) atan(x0/gamma)) for the one-sided Lorentzian.
  const double ref = 1e-4 * (1.0 + 2.0 / M_PI * std::atan(2.0 / 0.5));
  const AutocorrEstimate est = estimate_autocorr(ens, 0);
  CHECK(std::abs(est.value - ref) <= 5.0 * est.std_error);
  CHECK(est.std_error < 0.2 * ref);
}

TEST_CASE("autocorrelation estimator rejects mixed grids") {
  const PsdModel ou = PsdModel::lorentzian(1e-4, 1.0, 0.0, kOmega);
  std::vector<NoiseSeries> ens;
  ens.push_back(synthesize(ou, TimeGrid(64, kOmega), 1, 0));
  ens.push_back(synthesize(ou, TimeGrid(128, kOmega), 1, 1));
  CHECK_THROWS(estimate_autocorr(ens, 0));
}
