#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "sgi/montecarlo.hpp"

using namespace sgi;

namespace {

constexpr double kOmega = 1000.0;

McConfig si_config(double sigma2, std::size_t runs, std::size_t grid_n,
                   std::uint64_t seed, double u = 1.0) {
  McConfig cfg;
  cfg.runs = runs;
  cfg.grid_n = grid_n;
  cfg.master_seed = seed;
  cfg.mode = NoiseMode::SpinIndependent;
  cfg.psd = PsdModel::white(sigma2, kOmega);
  cfg.u = u;
  return cfg;
}

McConfig sd_config(double sigma2, std::size_t runs, std::size_t grid_n,
                   std::uint64_t seed, double n) {
  McConfig cfg;
  cfg.runs = runs;
  cfg.grid_n = grid_n;
  cfg.master_seed = seed;
  cfg.mode = NoiseMode::SpinDependent;
  cfg.psd = PsdModel::white(sigma2, kOmega);
  cfg.u = 1.0;
  cfg.occupation = n;
  return cfg;
}

}  // namespace

TEST_CASE("configuration guards") {
  McConfig cfg = si_config(1e-4, 1, 64, 1);
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = si_config(1e-4, 64, 8, 1);
  CHECK_THROWS_AS(cfg.validate(), config_error);
  cfg = si_config(1e-4, 64, 64, 1);
  cfg.psd.sigma2 = -1e-4;
  CHECK_THROWS(cfg.validate());
  cfg = si_config(1e-4, 64, 64, 1);
  CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("silent ensemble has unit contrast and zero spread") {
  const McSummary s = run_ensemble(si_config(0.0, 16, 64, 3));
  CHECK(s.contrast.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s.contrast.std_error == doctest::Approx(0.0).scale(1.0));
  CHECK(s.dphi_variance.value == doctest::Approx(0.0).scale(1.0));
  CHECK(s.max_abs_dzeta < 1e-12);
}

TEST_CASE("ensembles are reproducible bit for bit") {
  const McConfig cfg = si_config(1e-4, 48, 128, 2026);
  const McSummary a = run_ensemble(cfg);
  const McSummary b = run_ensemble(cfg);
  CHECK(a.mean_beta == b.mean_beta);
  CHECK(a.contrast.value == b.contrast.value);
  CHECK(a.contrast.std_error == b.contrast.std_error);
  CHECK(a.dphi_variance.value == b.dphi_variance.value);
  CHECK(a.gamma_hat.value == b.gamma_hat.value);
  CHECK(a.max_abs_dphi == b.max_abs_dphi);

  const McSummary c = run_ensemble(si_config(1e-4, 48, 128, 2027));
  CHECK(a.mean_beta != c.mean_beta);
}

TEST_CASE("per-run sink sees every record in index order") {
  const McConfig cfg = si_config(1e-4, 32, 64, 11);
  std::vector<std::size_t> order;
  std::vector<RunRecord> records;
  run_ensemble(cfg, [&](std::size_t run, const RunRecord& rec) {
    order.push_back(run);
    records.push_back(rec);
  });
  REQUIRE(order.size() == cfg.runs);
  for (std::size_t i = 0; i < order.size(); ++i) CHECK(order[i] == i);
  // overlap magnitudes are bounded by 1
  for (const RunRecord& rec : records) CHECK(std::abs(rec.beta) <= 1.0 + 1e-12);

  // the sink records reproduce the summary mean
  const McSummary again = run_ensemble(cfg);
  std::complex<double> acc{0.0, 0.0};
  for (const RunRecord& rec : records) acc += rec.beta;
  acc /= static_cast<double>(records.size());
  CHECK(std::abs(acc - again.mean_beta) < 1e-13);
}

TEST_CASE("gamma estimate matches the white-noise prediction") {
  const McConfig cfg = si_config(1e-4, 400, 512, 12345);
  const McSummary mc = run_ensemble(cfg);
  const ContrastResult an = gamma_spin_independent(cfg.psd, cfg.u);
  const CompareReport rep = compare_analytic(mc, an, NoiseMode::SpinIndependent);
  CHECK(rep.pass);
  CHECK(rep.z_gamma <= 3.0);
  CHECK(rep.z_contrast <= 3.0);
  CHECK(rep.detail.find("gamma") != std::string::npos);

  // the raw phase variance runs 2 pi hotter than the printed gamma
  CHECK(mc.gamma_hat.value ==
        doctest::Approx(mc.dphi_variance.value / (2.0 * M_PI)).epsilon(1e-12));
}

TEST_CASE("mismatch estimates match the spin-dependent prediction") {
  const McConfig cfg = sd_config(9e-4, 400, 512, 777, 10.0);
  const McSummary mc = run_ensemble(cfg);
  const ContrastResult an = contrast_spin_dependent(cfg.psd, cfg.occupation);
  const CompareReport rep = compare_analytic(mc, an, NoiseMode::SpinDependent);
  CHECK(rep.pass);
  CHECK(rep.z_var_re <= 3.0);
  CHECK(rep.z_var_im <= 3.0);
  CHECK(rep.z_contrast <= 3.0);
  CHECK(mc.max_abs_dphi < 1e-8 * (1.0 + cfg.u * cfg.u));
}

TEST_CASE("a wrong analytic reference fails the z test without throwing") {
  const McConfig cfg = si_config(1e-4, 400, 256, 12345);
  const McSummary mc = run_ensemble(cfg);
  const ContrastResult wrong =
      gamma_spin_independent(PsdModel::white(4e-4, kOmega), cfg.u);
  const CompareReport rep = compare_analytic(mc, wrong, NoiseMode::SpinIndependent);
  CHECK_FALSE(rep.pass);
  CHECK(rep.z_gamma > 3.0);
}

TEST_CASE("channel mixups are structural errors") {
  const McConfig si = si_config(1e-4, 32, 64, 5);
  const McSummary mc_si = run_ensemble(si);
  const ContrastResult an_si = gamma_spin_independent(si.psd, si.u);
  const ContrastResult an_sd = contrast_spin_dependent(si.psd, 10.0);

  CHECK_THROWS_AS(compare_analytic(mc_si, an_sd, NoiseMode::SpinIndependent),
                  std::invalid_argument);
  CHECK_THROWS_AS(compare_analytic(mc_si, an_si, NoiseMode::SpinDependent),
                  std::invalid_argument);

  const McConfig sd = sd_config(1e-4, 32, 64, 5, 10.0);
  const McSummary mc_sd = run_ensemble(sd);
  CHECK_THROWS_AS(compare_analytic(mc_sd, an_si, NoiseMode::SpinDependent),
                  std::invalid_argument);
}

TEST_CASE("standard errors shrink like one over root runs") {
  const McSummary small = run_ensemble(si_config(1e-4, 200, 128, 31415));
  const McSummary large = run_ensemble(si_config(1e-4, 800, 128, 31415));
  REQUIRE(small.gamma_hat.std_error > 0.0);
  REQUIRE(large.gamma_hat.std_error > 0.0);
  const double ratio = small.gamma_hat.std_error / large.gamma_hat.std_error;
  CHECK(ratio > 1.5);
  CHECK(ratio < 2.7);
}

TEST_CASE("spin-independent contrast ignores the initial occupation") {
  const McConfig cfg = si_config(1e-4, 64, 128, 5150);
  const IndependenceReport rep = thermal_independence_check(cfg, 100.0);
  CHECK(rep.pass);
  CHECK(rep.max_delta < 1e-12);

  const McConfig sd = sd_config(1e-4, 64, 128, 5150, 10.0);
  CHECK_THROWS_AS(thermal_independence_check(sd, 100.0), std::invalid_argument);
}

TEST_CASE("summary serializes to the documented json schema") {
  const McConfig cfg = si_config(1e-4, 32, 64, 99);
  const McSummary mc = run_ensemble(cfg);
  const nlohmann::json j = nlohmann::json::parse(mc_summary_to_json(mc));
  CHECK(j.at("schema").get<std::string>() == "sgcontrast.mc_summary.v1");
  CHECK(j.at("runs").get<std::size_t>() == cfg.runs);
  CHECK(j.at("master_seed").get<std::uint64_t>() == cfg.master_seed);
  CHECK(j.at("mode").get<std::string>() == "spin_independent");
  CHECK(j.at("psd").at("model").get<std::string>() == "white");
  CHECK(j.at("mean_beta").contains("re"));
  CHECK(j.at("contrast").contains("se"));
  CHECK(j.at("gamma_hat").at("value").get<double>() ==
        doctest::Approx(mc.gamma_hat.value).epsilon(1e-12));
  CHECK(j.at("diagnostics").contains("max_abs_dphi"));
}
