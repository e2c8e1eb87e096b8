#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "sgi/fock.hpp"

using namespace sgi;
using cplx = std::complex<double>;

namespace {

constexpr double kOmega = 1000.0;

DriveSpec drive_for(double u, NoiseMode mode, const PsdModel& psd,
                    const TimeGrid& grid, std::uint64_t seed) {
  DriveSpec d;
  d.u = u;
  d.mode = mode;
  d.noise = synthesize(psd, grid, seed, 0);
  return d;
}

// overlap of the analytic stepwise arms for the same drive
cplx stepwise_overlap(const DriveSpec& d, const TimeGrid& grid, cplx alpha) {
  const BranchSolution l = solve_branch_stepwise(d, Branch::Left, grid);
  const BranchSolution r = solve_branch_stepwise(d, Branch::Right, grid);
  return *overlap(l, r, alpha).overlap_at_alpha;
}

// overlap of the propagated truncated states
cplx fock_overlap(const DriveSpec& d, const TimeGrid& grid, cplx alpha,
                  const PropagatorConfig& cfg) {
  const FockState init = coherent_state(alpha, cfg.dim);
  const FockState l = propagate(init, d, Branch::Left, grid, cfg);
  const FockState r = propagate(init, d, Branch::Right, grid, cfg);
  return overlap_numeric(r, l);
}

}  // namespace

TEST_CASE("coherent state amplitudes follow the Poisson recurrence") {
  const cplx alpha(0.6, -0.8);  // |alpha|^2 = 1
  const FockState s = coherent_state(alpha, 64);
  REQUIRE(s.dim() == 64);
  CHECK(std::abs(s.amp[0] - cplx(std::exp(-0.5), 0.0)) < 1e-14);
  for (std::size_t k = 1; k < 8; ++k) {
    const cplx expect = s.amp[k - 1] * alpha / std::sqrt(static_cast<double>(k));
    CHECK(std::abs(s.amp[k] - expect) < 1e-14);
  }
  CHECK(s.norm() == doctest::Approx(1.0).epsilon(1e-12));

  // the truncation deficit is visible, not hidden by renormalization
  const FockState tight = coherent_state(cplx(1.6, 0.0), 11);
  CHECK(tight.norm() < 1.0);
}

TEST_CASE("coherent state guards") {
  CHECK_THROWS_AS(coherent_state(cplx(0.0, 0.0), 4), std::invalid_argument);
  // |alpha|^2 = 9 > 32/4 is rejected
  CHECK_THROWS_AS(coherent_state(cplx(3.0, 0.0), 32), std::invalid_argument);
  CHECK_NOTHROW(coherent_state(cplx(2.8, 0.0), 32));
}

TEST_CASE("numeric overlap of two coherent states matches the Gaussian formula") {
  const cplx a(0.9, 0.2);
  const cplx b(-0.3, 0.7);
  const FockState sa = coherent_state(a, 96);
  const FockState sb = coherent_state(b, 96);
  const cplx expect =
      std::exp(-0.5 * (std::norm(a) + std::norm(b)) + std::conj(a) * b);
  CHECK(std::abs(overlap_numeric(sa, sb) - expect) < 1e-12);
  CHECK(std::abs(overlap_numeric(sa, sa) - cplx(1.0, 0.0)) < 1e-12);

  FockState small = coherent_state(a, 64);
  CHECK_THROWS_AS(overlap_numeric(sa, small), std::invalid_argument);
}

TEST_CASE("free evolution over one period is the identity") {
  const TimeGrid grid(64, kOmega);
  const DriveSpec d =
      drive_for(0.0, NoiseMode::SpinIndependent, PsdModel::white(0.0, kOmega), grid, 1);
  PropagatorConfig cfg;
  cfg.dim = 64;
  cfg.substeps = 4;

  const FockState init = coherent_state(cplx(1.2, -0.5), cfg.dim);
  const FockState out = propagate(init, d, Branch::Left, grid, cfg);
  const cplx fid = overlap_numeric(init, out);
  CHECK(std::abs(fid - cplx(1.0, 0.0)) < 1e-10);
  CHECK(std::abs(out.norm() - init.norm()) < 1e-10);
}

TEST_CASE("driven propagation reproduces the displaced-oscillator overlap") {
  const TimeGrid grid(128, kOmega);
  PropagatorConfig cfg;
  cfg.dim = 64;
  cfg.substeps = 4;
  const cplx alpha(0.5, 0.3);

  SUBCASE("noise free") {
    const DriveSpec d = drive_for(1.0, NoiseMode::SpinIndependent,
                                  PsdModel::white(0.0, kOmega), grid, 2);
    const cplx a = stepwise_overlap(d, grid, alpha);
    const cplx b = fock_overlap(d, grid, alpha, cfg);
    CHECK(std::abs(a - b) < 1e-6);
  }
  SUBCASE("white spin independent") {
    const DriveSpec d = drive_for(1.0, NoiseMode::SpinIndependent,
                                  PsdModel::white(1e-4, kOmega), grid, 31);
    CHECK(std::abs(stepwise_overlap(d, grid, alpha) -
                   fock_overlap(d, grid, alpha, cfg)) < 1e-5);
  }
  SUBCASE("white spin dependent") {
    const DriveSpec d = drive_for(1.0, NoiseMode::SpinDependent,
                                  PsdModel::white(1e-4, kOmega), grid, 32);
    CHECK(std::abs(stepwise_overlap(d, grid, alpha) -
                   fock_overlap(d, grid, alpha, cfg)) < 1e-5);
  }
  SUBCASE("colored spin independent") {
    const DriveSpec d = drive_for(1.5, NoiseMode::SpinIndependent,
                                  PsdModel::lorentzian(1e-2, 1.0, 0.0, kOmega), grid, 33);
    CHECK(std::abs(stepwise_overlap(d, grid, alpha) -
                   fock_overlap(d, grid, alpha, cfg)) < 1e-5);
  }
}

TEST_CASE("propagation preserves the norm") {
  const TimeGrid grid(128, kOmega);
  PropagatorConfig cfg;
  cfg.dim = 96;
  cfg.substeps = 8;
  const DriveSpec d = drive_for(2.0, NoiseMode::SpinIndependent,
                                PsdModel::white(1e-4, kOmega), grid, 8);
  const FockState init = coherent_state(cplx(1.0, 1.0), cfg.dim);
  const FockState out = propagate(init, d, Branch::Right, grid, cfg);
  CHECK(std::abs(out.norm() - init.norm()) < 1e-8);
}

TEST_CASE("a too-small basis trips the truncation guard") {
  const TimeGrid grid(64, kOmega);
  PropagatorConfig cfg;
  cfg.dim = 8;
  cfg.substeps = 4;
  const DriveSpec d = drive_for(2.0, NoiseMode::SpinIndependent,
                                PsdModel::white(0.0, kOmega), grid, 3);
  // u = 2 swings the coherent amplitude by ~4, far beyond an 8-level basis
  const FockState init = coherent_state(cplx(1.0, 0.0), cfg.dim);
  CHECK_THROWS_AS(propagate(init, d, Branch::Left, grid, cfg), std::runtime_error);
}

TEST_CASE("propagator guards") {
  const TimeGrid grid(64, kOmega);
  const TimeGrid other(128, kOmega);
  PropagatorConfig cfg;
  cfg.dim = 32;
  cfg.substeps = 4;
  const DriveSpec d = drive_for(0.5, NoiseMode::SpinIndependent,
                                PsdModel::white(0.0, kOmega), grid, 4);
  const FockState init = coherent_state(cplx(0.5, 0.0), 16);  // wrong dim
  CHECK_THROWS_AS(propagate(init, d, Branch::Left, grid, cfg), std::invalid_argument);

  const FockState ok = coherent_state(cplx(0.5, 0.0), cfg.dim);
  CHECK_THROWS_AS(propagate(ok, d, Branch::Left, other, cfg), std::invalid_argument);

  PropagatorConfig bad;
  bad.dim = 4;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad.dim = 32;
  bad.substeps = 0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
