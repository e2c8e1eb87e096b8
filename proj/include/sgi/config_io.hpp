#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sgi/analytic.hpp"
#include "sgi/core.hpp"
#include "sgi/noise.hpp"
#include "sgi/qfho.hpp"

namespace sgi {

// JSON configuration sections; every key is optional unless the command that
// consumes it says otherwise. Unknown keys are rejected.
struct NoiseSection {
  std::string model = "white";  // white | lorentzian | tabulated
  double sigma2 = 0.0;          // given as sigma or sigma2
  double gamma = 0.0;           // Lorentzian linewidth, units of omega
  double omega0 = 0.0;          // Lorentzian center, rad/s
  double omega = 0.0;           // reference omega override, rad/s
  std::string table_path;

  // Reference omega resolution order: explicit key, else fallback.
  PsdModel build(double fallback_omega) const;
};

struct McSection {
  std::size_t runs = 256;
  std::size_t grid = 0;  // 0 -> use grid.steps
  std::uint64_t master_seed = 20260825;
  NoiseMode mode = NoiseMode::SpinIndependent;
  double u = 100.0;
  bool per_run_csv = false;
  bool noise_csv = false;
};

struct TransferSection {
  std::string kind = "dephase";  // dephase | mismatch
  double u = 100.0;
  double x_max = 5.0;
  double x_step = 1e-3;
};

struct SweepSection {
  NoiseMode mode = NoiseMode::SpinIndependent;
  std::size_t points = 61;
  std::size_t mc_runs = 200;
  std::size_t mc_grid = 512;
  double u = 100.0;
  double occupation = 100.0;
};

struct ToleranceSection {
  double target = 0.95;
  std::optional<double> u;  // absent -> derived from physical, else 100
  std::optional<double> occupation;
};

struct OracleSection {
  std::size_t dim = 128;
  std::size_t substeps = 8;
  std::size_t grid = 256;
};

struct AppConfig {
  std::optional<PhysicalParams> physical;
  std::size_t grid_steps = 4096;
  std::optional<double> occupation;
  std::optional<double> temperature;  // K; converted against the derived omega
  std::optional<NoiseSection> noise;
  McSection mc;
  TransferSection transfer;
  SweepSection sweep;
  ToleranceSection tolerance;
  OracleSection oracle;
  PsdConvention convention = PsdConvention::Paper;

  // Derived omega if physical params are present, else the 1 kHz default.
  double reference_omega() const;
  double resolved_occupation(double fallback) const;
};

AppConfig load_config(const std::string& path);

}  // namespace sgi
