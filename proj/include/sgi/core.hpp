#pragma once

#include <cstddef>
#include <stdexcept>

namespace sgi {

// Raised for invalid laboratory inputs or malformed configuration.
class config_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Laboratory inputs, SI units.
struct PhysicalParams {
  double mass = 0.0;                 // kg
  double mass_susceptibility = 0.0;  // m^3/kg, negative for diamagnets
  double magnetic_moment = 0.0;      // J/T; <= 0 selects the default 2*mu_B
  double bias_field = 0.0;           // T; only sets the equilibrium offset z0
  double gradient = 0.0;             // T/m

  // Throws config_error on any invariant violation.
  void validate() const;
  // magnetic_moment if positive, else the 2*mu_B default.
  double moment() const;
};

// Trap and coupling quantities derived from PhysicalParams.
struct TrapParams {
  double omega = 0.0;               // rad/s, sqrt(-chi_rho/mu0) * eta
  double lambda = 0.0;              // J, mu * eta * sqrt(hbar / 2 m omega)
  double u = 0.0;                   // lambda / (hbar omega)
  double wavepacket_width = 0.0;    // m, sqrt(hbar / 2 m omega)
  double superposition_size = 0.0;  // m, 4 u * wavepacket_width
  double equilibrium = 0.0;         // m, bias_field / gradient
};

struct ThermalState {
  double occupation = 0.0;   // n = k_B T / (hbar omega)
  double temperature = 0.0;  // K
};

// Uniform grid over exactly one trap period T = 2 pi / omega.
// Nodes t_k = k T / N for k = 0..N; node(N) is exactly the period.
class TimeGrid {
 public:
  TimeGrid(std::size_t steps, double omega);

  std::size_t steps() const { return steps_; }
  std::size_t nodes() const { return steps_ + 1; }
  double omega() const { return omega_; }
  double period() const { return period_; }
  double dt() const { return period_ / static_cast<double>(steps_); }
  double node(std::size_t k) const {
    return period_ * (static_cast<double>(k) / static_cast<double>(steps_));
  }
  bool same_as(const TimeGrid& other) const {
    return steps_ == other.steps_ && omega_ == other.omega_;
  }

 private:
  std::size_t steps_;
  double omega_;
  double period_;
};

TrapParams derive_trap(const PhysicalParams& p);

// n = k_B T / (hbar omega); rejects negative temperature.
ThermalState thermal_occupation(double temperature, double omega);

// Inverse map, T = n hbar omega / k_B; exact round trip with thermal_occupation.
ThermalState thermal_from_occupation(double n, double omega);

}  // namespace sgi
