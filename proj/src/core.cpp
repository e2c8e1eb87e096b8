#include "sgi/core.hpp"

#include <cmath>
#include <string>

#include "sgi/constants.hpp"

namespace sgi {

void PhysicalParams::validate() const {
  if (!(mass > 0.0)) throw config_error("mass must be positive");
  if (!(mass_susceptibility < 0.0))
    throw config_error("mass_susceptibility must be negative (diamagnetic trap)");
  if (!(gradient > 0.0)) throw config_error("gradient must be positive");
  if (!(moment() > 0.0)) throw config_error("magnetic_moment must be positive");
  if (bias_field < 0.0) throw config_error("bias_field must be non-negative");
}

double PhysicalParams::moment() const {
  return magnetic_moment > 0.0 ? magnetic_moment : constants::g_s * constants::mu_B;
}

TimeGrid::TimeGrid(std::size_t steps, double omega) : steps_(steps), omega_(omega) {
  if (steps < 2) throw config_error("time grid needs at least 2 steps");
  if (!(omega > 0.0)) throw config_error("omega must be positive");
  period_ = 2.0 * M_PI / omega;
}

TrapParams derive_trap(const PhysicalParams& p) {
  p.validate();
  TrapParams t;
  t.omega = std::sqrt(-p.mass_susceptibility / constants::mu0) * p.gradient;
  t.wavepacket_width = std::sqrt(constants::hbar / (2.0 * p.mass * t.omega));
  t.lambda = p.moment() * p.gradient * t.wavepacket_width;
  t.u = t.lambda / (constants::hbar * t.omega);
  t.superposition_size = 4.0 * t.u * t.wavepacket_width;
  t.equilibrium = p.bias_field / p.gradient;
  return t;
}

ThermalState thermal_occupation(double temperature, double omega) {
  if (temperature < 0.0) throw config_error("temperature must be non-negative");
  if (!(omega > 0.0)) throw config_error("omega must be positive");
  ThermalState s;
  s.temperature = temperature;
  s.occupation = constants::k_B * temperature / (constants::hbar * omega);
  return s;
}

ThermalState thermal_from_occupation(double n, double omega) {
  if (n < 0.0) throw config_error("occupation must be non-negative");
  if (!(omega > 0.0)) throw config_error("omega must be positive");
  ThermalState s;
  s.occupation = n;
  s.temperature = n * constants::hbar * omega / constants::k_B;
  return s;
}

}  // namespace sgi
