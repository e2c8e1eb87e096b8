#pragma once

#include <complex>
#include <vector>

#include "sgi/qfho.hpp"

namespace sgi {

// Number-basis amplitudes c_0..c_{dim-1}.
struct FockState {
  std::vector<std::complex<double>> amp;

  std::size_t dim() const { return amp.size(); }
  double norm() const;
};

struct PropagatorConfig {
  std::size_t dim = 128;     // >= 8
  std::size_t substeps = 8;  // exponential substeps per grid interval

  void validate() const;
};

// Truncated |alpha>; requires |alpha|^2 <= dim/4 so the rotated state keeps
// headroom below the truncation edge. Amplitudes are not renormalized; the
// truncation deficit stays visible in norm().
FockState coherent_state(std::complex<double> alpha, std::size_t dim);

// Evolves under H/(hbar omega) = n + g (a + a^dagger) in dimensionless time
// tau = omega t, with g piecewise-constant per grid interval (the same drive
// reading as solve_branch_stepwise). Each substep applies the exact interval
// exponential through a Taylor expansion of its action on the state. Throws
// if the top-level occupation |c_{dim-1}|^2 reaches 1e-8 at any node or the
// norm drifts by more than 1e-8.
FockState propagate(const FockState& initial, const DriveSpec& drive, Branch branch,
                    const TimeGrid& grid, const PropagatorConfig& cfg);

// <bra|ket>; dimensions must match.
std::complex<double> overlap_numeric(const FockState& bra, const FockState& ket);

}  // namespace sgi
