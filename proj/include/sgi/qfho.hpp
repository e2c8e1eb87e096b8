#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "sgi/noise.hpp"

namespace sgi {

enum class NoiseMode { SpinIndependent, SpinDependent };
enum class Branch { Left = +1, Right = -1 };  // Left carries the +u drive

// Drive g_s(t) for branch sign s: SpinIndependent -> s*u + du(t),
// SpinDependent -> s*(u + du(t)).
struct DriveSpec {
  double u = 0.0;
  NoiseSeries noise;
  NoiseMode mode = NoiseMode::SpinIndependent;

  void validate() const;
  // Node value of the drive.
  double at_node(Branch b, std::size_t k) const;
  // Piecewise-constant interval value (left node), used by the stepwise solver
  // and the Fock-space propagator so both integrate the same drive.
  double at_interval(Branch b, std::size_t j) const { return at_node(b, j); }
};

// Displacement parameter and dynamical phase of one interferometer arm,
// zeta(t) = -i omega int_0^t g e^{i omega t'} dt',
// phi(t)  = omega^2 int_0^t dt' int_0^t' dt'' g(t') g(t'') sin(omega (t'-t'')).
struct BranchSolution {
  Branch branch = Branch::Left;
  TimeGrid grid{2, 1.0};
  std::vector<std::complex<double>> zeta;  // per node
  std::vector<double> phi;                 // per node, radians

  std::complex<double> zeta_final() const { return zeta.back(); }
  double phi_final() const { return phi.back(); }
};

struct OverlapResult {
  std::complex<double> delta_zeta{0.0, 0.0};  // zeta_+ - zeta_-
  double delta_phi = 0.0;                     // phi_+ - phi_-
  double bch_phase = 0.0;                     // Im(conj(zeta_-) zeta_+), additive phase
  std::optional<std::complex<double>> overlap_at_alpha;
  std::complex<double> beta_thermal{0.0, 0.0};
};

struct AlphaAverage {
  std::complex<double> value{0.0, 0.0};
  bool converged = true;
  double refinement_change = 0.0;
};

// Trapezoidal cumulative integration; the double integral for phi is folded to
// O(N) with running sums of int g cos(omega t) and int g sin(omega t).
BranchSolution solve_branch(const DriveSpec& drive, Branch branch, const TimeGrid& grid);

// Exact closed-form recursion treating the drive as piecewise-constant per
// grid interval. Matches the Fock-space propagator's drive interpretation, so
// the two can be compared at machine precision.
BranchSolution solve_branch_stepwise(const DriveSpec& drive, Branch branch, const TimeGrid& grid);

// <psi_R|psi_L> at the final node for initial coherent state alpha:
// exp(i dphi) exp(-i Im(zeta_- conj(zeta_+))) exp(-|dz|^2/2) exp(dz conj(alpha) - conj(dz) alpha).
OverlapResult overlap(const BranchSolution& left, const BranchSolution& right,
                      std::complex<double> alpha);

// Thermal average over alpha ~ exp(-|alpha|^2/n)/(pi n):
// beta = exp(i dphi) exp(-i Im(zeta_- conj(zeta_+))) exp(-(1/2+n)|dz|^2).
OverlapResult thermal_beta(const BranchSolution& left, const BranchSolution& right, double n);

// Gauss-Hermite quadrature oracle for thermal_beta; refinement doubles the
// order and flags relative changes above 1e-8.
AlphaAverage alpha_average_numeric(const BranchSolution& left, const BranchSolution& right,
                                   double n, int order = 64);

// Debug export, columns t,re_zeta,im_zeta,phi.
void write_branch_csv(const BranchSolution& sol, const std::string& path);

}  // namespace sgi
