#include "sgi/fock.hpp"

#include <cmath>
#include <stdexcept>

namespace sgi {

namespace {

using cplx = std::complex<double>;

double norm_sq(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const cplx& c : v) s += std::norm(c);
  return s;
}

// out = (n + g X) v, tridiagonal in the number basis.
void apply_hamiltonian(const std::vector<cplx>& v, std::vector<cplx>& out, double g,
                       const std::vector<double>& sq) {
  const std::size_t d = v.size();
  for (std::size_t k = 0; k < d; ++k) {
    cplx acc = static_cast<double>(k) * v[k];
    if (k > 0) acc += g * sq[k] * v[k - 1];
    if (k + 1 < d) acc += g * sq[k + 1] * v[k + 1];
    out[k] = acc;
  }
}

// state <- exp(-i dtau (n + g X)) state via the Taylor series of the action.
void apply_exponential(std::vector<cplx>& state, double g, double dtau,
                       const std::vector<double>& sq) {
  const std::size_t d = state.size();
  std::vector<cplx> term = state;
  std::vector<cplx> scratch(d);
  std::vector<cplx> acc = state;
  const cplx factor(0.0, -dtau);
  constexpr std::size_t kMaxTerms = 96;
  for (std::size_t m = 1; m <= kMaxTerms; ++m) {
    apply_hamiltonian(term, scratch, g, sq);
    const cplx scale = factor / static_cast<double>(m);
    for (std::size_t k = 0; k < d; ++k) term[k] = scale * scratch[k];
    for (std::size_t k = 0; k < d; ++k) acc[k] += term[k];
    if (norm_sq(term) <= 1e-36 * norm_sq(acc)) {
      state = acc;
      return;
    }
  }
  throw std::runtime_error(
      "Fock substep exponential did not converge; increase substeps");
}

}  // namespace

double FockState::norm() const { return std::sqrt(norm_sq(amp)); }

void PropagatorConfig::validate() const {
  if (dim < 8) throw std::invalid_argument("Fock dimension must be at least 8");
  if (substeps < 1) throw std::invalid_argument("substeps must be at least 1");
}

FockState coherent_state(cplx alpha, std::size_t dim) {
  if (dim < 8) throw std::invalid_argument("Fock dimension must be at least 8");
  const double a2 = std::norm(alpha);
  if (a2 > static_cast<double>(dim) / 4.0)
    throw std::invalid_argument(
        "coherent amplitude too large for the Fock dimension (need |alpha|^2 <= dim/4)");
  FockState st;
  st.amp.resize(dim);
  st.amp[0] = std::exp(-0.5 * a2);
  for (std::size_t k = 1; k < dim; ++k)
    st.amp[k] = st.amp[k - 1] * alpha / std::sqrt(static_cast<double>(k));
  return st;
}

FockState propagate(const FockState& initial, const DriveSpec& drive, Branch branch,
                    const TimeGrid& grid, const PropagatorConfig& cfg) {
  cfg.validate();
  drive.validate();
  if (initial.dim() != cfg.dim)
    throw std::invalid_argument("initial state dimension does not match the config");
  if (!grid.same_as(drive.noise.grid))
    throw std::invalid_argument("drive noise grid does not match the propagation grid");

  std::vector<double> sq(cfg.dim + 1);
  for (std::size_t k = 0; k <= cfg.dim; ++k) sq[k] = std::sqrt(static_cast<double>(k));

  FockState state = initial;
  const double norm0 = state.norm();
  const double w = grid.omega();
  for (std::size_t j = 0; j < grid.steps(); ++j) {
    const double g = drive.at_interval(branch, j);
    const double dtau = w * (grid.node(j + 1) - grid.node(j)) /
                        static_cast<double>(cfg.substeps);
    for (std::size_t sub = 0; sub < cfg.substeps; ++sub)
      apply_exponential(state.amp, g, dtau, sq);

    if (std::norm(state.amp.back()) >= 1e-8)
      throw std::runtime_error(
          "Fock truncation edge populated; increase the dimension");
    if (std::abs(state.norm() - norm0) > 1e-8)
      throw std::runtime_error("Fock propagation norm drifted beyond 1e-8");
  }
  return state;
}

std::complex<double> overlap_numeric(const FockState& bra, const FockState& ket) {
  if (bra.dim() != ket.dim())
    throw std::invalid_argument("overlap requires equal Fock dimensions");
  cplx s{0.0, 0.0};
  for (std::size_t k = 0; k < bra.dim(); ++k) s += std::conj(bra.amp[k]) * ket.amp[k];
  return s;
}

}  // namespace sgi
