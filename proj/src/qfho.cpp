#include "sgi/qfho.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>

namespace sgi {

namespace {
using cplx = std::complex<double>;
constexpr cplx kI{0.0, 1.0};
}  // namespace

void DriveSpec::validate() const {
  if (u < 0.0) throw std::invalid_argument("drive coupling u must be non-negative");
  if (noise.values.size() != noise.grid.nodes())
    throw std::invalid_argument("noise series length does not match its grid");
}

double DriveSpec::at_node(Branch b, std::size_t k) const {
  const double s = (b == Branch::Left) ? 1.0 : -1.0;
  const double du = noise.values[k];
  return mode == NoiseMode::SpinIndependent ? s * u + du : s * (u + du);
}

BranchSolution solve_branch(const DriveSpec& drive, Branch branch, const TimeGrid& grid) {
  drive.validate();
  if (!grid.same_as(drive.noise.grid))
    throw std::invalid_argument("drive noise grid does not match the integration grid");

  const std::size_t n = grid.nodes();
  const double w = grid.omega();
  const double dt = grid.dt();

  BranchSolution sol;
  sol.branch = branch;
  sol.grid = grid;
  sol.zeta.resize(n);
  sol.phi.resize(n);

  // Running trapezoids C = int g cos(w t), S = int g sin(w t); then
  // zeta = w S - i w C and phi' = w^2 g (sin(w t) C - cos(w t) S).
  double C = 0.0, S = 0.0;
  double prev_gc = drive.at_node(branch, 0);  // g cos at t=0
  double prev_gs = 0.0;                       // g sin at t=0
  double prev_integrand = 0.0;
  double phi = 0.0;
  sol.zeta[0] = {0.0, 0.0};
  sol.phi[0] = 0.0;

  for (std::size_t k = 1; k < n; ++k) {
    const double t = grid.node(k);
    const double g = drive.at_node(branch, k);
    const double c = std::cos(w * t);
    const double s = std::sin(w * t);
    const double gc = g * c;
    const double gs = g * s;
    C += 0.5 * (prev_gc + gc) * dt;
    S += 0.5 * (prev_gs + gs) * dt;
    prev_gc = gc;
    prev_gs = gs;

    const double integrand = w * w * g * (s * C - c * S);
    phi += 0.5 * (prev_integrand + integrand) * dt;
    prev_integrand = integrand;

    sol.zeta[k] = {w * S, -w * C};
    sol.phi[k] = phi;
  }
  return sol;
}

BranchSolution solve_branch_stepwise(const DriveSpec& drive, Branch branch, const TimeGrid& grid) {
  drive.validate();
  if (!grid.same_as(drive.noise.grid))
    throw std::invalid_argument("drive noise grid does not match the integration grid");

  const std::size_t n = grid.nodes();
  const double w = grid.omega();

  BranchSolution sol;
  sol.branch = branch;
  sol.grid = grid;
  sol.zeta.resize(n);
  sol.phi.resize(n);
  sol.zeta[0] = {0.0, 0.0};
  sol.phi[0] = 0.0;

  // Per interval [a, b] in tau = omega t with constant g (exact primitives):
  //   phi  += g (-C (cos b - cos a) - S (sin b - sin a) + g ((b-a) - sin(b-a)))
  //   zeta += -g (e^{ib} - e^{ia})
  //   C    += g (sin b - sin a),  S += -g (cos b - cos a)
  double C = 0.0, S = 0.0, phi = 0.0;
  cplx zeta{0.0, 0.0};
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const double a = w * grid.node(j);
    const double b = w * grid.node(j + 1);
    const double g = drive.at_interval(branch, j);
    const double dc = std::cos(b) - std::cos(a);
    const double ds = std::sin(b) - std::sin(a);
    phi += g * (-C * dc - S * ds + g * ((b - a) - std::sin(b - a)));
    zeta += -g * (std::exp(kI * b) - std::exp(kI * a));
    C += g * ds;
    S += -g * dc;
    sol.zeta[j + 1] = zeta;
    sol.phi[j + 1] = phi;
  }
  return sol;
}

namespace {

struct FinalPair {
  cplx dz;
  double dphi;
  double bch;
};

FinalPair finals(const BranchSolution& left, const BranchSolution& right) {
  if (!left.grid.same_as(right.grid))
    throw std::invalid_argument("branch solutions live on different grids");
  FinalPair f;
  f.dz = left.zeta_final() - right.zeta_final();
  f.dphi = left.phi_final() - right.phi_final();
  f.bch = std::imag(std::conj(right.zeta_final()) * left.zeta_final());
  return f;
}

}  // namespace

OverlapResult overlap(const BranchSolution& left, const BranchSolution& right,
                      std::complex<double> alpha) {
  const FinalPair f = finals(left, right);
  OverlapResult r;
  r.delta_zeta = f.dz;
  r.delta_phi = f.dphi;
  r.bch_phase = f.bch;
  const double dz2 = std::norm(f.dz);
  const cplx phase = std::exp(kI * (f.dphi + f.bch));
  r.overlap_at_alpha =
      phase * std::exp(-0.5 * dz2) * std::exp(f.dz * std::conj(alpha) - std::conj(f.dz) * alpha);
  r.beta_thermal = *r.overlap_at_alpha;
  return r;
}

OverlapResult thermal_beta(const BranchSolution& left, const BranchSolution& right, double n) {
  if (n < 0.0) throw std::invalid_argument("occupation must be non-negative");
  const FinalPair f = finals(left, right);
  OverlapResult r;
  r.delta_zeta = f.dz;
  r.delta_phi = f.dphi;
  r.bch_phase = f.bch;
  r.beta_thermal = std::exp(kI * (f.dphi + f.bch)) * std::exp(-(0.5 + n) * std::norm(f.dz));
  return r;
}

namespace {

// Gauss-Hermite nodes/weights for weight e^{-x^2} via the Jacobi matrix.
const std::pair<std::vector<double>, std::vector<double>>& hermite_rule(int order) {
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = std::sqrt(k / 2.0);
    J(k - 1, k) = b;
    J(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  std::vector<double> x(order), wgt(order);
  const double sqrt_pi = std::sqrt(M_PI);
  for (int k = 0; k < order; ++k) {
    x[k] = es.eigenvalues()(k);
    const double v0 = es.eigenvectors()(0, k);
    wgt[k] = sqrt_pi * v0 * v0;
  }
  return cache.emplace(order, std::make_pair(std::move(x), std::move(wgt))).first->second;
}

cplx gh_average(const FinalPair& f, double n, int order) {
  const auto& [x, wgt] = hermite_rule(order);
  const double rn = std::sqrt(n);
  const cplx phase = std::exp(kI * (f.dphi + f.bch)) * std::exp(-0.5 * std::norm(f.dz));
  cplx acc{0.0, 0.0};
  for (int i = 0; i < order; ++i) {
    cplx inner{0.0, 0.0};
    for (int j = 0; j < order; ++j) {
      const cplx alpha = rn * cplx(x[i], x[j]);
      inner += wgt[j] * std::exp(f.dz * std::conj(alpha) - std::conj(f.dz) * alpha);
    }
    acc += wgt[i] * inner;
  }
  return phase * acc / M_PI;
}

}  // namespace

AlphaAverage alpha_average_numeric(const BranchSolution& left, const BranchSolution& right,
                                   double n, int order) {
  if (n < 0.0) throw std::invalid_argument("occupation must be non-negative");
  if (order < 4) throw std::invalid_argument("quadrature order too small");
  AlphaAverage out;
  const FinalPair f = finals(left, right);
  if (n < 1e-12) {
    out.value = overlap(left, right, {0.0, 0.0}).overlap_at_alpha.value();
    return out;
  }
  const cplx coarse = gh_average(f, n, order);
  const cplx fine = gh_average(f, n, 2 * order);
  out.value = fine;
  out.refinement_change = std::abs(fine - coarse) / std::max(1e-300, std::abs(fine));
  out.converged = out.refinement_change <= 1e-8;
  return out;
}

void write_branch_csv(const BranchSolution& sol, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "t,re_zeta,im_zeta,phi\n";
  char buf[120];
  for (std::size_t k = 0; k < sol.zeta.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", sol.grid.node(k),
                  sol.zeta[k].real(), sol.zeta[k].imag(), sol.phi[k]);
    f << buf;
  }
}

}  // namespace sgi
