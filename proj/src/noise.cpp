#include "sgi/noise.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "sgi/quadrature.hpp"
#include "sgi/rng.hpp"

namespace sgi {

PsdModel PsdModel::white(double sigma2, double omega) {
  PsdModel m;
  m.kind = Kind::White;
  m.sigma2 = sigma2;
  m.omega = omega;
  m.validate();
  return m;
}

PsdModel PsdModel::lorentzian(double sigma2, double gamma, double omega0, double omega) {
  PsdModel m;
  m.kind = Kind::Lorentzian;
  m.sigma2 = sigma2;
  m.gamma = gamma;
  m.omega0 = omega0;
  m.omega = omega;
  m.validate();
  return m;
}

PsdModel PsdModel::tabulated(std::vector<std::pair<double, double>> table, double omega) {
  PsdModel m;
  m.kind = Kind::Tabulated;
  m.table = std::move(table);
  m.omega = omega;
  m.validate();
  return m;
}

void PsdModel::validate() const {
  if (!(omega > 0.0)) throw config_error("psd reference omega must be positive");
  switch (kind) {
    case Kind::White:
      if (sigma2 < 0.0) throw config_error("sigma^2 must be non-negative");
      break;
    case Kind::Lorentzian:
      if (sigma2 < 0.0) throw config_error("sigma^2 must be non-negative");
      if (!(gamma > 0.0)) throw config_error("lorentzian gamma must be positive");
      if (omega0 < 0.0) throw config_error("lorentzian omega0 must be non-negative");
      break;
    case Kind::Tabulated:
      if (table.size() < 2) throw config_error("tabulated psd needs at least 2 points");
      for (std::size_t i = 0; i < table.size(); ++i) {
        if (table[i].second < 0.0) throw config_error("tabulated psd values must be non-negative");
        if (i > 0 && !(table[i].first > table[i - 1].first))
          throw config_error("tabulated psd frequencies must be strictly increasing");
      }
      if (table.front().first < 0.0) throw config_error("tabulated psd frequencies must be non-negative");
      break;
  }
}

bool PsdModel::same_model(const PsdModel& other) const {
  return kind == other.kind && omega == other.omega && sigma2 == other.sigma2 &&
         gamma == other.gamma && omega0 == other.omega0 && table == other.table;
}

double psd_eval(const PsdModel& model, double Omega) {
  if (Omega < 0.0) throw std::invalid_argument("psd_eval requires Omega >= 0");
  switch (model.kind) {
    case PsdModel::Kind::White:
      return model.sigma2 / model.omega;
    case PsdModel::Kind::Lorentzian: {
      const double x = (Omega - model.omega0) / model.omega;
      return (model.sigma2 / model.omega) * (2.0 * model.gamma / M_PI) /
             (x * x + model.gamma * model.gamma);
    }
    case PsdModel::Kind::Tabulated: {
      const auto& t = model.table;
      if (Omega <= t.front().first) return Omega == t.front().first ? t.front().second : 0.0;
      if (Omega >= t.back().first) return Omega == t.back().first ? t.back().second : 0.0;
      auto it = std::upper_bound(t.begin(), t.end(), Omega,
                                 [](double v, const auto& p) { return v < p.first; });
      const auto& hi = *it;
      const auto& lo = *(it - 1);
      const double f = (Omega - lo.first) / (hi.first - lo.first);
      return lo.second + f * (hi.second - lo.second);
    }
  }
  return 0.0;
}

AutocorrValue autocorr(const PsdModel& model, double tau) {
  AutocorrValue r;
  switch (model.kind) {
    case PsdModel::Kind::White:
      r.value = M_PI * model.sigma2 / model.omega;
      r.delta_weight = true;
      return r;
    case PsdModel::Kind::Lorentzian:
      if (model.omega0 == 0.0) {
        r.value = model.sigma2 * std::exp(-model.gamma * model.omega * std::abs(tau));
        return r;
      }
      r.value = autocorr_numeric(model, tau);
      return r;
    case PsdModel::Kind::Tabulated:
      r.value = autocorr_numeric(model, tau);
      return r;
  }
  return r;
}

double autocorr_numeric(const PsdModel& model, double tau) {
  if (model.kind == PsdModel::Kind::White)
    throw std::invalid_argument("white noise autocorrelation is a delta weight, not a function");
  tau = std::abs(tau);

  if (model.kind == PsdModel::Kind::Tabulated) {
    const double lo = model.table.front().first;
    const double hi = model.table.back().first;
    auto f = [&](double W) { return psd_eval(model, W) * std::cos(W * tau); };
    return quad::integrate(f, lo, hi, 1e-12, 18).value;
  }

  // Lorentzian: head in x = Omega/omega up to X, oscillatory tail beyond.
  const double w = model.omega;
  const double x0 = model.omega0 / w;
  const double X = x0 + 40.0;
  auto fx = [&](double x) { return w * psd_eval(model, w * x) * std::cos(w * x * tau); };
  double head = 0.0;
  std::vector<double> cuts{0.0};
  for (double c : {x0 - 5.0 * model.gamma, x0, x0 + 5.0 * model.gamma})
    if (c > 0.0 && c < X) cuts.push_back(c);
  cuts.push_back(X);
  std::sort(cuts.begin(), cuts.end());
  const double tol = 1e-12 * std::max(1.0, model.sigma2);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    head += quad::integrate(fx, cuts[i], cuts[i + 1], tol, 18).value;

  auto rho = [&](double x) { return w * psd_eval(model, w * x); };
  const double wt = w * tau;
  quad::Result tail = (wt > 1e-8) ? quad::tail_cos(rho, X, wt, tol)
                                  : quad::tail_smooth(rho, X, tol);
  return head + tail.value;
}

namespace {

void synthesize_spectral(const PsdModel& model, const TimeGrid& grid, Rng& rng,
                         std::vector<double>& v) {
  const double w = model.omega;
  const double dW = w / 64.0;
  double Wmax = 40.0 * w;
  if (model.kind == PsdModel::Kind::Lorentzian)
    Wmax = std::max(Wmax, model.omega0 + 10.0 * model.gamma * w);
  else
    Wmax = std::max(Wmax, model.table.back().first);
  const auto nfreq = static_cast<std::size_t>(std::ceil(Wmax / dW));
  const double dt = grid.dt();
  const std::size_t nodes = grid.nodes();

  for (std::size_t j = 0; j < nfreq; ++j) {
    const double W = (static_cast<double>(j) + 0.5) * dW;
    const double amp = std::sqrt(2.0 * psd_eval(model, W) * dW);
    const double theta = 2.0 * M_PI * rng.next_uniform();
    if (amp == 0.0) continue;
    double pre = std::cos(theta), pim = std::sin(theta);
    const double cre = std::cos(W * dt), cim = std::sin(W * dt);
    for (std::size_t k = 0; k < nodes; ++k) {
      v[k] += amp * pre;
      const double nre = pre * cre - pim * cim;
      pim = pre * cim + pim * cre;
      pre = nre;
      if ((k & 511u) == 511u) {
        const double norm = std::sqrt(pre * pre + pim * pim);
        pre /= norm;
        pim /= norm;
      }
    }
  }
}

}  // namespace

NoiseSeries synthesize(const PsdModel& model, const TimeGrid& grid,
                       std::uint64_t seed, std::uint64_t stream) {
  model.validate();
  if (grid.steps() < 16) throw config_error("grid too coarse to resolve the trap period (need N >= 16)");

  NoiseSeries out{grid, std::vector<double>(grid.nodes(), 0.0), seed, stream};
  Rng rng(seed, stream);

  switch (model.kind) {
    case PsdModel::Kind::White: {
      if (model.sigma2 == 0.0) break;
      const double sd = std::sqrt(M_PI * model.sigma2 / (model.omega * grid.dt()));
      for (double& x : out.values) x = sd * rng.next_normal();
      break;
    }
    case PsdModel::Kind::Lorentzian: {
      if (model.sigma2 == 0.0) break;
      if (model.omega0 == 0.0) {
        // Exact Ornstein-Uhlenbeck recursion for the exponential autocorrelation.
        const double a = std::exp(-model.gamma * model.omega * grid.dt());
        const double innov = std::sqrt(model.sigma2 * (1.0 - a * a));
        double x = std::sqrt(model.sigma2) * rng.next_normal();
        out.values[0] = x;
        for (std::size_t k = 1; k < out.values.size(); ++k) {
          x = a * x + innov * rng.next_normal();
          out.values[k] = x;
        }
      } else {
        synthesize_spectral(model, grid, rng, out.values);
      }
      break;
    }
    case PsdModel::Kind::Tabulated:
      synthesize_spectral(model, grid, rng, out.values);
      break;
  }
  return out;
}

AutocorrEstimate estimate_autocorr(const std::vector<NoiseSeries>& ensemble,
                                   std::size_t lag) {
  if (ensemble.size() < 2) throw std::invalid_argument("need at least 2 realizations");
  const TimeGrid& g = ensemble.front().grid;
  if (lag >= g.nodes()) throw std::invalid_argument("lag exceeds grid length");
  for (const auto& s : ensemble)
    if (!s.grid.same_as(g)) throw std::invalid_argument("mismatched grids in ensemble");

  const std::size_t terms = g.nodes() - lag;
  std::vector<double> per_run(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const auto& v = ensemble[i].values;
    double acc = 0.0;
    for (std::size_t k = 0; k < terms; ++k) acc += v[k] * v[k + lag];
    per_run[i] = acc / static_cast<double>(terms);
  }
  const auto m = static_cast<double>(per_run.size());
  double mean = 0.0;
  for (double r : per_run) mean += r;
  mean /= m;
  double var = 0.0;
  for (double r : per_run) var += (r - mean) * (r - mean);
  var /= (m - 1.0);
  return AutocorrEstimate{mean, std::sqrt(var / m)};
}

void write_noise_csv(const NoiseSeries& series, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  f << "t,du\n";
  char buf[80];
  for (std::size_t k = 0; k < series.values.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", series.grid.node(k), series.values[k]);
    f << buf;
  }
}

}  // namespace sgi
