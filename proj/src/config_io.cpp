#include "sgi/config_io.hpp"

#include <fstream>
#include <set>

#include "json.hpp"

#include "sgi/csv_io.hpp"

namespace sgi {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::string& section,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw config_error("unknown key '" + it.key() + "' in section '" + section + "'");
}

double number_at(const json& obj, const std::string& section, const std::string& key) {
  const json& v = obj.at(key);
  if (!v.is_number())
    throw config_error("'" + section + "." + key + "' must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& section, const std::string& key,
                 double fallback) {
  if (!obj.contains(key)) return fallback;
  return number_at(obj, section, key);
}

std::size_t index_or(const json& obj, const std::string& section,
                     const std::string& key, std::size_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number_unsigned())
    throw config_error("'" + section + "." + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string text_or(const json& obj, const std::string& section, const std::string& key,
                    const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string())
    throw config_error("'" + section + "." + key + "' must be a string");
  return v.get<std::string>();
}

bool flag_or(const json& obj, const std::string& section, const std::string& key,
             bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean())
    throw config_error("'" + section + "." + key + "' must be a boolean");
  return v.get<bool>();
}

NoiseMode parse_mode(const std::string& s, const std::string& where) {
  if (s == "si" || s == "spin_independent") return NoiseMode::SpinIndependent;
  if (s == "sd" || s == "spin_dependent") return NoiseMode::SpinDependent;
  throw config_error("'" + where + "' must be 'si' or 'sd', got '" + s + "'");
}

double sigma2_from(const json& obj, const std::string& section) {
  if (obj.contains("sigma") && obj.contains("sigma2"))
    throw config_error("give '" + section + ".sigma' or '.sigma2', not both");
  if (obj.contains("sigma")) {
    const double s = number_at(obj, section, "sigma");
    return s * s;
  }
  return number_or(obj, section, "sigma2", 0.0);
}

}  // namespace

PsdModel NoiseSection::build(double fallback_omega) const {
  const double w = omega > 0.0 ? omega : fallback_omega;
  if (model == "white") return PsdModel::white(sigma2, w);
  if (model == "lorentzian") return PsdModel::lorentzian(sigma2, gamma, omega0, w);
  if (model == "tabulated")
    return PsdModel::tabulated(read_two_column_csv(table_path), w);
  throw config_error("noise.model must be white, lorentzian, or tabulated");
}

double AppConfig::reference_omega() const {
  if (physical) return derive_trap(*physical).omega;
  return 1000.0;  // 1 kHz default reference
}

double AppConfig::resolved_occupation(double fallback) const {
  if (occupation) return *occupation;
  if (temperature) return thermal_occupation(*temperature, reference_omega()).occupation;
  return fallback;
}

AppConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  json root;
  try {
    root = json::parse(in, nullptr, true, true);  // allow // comments
  } catch (const json::parse_error& e) {
    throw config_error(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw config_error("config root must be a JSON object");
  check_keys(root, "(root)",
             {"physical", "grid", "thermal", "noise", "mc", "transfer", "sweep",
              "tolerance", "oracle", "psd_convention"});

  AppConfig cfg;

  if (root.contains("physical")) {
    const json& p = root["physical"];
    check_keys(p, "physical",
               {"mass", "mass_susceptibility", "gradient", "magnetic_moment",
                "bias_field"});
    PhysicalParams ph;
    ph.mass = number_at(p, "physical", "mass");
    ph.mass_susceptibility = number_at(p, "physical", "mass_susceptibility");
    ph.gradient = number_at(p, "physical", "gradient");
    ph.magnetic_moment = number_or(p, "physical", "magnetic_moment", 0.0);
    ph.bias_field = number_or(p, "physical", "bias_field", 0.0);
    ph.validate();
    cfg.physical = ph;
  }

  if (root.contains("grid")) {
    const json& g = root["grid"];
    check_keys(g, "grid", {"steps"});
    cfg.grid_steps = index_or(g, "grid", "steps", cfg.grid_steps);
    if (cfg.grid_steps < 2) throw config_error("grid.steps must be at least 2");
  }

  if (root.contains("thermal")) {
    const json& t = root["thermal"];
    check_keys(t, "thermal", {"occupation", "temperature"});
    if (t.contains("occupation") && t.contains("temperature"))
      throw config_error("give thermal.occupation or thermal.temperature, not both");
    if (t.contains("occupation")) {
      cfg.occupation = number_at(t, "thermal", "occupation");
      if (*cfg.occupation < 0.0)
        throw config_error("thermal.occupation must be non-negative");
    }
    if (t.contains("temperature")) {
      cfg.temperature = number_at(t, "thermal", "temperature");
      if (*cfg.temperature < 0.0)
        throw config_error("thermal.temperature must be non-negative");
    }
  }

  if (root.contains("noise")) {
    const json& nz = root["noise"];
    check_keys(nz, "noise",
               {"model", "sigma", "sigma2", "gamma", "omega0", "omega", "table"});
    NoiseSection ns;
    ns.model = text_or(nz, "noise", "model", ns.model);
    ns.sigma2 = sigma2_from(nz, "noise");
    ns.gamma = number_or(nz, "noise", "gamma", ns.gamma);
    ns.omega0 = number_or(nz, "noise", "omega0", ns.omega0);
    ns.omega = number_or(nz, "noise", "omega", ns.omega);
    ns.table_path = text_or(nz, "noise", "table", ns.table_path);
    cfg.noise = ns;
  }

  if (root.contains("mc")) {
    const json& m = root["mc"];
    check_keys(m, "mc",
               {"runs", "grid", "master_seed", "mode", "u", "per_run_csv", "noise_csv"});
    cfg.mc.runs = index_or(m, "mc", "runs", cfg.mc.runs);
    cfg.mc.grid = index_or(m, "mc", "grid", cfg.mc.grid);
    if (m.contains("master_seed")) {
      const json& v = m.at("master_seed");
      if (!v.is_number_unsigned())
        throw config_error("'mc.master_seed' must be a non-negative integer");
      cfg.mc.master_seed = v.get<std::uint64_t>();
    }
    cfg.mc.mode = parse_mode(text_or(m, "mc", "mode", "si"), "mc.mode");
    cfg.mc.u = number_or(m, "mc", "u", cfg.mc.u);
    cfg.mc.per_run_csv = flag_or(m, "mc", "per_run_csv", cfg.mc.per_run_csv);
    cfg.mc.noise_csv = flag_or(m, "mc", "noise_csv", cfg.mc.noise_csv);
  }

  if (root.contains("transfer")) {
    const json& t = root["transfer"];
    check_keys(t, "transfer", {"kind", "u", "x_max", "x_step"});
    cfg.transfer.kind = text_or(t, "transfer", "kind", cfg.transfer.kind);
    if (cfg.transfer.kind != "dephase" && cfg.transfer.kind != "mismatch")
      throw config_error("transfer.kind must be 'dephase' or 'mismatch'");
    cfg.transfer.u = number_or(t, "transfer", "u", cfg.transfer.u);
    cfg.transfer.x_max = number_or(t, "transfer", "x_max", cfg.transfer.x_max);
    cfg.transfer.x_step = number_or(t, "transfer", "x_step", cfg.transfer.x_step);
    if (!(cfg.transfer.x_step > 0.0) || !(cfg.transfer.x_max > 0.0))
      throw config_error("transfer.x_max and transfer.x_step must be positive");
  }

  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    check_keys(s, "sweep", {"mode", "points", "mc_runs", "mc_grid", "u", "occupation"});
    cfg.sweep.mode = parse_mode(text_or(s, "sweep", "mode", "si"), "sweep.mode");
    cfg.sweep.points = index_or(s, "sweep", "points", cfg.sweep.points);
    if (cfg.sweep.points < 2) throw config_error("sweep.points must be at least 2");
    cfg.sweep.mc_runs = index_or(s, "sweep", "mc_runs", cfg.sweep.mc_runs);
    cfg.sweep.mc_grid = index_or(s, "sweep", "mc_grid", cfg.sweep.mc_grid);
    cfg.sweep.u = number_or(s, "sweep", "u", cfg.sweep.u);
    cfg.sweep.occupation = number_or(s, "sweep", "occupation", cfg.sweep.occupation);
  }

  if (root.contains("tolerance")) {
    const json& t = root["tolerance"];
    check_keys(t, "tolerance", {"target", "u", "occupation"});
    cfg.tolerance.target = number_or(t, "tolerance", "target", cfg.tolerance.target);
    if (t.contains("u")) cfg.tolerance.u = number_at(t, "tolerance", "u");
    if (t.contains("occupation"))
      cfg.tolerance.occupation = number_at(t, "tolerance", "occupation");
  }

  if (root.contains("oracle")) {
    const json& o = root["oracle"];
    check_keys(o, "oracle", {"dim", "substeps", "grid"});
    cfg.oracle.dim = index_or(o, "oracle", "dim", cfg.oracle.dim);
    cfg.oracle.substeps = index_or(o, "oracle", "substeps", cfg.oracle.substeps);
    cfg.oracle.grid = index_or(o, "oracle", "grid", cfg.oracle.grid);
  }

  if (root.contains("psd_convention")) {
    const std::string c = text_or(root, "(root)", "psd_convention", "paper");
    if (c == "paper")
      cfg.convention = PsdConvention::Paper;
    else if (c == "wk2pi")
      cfg.convention = PsdConvention::Wk2pi;
    else
      throw config_error("psd_convention must be 'paper' or 'wk2pi'");
  }

  return cfg;
}

}  // namespace sgi
