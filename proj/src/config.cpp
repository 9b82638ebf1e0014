#include "qrt/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace qrt {

void EnvironmentParams::validate() const {
  auto pos = [](double v, const char* name) {
    if (!(v > 0.0)) throw ConfigError(std::string(name) + " must be positive");
  };
  pos(temperature, "env.T");
  pos(resistance, "env.R");
  pos(gap, "env.Delta");
  pos(Q_diel, "env.Q_diel");
  if (x_qp < 0.0) throw ConfigError("env.x_qp must be non-negative");
  if (A_phi_quarton < 0.0 || A_phi_ground < 0.0)
    throw ConfigError("flux noise amplitudes must be non-negative");
  if (gamma_phi < 0.8 || gamma_phi > 1.0)
    throw ConfigError("env.gamma_phi must lie in [0.8, 1.0]");
}

namespace {

enum class Unit { freq, cap, time_ns, time_us, time_s, temp, res, fluxnoise, flux, dimless };

struct Key {
  Unit unit;
  std::function<double(const RunConfig&)> get;
  std::function<void(RunConfig&, double)> set;
  bool integral = false;
};

struct StringKey {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, const std::string&)> set;
};

const char* unit_name(Unit u) {
  switch (u) {
    case Unit::freq: return "GHz";
    case Unit::cap: return "fF";
    case Unit::time_ns: return "ns";
    case Unit::time_us: return "us";
    case Unit::time_s: return "s";
    case Unit::temp: return "mK";
    case Unit::res: return "uOhm";
    case Unit::fluxnoise: return "uPhi0";
    case Unit::flux: return "Phi0";
    case Unit::dimless: return "";
  }
  return "";
}

// factor converting the given token to the canonical unit; <0 if unknown
double unit_factor(Unit u, const std::string& tok) {
  auto is = [&](const char* s) { return tok == s; };
  switch (u) {
    case Unit::freq:
      if (is("GHz")) return 1.0;
      if (is("MHz")) return 1e-3;
      if (is("kHz")) return 1e-6;
      if (is("Hz")) return 1e-9;
      break;
    case Unit::cap:
      if (is("fF")) return 1.0;
      if (is("pF")) return 1e3;
      break;
    case Unit::time_ns:
      if (is("ns")) return 1.0;
      if (is("ps")) return 1e-3;
      if (is("us")) return 1e3;
      break;
    case Unit::time_us:
      if (is("us")) return 1.0;
      if (is("ms")) return 1e3;
      if (is("ns")) return 1e-3;
      break;
    case Unit::time_s:
      if (is("s")) return 1.0;
      if (is("ms")) return 1e-3;
      break;
    case Unit::temp:
      if (is("mK")) return 1.0;
      if (is("K")) return 1e3;
      break;
    case Unit::res:
      if (is("uOhm")) return 1.0;
      if (is("mOhm")) return 1e3;
      if (is("Ohm")) return 1e6;
      break;
    case Unit::fluxnoise:
      if (is("uPhi0")) return 1.0;
      break;
    case Unit::flux:
      if (is("Phi0")) return 1.0;
      break;
    case Unit::dimless:
      break;
  }
  return -1.0;
}

using KeyMap = std::map<std::string, Key>;
using StringKeyMap = std::map<std::string, StringKey>;

#define QRT_KEY(name, unitv, field, integral_flag)                              \
  {name, Key{unitv, [](const RunConfig& c) { return double(c.field); },         \
             [](RunConfig& c, double v) {                                       \
               c.field = std::remove_reference_t<decltype(c.field)>(v);         \
             },                                                                 \
             integral_flag}}

const KeyMap& key_map() {
  static const KeyMap m = {
      QRT_KEY("circuit.E_Ja", Unit::freq, circuit.E_Ja, false),
      QRT_KEY("circuit.E_Jb", Unit::freq, circuit.E_Jb, false),
      QRT_KEY("circuit.E_J", Unit::freq, circuit.E_J, false),
      QRT_KEY("circuit.E_Q", Unit::freq, circuit.E_Q, false),
      QRT_KEY("circuit.E_Ca", Unit::freq, circuit.E_Ca, false),
      QRT_KEY("circuit.E_Cb", Unit::freq, circuit.E_Cb, false),
      QRT_KEY("circuit.E_Cab", Unit::freq, circuit.E_Cab, false),
      QRT_KEY("circuit.alpha", Unit::dimless, circuit.alpha, false),
      QRT_KEY("circuit.n_S", Unit::dimless, circuit.n_S, true),
      QRT_KEY("circuit.n_Ja", Unit::dimless, circuit.n_Ja, true),
      QRT_KEY("circuit.n_Jb", Unit::dimless, circuit.n_Jb, true),
      QRT_KEY("circuit.C_a", Unit::cap, circuit.C_a, false),
      QRT_KEY("circuit.C_b", Unit::cap, circuit.C_b, false),
      QRT_KEY("circuit.C_J", Unit::cap, circuit.C_J, false),
      QRT_KEY("circuit.C_s", Unit::cap, circuit.C_s, false),
      QRT_KEY("circuit.C_alpha", Unit::cap, circuit.C_alpha, false),
      QRT_KEY("circuit.kappa_r", Unit::freq, circuit.kappa_r, false),
      QRT_KEY("circuit.kappa_f", Unit::freq, circuit.kappa_f, false),
      QRT_KEY("circuit.flux_bias", Unit::flux, circuit.flux_bias, false),
      QRT_KEY("env.T", Unit::temp, env.temperature, false),
      QRT_KEY("env.R", Unit::res, env.resistance, false),
      QRT_KEY("env.x_qp", Unit::dimless, env.x_qp, false),
      QRT_KEY("env.Delta", Unit::freq, env.gap, false),
      QRT_KEY("env.Q_diel", Unit::dimless, env.Q_diel, false),
      QRT_KEY("env.A_phi_quarton", Unit::fluxnoise, env.A_phi_quarton, false),
      QRT_KEY("env.A_phi_ground", Unit::fluxnoise, env.A_phi_ground, false),
      QRT_KEY("env.gamma_phi", Unit::dimless, env.gamma_phi, false),
      QRT_KEY("env.thermal_ref", Unit::freq, env.thermal_ref, false),
      QRT_KEY("echo.segment", Unit::time_us, env.echo_segment, false),
      QRT_KEY("echo.total", Unit::time_s, env.echo_total, false),
      QRT_KEY("echo.dt", Unit::time_us, env.echo_dt, false),
      QRT_KEY("echo.seed", Unit::dimless, env.echo_seed, true),
      QRT_KEY("readout.omega_d", Unit::freq, readout.omega_d, false),
      QRT_KEY("readout.eps0", Unit::dimless, readout.eps0, false),
      QRT_KEY("readout.pulse_len", Unit::time_ns, readout.pulse_len, false),
      QRT_KEY("readout.ringdown", Unit::time_ns, readout.ringdown, false),
      QRT_KEY("readout.n_bar", Unit::dimless, readout.n_bar_target, false),
      QRT_KEY("readout.eta", Unit::dimless, readout.eta, false),
      QRT_KEY("readout.n_traj", Unit::dimless, readout.n_traj, true),
      QRT_KEY("readout.substeps", Unit::dimless, readout.substeps, true),
      QRT_KEY("readout.seed", Unit::dimless, readout.seed, true),
      QRT_KEY("readout.threads", Unit::dimless, readout.threads, true),
      QRT_KEY("readout.me_dt", Unit::time_ns, readout.me_dt, false),
      QRT_KEY("solver.dim_a", Unit::dimless, solver.dim_a, true),
      QRT_KEY("solver.dim_b", Unit::dimless, solver.dim_b, true),
      QRT_KEY("solver.taylor_order", Unit::dimless, solver.taylor_order, true),
      QRT_KEY("solver.n_star", Unit::dimless, solver.n_star, true),
      QRT_KEY("solver.i_star", Unit::dimless, solver.i_star, true),
      QRT_KEY("solver.j_star", Unit::dimless, solver.j_star, true),
      QRT_KEY("solver.cluster_c", Unit::dimless, solver.cluster_c, false),
      QRT_KEY("solver.prune_threshold", Unit::freq, solver.prune_threshold, false),
      QRT_KEY("solver.zpf_levels", Unit::dimless, solver.zpf_levels, true),
      QRT_KEY("solver.tilt_lo", Unit::dimless, solver.tilt_lo, false),
      QRT_KEY("solver.tilt_hi", Unit::dimless, solver.tilt_hi, false),
      QRT_KEY("solver.optimize_tilt", Unit::dimless, solver.optimize_tilt, true),
      QRT_KEY("sweep.axis1.start", Unit::dimless, sweep.axis1.start, false),
      QRT_KEY("sweep.axis1.stop", Unit::dimless, sweep.axis1.stop, false),
      QRT_KEY("sweep.axis1.points", Unit::dimless, sweep.axis1.points, true),
      QRT_KEY("sweep.axis2.start", Unit::dimless, sweep.axis2.start, false),
      QRT_KEY("sweep.axis2.stop", Unit::dimless, sweep.axis2.stop, false),
      QRT_KEY("sweep.axis2.points", Unit::dimless, sweep.axis2.points, true),
      QRT_KEY("sweep.workers", Unit::dimless, sweep.workers, true),
  };
  return m;
}

#undef QRT_KEY

const StringKeyMap& string_key_map() {
  static const StringKeyMap m = {
      {"solver.zpf_heuristic",
       {[](const RunConfig& c) { return c.solver.zpf_heuristic; },
        [](RunConfig& c, const std::string& v) {
          if (v != "min_adag_a" && v != "min_adag_adag" && v != "max_overlap")
            throw ConfigError("unknown zpf heuristic: " + v);
          c.solver.zpf_heuristic = v;
        }}},
      {"sweep.axis1.parameter",
       {[](const RunConfig& c) { return c.sweep.axis1.parameter; },
        [](RunConfig& c, const std::string& v) { c.sweep.axis1.parameter = v; }}},
      {"sweep.axis2.parameter",
       {[](const RunConfig& c) { return c.sweep.axis2.parameter; },
        [](RunConfig& c, const std::string& v) { c.sweep.axis2.parameter = v; }}},
      {"sweep.constraint",
       {[](const RunConfig& c) { return c.sweep.constraint; },
        [](RunConfig& c, const std::string& v) {
          if (v != "none" && v != "fix_resonator_frequency")
            throw ConfigError("unknown sweep constraint: " + v);
          c.sweep.constraint = v;
        }}},
      {"output.dir",
       {[](const RunConfig& c) { return c.output_dir; },
        [](RunConfig& c, const std::string& v) { c.output_dir = v; }}},
  };
  return m;
}

void assign(RunConfig& cfg, const std::string& key, const std::string& value,
            const std::string& unit, int line_no) {
  auto where = [&]() {
    return line_no >= 0 ? " (line " + std::to_string(line_no) + ")" : std::string();
  };
  if (auto it = string_key_map().find(key); it != string_key_map().end()) {
    if (!unit.empty()) throw ConfigError("key '" + key + "' takes no unit" + where());
    it->second.set(cfg, value);
    return;
  }
  auto it = key_map().find(key);
  if (it == key_map().end()) throw ConfigError("unknown key '" + key + "'" + where());
  const Key& k = it->second;
  double v = 0.0;
  try {
    std::size_t used = 0;
    v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value '" + value + "' for key '" + key + "'" + where());
  }
  if (k.unit == Unit::dimless) {
    if (!unit.empty())
      throw ConfigError("key '" + key + "' is dimensionless, got unit '" + unit + "'" + where());
  } else {
    if (unit.empty())
      throw ConfigError("key '" + key + "' requires a unit (" + unit_name(k.unit) + ")" + where());
    const double f = unit_factor(k.unit, unit);
    if (f < 0.0)
      throw ConfigError("key '" + key + "': unit '" + unit + "' not convertible to " +
                        unit_name(k.unit) + where());
    v *= f;
  }
  if (k.integral && std::abs(v - std::llround(v)) > 1e-9)
    throw ConfigError("key '" + key + "' expects an integer" + where());
  k.set(cfg, v);
}

}  // namespace

RunConfig parse_config(std::istream& in, const RunConfig& base) {
  RunConfig cfg = base;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("missing '=' at line " + std::to_string(line_no));
    const std::string key = trim(line.substr(0, eq));
    std::string rhs = trim(line.substr(eq + 1));
    // split "value [unit]"
    std::string value = rhs, unit;
    if (auto sp = rhs.find_first_of(" \t"); sp != std::string::npos) {
      value = trim(rhs.substr(0, sp));
      unit = trim(rhs.substr(sp + 1));
    }
    if (string_key_map().count(key)) {
      assign(cfg, key, rhs, "", line_no);  // string values may contain spaces
    } else {
      assign(cfg, key, value, unit, line_no);
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path, const RunConfig& base) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  return parse_config(f, base);
}

void apply_override(RunConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ConfigError("override must look like key=value[ unit]: " + assignment);
  const std::string key = assignment.substr(0, eq);
  std::string rhs = assignment.substr(eq + 1);
  std::string value = rhs, unit;
  if (auto sp = rhs.find_first_of(" \t"); sp != std::string::npos) {
    value = rhs.substr(0, sp);
    unit = rhs.substr(sp + 1);
  }
  if (string_key_map().count(key))
    assign(cfg, key, rhs, "", -1);
  else
    assign(cfg, key, value, unit, -1);
}

std::string serialize_config(const RunConfig& cfg) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [name, key] : key_map()) {
    out << name << " = ";
    const double v = key.get(cfg);
    if (key.integral)
      out << (long long)std::llround(v);
    else
      out << v;
    const char* u = unit_name(key.unit);
    if (*u) out << " " << u;
    out << "\n";
  }
  for (const auto& [name, key] : string_key_map()) {
    const std::string v = key.get(cfg);
    if (!v.empty()) out << name << " = " << v << "\n";
  }
  return out.str();
}

double get_parameter(const RunConfig& cfg, const std::string& path) {
  auto it = key_map().find(path);
  if (it == key_map().end()) throw ConfigError("unknown parameter path: " + path);
  return it->second.get(cfg);
}

void set_parameter(RunConfig& cfg, const std::string& path, double value) {
  auto it = key_map().find(path);
  if (it == key_map().end()) throw ConfigError("unknown parameter path: " + path);
  it->second.set(cfg, value);
  // coupled definitions: E_Q and E_J move together through the series count
  if (path == "circuit.E_Q") {
    const double ns = double(cfg.circuit.n_S);
    cfg.circuit.E_J = value * ns * ns * ns / (ns * ns - 1.0);
  } else if (path == "circuit.E_J") {
    cfg.circuit.E_Q = cfg.circuit.e_q_from_series();
  }
}

}  // namespace qrt
