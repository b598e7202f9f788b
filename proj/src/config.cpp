#include "floqsim/config.hpp"

#include "floqsim/error.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace floqsim {

namespace {

using T = ValueType;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) out.push_back(trim(item));
  return out;
}

long parse_long(const std::string& key, const std::string& s) {
  long v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end || s.empty()) {
    throw ConfigError(key, "expected an integer, got '" + s + "'");
  }
  return v;
}

double parse_double(const std::string& key, const std::string& s) {
  if (s.empty()) throw ConfigError(key, "expected a number, got an empty value");
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ConfigError(key, "expected a finite number, got '" + s + "'");
  }
  return v;
}

const ConfigKey& lookup(const std::string& key) {
  for (const ConfigKey& k : config_schema()) {
    if (k.name == key) return k;
  }
  throw ConfigError(key, "unknown key");
}

std::string canonical(const ConfigKey& k, const std::string& value) {
  const std::string v = trim(value);
  switch (k.type) {
    case T::integer: return std::to_string(parse_long(k.name, v));
    case T::real: return format_real(parse_double(k.name, v));
    case T::real_or_auto:
      return v == "auto" ? v : format_real(parse_double(k.name, v));
    case T::boolean:
      if (v == "true" || v == "1") return "true";
      if (v == "false" || v == "0") return "false";
      throw ConfigError(k.name, "expected true or false, got '" + v + "'");
    case T::text:
      if (!k.choices.empty() &&
          std::find(k.choices.begin(), k.choices.end(), v) == k.choices.end()) {
        std::string allowed;
        for (const auto& c : k.choices) allowed += (allowed.empty() ? "" : ", ") + c;
        throw ConfigError(k.name, "'" + v + "' is not one of " + allowed);
      }
      return v;
    case T::int_list:
    case T::real_list: {
      std::string out;
      const auto items = split_list(v);
      if (items.empty()) throw ConfigError(k.name, "expected a comma-separated list");
      for (const auto& item : items) {
        out += out.empty() ? "" : ",";
        out += k.type == T::int_list ? std::to_string(parse_long(k.name, item))
                                     : format_real(parse_double(k.name, item));
      }
      return out;
    }
  }
  return v;
}

using Defaults = std::map<std::string, std::string>;

const std::map<std::string, Defaults>& scenario_defaults() {
  static const std::map<std::string, Defaults> table = {
      {"dynamics",
       {{"n_sites", "4"}, {"J", "-1"}, {"hz", "-1.5"}, {"omega", "50"}, {"periods", "20"},
        {"n_trotter", "20"}, {"drive_amplitude", "auto"}, {"amplitude_convention", "rotation_angle"},
        {"substeps", "256"}, {"tolerance", "1e-6"}, {"max_refinements", "2"}, {"circuit", "pair_groups"}}},
      {"anneal",
       {{"n_sites", "4"}, {"J", "-1"}, {"hz", "1"}, {"omega", "9.8"}, {"t_final", "15.08"},
        {"drive_amplitude", "auto"}, {"amplitude_convention", "rotation_angle"},
        {"substeps", "256"}, {"tolerance", "1e-6"}, {"max_refinements", "2"}, {"anharmonicity", "0"},
        {"n_trotter", "14"}, {"eps", "1e-4"}, {"ramp_coupling", "true"},
        {"sampling", "midpoint"}, {"circuit", "pair_groups"}, {"continuous_steps", "4000"}}},
      {"sweep_omega",
       {{"n_sites_list", "4,5,6"}, {"J", "-1"}, {"hz", "1"}, {"t_final", "15.08"},
        {"omega_period_counts", "25,50,100,200,400"}, {"drive_amplitude", "auto"},
        {"amplitude_convention", "rotation_angle"}, {"substeps", "512"}, {"tolerance", "1e-6"},
        {"max_refinements", "2"},
        {"ramp_coupling", "true"}, {"continuous_steps", "4000"}}},
      {"sweep_ntrotter",
       {{"n_sites_list", "4,5,6"}, {"J", "-1"}, {"hz", "1"}, {"t_final", "15.08"},
        {"ntrotter_grid", "1,2,5,10,14,20,50,100,200,500,1000,2000"}, {"ramp_coupling", "true"},
        {"sampling", "midpoint"}, {"circuit", "pair_groups"}, {"continuous_steps", "4000"},
        {"tolerance", "1e-6"}, {"max_refinements", "2"}}},
      {"sweep_anharmonicity",
       {{"n_sites", "4"}, {"J", "-1"}, {"hz", "1"}, {"t_final", "15.08"},
        {"anharmonicity_grid", "150,300,600"}, {"omega_grid", "4,5.6,7.8,11,15.5,21.8"},
        {"drive_amplitude", "auto"}, {"amplitude_convention", "rotation_angle"},
        {"substeps", "256"}, {"tolerance", "1e-5"}, {"max_refinements", "2"},
        {"eps_grid", "1e-2,1e-3,1e-4,1e-5"},
        {"ntrotter_grid", "1,2,3,4,5,6,8,10,12,14,17,20,25,30,40,50"},
        {"ramp_coupling", "true"}, {"sampling", "midpoint"}, {"circuit", "pair_groups"},
        {"c_gate", "35"}}},
      {"xyz_anneal",
       {{"n_sites", "4"}, {"J", "-1"}, {"hz", "1"}, {"t_final", "200"}, {"periods", "954"},
        {"n_trotter", "477"}, {"drive_amplitude", "auto"},
        {"amplitude_convention", "rotation_angle"}, {"substeps", "512"}, {"tolerance", "1e-6"},
        {"max_refinements", "2"},
        {"ramp_coupling", "true"}, {"sampling", "midpoint"}, {"continuous_steps", "20000"}}},
      {"xi_table",
       {{"theta_even", "1.5707963267948966"}, {"phi_even", "0"},
        {"theta_odd", "1.5707963267948966"}, {"phi_odd", "0"}, {"chi_even_grid", "0"},
        {"chi_odd_grid", "0"}}},
      {"estimates",
       {{"n_sites", "4"}, {"J", "-1"}, {"hz", "1"}, {"J_mhz", "1"}, {"omega_mhz", "9.8"},
        {"anharmonicity_mhz", "300"}, {"t_final_us", "2.4"}, {"t_gate_ns", "18"},
        {"lambda_main_text", "1.20241"}, {"substeps", "256"}, {"tolerance", "1e-6"}, {"max_refinements", "2"},
        {"n_trotter", "14"}, {"eps", "1e-4"}, {"ramp_coupling", "true"},
        {"sampling", "midpoint"}, {"circuit", "pair_groups"}, {"qubit_limit_anharmonicity", "1e6"},
        {"continuous_steps", "4000"}}},
  };
  return table;
}

}  // namespace

std::string format_real(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

const std::vector<ConfigKey>& config_schema() {
  static const std::vector<ConfigKey> schema = {
      {"scenario", T::text, "scenario tag", {}},
      {"n_sites", T::integer, "chain length N", {}},
      {"n_sites_list", T::int_list, "chain lengths for sweeps", {}},
      {"J", T::real, "bare coupling, sets the unit |J| = 1 and its sign", {}},
      {"hz", T::real, "transverse field in units of |J|", {}},
      {"omega", T::real, "drive angular frequency in units of |J|", {}},
      {"periods", T::integer, "number of drive periods", {}},
      {"omega_period_counts", T::real_list, "sweep grid of omega t_f / 2 pi", {}},
      {"omega_grid", T::real_list, "inner omega search grid in units of |J|", {}},
      {"drive_amplitude", T::real_or_auto, "drive amplitude, or auto for the calibrated one", {}},
      {"amplitude_convention", T::text, "how drive_amplitude is read",
       {"main_text", "rotation_angle"}},
      {"t_final", T::real, "annealing time in units of 1/|J|", {}},
      {"substeps", T::integer, "substeps per drive period M", {}},
      {"continuous_steps", T::integer, "steps for undriven runs", {}},
      {"tolerance", T::real, "M vs 2M fidelity tolerance", {}},
      {"max_refinements", T::integer, "times M may be doubled to meet the tolerance", {}},
      {"anharmonicity", T::real, "transmon anharmonicity A in units of |J|; 0 for qubits", {}},
      {"anharmonicity_grid", T::real_list, "A values in units of |J|", {}},
      {"eps", T::real, "error per gate", {}},
      {"eps_grid", T::real_list, "errors per gate for the budget", {}},
      {"n_trotter", T::integer, "Trotter steps N_Tr", {}},
      {"ntrotter_grid", T::int_list, "Trotter step counts", {}},
      {"ramp_coupling", T::boolean, "switch the coupling on during the anneal", {}},
      {"sampling", T::text, "schedule sampling of digital steps", {"midpoint", "endpoint"}},
      {"circuit", T::text, "Ising Trotter circuit", {"pair_groups", "all_bonds"}},
      {"c_gate", T::real, "gate time constant, t_gate = c_gate / A", {}},
      {"theta_even", T::real, "even-site drive polar angle", {}},
      {"phi_even", T::real, "even-site drive azimuth", {}},
      {"theta_odd", T::real, "odd-site drive polar angle", {}},
      {"phi_odd", T::real, "odd-site drive azimuth", {}},
      {"chi_even_grid", T::real_list, "even-site rotation amplitudes", {}},
      {"chi_odd_grid", T::real_list, "odd-site rotation amplitudes", {}},
      {"J_mhz", T::real, "|J| / 2 pi in MHz", {}},
      {"omega_mhz", T::real, "omega / 2 pi in MHz", {}},
      {"anharmonicity_mhz", T::real, "A / 2 pi in MHz", {}},
      {"t_final_us", T::real, "annealing time in microseconds", {}},
      {"t_gate_ns", T::real, "gate time in nanoseconds", {}},
      {"lambda_main_text", T::real, "drive ratio lambda = chi / 2", {}},
      {"qubit_limit_anharmonicity", T::real, "A / |J| of the qubit-limit reference run", {}},
  };
  return schema;
}

const std::vector<std::string>& scenario_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, _] : scenario_defaults()) n.push_back(name);
    return n;
  }();
  return names;
}

ExperimentConfig ExperimentConfig::defaults(const std::string& scenario) {
  const auto& table = scenario_defaults();
  const auto it = table.find(scenario);
  if (it == table.end()) throw ConfigError("scenario", "unknown scenario '" + scenario + "'");
  ExperimentConfig cfg;
  cfg.scenario_ = scenario;
  for (const auto& [k, v] : it->second) cfg.values_[k] = canonical(lookup(k), v);
  return cfg;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text,
                                         const std::optional<std::string>& scenario) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::optional<std::string> declared;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("", "line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    lookup(key);
    if (key == "scenario") {
      declared = value;
    } else {
      pairs.emplace_back(key, value);
    }
  }
  if (declared && scenario && *declared != *scenario) {
    throw ConfigError("scenario", "file declares '" + *declared + "' but '" + *scenario +
                                      "' was requested");
  }
  const std::optional<std::string> name = scenario ? scenario : declared;
  if (!name) throw ConfigError("scenario", "no scenario given");
  ExperimentConfig cfg = defaults(*name);
  for (const auto& [k, v] : pairs) cfg.set(k, v);
  return cfg;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path,
                                        const std::optional<std::string>& scenario) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), scenario);
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  const ConfigKey& k = lookup(key);
  if (key == "scenario") {
    if (trim(value) != scenario_) throw ConfigError(key, "cannot change the scenario");
    return;
  }
  if (!has(key)) throw ConfigError(key, "not used by scenario '" + scenario_ + "'");
  values_[key] = canonical(k, value);
}

void ExperimentConfig::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) {
    throw ConfigError("", "override '" + assignment + "' is not key=value");
  }
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::string ExperimentConfig::serialize() const {
  std::string out = "scenario=" + scenario_ + "\n";
  for (const auto& [k, v] : values_) out += k + "=" + v + "\n";
  return out;
}

const std::string& ExperimentConfig::raw(const std::string& key) const {
  lookup(key);
  const auto it = values_.find(key);
  if (it == values_.end()) {
    throw ConfigError(key, "required by scenario '" + scenario_ + "' but not set");
  }
  return it->second;
}

int ExperimentConfig::get_int(const std::string& key) const {
  return static_cast<int>(parse_long(key, raw(key)));
}

double ExperimentConfig::get_real(const std::string& key) const {
  return parse_double(key, raw(key));
}

std::optional<double> ExperimentConfig::get_real_or_auto(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "auto") return std::nullopt;
  return parse_double(key, v);
}

const std::string& ExperimentConfig::get_text(const std::string& key) const {
  return raw(key);
}

bool ExperimentConfig::get_bool(const std::string& key) const {
  return raw(key) == "true";
}

std::vector<int> ExperimentConfig::get_ints(const std::string& key) const {
  std::vector<int> out;
  for (const auto& item : split_list(raw(key))) {
    out.push_back(static_cast<int>(parse_long(key, item)));
  }
  return out;
}

std::vector<double> ExperimentConfig::get_reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(raw(key))) out.push_back(parse_double(key, item));
  return out;
}

}  // namespace floqsim
