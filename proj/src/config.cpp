#include "sheathlab/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>
#include <string>

#include "sheathlab/errors.hpp"
#include "sheathlab/io.hpp"

namespace sheathlab {

namespace {

std::string trim(const std::string& s) {
  const std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string where(const std::string& section, const std::string& key) {
  return "[" + section + "] " + key;
}

double parse_double(const std::string& section, const std::string& key,
                    const std::string& raw) {
  const char* begin = raw.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
  if (end == begin || (end && *end) || !std::isfinite(v))
    throw ConfigError(where(section, key) + ": not a finite number: '" + raw + "'");
  return v;
}

int parse_int(const std::string& section, const std::string& key,
              const std::string& raw) {
  const double v = parse_double(section, key, raw);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw ConfigError(where(section, key) + ": not an integer: '" + raw + "'");
  return i;
}

bool parse_bool(const std::string& section, const std::string& key,
                const std::string& raw) {
  if (raw == "true" || raw == "on" || raw == "1" || raw == "yes") return true;
  if (raw == "false" || raw == "off" || raw == "0" || raw == "no") return false;
  throw ConfigError(where(section, key) + ": not a boolean: '" + raw + "'");
}

}  // namespace

ConfigMap parse_ini(const std::string& text) {
  ConfigMap map;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    const std::string at = "line " + std::to_string(lineno) + ": ";
    if (t.front() == '[') {
      if (t.back() != ']' || t.size() < 3)
        throw ConfigError(at + "malformed section header: " + t);
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty())
        throw ConfigError(at + "empty section name");
      map[section];  // a section may legally hold no keys
      continue;
    }
    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError(at + "expected 'key = value', got: " + t);
    if (section.empty())
      throw ConfigError(at + "key before any [section] header: " + t);
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(at + "empty key");
    auto& sec = map[section];
    if (sec.count(key))
      throw ConfigError(at + "duplicate key '" + key + "' in [" + section + "]");
    sec[key] = val;
  }
  return map;
}

ConfigMap parse_ini_file(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  try {
    return parse_ini(text);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

SimConfig resolve_config(const ConfigMap& map) {
  static const std::set<std::string> known_sections = {
      "physics", "grid", "perturbation", "weight", "run", "sweep"};
  for (const auto& [sec, kv] : map)
    if (!known_sections.count(sec))
      throw ConfigError("unknown section [" + sec + "]");

  const auto section = [&](const char* name) {
    static const std::map<std::string, std::string> empty;
    const auto it = map.find(name);
    return it == map.end() ? &empty : &it->second;
  };

  SimConfig cfg;

  bool have_u_inf = false, have_u_e = false, have_mach = false,
       have_phi_b = false;
  double phi_b_val = 0.0;
  for (const auto& [key, raw] : *section("physics")) {
    if (key == "m") cfg.params.m = parse_double("physics", key, raw);
    else if (key == "gamma") cfg.params.gamma = parse_double("physics", key, raw);
    else if (key == "R") cfg.params.R = parse_double("physics", key, raw);
    else if (key == "T_inf") cfg.params.T_inf = parse_double("physics", key, raw);
    else if (key == "u_inf") {
      cfg.params.u_inf = parse_double("physics", key, raw);
      have_u_inf = true;
    } else if (key == "u_e") {
      cfg.params.u_e = parse_double("physics", key, raw);
      have_u_e = true;
    } else if (key == "mach") {
      if (raw != "degenerate")
        throw ConfigError("[physics] mach: only 'degenerate' is understood, got '" +
                          raw + "'");
      have_mach = true;
    } else if (key == "phi_b") {
      phi_b_val = parse_double("physics", key, raw);
      have_phi_b = true;
    } else {
      throw ConfigError("[physics] unknown key '" + key + "'");
    }
  }
  if (have_mach && have_u_inf)
    throw ConfigError("[physics] mach and u_inf are mutually exclusive");
  if (have_phi_b && have_u_e)
    throw ConfigError("[physics] phi_b and u_e are mutually exclusive");
  if (have_mach)
    cfg.params.u_inf = -std::sqrt(
        (cfg.params.gamma * cfg.params.R * cfg.params.T_inf + 1.0) / cfg.params.m);
  if (have_phi_b)
    cfg.params.u_e = std::abs(cfg.params.u_inf) * std::exp(phi_b_val);
  try {
    cfg.params.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("[physics] ") + e.what());
  }

  bool have_L = false;
  for (const auto& [key, raw] : *section("grid")) {
    if (key == "L") {
      cfg.grid.L = parse_double("grid", key, raw);
      have_L = true;
    } else if (key == "N") {
      cfg.grid.N = parse_int("grid", key, raw);
    } else {
      throw ConfigError("[grid] unknown key '" + key + "'");
    }
  }
  if (!have_L) cfg.grid.L = default_domain_length(cfg.params);

  for (const auto& [key, raw] : *section("perturbation")) {
    if (key == "shape") {
      if (raw == "none") cfg.perturbation.shape = PerturbationSpec::Shape::None;
      else if (raw == "gaussian")
        cfg.perturbation.shape = PerturbationSpec::Shape::GaussianBump;
      else if (raw == "exponential")
        cfg.perturbation.shape = PerturbationSpec::Shape::ExponentialTail;
      else if (raw == "algebraic")
        cfg.perturbation.shape = PerturbationSpec::Shape::AlgebraicTail;
      else
        throw ConfigError(
            "[perturbation] shape: expected none, gaussian, exponential or "
            "algebraic, got '" +
            raw + "'");
    } else if (key == "amplitude") {
      cfg.perturbation.amplitude = parse_double("perturbation", key, raw);
    } else if (key == "center") {
      cfg.perturbation.center = parse_double("perturbation", key, raw);
    } else if (key == "width") {
      cfg.perturbation.width = parse_double("perturbation", key, raw);
    } else if (key == "decay") {
      cfg.perturbation.decay = parse_double("perturbation", key, raw);
    } else if (key == "r0") {
      cfg.perturbation.r0 = parse_double("perturbation", key, raw);
    } else if (key == "on_v") {
      cfg.perturbation.on_v = parse_bool("perturbation", key, raw);
    } else if (key == "on_u") {
      cfg.perturbation.on_u = parse_bool("perturbation", key, raw);
    } else if (key == "on_T") {
      cfg.perturbation.on_T = parse_bool("perturbation", key, raw);
    } else {
      throw ConfigError("[perturbation] unknown key '" + key + "'");
    }
  }

  for (const auto& [key, raw] : *section("weight")) {
    if (key == "kind") {
      if (raw == "exponential") cfg.weight.kind = WeightKind::Exponential;
      else if (raw == "algebraic") cfg.weight.kind = WeightKind::Algebraic;
      else
        throw ConfigError("[weight] kind: expected exponential or algebraic, got '" +
                          raw + "'");
    } else if (key == "alpha") {
      cfg.weight.alpha = parse_double("weight", key, raw);
    } else if (key == "beta") {
      cfg.weight.beta = parse_double("weight", key, raw);
    } else if (key == "order") {
      cfg.weight.order = parse_int("weight", key, raw);
    } else {
      throw ConfigError("[weight] unknown key '" + key + "'");
    }
  }

  for (const auto& [key, raw] : *section("run")) {
    if (key == "cfl") cfg.cfl = parse_double("run", key, raw);
    else if (key == "t_end") cfg.t_end = parse_double("run", key, raw);
    else if (key == "output_every")
      cfg.output_every = parse_double("run", key, raw);
    else throw ConfigError("[run] unknown key '" + key + "'");
  }

  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

std::string serialize_config(const SimConfig& config) {
  const auto shape_name = [&]() -> const char* {
    switch (config.perturbation.shape) {
      case PerturbationSpec::Shape::None: return "none";
      case PerturbationSpec::Shape::GaussianBump: return "gaussian";
      case PerturbationSpec::Shape::ExponentialTail: return "exponential";
      case PerturbationSpec::Shape::AlgebraicTail: return "algebraic";
    }
    return "none";
  };
  const auto b = [](bool v) { return v ? "true" : "false"; };
  std::string s;
  s += "[physics]\n";
  s += "m = " + format_g17(config.params.m) + "\n";
  s += "gamma = " + format_g17(config.params.gamma) + "\n";
  s += "R = " + format_g17(config.params.R) + "\n";
  s += "T_inf = " + format_g17(config.params.T_inf) + "\n";
  s += "u_inf = " + format_g17(config.params.u_inf) + "\n";
  s += "u_e = " + format_g17(config.params.u_e) + "\n";
  s += "\n[grid]\n";
  s += "L = " + format_g17(config.grid.L) + "\n";
  s += "N = " + std::to_string(config.grid.N) + "\n";
  s += "\n[perturbation]\n";
  s += "shape = " + std::string(shape_name()) + "\n";
  s += "amplitude = " + format_g17(config.perturbation.amplitude) + "\n";
  s += "center = " + format_g17(config.perturbation.center) + "\n";
  s += "width = " + format_g17(config.perturbation.width) + "\n";
  s += "decay = " + format_g17(config.perturbation.decay) + "\n";
  s += "on_v = " + std::string(b(config.perturbation.on_v)) + "\n";
  s += "on_u = " + std::string(b(config.perturbation.on_u)) + "\n";
  s += "on_T = " + std::string(b(config.perturbation.on_T)) + "\n";
  s += "r0 = " + format_g17(config.perturbation.r0) + "\n";
  s += "\n[weight]\n";
  s += "kind = " + std::string(config.weight.kind == WeightKind::Exponential
                                   ? "exponential"
                                   : "algebraic") +
       "\n";
  s += "alpha = " + format_g17(config.weight.alpha) + "\n";
  s += "beta = " + format_g17(config.weight.beta) + "\n";
  s += "order = " + std::to_string(config.weight.order) + "\n";
  s += "\n[run]\n";
  s += "cfl = " + format_g17(config.cfl) + "\n";
  s += "t_end = " + format_g17(config.t_end) + "\n";
  s += "output_every = " + format_g17(config.output_every) + "\n";
  return s;
}

ConfigMap preset_config(const std::string& name) {
  if (name == "nondegenerate")
    return parse_ini(
        "[physics]\n"
        "m = 1\ngamma = 2\nR = 1\nT_inf = 1\n"
        "u_inf = -2\nphi_b = 0.05\n"
        "[grid]\nN = 2048\n"
        "[perturbation]\nshape = gaussian\namplitude = 1e-3\ncenter = 5\nwidth = 1\n"
        "[weight]\nkind = exponential\nbeta = 0.5\norder = 2\n"
        "[run]\ncfl = 0.5\nt_end = 50\noutput_every = 0.1\n");
  if (name == "degenerate")
    return parse_ini(
        "[physics]\n"
        "m = 1\ngamma = 2\nR = 1\nT_inf = 1\n"
        "mach = degenerate\nphi_b = 0.01\n"
        "[grid]\nN = 8192\nL = 400\n"
        "[perturbation]\nshape = gaussian\namplitude = 1e-3\ncenter = 5\nwidth = 1\n"
        // beta = Gamma * sqrt(phi_b) so the algebraic weight tracks the
        // envelope scale G(x) of the marginal profile
        "[weight]\nkind = algebraic\nalpha = 4\nbeta = 0.0816496580927726\norder = 2\n"
        "[run]\ncfl = 0.5\nt_end = 50\noutput_every = 0.1\n");
  if (name == "forbidden")
    return parse_ini(
        "[physics]\n"
        "m = 1\ngamma = 2\nR = 1\nT_inf = 1\n"
        "u_inf = -1.6\nphi_b = 0.05\n"
        "[grid]\nN = 1024\nL = 40\n"
        "[run]\nt_end = 10\noutput_every = 0.1\n");
  if (name == "trivial")
    return parse_ini(
        "[physics]\n"
        "m = 1\ngamma = 2\nR = 1\nT_inf = 1\n"
        "u_inf = -1.2\nphi_b = 0\n"
        "[grid]\nN = 1024\nL = 40\n"
        "[run]\nt_end = 10\noutput_every = 0.1\n");
  throw ConfigError("unknown preset '" + name +
                    "'; available: nondegenerate, degenerate, forbidden, trivial");
}

std::vector<std::string> preset_names() {
  return {"nondegenerate", "degenerate", "forbidden", "trivial"};
}

SweepSpec resolve_sweep(const ConfigMap& map) {
  const auto it = map.find("sweep");
  if (it == map.end()) throw ConfigError("no [sweep] section in this config");
  std::string dotted, values;
  for (const auto& [key, raw] : it->second) {
    if (key == "key") dotted = raw;
    else if (key == "values") values = raw;
    else throw ConfigError("[sweep] unknown key '" + key + "'");
  }
  if (dotted.empty() || values.empty())
    throw ConfigError("[sweep] needs both 'key = section.name' and 'values = a, b, ...'");
  const std::size_t dot = dotted.find('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == dotted.size())
    throw ConfigError("[sweep] key must be 'section.name', got '" + dotted + "'");
  SweepSpec spec;
  spec.section = dotted.substr(0, dot);
  spec.key = dotted.substr(dot + 1);
  if (spec.section == "sweep")
    throw ConfigError("[sweep] cannot sweep the sweep section itself");
  std::stringstream ss(values);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty())
      throw ConfigError("[sweep] empty entry in the values list");
    spec.values.push_back(item);
  }
  if (spec.values.empty()) throw ConfigError("[sweep] empty values list");
  return spec;
}

}  // namespace sheathlab
