#pragma once

#include <map>
#include <string>
#include <vector>

#include "sheathlab/evolve.hpp"

namespace sheathlab {

// Parsed key-value file: section -> key -> raw string value. Sections are
// [physics], [grid], [perturbation], [weight], [run] and optionally [sweep].
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

// Parse INI-style text. Comments start with '#' or ';'. Throws ConfigError
// naming the offending line for malformed lines, duplicate keys, or content
// before the first section header.
ConfigMap parse_ini(const std::string& text);
ConfigMap parse_ini_file(const std::string& path);

// Validate and resolve a ConfigMap into a SimConfig. Unknown sections or
// keys are errors (typos must not pass silently). Conveniences:
//   [physics] mach = degenerate   sets u_inf = -sqrt((gamma R T_inf + 1)/m)
//   [physics] phi_b = X           sets u_e = |u_inf| e^X
// each mutually exclusive with giving u_inf / u_e directly. A missing
// [grid] L is filled from default_domain_length.
SimConfig resolve_config(const ConfigMap& map);

// Re-serialize a resolved config; parsing the result yields the same config.
std::string serialize_config(const SimConfig& config);

// Built-in scenarios, one per existence branch: "nondegenerate",
// "degenerate", "forbidden", "trivial". Throws ConfigError for other names.
ConfigMap preset_config(const std::string& name);
std::vector<std::string> preset_names();

// One-dimensional parameter sweep from the [sweep] section: dotted key
// "section.key" and a comma-separated value list. Each value is substituted
// into a copy of the base map, which is then resolved independently.
struct SweepSpec {
  std::string section, key;
  std::vector<std::string> values;
};

SweepSpec resolve_sweep(const ConfigMap& map);

}  // namespace sheathlab
