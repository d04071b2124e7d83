#pragma once

#include <optional>
#include <string>
#include <vector>

#include "simjudge/units.hpp"

namespace simjudge::gates {

enum class PdeClass { elliptic, parabolic, hyperbolic, ode, stiff_ode, conservation_law, unknown };

std::string pde_class_name(PdeClass c);
PdeClass pde_class_from_name(const std::string& name);

struct RequiredParam {
  std::string name;
  units::Dimension dimension;
  std::string dimension_text;  // original annotation, e.g. "m^2/s"
  bool positive = false;       // non-physical when <= 0
};

struct ArchetypeTemplate {
  std::string id;
  PdeClass pde_class = PdeClass::unknown;
  std::vector<RequiredParam> required_params;
  bool requires_ic = false;
  bool requires_full_boundary = false;
  std::optional<std::string> stability_rule;  // e.g. "ftcs-cfl", "advection-cfl"
  std::vector<std::string> keywords;          // equation-text classification hints
};

// Shipped set: heat, poisson, wave, advection, stiff-ode, generic-ode,
// scalar-conservation-law, plus the unknown fallback.
const std::vector<ArchetypeTemplate>& builtin_archetypes();
const ArchetypeTemplate& unknown_archetype();

// Loads templates from the JSON data file (same schema as data/archetypes.json).
std::vector<ArchetypeTemplate> load_archetypes(const std::string& path);

// JSON round-trip for the data file.
std::string archetypes_to_json(const std::vector<ArchetypeTemplate>& templates);

const ArchetypeTemplate* find_archetype(const std::vector<ArchetypeTemplate>& templates,
                                        const std::string& id);

}  // namespace simjudge::gates
