#include "simjudge/archetype.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace simjudge::gates {

namespace {

struct ClassRow {
  PdeClass pde_class;
  const char* name;
};

constexpr ClassRow kClasses[] = {
    {PdeClass::elliptic, "elliptic"},
    {PdeClass::parabolic, "parabolic"},
    {PdeClass::hyperbolic, "hyperbolic"},
    {PdeClass::ode, "ode"},
    {PdeClass::stiff_ode, "stiff-ode"},
    {PdeClass::conservation_law, "conservation-law"},
    {PdeClass::unknown, "unknown"},
};

RequiredParam make_param(const std::string& name, const std::string& dim_text, bool positive) {
  RequiredParam p;
  p.name = name;
  p.dimension_text = dim_text;
  p.dimension = units::dimension_from_string(dim_text);
  p.positive = positive;
  return p;
}

}  // namespace

std::string pde_class_name(PdeClass c) {
  for (const auto& row : kClasses)
    if (row.pde_class == c) return row.name;
  throw Error("invalid pde class");
}

PdeClass pde_class_from_name(const std::string& name) {
  for (const auto& row : kClasses)
    if (name == row.name) return row.pde_class;
  throw Error("unknown pde class '" + name + "'");
}

const std::vector<ArchetypeTemplate>& builtin_archetypes() {
  static const std::vector<ArchetypeTemplate> kTemplates = [] {
    std::vector<ArchetypeTemplate> t;

    ArchetypeTemplate heat;
    heat.id = "heat";
    heat.pde_class = PdeClass::parabolic;
    heat.required_params = {make_param("kappa", "m^2/s", true)};
    heat.requires_ic = true;
    heat.requires_full_boundary = true;
    heat.stability_rule = "ftcs-cfl";
    heat.keywords = {"u_t", "diffusion", "heat"};
    t.push_back(heat);

    ArchetypeTemplate poisson;
    poisson.id = "poisson";
    poisson.pde_class = PdeClass::elliptic;
    poisson.requires_full_boundary = true;
    poisson.stability_rule = "coercivity";
    poisson.keywords = {"poisson", "laplace", "laplacian"};
    t.push_back(poisson);

    ArchetypeTemplate wave;
    wave.id = "wave";
    wave.pde_class = PdeClass::hyperbolic;
    wave.required_params = {make_param("c", "m/s", true)};
    wave.requires_ic = true;
    wave.requires_full_boundary = true;
    wave.stability_rule = "advection-cfl";
    wave.keywords = {"u_tt", "wave"};
    t.push_back(wave);

    ArchetypeTemplate advection;
    advection.id = "advection";
    advection.pde_class = PdeClass::hyperbolic;
    advection.required_params = {make_param("c", "m/s", false)};
    advection.requires_ic = true;
    advection.stability_rule = "advection-cfl";
    advection.keywords = {"advection", "transport"};
    t.push_back(advection);

    ArchetypeTemplate stiff;
    stiff.id = "stiff-ode";
    stiff.pde_class = PdeClass::stiff_ode;
    stiff.requires_ic = true;
    stiff.stability_rule = "stiffness";
    stiff.keywords = {"stiff"};
    t.push_back(stiff);

    ArchetypeTemplate ode;
    ode.id = "generic-ode";
    ode.pde_class = PdeClass::ode;
    ode.requires_ic = true;
    ode.keywords = {"dx/dt", "dy/dt", "ode"};
    t.push_back(ode);

    ArchetypeTemplate scl;
    scl.id = "scalar-conservation-law";
    scl.pde_class = PdeClass::conservation_law;
    scl.requires_ic = true;
    scl.stability_rule = "advection-cfl";
    scl.keywords = {"burgers", "conservation law", "shock"};
    t.push_back(scl);

    return t;
  }();
  return kTemplates;
}

const ArchetypeTemplate& unknown_archetype() {
  static const ArchetypeTemplate kUnknown = [] {
    ArchetypeTemplate t;
    t.id = "unknown";
    t.pde_class = PdeClass::unknown;
    return t;
  }();
  return kUnknown;
}

std::string archetypes_to_json(const std::vector<ArchetypeTemplate>& templates) {
  nlohmann::json root;
  for (const auto& t : templates) {
    nlohmann::json entry;
    entry["pde_class"] = pde_class_name(t.pde_class);
    entry["requires_ic"] = t.requires_ic;
    entry["requires_full_boundary"] = t.requires_full_boundary;
    if (t.stability_rule) entry["stability_rule"] = *t.stability_rule;
    nlohmann::json params = nlohmann::json::object();
    for (const auto& p : t.required_params) {
      params[p.name] = {{"dimension", p.dimension_text}, {"positive", p.positive}};
    }
    entry["required_params"] = params;
    entry["keywords"] = t.keywords;
    root[t.id] = entry;
  }
  return root.dump(2) + "\n";
}

std::vector<ArchetypeTemplate> load_archetypes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open archetype file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  nlohmann::json root = nlohmann::json::parse(buffer.str());

  std::vector<ArchetypeTemplate> out;
  for (const auto& [id, entry] : root.items()) {
    ArchetypeTemplate t;
    t.id = id;
    t.pde_class = pde_class_from_name(entry.at("pde_class").get<std::string>());
    t.requires_ic = entry.value("requires_ic", false);
    t.requires_full_boundary = entry.value("requires_full_boundary", false);
    if (entry.contains("stability_rule"))
      t.stability_rule = entry["stability_rule"].get<std::string>();
    if (entry.contains("required_params")) {
      for (const auto& [name, spec] : entry["required_params"].items()) {
        t.required_params.push_back(make_param(name, spec.at("dimension").get<std::string>(),
                                               spec.value("positive", false)));
      }
    }
    if (entry.contains("keywords")) {
      for (const auto& k : entry["keywords"]) t.keywords.push_back(k.get<std::string>());
    }
    out.push_back(std::move(t));
  }
  return out;
}

const ArchetypeTemplate* find_archetype(const std::vector<ArchetypeTemplate>& templates,
                                        const std::string& id) {
  for (const auto& t : templates)
    if (t.id == id) return &t;
  return nullptr;
}

}  // namespace simjudge::gates
