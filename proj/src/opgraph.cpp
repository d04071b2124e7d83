#include "simjudge/opgraph.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>

namespace simjudge::opgraph {

namespace {

struct PrimitiveInfo {
  Primitive primitive;
  const char* name;
  const char* symbol;
};

constexpr PrimitiveInfo kPrimitives[] = {
    {Primitive::differentiate, "differentiate", "∂"},
    {Primitive::integrate, "integrate", "∫"},
    {Primitive::solve_linear, "solve_linear", "L"},
    {Primitive::evaluate, "evaluate", "N"},
    {Primitive::evolve, "evolve", "E"},
    {Primitive::transform, "transform", "F"},
    {Primitive::project, "project", "Π"},
    {Primitive::sample, "sample", "S"},
    {Primitive::couple, "couple", "K"},
    {Primitive::constrain, "constrain", "B"},
    {Primitive::discretize, "discretize", "G"},
    {Primitive::optimize, "optimize", "O"},
};

}  // namespace

std::string primitive_name(Primitive p) {
  for (const auto& info : kPrimitives)
    if (info.primitive == p) return info.name;
  throw Error("invalid primitive");
}

std::string primitive_symbol(Primitive p) {
  for (const auto& info : kPrimitives)
    if (info.primitive == p) return info.symbol;
  throw Error("invalid primitive");
}

Primitive primitive_from_name(const std::string& name) {
  for (const auto& info : kPrimitives) {
    if (name == info.name || name == info.symbol) return info.primitive;
  }
  throw Error("unknown primitive '" + name + "'");
}

const DagNode* OperatorGraph::find(const std::string& id) const {
  for (const auto& n : nodes)
    if (n.id == id) return &n;
  return nullptr;
}

std::size_t OperatorGraph::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].id == id) return i;
  throw GraphError("unknown node id '" + id + "'");
}

std::vector<std::vector<std::size_t>> OperatorGraph::successors() const {
  std::vector<std::vector<std::size_t>> succ(nodes.size());
  for (const auto& [from, to] : edges) succ[index_of(from)].push_back(index_of(to));
  return succ;
}

namespace {

// DFS cycle search returning one witness cycle.
std::vector<std::string> find_cycle(const OperatorGraph& g) {
  const auto succ = g.successors();
  const std::size_t n = g.nodes.size();
  std::vector<int> state(n, 0);  // 0 unseen, 1 on stack, 2 done
  std::vector<std::size_t> stack;

  std::vector<std::string> cycle;
  auto dfs = [&](auto&& self, std::size_t v) -> bool {
    state[v] = 1;
    stack.push_back(v);
    for (std::size_t w : succ[v]) {
      if (state[w] == 1) {
        auto it = std::find(stack.begin(), stack.end(), w);
        for (; it != stack.end(); ++it) cycle.push_back(g.nodes[*it].id);
        cycle.push_back(g.nodes[w].id);
        return true;
      }
      if (state[w] == 0 && self(self, w)) return true;
    }
    state[v] = 2;
    stack.pop_back();
    return false;
  };
  for (std::size_t v = 0; v < n; ++v) {
    if (state[v] == 0 && dfs(dfs, v)) return cycle;
  }
  return {};
}

}  // namespace

OperatorGraph build_graph(std::vector<DagNode> nodes,
                          std::vector<std::pair<std::string, std::string>> edges) {
  if (nodes.empty()) throw GraphError("graph has no nodes");

  OperatorGraph g;
  g.nodes = std::move(nodes);
  g.edges = std::move(edges);
  g.node_count = int(g.nodes.size());

  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < g.nodes.size(); ++j) {
      if (g.nodes[i].id == g.nodes[j].id)
        throw GraphError("duplicate node id '" + g.nodes[i].id + "'");
    }
  }
  for (const auto& [from, to] : g.edges) {
    g.index_of(from);
    g.index_of(to);
  }

  // Kahn topological sort; ties broken by node order for determinism.
  const auto succ = g.successors();
  std::vector<int> indegree(g.nodes.size(), 0);
  for (const auto& adj : succ)
    for (std::size_t w : adj) ++indegree[w];

  std::deque<std::size_t> ready;
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    if (indegree[v] == 0) ready.push_back(v);
  while (!ready.empty()) {
    const std::size_t v = ready.front();
    ready.pop_front();
    g.topo_order.push_back(v);
    for (std::size_t w : succ[v]) {
      if (--indegree[w] == 0) ready.push_back(w);
    }
  }
  if (g.topo_order.size() != g.nodes.size()) {
    auto cycle = find_cycle(g);
    std::string rendered;
    for (const auto& id : cycle) {
      if (!rendered.empty()) rendered += " -> ";
      rendered += id;
    }
    throw CycleError(cycle, rendered);
  }

  std::vector<std::string> sinks;
  for (std::size_t v = 0; v < g.nodes.size(); ++v)
    if (succ[v].empty()) sinks.push_back(g.nodes[v].id);
  if (sinks.size() != 1) {
    std::string list;
    for (const auto& s : sinks) list += (list.empty() ? "" : ", ") + s;
    throw MultipleSinksError("graph must have exactly one sink, found " +
                             std::to_string(sinks.size()) + " [" + list + "]");
  }
  return g;
}

void validate_node_constants(const OperatorGraph& g) {
  for (const auto& n : g.nodes) {
    if (!(std::isfinite(n.lipschitz_L) && n.lipschitz_L > 0.0))
      throw GraphError("node '" + n.id + "' lacks a finite positive Lipschitz constant");
    if (!(std::isfinite(n.error_C) && n.error_C > 0.0))
      throw GraphError("node '" + n.id + "' lacks a finite positive error constant");
    if (!(std::isfinite(n.error_order_q) && n.error_order_q > 0.0))
      throw GraphError("node '" + n.id + "' lacks a finite positive error order");
  }
}

std::map<std::string, double> amplification_factors(const OperatorGraph& g) {
  const auto succ = g.successors();
  const std::size_t n = g.nodes.size();

  // Descendant sets accumulated in reverse topological order.
  std::vector<std::vector<bool>> desc(n, std::vector<bool>(n, false));
  for (auto it = g.topo_order.rbegin(); it != g.topo_order.rend(); ++it) {
    const std::size_t v = *it;
    for (std::size_t w : succ[v]) {
      desc[v][w] = true;
      for (std::size_t u = 0; u < n; ++u)
        if (desc[w][u]) desc[v][u] = true;
    }
  }

  std::map<std::string, double> out;
  for (std::size_t v = 0; v < n; ++v) {
    double ell = 1.0;
    for (std::size_t u = 0; u < n; ++u)
      if (desc[v][u]) ell *= g.nodes[u].lipschitz_L;
    out[g.nodes[v].id] = ell;
  }
  return out;
}

double dag_lipschitz(const OperatorGraph& g) {
  double best = 0.0;
  for (const auto& [id, ell] : amplification_factors(g)) best = std::max(best, ell);
  return best;
}

double propagate_error(const OperatorGraph& g, const std::map<std::string, double>& eps) {
  const auto ells = amplification_factors(g);
  double total = 0.0;
  for (const auto& n : g.nodes) {
    auto it = eps.find(n.id);
    const double e = it == eps.end() ? 0.0 : it->second;
    if (e < 0.0) throw Error("negative per-node error for '" + n.id + "'");
    total += ells.at(n.id) * e;
  }
  return total;
}

ErrorBudget select_resolutions(const OperatorGraph& g, double target_eps) {
  if (!(target_eps > 0.0)) throw Error("target tolerance must be positive");
  validate_node_constants(g);

  ErrorBudget budget;
  budget.target_eps = target_eps;
  const auto ells = amplification_factors(g);
  const double d_count = double(g.node_count);

  for (const auto& n : g.nodes) {
    NodeBudget nb;
    nb.ell = ells.at(n.id);
    nb.eps = target_eps / (d_count * nb.ell);
    nb.h = std::pow(target_eps / (d_count * nb.ell * n.error_C), 1.0 / n.error_order_q);
    budget.per_node[n.id] = nb;
    budget.total_bound += nb.ell * nb.eps;
  }

  // in-degree > 1 nodes
  std::map<std::string, int> indeg;
  for (const auto& [from, to] : g.edges) indeg[to]++;
  for (const auto& n : g.nodes) {
    if (indeg.count(n.id) && indeg[n.id] > 1) budget.multipath_nodes.push_back(n.id);
  }
  return budget;
}

double estimate_cost(const ErrorBudget& budget, const OperatorGraph& g, int dim) {
  if (dim < 1) throw Error("dimension must be >= 1");
  double total = 0.0;
  for (const auto& n : g.nodes) {
    const auto it = budget.per_node.find(n.id);
    if (it == budget.per_node.end())
      throw Error("budget missing node '" + n.id + "'");
    total += n.cost.coeff_a * std::pow(it->second.h, -n.cost.work_exponent_w * double(dim));
  }
  return total;
}

namespace {

// Decompositions of the 25 standard method families.
const std::vector<std::pair<std::string, std::set<Primitive>>>& family_table() {
  using P = Primitive;
  static const std::vector<std::pair<std::string, std::set<Primitive>>> kTable = {
      {"Finite Difference (FD)", {P::differentiate, P::solve_linear, P::evolve, P::constrain, P::discretize}},
      {"Finite Element (FEM)", {P::differentiate, P::integrate, P::solve_linear, P::constrain, P::discretize}},
      {"Finite Volume (FVM)", {P::integrate, P::solve_linear, P::evolve, P::constrain, P::discretize}},
      {"Spectral methods", {P::transform, P::solve_linear, P::evolve, P::constrain}},
      {"Discontinuous Galerkin (DG)", {P::differentiate, P::integrate, P::solve_linear, P::evolve, P::constrain, P::discretize}},
      {"Boundary Element (BEM)", {P::integrate, P::solve_linear, P::constrain, P::discretize}},
      {"Smoothed Particle (SPH)", {P::differentiate, P::evaluate, P::evolve, P::couple, P::discretize}},
      {"Lattice Boltzmann (LBM)", {P::evolve, P::couple, P::constrain, P::discretize}},
      {"Density Functional Theory (DFT)", {P::differentiate, P::solve_linear, P::evaluate, P::project, P::constrain, P::discretize, P::optimize}},
      {"Molecular Dynamics (MD)", {P::evaluate, P::evolve, P::sample, P::couple, P::constrain}},
      {"Full Waveform Inversion (FWI)", {P::differentiate, P::solve_linear, P::evolve, P::transform, P::optimize, P::constrain, P::discretize}},
      {"Tensor Networks (DMRG)", {P::solve_linear, P::project, P::optimize, P::constrain}},
      {"Monte Carlo (MC/MCMC)", {P::evaluate, P::sample, P::constrain}},
      {"Configuration Interaction (CI)", {P::differentiate, P::solve_linear, P::project, P::constrain, P::discretize}},
      {"Adaptive Mesh Refinement (AMR)", {P::differentiate, P::solve_linear, P::evolve, P::constrain, P::discretize}},
      {"Isogeometric Analysis (IGA)", {P::differentiate, P::integrate, P::solve_linear, P::constrain, P::discretize}},
      {"Radial Basis Functions (RBF)", {P::evaluate, P::solve_linear, P::constrain}},
      {"Peridynamics", {P::integrate, P::evaluate, P::evolve, P::couple, P::constrain, P::discretize}},
      {"Domain Decomposition (DDM)", {P::solve_linear, P::couple, P::constrain, P::discretize}},
      {"Fluid-Structure Interaction (FSI)", {P::differentiate, P::solve_linear, P::evolve, P::evaluate, P::couple, P::constrain, P::discretize}},
      {"Computed Tomography (CT recon)", {P::integrate, P::solve_linear, P::optimize, P::constrain, P::discretize}},
      {"Bayesian Inference (MCMC)", {P::evaluate, P::sample, P::optimize, P::constrain}},
      {"Optimal Control", {P::differentiate, P::solve_linear, P::evolve, P::optimize, P::constrain, P::discretize}},
      {"Compressed Sensing", {P::transform, P::project, P::optimize, P::constrain}},
      {"Particle-in-Cell (PIC)", {P::differentiate, P::evaluate, P::evolve, P::sample, P::couple, P::discretize}},
  };
  return kTable;
}

// Dash and whitespace variations are normalized before lookup.
std::string normalize_family(const std::string& name) {
  std::string out;
  for (std::size_t i = 0; i < name.size(); ++i) {
    unsigned char c = name[i];
    // en/em dash UTF-8 sequences collapse to '-'
    if (c == 0xe2 && i + 2 < name.size() && (unsigned char)name[i + 1] == 0x80) {
      out.push_back('-');
      i += 2;
      continue;
    }
    if (c == '-' && !out.empty() && out.back() == '-') continue;
    out.push_back(char(std::tolower(c)));
  }
  return out;
}

}  // namespace

std::set<Primitive> primitives_for_family(const std::string& family) {
  const std::string key = normalize_family(family);
  for (const auto& [name, prims] : family_table()) {
    if (normalize_family(name) == key) return prims;
  }
  throw UnknownFamilyError(family);
}

std::vector<std::string> known_families() {
  std::vector<std::string> out;
  for (const auto& [name, prims] : family_table()) out.push_back(name);
  return out;
}

}  // namespace simjudge::opgraph
