#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "simjudge/errors.hpp"

namespace simjudge::opgraph {

// The 12 computational primitives.
enum class Primitive {
  differentiate,
  integrate,
  solve_linear,
  evaluate,
  evolve,
  transform,
  project,
  sample,
  couple,
  constrain,
  discretize,
  optimize,
};

// Canonical snake_case name and the one-character symbol used in tables.
std::string primitive_name(Primitive p);
std::string primitive_symbol(Primitive p);
// Accepts canonical names and symbols; throws Error on anything else.
Primitive primitive_from_name(const std::string& name);

struct CostModel {
  double coeff_a = 1.0;
  double work_exponent_w = 1.0;
};

struct DagNode {
  std::string id;
  Primitive primitive = Primitive::evaluate;
  double lipschitz_L = 1.0;
  double error_C = 1.0;
  double error_order_q = 1.0;
  CostModel cost;
};

struct OperatorGraph {
  std::vector<DagNode> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  std::vector<std::size_t> topo_order;  // indices into nodes
  int node_count = 0;                   // D

  const DagNode* find(const std::string& id) const;
  std::size_t index_of(const std::string& id) const;  // throws if absent
  std::vector<std::vector<std::size_t>> successors() const;
};

// Validates ids, endpoints, acyclicity (throws CycleError with a witness
// cycle) and the single-sink requirement (throws MultipleSinksError).
OperatorGraph build_graph(std::vector<DagNode> nodes,
                          std::vector<std::pair<std::string, std::string>> edges);

// Throws if any node constant violates the finite-and-positive invariant.
void validate_node_constants(const OperatorGraph& g);

// Amplification factor of each node: product of Lipschitz constants over the
// set of strict descendants; the sink has factor 1.
std::map<std::string, double> amplification_factors(const OperatorGraph& g);

double dag_lipschitz(const OperatorGraph& g);

// Total bound sum_i ell_i * eps_i for supplied per-node errors.
double propagate_error(const OperatorGraph& g, const std::map<std::string, double>& eps);

struct NodeBudget {
  double ell = 1.0;  // amplification factor
  double eps = 0.0;  // allocated error
  double h = 0.0;    // selected resolution
};

struct ErrorBudget {
  std::map<std::string, NodeBudget> per_node;
  double total_bound = 0.0;
  double target_eps = 0.0;
  // Nodes with in-degree > 1: the set-product amplification can differ from a
  // per-path bound on such graphs, so they are surfaced in the report.
  std::vector<std::string> multipath_nodes;
};

// eps_i = eps / (D * ell_i), h_i = (eps / (D * ell_i * C_i))^(1/q_i).
ErrorBudget select_resolutions(const OperatorGraph& g, double target_eps);

// sum_i a_i * h_i^(-w_i * dim)
double estimate_cost(const ErrorBudget& budget, const OperatorGraph& g, int dim);

// Table of 25 method-family decompositions; throws UnknownFamilyError.
std::set<Primitive> primitives_for_family(const std::string& family);
std::vector<std::string> known_families();

}  // namespace simjudge::opgraph
