#pragma once

#include "netctl/types.hpp"

#include <vector>

namespace netctl {

/// Parameters for a directed Erdos-Renyi draw.
struct GraphSpec {
  Index n = 2;
  double edge_prob = 0.0;
  bool normalize = false;  // divide the adjacency by sqrt(n)
  std::uint64_t seed = 0;  // used by the rng-less overload
};

/// Directed ER adjacency: i.i.d. Bernoulli(edge_prob) unit-weight edges, no
/// self-loops; divided by sqrt(n) when spec.normalize is set.
Matrix erdos_renyi(const GraphSpec& spec, Rng& rng);
Matrix erdos_renyi(const GraphSpec& spec);  // seeds an Rng from spec.seed

/// Strongly connected components of the nonzero pattern of adj.
struct SccResult {
  std::vector<Index> component;  // node -> component id
  Index count = 0;
  /// Component ids in topological order of the condensation DAG.
  std::vector<Index> topo_order;
};

SccResult strongly_connected_components(const Matrix& adj);

struct RepairResult {
  Matrix adjacency;
  Index added_edges = 0;      // inter-component edges inserted
  Index components_before = 0;
};

/// Sets unit self-loops on every node (optional) and, if the digraph is not
/// strongly connected, closes the SCC condensation into a cycle along its
/// topological order, inserting one unit-weight edge between random component
/// representatives per missing link.
RepairResult repair_connectivity(Matrix adjacency, Rng& rng,
                                 bool add_self_loops = true);

/// Prescribed input/output node sets.
struct NodeSelection {
  std::vector<Index> input_nodes;   // m distinct indices
  std::vector<Index> output_nodes;  // p distinct indices
};

/// Uniform sampling without replacement, inputs and outputs drawn
/// independently of each other.
NodeSelection select_nodes(Index n, Index m, Index p, Rng& rng);

/// B: n x m with one unit entry per column (column j = e_{nodes[j]}).
Matrix input_matrix(const std::vector<Index>& nodes, Index n);

/// C: p x n with one unit entry per row (row i = e_{nodes[i]}^T).
Matrix output_matrix(const std::vector<Index>& nodes, Index n);

/// Adds independent uniform [-delta, delta] noise to the nonzero entries of
/// adj (the network's edges, self-loops included); with all_entries set the
/// noise lands on every entry instead.
Matrix perturb_edges(const Matrix& adj, double delta, Rng& rng,
                     bool all_entries = false);

}  // namespace netctl
