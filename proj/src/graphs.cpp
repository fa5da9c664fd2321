#include "netctl/graphs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace netctl {

Matrix erdos_renyi(const GraphSpec& spec, Rng& rng) {
  if (spec.n < 2) throw InvalidInputError("erdos_renyi: need n >= 2");
  if (!(spec.edge_prob >= 0.0 && spec.edge_prob <= 1.0)) {
    throw InvalidInputError("erdos_renyi: edge_prob must lie in [0, 1]");
  }
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  Matrix adj = Matrix::Zero(spec.n, spec.n);
  for (Index i = 0; i < spec.n; ++i) {
    for (Index j = 0; j < spec.n; ++j) {
      if (i == j) continue;
      if (coin(rng) < spec.edge_prob) adj(i, j) = 1.0;
    }
  }
  if (spec.normalize) adj /= std::sqrt(static_cast<double>(spec.n));
  return adj;
}

Matrix erdos_renyi(const GraphSpec& spec) {
  Rng rng = make_rng({spec.seed});
  return erdos_renyi(spec, rng);
}

SccResult strongly_connected_components(const Matrix& adj) {
  if (adj.rows() != adj.cols()) {
    throw InvalidInputError("strongly_connected_components: matrix not square");
  }
  const Index n = adj.rows();

  // Adjacency lists over the nonzero pattern (self-loops are irrelevant).
  std::vector<std::vector<Index>> out(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && adj(i, j) != 0.0) out[static_cast<size_t>(i)].push_back(j);
    }
  }

  // Iterative Tarjan; the explicit stack keeps large graphs off the call
  // stack. Components are completed in reverse topological order.
  SccResult result;
  result.component.assign(static_cast<size_t>(n), -1);
  std::vector<Index> index(static_cast<size_t>(n), -1);
  std::vector<Index> lowlink(static_cast<size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<size_t>(n), false);
  std::vector<Index> stack;
  Index next_index = 0;

  struct Frame {
    Index node;
    size_t edge = 0;
  };
  std::vector<Frame> call;

  for (Index root = 0; root < n; ++root) {
    if (index[static_cast<size_t>(root)] != -1) continue;
    call.push_back({root});
    while (!call.empty()) {
      Frame& frame = call.back();
      const Index v = frame.node;
      if (frame.edge == 0) {
        index[static_cast<size_t>(v)] = next_index;
        lowlink[static_cast<size_t>(v)] = next_index;
        ++next_index;
        stack.push_back(v);
        on_stack[static_cast<size_t>(v)] = true;
      }
      bool descended = false;
      while (frame.edge < out[static_cast<size_t>(v)].size()) {
        const Index w = out[static_cast<size_t>(v)][frame.edge];
        ++frame.edge;
        if (index[static_cast<size_t>(w)] == -1) {
          call.push_back({w});
          descended = true;
          break;
        }
        if (on_stack[static_cast<size_t>(w)]) {
          lowlink[static_cast<size_t>(v)] = std::min(
              lowlink[static_cast<size_t>(v)], index[static_cast<size_t>(w)]);
        }
      }
      if (descended) continue;
      if (lowlink[static_cast<size_t>(v)] == index[static_cast<size_t>(v)]) {
        while (true) {
          const Index w = stack.back();
          stack.pop_back();
          on_stack[static_cast<size_t>(w)] = false;
          result.component[static_cast<size_t>(w)] = result.count;
          if (w == v) break;
        }
        ++result.count;
      }
      call.pop_back();
      if (!call.empty()) {
        Frame& parent = call.back();
        lowlink[static_cast<size_t>(parent.node)] =
            std::min(lowlink[static_cast<size_t>(parent.node)],
                     lowlink[static_cast<size_t>(v)]);
      }
    }
  }

  // Tarjan numbers components in reverse topological order.
  result.topo_order.resize(static_cast<size_t>(result.count));
  std::iota(result.topo_order.rbegin(), result.topo_order.rend(), Index{0});
  return result;
}

RepairResult repair_connectivity(Matrix adjacency, Rng& rng,
                                 bool add_self_loops) {
  if (adjacency.rows() != adjacency.cols()) {
    throw InvalidInputError("repair_connectivity: matrix not square");
  }
  const Index n = adjacency.rows();

  RepairResult result;
  const SccResult scc = strongly_connected_components(adjacency);
  result.components_before = scc.count;

  if (scc.count > 1) {
    // Group members per component.
    std::vector<std::vector<Index>> members(static_cast<size_t>(scc.count));
    for (Index v = 0; v < n; ++v) {
      members[static_cast<size_t>(scc.component[static_cast<size_t>(v)])]
          .push_back(v);
    }
    // Direct-edge presence between component pairs along the cycle we close.
    auto has_edge = [&](Index from_comp, Index to_comp) {
      for (Index v : members[static_cast<size_t>(from_comp)]) {
        for (Index w : members[static_cast<size_t>(to_comp)]) {
          if (adjacency(v, w) != 0.0) return true;
        }
      }
      return false;
    };
    for (Index k = 0; k < scc.count; ++k) {
      const Index from = scc.topo_order[static_cast<size_t>(k)];
      const Index to =
          scc.topo_order[static_cast<size_t>((k + 1) % scc.count)];
      if (has_edge(from, to)) continue;
      const auto& src = members[static_cast<size_t>(from)];
      const auto& dst = members[static_cast<size_t>(to)];
      const Index v = src[std::uniform_int_distribution<size_t>(
          0, src.size() - 1)(rng)];
      const Index w = dst[std::uniform_int_distribution<size_t>(
          0, dst.size() - 1)(rng)];
      adjacency(v, w) = 1.0;
      ++result.added_edges;
    }
  }

  if (add_self_loops) {
    for (Index i = 0; i < n; ++i) adjacency(i, i) = 1.0;
  }
  result.adjacency = std::move(adjacency);
  return result;
}

NodeSelection select_nodes(Index n, Index m, Index p, Rng& rng) {
  if (m > n || p > n || m < 0 || p < 0) {
    throw InvalidInputError("select_nodes: need m <= n and p <= n");
  }
  auto draw = [&](Index count) {
    std::vector<Index> pool(static_cast<size_t>(n));
    std::iota(pool.begin(), pool.end(), Index{0});
    // Partial Fisher-Yates: the first `count` entries are the sample.
    for (Index i = 0; i < count; ++i) {
      const Index j = std::uniform_int_distribution<Index>(i, n - 1)(rng);
      std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
    }
    pool.resize(static_cast<size_t>(count));
    return pool;
  };
  NodeSelection sel;
  sel.input_nodes = draw(m);
  sel.output_nodes = draw(p);
  return sel;
}

Matrix input_matrix(const std::vector<Index>& nodes, Index n) {
  Matrix b = Matrix::Zero(n, static_cast<Index>(nodes.size()));
  for (size_t j = 0; j < nodes.size(); ++j) {
    if (nodes[j] < 0 || nodes[j] >= n) {
      throw InvalidInputError("input_matrix: node index out of range");
    }
    b(nodes[j], static_cast<Index>(j)) = 1.0;
  }
  return b;
}

Matrix output_matrix(const std::vector<Index>& nodes, Index n) {
  Matrix c = Matrix::Zero(static_cast<Index>(nodes.size()), n);
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 0 || nodes[i] >= n) {
      throw InvalidInputError("output_matrix: node index out of range");
    }
    c(static_cast<Index>(i), nodes[i]) = 1.0;
  }
  return c;
}

Matrix perturb_edges(const Matrix& adj, double delta, Rng& rng,
                     bool all_entries) {
  if (delta < 0.0) throw InvalidInputError("perturb_edges: delta must be >= 0");
  std::uniform_real_distribution<double> noise(-delta, delta);
  Matrix out = adj;
  for (Index i = 0; i < adj.rows(); ++i) {
    for (Index j = 0; j < adj.cols(); ++j) {
      if (all_entries || adj(i, j) != 0.0) out(i, j) += noise(rng);
    }
  }
  return out;
}

}  // namespace netctl
