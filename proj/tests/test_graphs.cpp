#include "netctl/graphs.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

#include "netctl/network.hpp"
#include "test_helpers.hpp"

using namespace netctl;
using test::random_vector;

TEST_SUITE_BEGIN("graphs");

TEST_CASE("edge probability one yields the complete digraph") {
  Rng rng = make_rng({31, 1});
  Matrix adj = erdos_renyi({.n = 3, .edge_prob = 1.0}, rng);
  Matrix expected = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  CHECK((adj - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("edge probability zero yields the empty graph") {
  Rng rng = make_rng({31, 2});
  CHECK(erdos_renyi({.n = 5, .edge_prob = 0.0}, rng).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("empirical edge density concentrates around edge_prob") {
  const Index n = 100;
  const double prob = std::log(100.0) / 100.0 + 0.05;
  const double trials = static_cast<double>(n * (n - 1));
  const double sigma = std::sqrt(prob * (1.0 - prob) / trials);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng = make_rng({31, 3, seed});
    Matrix adj = erdos_renyi({.n = n, .edge_prob = prob}, rng);
    const double density = adj.sum() / trials;
    CAPTURE(seed);
    CHECK(std::abs(density - prob) < 3.0 * sigma);
  }
}

TEST_CASE("normalization divides by sqrt(n) exactly") {
  Rng rng1 = make_rng({31, 4});
  Rng rng2 = make_rng({31, 4});
  Matrix raw = erdos_renyi({.n = 16, .edge_prob = 0.3}, rng1);
  Matrix normalized =
      erdos_renyi({.n = 16, .edge_prob = 0.3, .normalize = true}, rng2);
  CHECK(normalized.norm() == raw.norm() / 4.0);
}

TEST_CASE("same seed reproduces the adjacency bit for bit") {
  GraphSpec spec{.n = 40, .edge_prob = 0.2, .normalize = false, .seed = 77};
  Matrix a = erdos_renyi(spec);
  Matrix b = erdos_renyi(spec);
  CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("repair leaves strongly connected graphs alone (plus self-loops)") {
  Matrix cycle = Matrix::Zero(4, 4);
  for (Index i = 0; i < 4; ++i) cycle(i, (i + 1) % 4) = 1.0;
  Rng rng = make_rng({31, 5});
  RepairResult repaired = repair_connectivity(cycle, rng);
  CHECK(repaired.added_edges == 0);
  CHECK(repaired.components_before == 1);
  CHECK(repaired.adjacency.diagonal().minCoeff() == 1.0);
  CHECK(strongly_connected_components(repaired.adjacency).count == 1);
}

TEST_CASE("two disjoint 3-cycles need exactly two bridging edges") {
  Matrix adj = Matrix::Zero(6, 6);
  for (Index i = 0; i < 3; ++i) adj(i, (i + 1) % 3) = 1.0;
  for (Index i = 0; i < 3; ++i) adj(3 + i, 3 + (i + 1) % 3) = 1.0;
  Rng rng = make_rng({31, 6});
  RepairResult repaired = repair_connectivity(adj, rng);
  CHECK(repaired.components_before == 2);
  CHECK(repaired.added_edges == 2);
  CHECK(strongly_connected_components(repaired.adjacency).count == 1);
}

TEST_CASE("the empty graph becomes strongly connected after repair") {
  Rng rng = make_rng({31, 7});
  RepairResult repaired = repair_connectivity(Matrix::Zero(4, 4), rng);
  CHECK(repaired.components_before == 4);
  CHECK(strongly_connected_components(repaired.adjacency).count == 1);
}

TEST_CASE("self-loops can be disabled for ablation") {
  Matrix cycle = Matrix::Zero(3, 3);
  for (Index i = 0; i < 3; ++i) cycle(i, (i + 1) % 3) = 1.0;
  Rng rng = make_rng({31, 8});
  RepairResult repaired = repair_connectivity(cycle, rng, false);
  CHECK(repaired.adjacency.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("select_nodes samples without replacement and builds 0/1 maps") {
  Rng rng = make_rng({31, 9});
  NodeSelection sel = select_nodes(8, 8, 3, rng);
  // m = n: the input set is a permutation of all nodes.
  std::vector<bool> seen(8, false);
  for (Index v : sel.input_nodes) {
    CHECK(!seen[static_cast<size_t>(v)]);
    seen[static_cast<size_t>(v)] = true;
  }
  Matrix b = input_matrix(sel.input_nodes, 8);
  for (Index j = 0; j < b.cols(); ++j) {
    CHECK(b.col(j).sum() == 1.0);
    CHECK(b.col(j).cwiseAbs().maxCoeff() == 1.0);
  }
  Matrix c = output_matrix(sel.output_nodes, 8);
  CHECK(c.rows() == 3);
  for (Index i = 0; i < c.rows(); ++i) {
    CHECK(c.row(i).sum() == 1.0);
  }
  CHECK_THROWS_AS(select_nodes(4, 5, 1, rng), InvalidInputError);
}

TEST_CASE("single-node selection is uniform across 1000 draws") {
  Rng rng = make_rng({31, 10});
  std::vector<int> hits(10, 0);
  for (int draw = 0; draw < 1000; ++draw) {
    NodeSelection sel = select_nodes(10, 1, 1, rng);
    ++hits[static_cast<size_t>(sel.input_nodes[0])];
  }
  for (int count : hits) {
    CHECK(count > 70);   // 0.1 - 0.03
    CHECK(count < 130);  // 0.1 + 0.03
  }
}

TEST_CASE("perturb_edges touches only nonzero entries unless asked otherwise") {
  Matrix adj = Matrix::Zero(4, 4);
  adj(0, 1) = 1.0;
  adj(2, 3) = -0.5;
  Rng rng = make_rng({31, 11});
  Matrix bumped = perturb_edges(adj, 0.1, rng);
  CHECK(bumped(0, 1) != 1.0);
  CHECK(std::abs(bumped(0, 1) - 1.0) <= 0.1);
  CHECK(bumped(1, 0) == 0.0);

  Matrix full = perturb_edges(adj, 0.1, rng, true);
  int nonzero = 0;
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) {
      if (full(i, j) != 0.0) ++nonzero;
    }
  }
  CHECK(nonzero == 16);  // almost surely all entries move
}

TEST_CASE("edge perturbation degrades the Gramian-based control") {
  // One realization of the larger perturbation study: identical network and
  // target, control computed once from the true edges and once from edges
  // carrying uniform noise, both applied to the true network.
  Rng rng = make_rng({31, 12});
  const Index n = 100;
  GraphSpec spec{.n = n, .edge_prob = std::log(100.0) / 100.0 + 0.1};
  Matrix adj = repair_connectivity(erdos_renyi(spec, rng), rng).adjacency;
  adj /= std::sqrt(static_cast<double>(n));
  // Keep the spectrum contractive so the unperturbed route stays accurate
  // over the long horizon.
  const double rho = adj.eigenvalues().cwiseAbs().maxCoeff();
  if (rho >= 1.0) adj /= rho + 0.01;

  NodeSelection sel = select_nodes(n, 10, 0, rng);
  LinearNetwork net(adj, input_matrix(sel.input_nodes, n),
                    Matrix::Identity(n, n));
  Vector x_f = random_vector(n, rng);
  x_f /= x_f.norm();
  const Index horizon = 2 * n;

  ControlSequence exact = model_based_min_energy_gramian(net, horizon, x_f);
  const double err_exact =
      (simulate(net, exact, Vector::Zero(n)).outputs.col(horizon) - x_f)
          .norm();

  LinearNetwork wrong(perturb_edges(adj, 1e-3, rng), net.b, net.c);
  ControlSequence noisy = model_based_min_energy_gramian(wrong, horizon, x_f);
  const double err_noisy =
      (simulate(net, noisy, Vector::Zero(n)).outputs.col(horizon) - x_f)
          .norm();

  CHECK(err_noisy > err_exact);
}

TEST_SUITE_END();
