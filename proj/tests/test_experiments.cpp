#include "netctl/experiments.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "netctl/io.hpp"
#include "netctl/linalg.hpp"
#include "test_helpers.hpp"

using namespace netctl;
using test::random_matrix;
using test::random_vector;

namespace {

LinearNetwork random_network(Index n, Index m, Index p, Rng& rng,
                             double spectral = 0.9) {
  Matrix a = random_matrix(n, n, rng);
  a *= spectral / std::abs(a.eigenvalues()[0]);
  return LinearNetwork(a, random_matrix(n, m, rng), random_matrix(p, n, rng));
}

std::filesystem::path temp_dir(const char* tag) {
  auto dir = std::filesystem::temp_directory_path() /
             (std::string("netctl_io_") + tag);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE_BEGIN("experiments");

TEST_CASE("random_inputs draws standard-normal entries reproducibly") {
  Rng rng = make_rng({41, 1});
  const Index m = 2, horizon = 3, cols = 100000;
  Matrix u = random_inputs(m, horizon, cols, rng);
  REQUIRE(u.rows() == m * horizon);
  REQUIRE(u.cols() == cols);
  for (Index i = 0; i < u.rows(); ++i) {
    CHECK(std::abs(u.row(i).mean()) < 0.02);
  }

  Rng replay = make_rng({41, 1});
  Matrix again = random_inputs(m, horizon, cols, replay);
  CHECK((u - again).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(random_inputs(0, 1, 1, rng), InvalidInputError);
}

TEST_CASE("random_inputs has full row rank once N reaches mT") {
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng = make_rng({41, 2, static_cast<std::uint64_t>(seed)});
    Matrix u = random_inputs(2, 2, 4, rng);
    CHECK(svd(u).rank() == 4);
  }
}

TEST_CASE("run_episodic records zero outputs for zero inputs") {
  Rng rng = make_rng({41, 3});
  LinearNetwork net = random_network(4, 2, 3, rng);
  const Index horizon = 5;
  Matrix u = Matrix::Zero(net.m() * horizon, 7);
  DataMatrices data = run_episodic(net, u, horizon);
  data.validate();
  CHECK(data.y_mid.cwiseAbs().maxCoeff() == 0.0);
  CHECK(data.y_t.cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(data.x0.has_value());
}

TEST_CASE("a single episodic experiment matches simulate") {
  Rng rng = make_rng({41, 4});
  LinearNetwork net = random_network(5, 2, 3, rng);
  const Index horizon = 6;
  Matrix u = random_matrix(net.m() * horizon, 1, rng);
  DataMatrices data = run_episodic(net, u, horizon);

  ControlSequence seq = ControlSequence::from_stacked(u.col(0), net.m());
  Trajectory traj = simulate(net, seq, Vector::Zero(net.n()));
  for (Index t = 1; t < horizon; ++t) {
    CHECK((data.y_mid.col(0).segment((t - 1) * net.p(), net.p()) -
           traj.outputs.col(t))
              .cwiseAbs()
              .maxCoeff() == 0.0);
  }
  CHECK((data.y_t.col(0) - traj.outputs.col(horizon)).cwiseAbs().maxCoeff() ==
        0.0);
}

TEST_CASE("noiseless episodic data satisfies YT = C_T U and Ymid = H_T U") {
  for (int trial = 0; trial < 5; ++trial) {
    Rng rng = make_rng({41, 5, static_cast<std::uint64_t>(trial)});
    LinearNetwork net = random_network(6, 2, 3, rng);
    const Index horizon = 4;
    Matrix u = random_matrix(net.m() * horizon, 12, rng);
    DataMatrices data = run_episodic(net, u, horizon);

    Matrix ct = output_ctrb_matrix(net, horizon);
    Matrix ht = hankel_blocks(net, horizon);
    CHECK((data.y_t - ct * u).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((data.y_mid - ht * u).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("run_with_initial_states reduces to the episodic record at X0 = 0") {
  Rng rng = make_rng({41, 6});
  LinearNetwork net = random_network(4, 1, 2, rng);
  const Index horizon = 3;
  Matrix u = random_matrix(net.m() * horizon, 9, rng);
  DataMatrices episodic = run_episodic(net, u, horizon);
  DataMatrices seeded =
      run_with_initial_states(net, u, Matrix::Zero(net.n(), 9), horizon);
  REQUIRE(seeded.x0.has_value());
  CHECK((episodic.y_mid - seeded.y_mid).cwiseAbs().maxCoeff() == 0.0);
  CHECK((episodic.y_t - seeded.y_t).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("zero inputs leave only the free response C A^T X0") {
  Rng rng = make_rng({41, 7});
  LinearNetwork net = random_network(5, 2, 3, rng);
  const Index horizon = 4;
  Matrix x0 = random_matrix(net.n(), 6, rng);
  DataMatrices data = run_with_initial_states(
      net, Matrix::Zero(net.m() * horizon, 6), x0, horizon);

  Matrix a_pow = Matrix::Identity(net.n(), net.n());
  for (Index t = 0; t < horizon; ++t) a_pow = net.a * a_pow;
  CHECK((data.y_t - net.c * a_pow * x0).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("outputs superpose across inputs and initial states") {
  Rng rng = make_rng({41, 8});
  LinearNetwork net = random_network(6, 2, 4, rng);
  const Index horizon = 5;
  Matrix u = random_matrix(net.m() * horizon, 8, rng);
  Matrix x0 = random_matrix(net.n(), 8, rng);

  DataMatrices both = run_with_initial_states(net, u, x0, horizon);
  DataMatrices forced = run_episodic(net, u, horizon);
  DataMatrices free_resp = run_with_initial_states(
      net, Matrix::Zero(net.m() * horizon, 8), x0, horizon);

  CHECK((both.y_mid - forced.y_mid - free_resp.y_mid).cwiseAbs().maxCoeff() <
        1e-10);
  CHECK((both.y_t - forced.y_t - free_resp.y_t).cwiseAbs().maxCoeff() < 1e-10);

  CHECK_THROWS_AS(
      run_with_initial_states(net, u, Matrix::Zero(net.n() + 1, 8), horizon),
      InvalidInputError);
}

TEST_CASE("sliding_window on a minimal trajectory equals the episodic record") {
  Rng rng = make_rng({41, 9});
  LinearNetwork net = random_network(4, 2, 3, rng);
  const Index horizon = 5;
  const Index samples = horizon + 1;

  Matrix u_long = random_matrix(net.m(), samples, rng);
  std::vector<Vector> steps;
  for (Index t = 0; t + 1 < samples; ++t) steps.push_back(u_long.col(t));
  Trajectory traj =
      simulate(net, ControlSequence::from_steps(steps), Vector::Zero(net.n()));

  DataMatrices windowed =
      sliding_window(u_long, traj.outputs, std::nullopt, horizon);
  REQUIRE(windowed.num_experiments() == 1);
  CHECK_FALSE(windowed.x0.has_value());

  DataMatrices episodic = run_episodic(
      net, ControlSequence::from_steps(steps).stacked(), horizon);
  CHECK((windowed.u - episodic.u).cwiseAbs().maxCoeff() == 0.0);
  CHECK((windowed.y_mid - episodic.y_mid).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((windowed.y_t - episodic.y_t).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("sliding_window yields k columns from T+k samples at stride 1") {
  Rng rng = make_rng({41, 10});
  const Index horizon = 4, k = 7;
  Matrix u_long = random_matrix(2, horizon + k, rng);
  Matrix y_long = random_matrix(3, horizon + k, rng);
  DataMatrices data = sliding_window(u_long, y_long, std::nullopt, horizon);
  CHECK(data.num_experiments() == k);

  DataMatrices strided =
      sliding_window(u_long, y_long, std::nullopt, horizon, 2);
  CHECK(strided.num_experiments() == (k - 1) / 2 + 1);
  CHECK((strided.u.col(1) - data.u.col(2)).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(
      sliding_window(u_long.leftCols(horizon), y_long.leftCols(horizon),
                     std::nullopt, horizon),
      InvalidInputError);
  CHECK_THROWS_AS(sliding_window(u_long, y_long.leftCols(horizon + k - 1),
                                 std::nullopt, horizon),
                  InvalidInputError);
}

TEST_CASE("sliding_window columns replay simulate on each segment") {
  Rng rng = make_rng({41, 11});
  LinearNetwork net = random_network(5, 2, 3, rng);
  const Index horizon = 4;
  const Index samples = 20;

  Matrix u_long = random_matrix(net.m(), samples, rng);
  std::vector<Vector> steps;
  for (Index t = 0; t + 1 < samples; ++t) steps.push_back(u_long.col(t));
  Trajectory traj = simulate(net, ControlSequence::from_steps(steps),
                             random_vector(net.n(), rng));

  DataMatrices data = sliding_window(u_long, traj.outputs,
                                     std::optional<Matrix>(traj.states),
                                     horizon, 3);
  REQUIRE(data.x0.has_value());
  REQUIRE(data.n == net.n());
  data.validate();

  for (Index w = 0; w < data.num_experiments(); ++w) {
    const Index s = w * 3;
    std::vector<Vector> seg(steps.begin() + s, steps.begin() + s + horizon);
    Trajectory replay = simulate(net, ControlSequence::from_steps(seg),
                                 traj.states.col(s));
    CHECK((data.x0->col(w) - traj.states.col(s)).cwiseAbs().maxCoeff() == 0.0);
    CHECK((data.y_t.col(w) - replay.outputs.col(horizon))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    for (Index t = 1; t < horizon; ++t) {
      CHECK((data.y_mid.col(w).segment((t - 1) * net.p(), net.p()) -
             replay.outputs.col(t))
                .cwiseAbs()
                .maxCoeff() < 1e-10);
    }
  }
}

TEST_CASE("add_noise with zero variances is the identity") {
  Rng rng = make_rng({41, 12});
  LinearNetwork net = random_network(4, 2, 3, rng);
  DataMatrices data = run_episodic(net, random_matrix(2 * 3, 5, rng), 3);
  Rng noise_rng = make_rng({41, 13});
  DataMatrices noisy = add_noise(data, NoiseSpec{}, noise_rng);
  CHECK((noisy.u - data.u).cwiseAbs().maxCoeff() == 0.0);
  CHECK((noisy.y_mid - data.y_mid).cwiseAbs().maxCoeff() == 0.0);
  CHECK((noisy.y_t - data.y_t).cwiseAbs().maxCoeff() == 0.0);

  NoiseSpec bad;
  bad.sigma_u2 = -1.0;
  CHECK_THROWS_AS(add_noise(data, bad, noise_rng), InvalidInputError);
}

TEST_CASE("add_noise hits the requested variances on both distributions") {
  // m*T = p*(T-1) = p = 4 rows per channel; 250k columns gives 1e6 samples
  // in each of U, Ymid, YT.
  DataMatrices data;
  data.horizon = 2;
  data.m = 2;
  data.p = 4;
  const Index cols = 250000;
  data.u = Matrix::Zero(4, cols);
  data.y_mid = Matrix::Zero(4, cols);
  data.y_t = Matrix::Zero(4, cols);

  NoiseSpec spec;
  spec.sigma_u2 = 0.25;
  spec.sigma_y2 = 1.0;
  spec.sigma_yt2 = 0.04;

  auto empirical = [](const Matrix& diff) {
    return diff.squaredNorm() / static_cast<double>(diff.size());
  };

  for (NoiseSpec::Kind kind :
       {NoiseSpec::Kind::kGaussian, NoiseSpec::Kind::kUniform}) {
    spec.kind = kind;
    Rng rng = make_rng({41, 14, kind == NoiseSpec::Kind::kGaussian ? 0u : 1u});
    DataMatrices noisy = add_noise(data, spec, rng);
    REQUIRE(noisy.clean.has_value());
    CHECK(empirical(noisy.u - noisy.clean->u) ==
          doctest::Approx(spec.sigma_u2).epsilon(0.05));
    CHECK(empirical(noisy.y_mid - noisy.clean->y_mid) ==
          doctest::Approx(spec.sigma_y2).epsilon(0.05));
    CHECK(empirical(noisy.y_t - noisy.clean->y_t) ==
          doctest::Approx(spec.sigma_yt2).epsilon(0.05));

    const double peak = (noisy.u - noisy.clean->u).cwiseAbs().maxCoeff();
    const double half_width = std::sqrt(3.0 * spec.sigma_u2);
    if (kind == NoiseSpec::Kind::kUniform) {
      CHECK(peak <= half_width);
    } else {
      CHECK(peak > half_width);  // gaussian tails exceed the uniform support
    }
  }
}

TEST_CASE("noise on YT leaves the input record bit-identical") {
  Rng rng = make_rng({41, 15});
  LinearNetwork net = random_network(3, 2, 2, rng);
  DataMatrices data = run_episodic(net, random_matrix(2 * 4, 6, rng), 4);
  NoiseSpec spec;
  spec.sigma_yt2 = 0.5;
  DataMatrices noisy = add_noise(data, spec, rng);
  CHECK((noisy.u - data.u).cwiseAbs().maxCoeff() == 0.0);
  CHECK((noisy.y_mid - data.y_mid).cwiseAbs().maxCoeff() == 0.0);
  CHECK((noisy.y_t - data.y_t).cwiseAbs().maxCoeff() != 0.0);
  REQUIRE(noisy.clean.has_value());
  CHECK((noisy.clean->y_t - data.y_t).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("validate rejects inconsistent dimensions") {
  DataMatrices data;
  data.horizon = 2;
  data.m = 1;
  data.p = 1;
  data.u = Matrix::Zero(2, 3);
  data.y_mid = Matrix::Zero(1, 3);
  data.y_t = Matrix::Zero(1, 3);
  data.validate();

  DataMatrices bad = data;
  bad.y_t = Matrix::Zero(1, 4);
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
  bad = data;
  bad.u = Matrix::Zero(3, 3);
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
  bad = data;
  bad.n = 2;
  bad.x0 = Matrix::Zero(1, 3);
  CHECK_THROWS_AS(bad.validate(), InvalidInputError);
}

TEST_CASE("CSV writer round-trips doubles exactly") {
  Rng rng = make_rng({41, 16});
  Matrix m = random_matrix(7, 5, rng);
  m(0, 0) = 1.0 / 3.0;
  m(1, 1) = 1e-300;
  m(2, 2) = -9.87654321098765432e18;
  m(3, 3) = 0.0;

  auto dir = temp_dir("csv");
  write_csv(dir / "m.csv", m);
  Matrix back = read_csv(dir / "m.csv");
  REQUIRE(back.rows() == m.rows());
  REQUIRE(back.cols() == m.cols());
  CHECK((back - m).cwiseAbs().maxCoeff() == 0.0);

  CHECK_THROWS_AS(read_csv(dir / "missing.csv"), InvalidInputError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("data records serialize losslessly and drop ground truth") {
  Rng rng = make_rng({41, 17});
  LinearNetwork net = random_network(4, 2, 3, rng);
  const Index horizon = 3;
  Matrix u = random_matrix(net.m() * horizon, 5, rng);
  Matrix x0 = random_matrix(net.n(), 5, rng);
  DataMatrices data = run_with_initial_states(net, u, x0, horizon);
  data.seed = 0xfeedbeef;
  NoiseSpec spec;
  spec.sigma_u2 = 0.01;
  DataMatrices noisy = add_noise(data, spec, rng);

  auto dir = temp_dir("record");
  save_data_matrices(dir, noisy);
  DataMatrices loaded = load_data_matrices(dir);
  CHECK(loaded.horizon == horizon);
  CHECK(loaded.m == net.m());
  CHECK(loaded.p == net.p());
  CHECK(loaded.n == net.n());
  CHECK(loaded.seed == 0xfeedbeef);
  CHECK((loaded.u - noisy.u).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.y_mid - noisy.y_mid).cwiseAbs().maxCoeff() == 0.0);
  CHECK((loaded.y_t - noisy.y_t).cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(loaded.x0.has_value());
  CHECK((*loaded.x0 - *noisy.x0).cwiseAbs().maxCoeff() == 0.0);
  CHECK_FALSE(loaded.clean.has_value());
  CHECK_FALSE(std::filesystem::exists(dir / "clean_U.csv"));
  std::filesystem::remove_all(dir);

  // Without initial states no X0.csv appears.
  DataMatrices episodic = run_episodic(net, u, horizon);
  auto dir2 = temp_dir("record2");
  save_data_matrices(dir2, episodic);
  CHECK_FALSE(std::filesystem::exists(dir2 / "X0.csv"));
  CHECK_FALSE(load_data_matrices(dir2).x0.has_value());
  std::filesystem::remove_all(dir2);
}

TEST_CASE("network files round-trip and tolerate comments") {
  Rng rng = make_rng({41, 18});
  LinearNetwork net = random_network(4, 2, 3, rng);
  auto dir = temp_dir("net");
  save_network(dir / "net.txt", net, "4-node test system");
  LinearNetwork back = load_network(dir / "net.txt");
  CHECK((back.a - net.a).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.b - net.b).cwiseAbs().maxCoeff() == 0.0);
  CHECK((back.c - net.c).cwiseAbs().maxCoeff() == 0.0);

  {
    std::ofstream out(dir / "hand.txt");
    out << "# integrator with direct read-out\n"
        << "1 1 1\n"
        << "# A then B then C\n"
        << "1\n0.5\n2\n";
  }
  LinearNetwork hand = load_network(dir / "hand.txt");
  CHECK(hand.a(0, 0) == 1.0);
  CHECK(hand.b(0, 0) == 0.5);
  CHECK(hand.c(0, 0) == 2.0);

  {
    std::ofstream out(dir / "short.txt");
    out << "2 1 1\n1 0\n";
  }
  CHECK_THROWS_AS(load_network(dir / "short.txt"), InvalidInputError);
  std::filesystem::remove_all(dir);
}

TEST_SUITE_END();
