#include "netctl/swing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>
#include <utility>

#include <json.hpp>

#include "netctl/network.hpp"

namespace netctl {

namespace {

constexpr double kPi = 3.14159265358979323846;

void check_state(const SwingGrid& grid, const SwingState& state,
                 const char* who) {
  if (state.delta.size() != grid.size() ||
      state.omega.size() != grid.size()) {
    throw InvalidInputError(std::string(who) +
                            ": state dimension does not match the grid");
  }
}

void check_symmetric(const Matrix& m, Index g, const char* name) {
  if (m.rows() != g || m.cols() != g) {
    throw InvalidInputError(std::string(name) + " must be g x g");
  }
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw InvalidInputError(std::string(name) + " must be symmetric");
  }
}

}  // namespace

std::vector<Index> SwingGrid::modeled_indices() const {
  std::vector<Index> idx;
  idx.reserve(modeled());
  for (Index i = 0; i < size(); ++i) {
    if (i != reference) idx.push_back(i);
  }
  return idx;
}

void SwingGrid::validate() const {
  const Index g = size();
  if (g < 2) {
    throw InvalidInputError("swing grid needs at least two generators");
  }
  if (d.size() != g || p_m.size() != g || e.size() != g ||
      g_internal.size() != g) {
    throw InvalidInputError("swing grid generator arrays disagree on length");
  }
  if (reference < 0 || reference >= g) {
    throw InvalidInputError("swing grid reference index out of range");
  }
  if ((h.array() <= 0.0).any()) {
    throw InvalidInputError("swing grid inertia constants must be positive");
  }
  if (!(f_b > 0.0)) {
    throw InvalidInputError("swing grid base frequency must be positive");
  }
  check_symmetric(g_coupling, g, "transfer conductance matrix");
  check_symmetric(b_coupling, g, "transfer susceptance matrix");
  require_finite(h, "swing grid H");
  require_finite(d, "swing grid D");
  require_finite(p_m, "swing grid P_m");
  require_finite(e, "swing grid E");
  require_finite(g_internal, "swing grid G_ii");
  require_finite(g_coupling, "swing grid G_ij");
  require_finite(b_coupling, "swing grid B_ij");
}

SwingState swing_rhs(const SwingGrid& grid, const SwingState& state) {
  check_state(grid, state, "swing_rhs");
  const Index g = grid.size();
  SwingState out;
  out.delta = state.omega;
  out.omega.resize(g);
  for (Index i = 0; i < g; ++i) {
    if (i == grid.reference) {
      out.omega(i) = 0.0;
      continue;
    }
    double accel = -grid.d(i) * state.omega(i) + grid.p_m(i) -
                   grid.g_internal(i) * grid.e(i) * grid.e(i);
    for (Index j = 0; j < g; ++j) {
      if (j == i) continue;
      const double gij = grid.g_coupling(i, j);
      const double bij = grid.b_coupling(i, j);
      if (gij == 0.0 && bij == 0.0) continue;
      const double dij = state.delta(i) - state.delta(j);
      accel += grid.e(i) * grid.e(j) *
               (gij * std::cos(dij) + bij * std::sin(dij));
    }
    out.omega(i) = kPi * grid.f_b / grid.h(i) * accel;
  }
  out.delta(grid.reference) = 0.0;
  return out;
}

SwingState euler_step(const SwingGrid& grid, const SwingState& state,
                      const Eigen::Ref<const Vector>& forcing, double dt) {
  if (!(dt > 0.0)) {
    throw InvalidInputError("euler_step: dt must be positive");
  }
  if (forcing.size() != grid.size()) {
    throw InvalidInputError("euler_step: one forcing entry per generator");
  }
  SwingState rhs = swing_rhs(grid, state);
  SwingState out;
  out.delta = state.delta + dt * rhs.delta;
  out.omega = state.omega + dt * (rhs.omega + forcing);
  out.delta(grid.reference) = state.delta(grid.reference);
  out.omega(grid.reference) = state.omega(grid.reference);
  return out;
}

SwingState euler_step(const SwingGrid& grid, const SwingState& state,
                      double dt) {
  return euler_step(grid, state, Vector::Zero(grid.size()), dt);
}

EquilibriumResult find_equilibrium(const SwingGrid& grid,
                                   const SwingState& guess, double tol,
                                   Index max_steps) {
  grid.validate();
  check_state(grid, guess, "find_equilibrium");
  if (max_steps < 1) {
    throw InvalidInputError("find_equilibrium: step budget must be positive");
  }

  // Extra uniform decay of ~40 1/s per frequency channel overdamps the
  // relaxation without moving the equilibrium set (every equilibrium has
  // omega = 0, where damping contributes nothing).
  SwingGrid damped = grid;
  for (Index i = 0; i < grid.size(); ++i) {
    damped.d(i) = grid.d(i) + 40.0 * grid.h(i) / (kPi * grid.f_b);
  }

  const double dt = 2.5e-4;
  EquilibriumResult out;
  out.state = guess;
  for (Index step = 0; step <= max_steps; ++step) {
    const SwingState rhs = swing_rhs(grid, out.state);
    out.residual = std::max(rhs.delta.cwiseAbs().maxCoeff(),
                            rhs.omega.cwiseAbs().maxCoeff());
    out.steps = step;
    if (!std::isfinite(out.residual)) return out;
    if (out.residual <= tol) {
      out.converged = true;
      return out;
    }
    if (step == max_steps) break;
    out.state = euler_step(damped, out.state, dt);
  }
  return out;
}

Vector deviation_vector(const SwingGrid& grid, const SwingState& state,
                        const SwingState& equilibrium) {
  check_state(grid, state, "deviation_vector");
  check_state(grid, equilibrium, "deviation_vector");
  const Index m = grid.modeled();
  Vector dev(2 * m);
  Index k = 0;
  for (Index i : grid.modeled_indices()) {
    dev(k) = std::remainder(state.delta(i) - equilibrium.delta(i), 2.0 * kPi);
    dev(m + k) = state.omega(i) - equilibrium.omega(i);
    ++k;
  }
  return dev;
}

DataMatrices harvest_perturbation_data(const SwingGrid& grid,
                                       const SwingState& equilibrium,
                                       Index n_experiments, Index horizon,
                                       double dt, Rng& rng, double variance,
                                       double guard, Index* rejected) {
  grid.validate();
  check_state(grid, equilibrium, "harvest_perturbation_data");
  if (n_experiments < 1 || horizon < 1) {
    throw InvalidInputError(
        "harvest_perturbation_data: need at least one experiment and one "
        "step");
  }
  if (!(dt > 0.0) || variance < 0.0 || !(guard > 0.0)) {
    throw InvalidInputError(
        "harvest_perturbation_data: dt and guard must be positive, the "
        "variance non-negative");
  }

  const Index g = grid.size();
  const Index m = grid.modeled();
  const Index p = 2 * m;
  const std::vector<Index> modeled = grid.modeled_indices();

  DataMatrices data;
  data.horizon = horizon;
  data.m = m;
  data.p = p;
  data.n = p;
  data.u.resize(m * horizon, n_experiments);
  data.y_mid.resize(p * (horizon - 1), n_experiments);
  data.y_t.resize(p, n_experiments);
  Matrix x0(p, n_experiments);

  std::normal_distribution<double> dist(0.0, std::sqrt(variance));
  const Index reject_cap = std::max<Index>(100, n_experiments);
  Index rejects = 0;

  auto deviation = [&](const SwingState& state) {
    Vector dev(p);
    for (Index k = 0; k < m; ++k) {
      dev(k) = state.delta(modeled[k]) - equilibrium.delta(modeled[k]);
      dev(m + k) = state.omega(modeled[k]) - equilibrium.omega(modeled[k]);
    }
    return dev;
  };

  for (Index col = 0; col < n_experiments;) {
    SwingState state = equilibrium;
    for (Index i : modeled) {
      state.delta(i) += dist(rng);
      state.omega(i) += dist(rng);
    }
    x0.col(col) = deviation(state);

    Vector forcing = Vector::Zero(g);
    bool diverged = false;
    for (Index t = 0; t < horizon && !diverged; ++t) {
      for (Index k = 0; k < m; ++k) {
        // Inputs act as per-step frequency increments: the recorded value w
        // lands on omega in full, so the forcing handed to the integrator is
        // w / dt.
        const double w = dist(rng);
        forcing(modeled[k]) = w / dt;
        data.u((horizon - 1 - t) * m + k, col) = w;
      }
      state = euler_step(grid, state, forcing, dt);
      const Vector dev = deviation(state);
      if (!dev.allFinite() || dev.cwiseAbs().maxCoeff() > guard) {
        diverged = true;
        break;
      }
      if (t + 1 < horizon) {
        data.y_mid.block(t * p, col, p, 1) = dev;
      } else {
        data.y_t.col(col) = dev;
      }
    }
    if (diverged) {
      if (++rejects > reject_cap) {
        throw NumericalError(
            "harvest_perturbation_data: episodes keep leaving the guard "
            "band; the operating point is not locally stable at this "
            "perturbation level");
      }
      continue;
    }
    ++col;
  }
  data.x0 = std::move(x0);
  if (rejected) *rejected = rejects;
  return data;
}

void FaultScenario::validate() const {
  pre_fault.validate();
  faulted.validate();
  post_fault.validate();
  if (faulted.size() != pre_fault.size() ||
      post_fault.size() != pre_fault.size()) {
    throw InvalidInputError("fault scenario grids disagree on size");
  }
  if (faulted.reference != pre_fault.reference ||
      post_fault.reference != pre_fault.reference) {
    throw InvalidInputError(
        "fault scenario grids disagree on the reference generator");
  }
  if (!(onset >= 0.0) || !(onset < clearing) || !(clearing <= control_start)) {
    throw InvalidInputError(
        "fault scenario needs 0 <= onset < clearing <= control start");
  }
  if (!(t_s > 0.0)) {
    throw InvalidInputError("fault scenario sampling period must be positive");
  }
  if (!(control_duration >= 0.0) ||
      !(control_start + control_duration <= t_end)) {
    throw InvalidInputError(
        "fault scenario control window must fit before t_end");
  }
  if (!(tol_sync > 0.0) || !(tol_settle > 0.0)) {
    throw InvalidInputError("fault scenario tolerances must be positive");
  }
}

RecoveryRun run_fault_recovery(const FaultScenario& scenario,
                               const ControlSequence* control, Index stride,
                               const SwingState* initial) {
  scenario.validate();
  if (stride < 1) {
    throw InvalidInputError("run_fault_recovery: stride must be positive");
  }
  const Index g = scenario.pre_fault.size();
  const Index total = static_cast<Index>(std::llround(scenario.t_end / scenario.t_s));
  const Index s_onset =
      static_cast<Index>(std::llround(scenario.onset / scenario.t_s));
  const Index s_clear =
      static_cast<Index>(std::llround(scenario.clearing / scenario.t_s));
  const Index s_ctrl =
      static_cast<Index>(std::llround(scenario.control_start / scenario.t_s));
  const std::vector<Index> modeled = scenario.pre_fault.modeled_indices();

  if (control) {
    if (control->input_dim() != scenario.pre_fault.modeled()) {
      throw InvalidInputError(
          "run_fault_recovery: control needs one channel per modeled "
          "generator");
    }
    if (s_ctrl + control->horizon() > total) {
      throw InvalidInputError(
          "run_fault_recovery: control sequence extends beyond the run");
    }
  }

  SwingState state;
  if (initial) {
    check_state(scenario.pre_fault, *initial, "run_fault_recovery");
    state = *initial;
  } else {
    SwingState flat{Vector::Zero(g), Vector::Zero(g)};
    EquilibriumResult eq = find_equilibrium(scenario.pre_fault, flat);
    if (!eq.converged) {
      throw NumericalError(
          "run_fault_recovery: pre-fault grid did not relax to an operating "
          "point; supply an initial state");
    }
    state = std::move(eq.state);
  }

  std::vector<Index> samples;
  samples.push_back(0);
  for (Index s = stride; s < total; s += stride) samples.push_back(s);
  samples.push_back(total);

  RecoveryRun run;
  const Index n_samples = static_cast<Index>(samples.size());
  run.time.resize(n_samples);
  run.delta.resize(g, n_samples);
  run.omega.resize(g, n_samples);

  Index cursor = 0;
  auto record = [&](Index s) {
    if (cursor < n_samples && samples[cursor] == s) {
      run.time(cursor) = s * scenario.t_s;
      run.delta.col(cursor) = state.delta;
      run.omega.col(cursor) = state.omega;
      ++cursor;
    }
  };
  record(0);

  Vector forcing = Vector::Zero(g);
  for (Index s = 0; s < total; ++s) {
    const SwingGrid& active = s < s_onset    ? scenario.pre_fault
                              : s < s_clear ? scenario.faulted
                                            : scenario.post_fault;
    if (control && s >= s_ctrl && s < s_ctrl + control->horizon()) {
      const Vector uk = control->at(s - s_ctrl);
      for (Index k = 0; k < static_cast<Index>(modeled.size()); ++k) {
        forcing(modeled[k]) = uk(k);
      }
    } else {
      forcing.setZero();
    }
    state = euler_step(active, state, forcing, scenario.t_s);
    if (!state.delta.allFinite() || !state.omega.allFinite()) {
      throw NumericalError("run_fault_recovery: trajectory diverged");
    }
    record(s + 1);
  }

  run.final_omega_max = state.omega.cwiseAbs().maxCoeff();
  const double window_start = 0.95 * scenario.t_end - 1e-12;
  double settle = 0.0;
  for (Index c = 0; c < n_samples; ++c) {
    if (run.time(c) < window_start) continue;
    SwingState sample{run.delta.col(c), run.omega.col(c)};
    const SwingState rhs = swing_rhs(scenario.post_fault, sample);
    settle = std::max({settle, rhs.delta.cwiseAbs().maxCoeff(),
                       rhs.omega.cwiseAbs().maxCoeff()});
  }
  run.settle_residual = settle;
  run.recovered = run.final_omega_max < scenario.tol_sync &&
                  run.settle_residual <= scenario.tol_settle;
  return run;
}

DDSolution fault_recovery_control(const DataMatrices& data,
                                  const Eigen::Ref<const Vector>& dev,
                                  double q_eps, double tol) {
  if (!data.x0) {
    throw InvalidInputError(
        "fault_recovery_control: data record carries no initial states");
  }
  if (dev.size() != data.n) {
    throw InvalidInputError(
        "fault_recovery_control: deviation length must match the state "
        "dimension");
  }
  Matrix constraint(data.p + data.n, data.u.cols());
  constraint.topRows(data.p) = data.y_t;
  constraint.bottomRows(data.n) = *data.x0;
  Vector rhs = Vector::Zero(data.p + data.n);
  rhs.tail(data.n) = dev;
  return dd_optimal(data.u, data.y_mid, constraint, Weights::scalar(q_eps),
                    Weights::scalar(1.0), rhs, data.m, tol);
}

FaultScenario ring10_scenario() {
  const Index g = 10;
  SwingGrid grid;
  grid.f_b = 60.0;
  grid.reference = 0;
  grid.h.resize(g);
  grid.h << 4.2, 3.6, 4.0, 4.4, 3.8, 4.1, 3.9, 4.3, 3.7, 4.0;
  grid.d = Vector::Constant(g, 0.05);
  grid.e.resize(g);
  grid.e << 1.02, 1.00, 1.03, 1.01, 1.04, 1.00, 1.02, 1.01, 1.03, 1.02;
  grid.g_internal.resize(g);
  grid.g_internal << 0.08, 0.05, 0.06, 0.05, 0.07, 0.06, 0.05, 0.08, 0.06,
      0.07;
  grid.g_coupling = Matrix::Zero(g, g);
  grid.b_coupling = Matrix::Zero(g, g);
  auto line = [&](Index i, Index j, double b) {
    grid.b_coupling(i, j) = b;
    grid.b_coupling(j, i) = b;
  };
  for (Index i = 0; i < g; ++i) line(i, (i + 1) % g, -6.0);
  line(3, 4, -1.3);
  line(6, 7, -1.3);

  // Operating point: generators 4-6 export through the two weak ties, which
  // therefore run close to their transfer capacity. Mechanical powers are
  // chosen to balance the electrical transfer exactly at these angles.
  Vector delta_star(g);
  delta_star << 0.0, -0.02, -0.01, 0.02, 0.72, 0.78, 0.73, 0.03, -0.01, -0.02;
  grid.p_m.resize(g);
  for (Index i = 0; i < g; ++i) {
    double transfer = 0.0;
    for (Index j = 0; j < g; ++j) {
      if (j == i) continue;
      const double dij = delta_star(i) - delta_star(j);
      transfer += grid.e(i) * grid.e(j) *
                  (grid.g_coupling(i, j) * std::cos(dij) +
                   grid.b_coupling(i, j) * std::sin(dij));
    }
    grid.p_m(i) = grid.g_internal(i) * grid.e(i) * grid.e(i) - transfer;
  }

  FaultScenario scenario;
  scenario.pre_fault = grid;
  scenario.faulted = grid;
  scenario.faulted.b_coupling(3, 4) = 0.0;
  scenario.faulted.b_coupling(4, 3) = 0.0;
  scenario.faulted.b_coupling(6, 7) = 0.0;
  scenario.faulted.b_coupling(7, 6) = 0.0;
  scenario.post_fault = grid;
  return scenario;
}

namespace {

using nlohmann::json;

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) {
    throw InvalidInputError(std::string("grid config: ") + name +
                            " must be a non-empty array of rows");
  }
  const Index rows = static_cast<Index>(j.size());
  const Index cols = static_cast<Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    const json& row = j.at(i);
    if (static_cast<Index>(row.size()) != cols) {
      throw InvalidInputError(std::string("grid config: ragged rows in ") +
                              name);
    }
    for (Index c = 0; c < cols; ++c) m(i, c) = row.at(c).get<double>();
  }
  return m;
}

SwingGrid grid_with_coupling(const SwingGrid& base, const json& coupling,
                             const char* name) {
  SwingGrid out = base;
  if (!coupling.contains("g") || !coupling.contains("b")) {
    throw InvalidInputError(std::string("grid config: ") + name +
                            " needs \"g\" and \"b\" matrices");
  }
  out.g_coupling = matrix_from_json(coupling.at("g"), name);
  out.b_coupling = matrix_from_json(coupling.at("b"), name);
  return out;
}

bool same_generators(const SwingGrid& a, const SwingGrid& b) {
  return a.h == b.h && a.d == b.d && a.p_m == b.p_m && a.e == b.e &&
         a.g_internal == b.g_internal && a.f_b == b.f_b &&
         a.reference == b.reference;
}

}  // namespace

FaultScenario load_fault_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInputError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw InvalidInputError("grid config: " + std::string(err.what()));
  }

  if (!j.contains("generators") || !j.at("generators").is_array() ||
      j.at("generators").empty()) {
    throw InvalidInputError(
        "grid config: needs a non-empty \"generators\" array");
  }
  const json& gens = j.at("generators");
  const Index g = static_cast<Index>(gens.size());

  SwingGrid base;
  base.f_b = j.value("f_b", 60.0);
  base.reference = j.value("reference", Index{0});
  base.h.resize(g);
  base.d.resize(g);
  base.p_m.resize(g);
  base.e.resize(g);
  base.g_internal.resize(g);
  for (Index i = 0; i < g; ++i) {
    const json& gen = gens.at(i);
    base.h(i) = gen.at("h").get<double>();
    base.d(i) = gen.at("d").get<double>();
    base.p_m(i) = gen.at("p_m").get<double>();
    base.e(i) = gen.at("e").get<double>();
    base.g_internal(i) = gen.value("g_internal", 0.0);
  }

  if (!j.contains("coupling") || !j.contains("faulted")) {
    throw InvalidInputError(
        "grid config: needs \"coupling\" and \"faulted\" blocks");
  }
  FaultScenario scenario;
  scenario.pre_fault = grid_with_coupling(base, j.at("coupling"), "coupling");
  scenario.faulted = grid_with_coupling(base, j.at("faulted"), "faulted");
  scenario.post_fault = j.contains("post_fault")
                            ? grid_with_coupling(base, j.at("post_fault"),
                                                 "post_fault")
                            : scenario.pre_fault;

  const json timing = j.value("scenario", json::object());
  const FaultScenario defaults;
  scenario.onset = timing.value("onset", defaults.onset);
  scenario.clearing = timing.value("clearing", defaults.clearing);
  scenario.control_start =
      timing.value("control_start", defaults.control_start);
  scenario.control_duration =
      timing.value("control_duration", defaults.control_duration);
  scenario.t_s = timing.value("t_s", defaults.t_s);
  scenario.t_end = timing.value("t_end", defaults.t_end);
  scenario.tol_sync = timing.value("tol_sync", defaults.tol_sync);
  scenario.tol_settle = timing.value("tol_settle", defaults.tol_settle);
  scenario.validate();
  return scenario;
}

void save_fault_scenario(const std::filesystem::path& path,
                         const FaultScenario& scenario) {
  scenario.validate();
  if (!same_generators(scenario.pre_fault, scenario.faulted) ||
      !same_generators(scenario.pre_fault, scenario.post_fault)) {
    throw InvalidInputError(
        "save_fault_scenario: the file format shares generator parameters "
        "across configurations; only couplings may differ");
  }
  const SwingGrid& grid = scenario.pre_fault;
  json j;
  j["f_b"] = grid.f_b;
  j["reference"] = grid.reference;
  json gens = json::array();
  for (Index i = 0; i < grid.size(); ++i) {
    gens.push_back({{"h", grid.h(i)},
                    {"d", grid.d(i)},
                    {"p_m", grid.p_m(i)},
                    {"e", grid.e(i)},
                    {"g_internal", grid.g_internal(i)}});
  }
  j["generators"] = std::move(gens);
  j["coupling"] = {{"g", matrix_to_json(grid.g_coupling)},
                   {"b", matrix_to_json(grid.b_coupling)}};
  j["faulted"] = {{"g", matrix_to_json(scenario.faulted.g_coupling)},
                  {"b", matrix_to_json(scenario.faulted.b_coupling)}};
  j["post_fault"] = {{"g", matrix_to_json(scenario.post_fault.g_coupling)},
                     {"b", matrix_to_json(scenario.post_fault.b_coupling)}};
  j["scenario"] = {{"onset", scenario.onset},
                   {"clearing", scenario.clearing},
                   {"control_start", scenario.control_start},
                   {"control_duration", scenario.control_duration},
                   {"t_s", scenario.t_s},
                   {"t_end", scenario.t_end},
                   {"tol_sync", scenario.tol_sync},
                   {"tol_settle", scenario.tol_settle}};

  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  out << j.dump(2) << "\n";
}

void save_recovery_csv(const std::filesystem::path& path,
                       const RecoveryRun& run) {
  std::ofstream out(path);
  if (!out) throw InvalidInputError("cannot write " + path.string());
  const Index g = run.delta.rows();
  out << "time";
  for (Index i = 0; i < g; ++i) out << ",delta_" << (i + 1);
  for (Index i = 0; i < g; ++i) out << ",omega_" << (i + 1);
  out << "\n";
  char buf[32];
  for (Index c = 0; c < run.time.size(); ++c) {
    std::snprintf(buf, sizeof(buf), "%.17g", run.time(c));
    out << buf;
    for (Index i = 0; i < g; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", run.delta(i, c));
      out << "," << buf;
    }
    for (Index i = 0; i < g; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", run.omega(i, c));
      out << "," << buf;
    }
    out << "\n";
  }
}

}  // namespace netctl
