#pragma once

#include "netctl/ddcontrol.hpp"
#include "netctl/experiments.hpp"
#include "netctl/types.hpp"

#include <filesystem>
#include <vector>

namespace netctl {

/// Reduced grid of g synchronous generators: rotor phases couple through
/// symmetric transfer conductance/susceptance matrices. One generator is
/// the reference (an infinite bus): its phase and frequency stay fixed and
/// are never integrated, but it still enters the coupling sums of the
/// others.
struct SwingGrid {
  Vector h;           // inertia constants H_i (s), all > 0
  Vector d;           // damping coefficients D_i (p.u.)
  Vector p_m;         // mechanical input power P_mi (p.u.)
  Vector e;           // internal voltages E_i (p.u.)
  Vector g_internal;  // internal conductances G_ii (p.u.)
  Matrix g_coupling;  // transfer conductances G_ij, symmetric
  Matrix b_coupling;  // transfer susceptances B_ij, symmetric
  double f_b = 60.0;  // base frequency (Hz)
  Index reference = 0;

  Index size() const { return h.size(); }
  Index modeled() const { return size() - 1; }

  /// Integrated generators: every index except the reference, ascending.
  std::vector<Index> modeled_indices() const;

  void validate() const;
};

/// Rotor phases (rad, relative to the reference) and frequency deviations
/// from nominal (rad/s) for every generator, reference included.
struct SwingState {
  Vector delta;
  Vector omega;
};

/// Time derivative of the swing dynamics
///   d/dt delta_i = omega_i
///   (H_i / (pi f_b)) d/dt omega_i = -D_i omega_i + P_mi - G_ii E_i^2
///     + sum_{j != i} E_i E_j (G_ij cos(delta_i - delta_j)
///                             + B_ij sin(delta_i - delta_j)),
/// with both derivatives of the reference generator forced to zero.
SwingState swing_rhs(const SwingGrid& grid, const SwingState& state);

/// One forward Euler step of length dt. `forcing` carries one acceleration
/// term per generator, added to the frequency derivative only; the entry at
/// the reference index is ignored and the reference state is copied through
/// unchanged.
SwingState euler_step(const SwingGrid& grid, const SwingState& state,
                      const Eigen::Ref<const Vector>& forcing, double dt);
SwingState euler_step(const SwingGrid& grid, const SwingState& state,
                      double dt);

struct EquilibriumResult {
  SwingState state;
  bool converged = false;
  double residual = 0.0;  // ||swing_rhs||_inf at the returned state
  Index steps = 0;
};

/// Damped relaxation to a synchronous operating point: integrates the grid
/// with temporarily inflated damping until ||swing_rhs||_inf <= tol at the
/// original damping, giving up after max_steps. Grids loaded beyond their
/// transfer capacity have no equilibrium and come back unconverged.
EquilibriumResult find_equilibrium(const SwingGrid& grid,
                                   const SwingState& guess, double tol = 1e-9,
                                   Index max_steps = 2000000);

/// Experiment batch for the data-driven controller, recorded in deviation
/// coordinates around `equilibrium`. Each episode starts at the equilibrium
/// plus N(0, variance) on every modeled phase and frequency, applies fresh
/// N(0, variance) forcing on each modeled frequency channel at every step,
/// and integrates `horizon` Euler steps of length dt. The forcing is stored
/// as U (reverse-time stacked), the state deviations as full-state outputs,
/// and the initial deviations as X0. Episodes whose deviation leaves the
/// guard band are discarded and resampled; `rejected`, when given, receives
/// the discard count, and persistent divergence aborts the harvest.
DataMatrices harvest_perturbation_data(const SwingGrid& grid,
                                       const SwingState& equilibrium,
                                       Index n_experiments, Index horizon,
                                       double dt, Rng& rng,
                                       double variance = 0.01,
                                       double guard = 1e3,
                                       Index* rejected = nullptr);

/// Deviation of `state` from `equilibrium` over the modeled generators,
/// stacked as [phase deviations; frequency deviations]. Phases are angles
/// and the operating point repeats every 2 pi per generator, so each phase
/// deviation is reduced to (-pi, pi] around the nearest copy.
Vector deviation_vector(const SwingGrid& grid, const SwingState& state,
                        const SwingState& equilibrium);

/// Fault experiment timeline: the grid switches from the pre-fault
/// configuration to the faulted one at `onset` and to the post-fault
/// configuration at `clearing`; an optional control acts from
/// `control_start` for `control_duration` seconds.
struct FaultScenario {
  SwingGrid pre_fault;
  SwingGrid faulted;
  SwingGrid post_fault;
  double onset = 2.0;
  double clearing = 2.5;
  double control_start = 3.0;
  double control_duration = 0.1;
  double t_s = 2.5e-4;       // sampling period (s)
  double t_end = 12.0;       // total simulated time (s)
  double tol_sync = 1e-2;    // |omega_i| allowed at t_end (rad/s)
  double tol_settle = 1e-2;  // ||rhs||_inf allowed over the last 5%

  void validate() const;
};

/// Sampled trajectory of a fault run (all generators, reference included)
/// plus the recovery verdict.
struct RecoveryRun {
  Vector time;
  Matrix delta;  // g x samples
  Matrix omega;  // g x samples
  bool recovered = false;
  double final_omega_max = 0.0;  // max_i |omega_i| at t_end
  double settle_residual = 0.0;  // max ||rhs||_inf over the last 5%
};

/// Integrates the scenario end to end from `initial` (default: relax the
/// pre-fault grid from a flat start), applying `control` on the modeled
/// frequency channels one step per sample period from control_start.
/// Recovered means every frequency ends within tol_sync of nominal and the
/// free dynamics stay settled (||rhs||_inf <= tol_settle) over the final 5%
/// of the run. The trajectory is recorded every `stride` samples plus the
/// final one.
RecoveryRun run_fault_recovery(const FaultScenario& scenario,
                               const ControlSequence* control = nullptr,
                               Index stride = 1,
                               const SwingState* initial = nullptr);

/// Control recovering the operating point: minimizes
/// q_eps ||Ymid a||^2 + ||U a||^2 over data combinations whose endpoint
/// deviation is zero when started from `dev`, solved through the
/// initial-state-augmented constraint [YT; X0] a = [0; dev]. The returned
/// input is Ua, one step per data sample.
DDSolution fault_recovery_control(const DataMatrices& data,
                                  const Eigen::Ref<const Vector>& dev,
                                  double q_eps = 0.01,
                                  double tol = kDefaultSvdTol);

/// Synthetic default grid: a ring of ten generators with one tightly
/// coupled, heavily loaded three-generator section. The fault drops the
/// section's two tie lines for the fault window, which leaves the section
/// spinning up under its own mechanical power and desynchronizes it.
FaultScenario ring10_scenario();

/// JSON config holding the generator arrays, the normal/faulted (and
/// optionally post-fault) coupling matrices, and the scenario timing.
FaultScenario load_fault_scenario(const std::filesystem::path& path);
void save_fault_scenario(const std::filesystem::path& path,
                         const FaultScenario& scenario);

/// Writes the sampled trajectory as CSV with columns
/// time, delta_1..delta_g, omega_1..omega_g.
void save_recovery_csv(const std::filesystem::path& path,
                       const RecoveryRun& run);

}  // namespace netctl
