#pragma once

#include "netctl/network.hpp"
#include "netctl/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace netctl::bench {

enum class StudyId {
  kFig1c,
  kFig2c,
  kFig3a,
  kFig3b,
  kFig3c,
  kNoiseConsistency,
  kThm1Coverage,
  kSwingDemo,
};

/// Accepts the CLI study names: fig1c, fig2c, fig3a, fig3b, fig3c,
/// noise-consistency, thm1-coverage, swing-demo.
StudyId parse_study_id(const std::string& name);
std::string study_name(StudyId id);

/// Parameter grid for one study run. Defaults reproduce the desk-scale
/// protocol of the corresponding figure; every field can be overridden from a
/// JSON config.
struct StudySpec {
  StudyId study = StudyId::kFig2c;
  std::vector<Index> n_list;       // network sizes
  std::vector<Index> data_sizes;   // number of experiments N
  Index horizon = 0;               // control horizon T (0: protocol default)
  Index num_inputs = 0;            // m
  Index num_outputs = 0;           // p
  std::vector<double> deltas;      // edge perturbation magnitudes
  std::vector<double> sigmas;      // data noise standard deviations
  int repetitions = 1;
  std::uint64_t master_seed = 1;
  std::string out_dir = "out";
  int workers = 1;
  double edge_offset = 0.0;        // ER edge probability = ln(n)/n + offset
  bool perturb_all_entries = false;
  std::string grid_config;         // swing-demo: grid/scenario JSON path
};

StudySpec default_study_spec(StudyId id);

/// Defaults for `id` overlaid with the JSON object at config_path
/// (missing keys keep their defaults).
StudySpec load_study_spec(StudyId id, const std::string& config_path);

/// Executes the study and writes raw.csv, summary.csv, and meta.json into
/// spec.out_dir. Individual trial failures become rows with an error flag;
/// the sweep itself never aborts.
void run_study(const StudySpec& spec);

struct OracleSolution {
  ControlSequence u;
  double cost = 0.0;        // y_{1:T-1}^T Q y_{1:T-1} + u^T R u
  double kkt_residual = 0.0;
};

/// Brute-force reference: solves the equality-constrained quadratic program
/// directly through its dense KKT system
///   [2(H^T Q H + R), C_T^T; C_T, 0] [u; lambda] = [0; y_f].
/// Independent of every pseudoinverse code path; desk scale only.
OracleSolution oracle_kkt(const LinearNetwork& net, const ControlProblem& prob);

}  // namespace netctl::bench
