#pragma once

// Trotterized digital simulation of the Ising and XYZ targets built from XY
// interaction layers and single-qubit rotations, plus the gate-error budget.

#include "floqsim/models.hpp"
#include "floqsim/propagation.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace floqsim {

enum class Layer { XY, XZ, YZ, Z, RX, RX_DAG };

std::string layer_name(Layer l);
Layer parse_layer(const std::string& name);

struct TrotterAlphas {
  double xy = 1.0;
  double xz = 0.0;
  double yz = 0.0;
};

/// How the Ising step applies its XY interaction layers.
enum class IsingCircuit {
  /// Odd bonds: U_XY then the R_x-conjugated U_XY; then the same on even
  /// bonds; then U_Z.
  pair_groups,
  /// One U_XY exponential over all bonds, R_x conjugated copy, then U_Z.
  all_bonds,
};

enum class ScheduleSampling { midpoint, endpoint };

struct TrotterPlan {
  int n_steps = 1;
  double dt = 0.0;
  std::vector<Layer> layer_order;
  TrotterAlphas alphas;
  IsingCircuit circuit = IsingCircuit::pair_groups;

  /// XY, RX, XY, RX_DAG, Z over `t_total`.
  static TrotterPlan ising(int n_steps, double t_total,
                           IsingCircuit circuit = IsingCircuit::pair_groups);
  /// Four-layer XYZ step with the given order and strengths.
  static TrotterPlan xyz(int n_steps, double t_total, std::vector<Layer> order,
                         TrotterAlphas alphas = {2.0 / 3.0, 1.0 / 3.0, 0.0});

  bool is_ising() const;
  void validate() const;
};

struct ErrorModel {
  double eps = 0.0;
  double c_gate = 35.0;

  /// 5N - 4 gates per Trotter step.
  static int gates_per_step(int n_sites);
  /// c_gate / A
  double t_gate(double anharmonicity) const;
  /// Serial two-qubit gates over N-1 bonds twice plus three single-qubit
  /// layers: (2(N-1) + 3) t_gate.
  static double trotter_step_time(int n_sites, double t_gate);
  void validate() const;
};

/// One Ising step: the XY layers give J XX + 0 YY, followed by
/// exp(-i dt hz_effective sum Z).
Operator trotter_step_ising(const ChainSpec& chain, double J, double hz_effective, double dt,
                            IsingCircuit circuit = IsingCircuit::pair_groups);

/// One XYZ step applying the layers in `layer_order` (first entry acts
/// first). XZ and YZ layers are XY layers conjugated by pi/2 rotations.
Operator trotter_step_xyz(const ChainSpec& chain, double J, const TrotterAlphas& alphas,
                          double hz_effective, double dt, const std::vector<Layer>& layer_order);

struct DigitalOptions {
  ScheduleSampling sampling = ScheduleSampling::midpoint;
  /// Record the fidelity after every step.
  bool record = true;
};

/// Annealing with N_Tr steps of the plan. Step k uses the schedule at
/// (k - 1/2) dt (midpoint) or k dt (endpoint). The Ising plan is compared to
/// ghz_target, the XYZ plan to the ground state of its large-N_Tr limit.
RunSummary digital_anneal(const ChainSpec& chain, const TrotterPlan& plan,
                          const AnnealSchedule& schedule, double hz, double J,
                          const DigitalOptions& opts = {});

/// Final state of digital_anneal, for comparisons against other runs.
StateVector digital_anneal_state(const ChainSpec& chain, const TrotterPlan& plan,
                                 const AnnealSchedule& schedule, double hz, double J,
                                 ScheduleSampling sampling = ScheduleSampling::midpoint);

/// Target of an XYZ plan: ground state of J(a_xy + a_xz) XX + J(a_xy + a_yz)
/// YY + J(a_xz + a_yz) ZZ.
GroundState xyz_plan_target(const ChainSpec& chain, double J, const TrotterAlphas& alphas);

struct OrderSearchResult {
  std::vector<Layer> best_order;
  double best_fidelity = 0.0;
  std::vector<std::pair<std::vector<Layer>, double>> all;
};

/// Exhaustive search over the 24 orders of {XY, XZ, YZ, Z}. Ties (within
/// 1e-12) go to the lexicographically first order by layer name. `workers` > 1 evaluates in
/// parallel; results do not depend on it.
OrderSearchResult optimize_step_order(const ChainSpec& chain, double J,
                                      const TrotterAlphas& alphas, const AnnealSchedule& schedule,
                                      double hz, int n_steps, int workers = 1);

/// F_tot = (1 - (5N-4) eps)^n_steps (1 - eps_dig).
double total_fidelity(const ErrorModel& em, int n_sites, int n_steps, double eps_dig);

struct TrotterOptimum {
  bool feasible = false;
  int n_opt = 0;
  double infidelity = 1.0;
};

/// argmin over the table of 1 - total_fidelity, restricted to n_steps <=
/// max_steps when given. No admissible entry gives feasible = false.
TrotterOptimum optimize_n_trotter(const ErrorModel& em, int n_sites,
                                  const std::map<int, double>& eps_dig_table,
                                  std::optional<int> max_steps = {});

/// floor(t_f / t_Tr) with t_Tr from ErrorModel::trotter_step_time at
/// t_gate = c_gate / A.
int max_trotter_steps(const ErrorModel& em, int n_sites, double anharmonicity, double t_final);

}  // namespace floqsim
