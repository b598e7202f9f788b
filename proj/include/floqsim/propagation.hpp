#pragma once

// Midpoint-exponential time stepping, stroboscopic sampling, observables and
// annealing runs.

#include "floqsim/models.hpp"
#include "floqsim/tensor.hpp"

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace floqsim {

/// How exp(-i dt H) acts on the state at each step. Both are unitary to
/// round-off; `taylor` avoids a diagonalisation per step, `automatic` picks
/// it unless ||H dt||_1 is large (stiff transmon levels).
enum class StepKernel { automatic, taylor, eigen };

struct PropagationConfig {
  /// Substeps per drive period, used when the Hamiltonian has a period.
  int substeps_per_period = 256;
  /// Total steps over [t0, t1] for Hamiltonians without a period.
  int steps_total = 4000;
  /// Also record the state every `record_stride` steps (0: breakpoints only).
  int record_stride = 0;
  StepKernel kernel = StepKernel::automatic;

  void validate() const;
  PropagationConfig refined() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StateVector> states;
  /// Indices into `times` where t is a whole number of periods.
  std::vector<std::size_t> stroboscopic_indices;
  std::size_t steps = 0;

  const StateVector& final_state() const { return states.back(); }
};

/// Evolves psi0 from t0 to t1 with psi <- exp(-i dt H(t + dt/2)) psi. For a
/// periodic Hamiltonian the grid is aligned to whole periods. The norm is
/// checked at every recorded sample: drift above 1e-8 throws, smaller
/// round-off is divided out.
Trajectory propagate(const TimeDependentHamiltonian& h, const StateVector& psi0, double t0,
                     double t1, const PropagationConfig& cfg);

/// Final state only; same stepping as propagate().
StateVector propagate_state(const TimeDependentHamiltonian& h, const StateVector& psi0, double t0,
                            double t1, const PropagationConfig& cfg);

/// F_n = |<exp(-i target n T) psi0 | psi(nT)>|^2 at each stroboscopic sample.
std::vector<double> stroboscopic_fidelities(const Trajectory& traj, const Operator& target_h,
                                            const StateVector& psi0);

/// <psi| sum_j sigma^axis_j |psi> / N on a qubit chain.
double magnetization(const StateVector& psi, const ChainSpec& chain, Axis axis);

struct GroundState {
  double energy = 0.0;
  StateVector state;
  double gap = 0.0;
  bool degenerate = false;
};

/// Lowest eigenpair; the first amplitude above 1e-12 in magnitude is made
/// real and positive. A gap below 1e-10 sets `degenerate`.
GroundState ground_state(const Operator& h);

/// (|+>^N + |->^N)/sqrt(2), |+-> = (|down> +- |up>)/sqrt(2).
StateVector ghz_target(int n_sites);

/// |down>^N: basis index 2^N - 1 for qubits, the vacuum for transmons.
StateVector all_down(const ChainSpec& chain);

struct ConvergenceCertificate {
  int substeps = 0;
  int refined_substeps = 0;
  double delta = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct RunSummary {
  std::vector<double> times;
  std::vector<double> fidelity_series;
  /// (M_x, M_y, M_z) per sample; empty for transmon chains.
  std::vector<std::array<double, 3>> magnetization;
  double final_fidelity = 0.0;
  std::optional<ConvergenceCertificate> certificate;
  std::map<std::string, std::string> metadata;
};

struct AnnealOptions {
  PropagationConfig propagation;
  /// Remove the drive-frame kick before the overlap at non-stroboscopic times.
  bool remove_frame = true;
  /// Repeat at 2M and require |F(M) - F(2M)| <= tolerance.
  bool certify = true;
  double tolerance = 1e-6;
  /// On a failed check, retry at 2M up to this many times.
  int max_refinements = 0;
  /// Throw ConvergenceError instead of recording a failed certificate.
  bool throw_on_failure = false;
};

/// Propagates psi0 over [0, t_final] and tracks the fidelity against
/// `target`, which lives in the same space as psi0.
RunSummary run_anneal(const TimeDependentHamiltonian& h, const StateVector& psi0,
                      const StateVector& target, double t_final, const AnnealOptions& opts = {});

}  // namespace floqsim
