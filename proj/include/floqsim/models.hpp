#pragma once

// Hamiltonian builders: the static XY chain, sublattice-driven chains that
// engineer Ising and XYZ couplings, their ideal targets, annealing ramps and
// the three-level transmon chain.

#include "floqsim/tensor.hpp"

#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace floqsim {

using Coefficient = std::function<double(double)>;
using ComplexCoefficient = std::function<Complex(double)>;

/// Sites 2, 4, ... are "even", sites 1, 3, ... are "odd" (1-based).
enum class Sublattice { all, even, odd };

bool in_sublattice(int site, Sublattice s);

/// Sum of `local` embedded on every site of sublattice `s`.
Operator site_sum(const Operator& local, Sublattice s, const ChainSpec& chain);

/// Sum over nearest-neighbour bonds (j, j+1) of a_j b_{j+1}. `first_site`
/// selects bonds starting on odd (1) or even (2) sites; 0 takes all bonds.
Operator bond_sum(const Operator& a, const Operator& b, const ChainSpec& chain,
                  int first_site = 0);

struct DriveTerm {
  Coefficient coefficient;
  Operator op;
  std::string label;
};

/// Drive-frame unitary exp(-i angle(t) G). Used to read out states in the
/// rotating frame at non-stroboscopic times.
struct FrameKick {
  Operator generator;
  Coefficient angle;
};

class TimeDependentHamiltonian {
 public:
  TimeDependentHamiltonian(ChainSpec chain, Operator static_part);

  /// Adds c(t) * op. `op` must be Hermitian and match the chain dimension.
  void add_term(Coefficient c, Operator op, std::string label);
  void set_frame(FrameKick kick);
  void set_period(double period);

  const ChainSpec& chain() const { return chain_; }
  const Operator& static_part() const { return static_; }
  const std::vector<DriveTerm>& terms() const { return terms_; }
  std::optional<double> period() const { return period_; }
  bool has_frame() const { return frame_.has_value(); }

  /// H(t) as a raw matrix; Hermitian by construction.
  void evaluate_into(double t, Matrix& out) const;
  Matrix evaluate_matrix(double t) const;
  /// H(t) with the Hermiticity check applied.
  Operator evaluate(double t) const;
  /// exp(-i angle(t) G), identity when no frame is set.
  Operator frame_unitary(double t) const;

 private:
  ChainSpec chain_;
  Operator static_;
  std::vector<DriveTerm> terms_;
  std::optional<FrameKick> frame_;
  std::optional<double> period_;
};

/// Linear ramp used for annealing. The field follows s(t) = 1 - t/t_f and,
/// unless disabled, the coupling is switched on as t/t_f. Both clamp to
/// [0, 1] outside [0, t_f].
struct AnnealSchedule {
  double t_final = 1.0;
  bool ramp_coupling = true;

  void validate() const;
  double field(double t) const;
  double coupling(double t) const;
};

struct SublatticeDrive {
  double theta = std::numbers::pi / 2;
  double phi = 0.0;
  /// Peak rotation angle; the site spin is rotated by chi * sin(omega t).
  double chi = 0.0;
};

struct DriveConfig {
  double omega = 1.0;
  SublatticeDrive even;
  SublatticeDrive odd;

  double period() const { return 2.0 * std::numbers::pi / omega; }
  void validate() const;
};

struct IsingDriveParams {
  double J = -1.0;
  double hz = 1.0;
  /// Rotation-angle amplitude of the even-site x drive.
  double chi = 0.0;
  double omega = 1.0;

  /// Amplitude quoted as the drive-coefficient ratio lambda = chi / 2.
  static IsingDriveParams from_main_text(double J, double hz, double lambda, double omega);
  static IsingDriveParams from_rotation_angle(double J, double hz, double chi, double omega);

  double lambda_text() const { return chi / 2.0; }
  double period() const { return 2.0 * std::numbers::pi / omega; }
  void validate() const;
};

struct XYZDriveParams {
  double J = -1.0;
  /// Rotation-angle amplitude of the uniform x drive.
  double chi = 0.0;
  double omega = 1.0;
  double hz = 1.0;

  double period() const { return 2.0 * std::numbers::pi / omega; }
  void validate() const;
};

struct TransmonParams {
  double J = -1.0;
  double anharmonicity = 1.0;
  /// Per-site detuning Delta_j(t); empty means zero on every site.
  std::vector<Coefficient> detuning;
  /// Per-site complex drive Omega_j(t); empty means zero on every site.
  std::vector<ComplexCoefficient> drive;

  void validate(int n_sites) const;
};

/// sum_j J (X_j X_{j+1} + Y_j Y_{j+1})
Operator build_xy_chain(const ChainSpec& chain, double J);

/// J_sim sum X_j X_{j+1} + hz sum Z_j
Operator build_target_ising(const ChainSpec& chain, double J_sim, double hz);

Operator build_target_xyz(const ChainSpec& chain, double Jx, double Jy, double Jz, double hz);

/// XY chain plus sublattice drives (chi_p / 2) omega cos(omega t) n_p . sigma.
/// No fields; the generic input of the rotating-frame machinery.
TimeDependentHamiltonian build_driven_chain(const ChainSpec& chain, double J,
                                            const DriveConfig& cfg);

/// Even sites: x drive (chi/2) omega cos(omega t) and z field
/// 2 hz / (1 + J0(2 chi)) cos(chi sin omega t); odd sites: z field hz.
/// With a schedule both fields carry s(t) and the coupling carries its ramp.
TimeDependentHamiltonian build_ising_driven(const ChainSpec& chain, const IsingDriveParams& p,
                                            const std::optional<AnnealSchedule>& schedule = {});

/// Uniform x drive (chi/2) omega cos(omega t) on every site. The annealing
/// field is s(t) 2 hz / (1 + J0(2 chi)) cos(chi sin omega t) on every site so
/// that it averages to s(t) hz in the rotating frame.
TimeDependentHamiltonian build_xyz_driven(const ChainSpec& chain, const XYZDriveParams& p,
                                          const std::optional<AnnealSchedule>& schedule = {});

/// coupling(t) J sum XX + field(t) hz sum Z
TimeDependentHamiltonian build_ising_anneal(const ChainSpec& chain, double J, double hz,
                                            const AnnealSchedule& schedule);

/// coupling(t) (J XX + 2J/3 YY + J/3 ZZ) + field(t) hz sum Z
TimeDependentHamiltonian build_xyz_anneal(const ChainSpec& chain, double J, double hz,
                                          const AnnealSchedule& schedule);

/// 2J sum (a_j^dag a_{j+1} + h.c.) + sum (A/2) a^dag a^dag a a, with
/// Delta_j(t) n_j and Omega_j(t) a_j + h.c. as drive terms.
TimeDependentHamiltonian build_transmon_chain(const ChainSpec& chain, const TransmonParams& p);

/// Transmon image of build_ising_driven with Delta = 2 hz and Omega = h^x.
/// The frame kick acts on the {|0>, |1>} block of the even sites only.
TimeDependentHamiltonian build_transmon_ising_anneal(
    const ChainSpec& chain, const IsingDriveParams& p,
    const std::optional<AnnealSchedule>& schedule, double anharmonicity);

/// Isometry from the qubit chain into the qutrit chain: qubit |up> -> |1>,
/// |down> -> |0> on every site. Shape 3^N x 2^N.
Matrix qubit_embedding(int n_sites);

StateVector lift_to_qutrits(const StateVector& qubit_state, int n_sites);

/// V^dag op V with V = qubit_embedding(n_sites).
Matrix project_to_qubits(const Matrix& qutrit_op, int n_sites);

}  // namespace floqsim
