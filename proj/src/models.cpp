#include "floqsim/models.hpp"

#include "floqsim/error.hpp"
#include "floqsim/special.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

namespace floqsim {

namespace {

void require_qubits(const ChainSpec& chain, const char* who) {
  if (chain.local_dim != 2) {
    throw DimensionError(std::string(who) + ": needs a qubit chain (d = 2)");
  }
}

void require_bonds(const ChainSpec& chain, const char* who) {
  if (chain.n_sites < 2) throw DomainError(std::string(who) + ": needs at least two sites");
}

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw DomainError(std::string(name) + " must be positive and finite");
  }
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw DomainError(std::string(name) + " must be finite");
}

Operator axis_operator(const SublatticeDrive& d) {
  const Operator x = pauli(Axis::x);
  const Operator y = pauli(Axis::y);
  const Operator z = pauli(Axis::z);
  return std::cos(d.phi) * std::sin(d.theta) * x + std::sin(d.phi) * std::sin(d.theta) * y +
         std::cos(d.theta) * z;
}

Operator hermitian_sum(const Operator& a, const Operator& b) {
  return Operator::hermitian((a + b).matrix());
}

// Logical-block projector on a transmon site.
Operator qubit_block(int local_dim) {
  Matrix p = Matrix::Zero(local_dim, local_dim);
  p(0, 0) = 1.0;
  p(1, 1) = 1.0;
  return Operator::hermitian(std::move(p));
}

}  // namespace

bool in_sublattice(int site, Sublattice s) {
  switch (s) {
    case Sublattice::all: return true;
    case Sublattice::even: return site % 2 == 0;
    case Sublattice::odd: return site % 2 == 1;
  }
  return false;
}

Operator site_sum(const Operator& local, Sublattice s, const ChainSpec& chain) {
  Matrix acc = Matrix::Zero(chain.dim(), chain.dim());
  for (int j = 1; j <= chain.n_sites; ++j) {
    if (in_sublattice(j, s)) acc += embed(local, j, chain).matrix();
  }
  if (local.is_hermitian()) return Operator::hermitian(std::move(acc));
  return Operator(std::move(acc));
}

Operator bond_sum(const Operator& a, const Operator& b, const ChainSpec& chain, int first_site) {
  if (first_site != 0 && first_site != 1 && first_site != 2) {
    throw DomainError("bond_sum: first_site must be 0, 1 or 2");
  }
  Matrix acc = Matrix::Zero(chain.dim(), chain.dim());
  for (int j = 1; j < chain.n_sites; ++j) {
    if (first_site != 0 && (j % 2) != (first_site % 2)) continue;
    acc += embed(a, j, chain).matrix() * embed(b, j + 1, chain).matrix();
  }
  // a_j b_{j+1} with commuting factors is Hermitian whenever a and b are.
  if (a.is_hermitian() && b.is_hermitian()) return Operator::hermitian(std::move(acc));
  return Operator(std::move(acc));
}

TimeDependentHamiltonian::TimeDependentHamiltonian(ChainSpec chain, Operator static_part)
    : chain_(chain), static_(std::move(static_part)) {
  if (static_.dim() != chain_.dim()) {
    throw DimensionError("static part does not match the chain dimension");
  }
  if (!static_.is_hermitian()) static_ = Operator::hermitian(static_.matrix());
}

void TimeDependentHamiltonian::add_term(Coefficient c, Operator op, std::string label) {
  if (!c) throw DomainError("drive term '" + label + "' has no coefficient");
  if (op.dim() != chain_.dim()) {
    throw DimensionError("drive term '" + label + "' does not match the chain dimension");
  }
  if (!op.is_hermitian()) op = Operator::hermitian(op.matrix());
  terms_.push_back({std::move(c), std::move(op), std::move(label)});
}

void TimeDependentHamiltonian::set_frame(FrameKick kick) {
  if (kick.generator.dim() != chain_.dim()) {
    throw DimensionError("frame generator does not match the chain dimension");
  }
  if (!kick.generator.is_hermitian()) kick.generator = Operator::hermitian(kick.generator.matrix());
  frame_ = std::move(kick);
}

void TimeDependentHamiltonian::set_period(double period) {
  require_positive(period, "period");
  period_ = period;
}

void TimeDependentHamiltonian::evaluate_into(double t, Matrix& out) const {
  out = static_.matrix();
  for (const DriveTerm& term : terms_) {
    const double c = term.coefficient(t);
    if (c != 0.0) out += c * term.op.matrix();
  }
}

Matrix TimeDependentHamiltonian::evaluate_matrix(double t) const {
  Matrix out;
  evaluate_into(t, out);
  return out;
}

Operator TimeDependentHamiltonian::evaluate(double t) const {
  return Operator::hermitian(evaluate_matrix(t));
}

Operator TimeDependentHamiltonian::frame_unitary(double t) const {
  if (!frame_) return Operator::identity(chain_.dim());
  return expm_hermitian(frame_->generator, frame_->angle(t));
}

void AnnealSchedule::validate() const {
  require_positive(t_final, "t_final");
}

double AnnealSchedule::field(double t) const {
  return std::clamp(1.0 - t / t_final, 0.0, 1.0);
}

double AnnealSchedule::coupling(double t) const {
  if (!ramp_coupling) return 1.0;
  return std::clamp(t / t_final, 0.0, 1.0);
}

void DriveConfig::validate() const {
  require_positive(omega, "omega");
  for (const SublatticeDrive* d : {&even, &odd}) {
    require_finite(d->theta, "theta");
    require_finite(d->phi, "phi");
    require_finite(d->chi, "chi");
    if (d->chi < 0.0) throw DomainError("chi must be non-negative");
  }
}

IsingDriveParams IsingDriveParams::from_main_text(double J, double hz, double lambda,
                                                  double omega) {
  IsingDriveParams p{J, hz, 2.0 * lambda, omega};
  p.validate();
  return p;
}

IsingDriveParams IsingDriveParams::from_rotation_angle(double J, double hz, double chi,
                                                       double omega) {
  IsingDriveParams p{J, hz, chi, omega};
  p.validate();
  return p;
}

void IsingDriveParams::validate() const {
  require_finite(J, "J");
  require_finite(hz, "hz");
  require_positive(chi, "chi");
  require_positive(omega, "omega");
}

void XYZDriveParams::validate() const {
  require_finite(J, "J");
  require_finite(hz, "hz");
  require_positive(chi, "chi");
  require_positive(omega, "omega");
}

void TransmonParams::validate(int n_sites) const {
  require_finite(J, "J");
  require_positive(anharmonicity, "anharmonicity");
  if (!detuning.empty() && static_cast<int>(detuning.size()) != n_sites) {
    throw DimensionError("detuning list must have one entry per site");
  }
  if (!drive.empty() && static_cast<int>(drive.size()) != n_sites) {
    throw DimensionError("drive list must have one entry per site");
  }
}

Operator build_xy_chain(const ChainSpec& chain, double J) {
  require_qubits(chain, "build_xy_chain");
  require_bonds(chain, "build_xy_chain");
  const Operator x = pauli(Axis::x);
  const Operator y = pauli(Axis::y);
  return hermitian_sum(J * bond_sum(x, x, chain), J * bond_sum(y, y, chain));
}

Operator build_target_ising(const ChainSpec& chain, double J_sim, double hz) {
  require_qubits(chain, "build_target_ising");
  require_bonds(chain, "build_target_ising");
  const Operator x = pauli(Axis::x);
  return hermitian_sum(J_sim * bond_sum(x, x, chain),
                       hz * site_sum(pauli(Axis::z), Sublattice::all, chain));
}

Operator build_target_xyz(const ChainSpec& chain, double Jx, double Jy, double Jz, double hz) {
  require_qubits(chain, "build_target_xyz");
  require_bonds(chain, "build_target_xyz");
  const Operator x = pauli(Axis::x);
  const Operator y = pauli(Axis::y);
  const Operator z = pauli(Axis::z);
  Matrix m = Jx * bond_sum(x, x, chain).matrix() + Jy * bond_sum(y, y, chain).matrix() +
             Jz * bond_sum(z, z, chain).matrix() +
             hz * site_sum(z, Sublattice::all, chain).matrix();
  return Operator::hermitian(std::move(m));
}

TimeDependentHamiltonian build_driven_chain(const ChainSpec& chain, double J,
                                            const DriveConfig& cfg) {
  cfg.validate();
  TimeDependentHamiltonian h(chain, build_xy_chain(chain, J));
  const double w = cfg.omega;
  Matrix frame_gen = Matrix::Zero(chain.dim(), chain.dim());
  for (auto [sub, drive, name] : {std::tuple{Sublattice::even, cfg.even, "even"},
                                  std::tuple{Sublattice::odd, cfg.odd, "odd"}}) {
    if (drive.chi == 0.0) continue;
    const Operator axis = site_sum(axis_operator(drive), sub, chain);
    const double amp = 0.5 * drive.chi * w;
    h.add_term([amp, w](double t) { return amp * std::cos(w * t); }, axis,
               std::string(name) + "_drive");
    frame_gen += drive.chi * axis.matrix();
  }
  // exp(-i (sin wt / 2) sum_p chi_p n_p.sigma) is the accumulated drive.
  h.set_frame({Operator::hermitian(std::move(frame_gen)),
               [w](double t) { return 0.5 * std::sin(w * t); }});
  h.set_period(cfg.period());
  return h;
}

TimeDependentHamiltonian build_ising_driven(const ChainSpec& chain, const IsingDriveParams& p,
                                            const std::optional<AnnealSchedule>& schedule) {
  require_qubits(chain, "build_ising_driven");
  p.validate();
  if (schedule) schedule->validate();

  const Operator xy = build_xy_chain(chain, p.J);
  const bool ramp_j = schedule && schedule->ramp_coupling;
  TimeDependentHamiltonian h(chain, ramp_j ? Operator::zero(chain.dim()) : xy);
  if (ramp_j) {
    const AnnealSchedule s = *schedule;
    h.add_term([s](double t) { return s.coupling(t); }, xy, "coupling");
  }

  const double w = p.omega;
  const double chi = p.chi;
  const Operator x_even = site_sum(pauli(Axis::x), Sublattice::even, chain);
  const Operator z_even = site_sum(pauli(Axis::z), Sublattice::even, chain);
  const Operator z_odd = site_sum(pauli(Axis::z), Sublattice::odd, chain);

  const double amp = 0.5 * chi * w;
  h.add_term([amp, w](double t) { return amp * std::cos(w * t); }, x_even, "even_x_drive");

  const double env = 2.0 * p.hz / (1.0 + bessel_j0(2.0 * chi));
  const std::optional<AnnealSchedule> s = schedule;
  h.add_term(
      [env, chi, w, s](double t) {
        const double ramp = s ? s->field(t) : 1.0;
        return ramp * env * std::cos(chi * std::sin(w * t));
      },
      z_even, "even_z_field");
  const double hz = p.hz;
  h.add_term([hz, s](double t) { return (s ? s->field(t) : 1.0) * hz; }, z_odd, "odd_z_field");

  h.set_frame({x_even, [chi, w](double t) { return 0.5 * chi * std::sin(w * t); }});
  h.set_period(p.period());
  return h;
}

TimeDependentHamiltonian build_xyz_driven(const ChainSpec& chain, const XYZDriveParams& p,
                                          const std::optional<AnnealSchedule>& schedule) {
  require_qubits(chain, "build_xyz_driven");
  p.validate();
  if (schedule) schedule->validate();

  const Operator xy = build_xy_chain(chain, p.J);
  const bool ramp_j = schedule && schedule->ramp_coupling;
  TimeDependentHamiltonian h(chain, ramp_j ? Operator::zero(chain.dim()) : xy);
  if (ramp_j) {
    const AnnealSchedule s = *schedule;
    h.add_term([s](double t) { return s.coupling(t); }, xy, "coupling");
  }

  const double w = p.omega;
  const double chi = p.chi;
  const Operator x_all = site_sum(pauli(Axis::x), Sublattice::all, chain);
  const Operator z_all = site_sum(pauli(Axis::z), Sublattice::all, chain);

  const double amp = 0.5 * chi * w;
  h.add_term([amp, w](double t) { return amp * std::cos(w * t); }, x_all, "x_drive");

  const double env = 2.0 * p.hz / (1.0 + bessel_j0(2.0 * chi));
  const std::optional<AnnealSchedule> s = schedule;
  h.add_term(
      [env, chi, w, s](double t) {
        const double ramp = s ? s->field(t) : 1.0;
        return ramp * env * std::cos(chi * std::sin(w * t));
      },
      z_all, "z_field");

  h.set_frame({x_all, [chi, w](double t) { return 0.5 * chi * std::sin(w * t); }});
  h.set_period(p.period());
  return h;
}

TimeDependentHamiltonian build_ising_anneal(const ChainSpec& chain, double J, double hz,
                                            const AnnealSchedule& schedule) {
  schedule.validate();
  TimeDependentHamiltonian h(chain, Operator::zero(chain.dim()));
  h.add_term([schedule](double t) { return schedule.coupling(t); },
             build_target_ising(chain, J, 0.0), "coupling");
  h.add_term([schedule](double t) { return schedule.field(t); },
             hz * site_sum(pauli(Axis::z), Sublattice::all, chain), "field");
  return h;
}

TimeDependentHamiltonian build_xyz_anneal(const ChainSpec& chain, double J, double hz,
                                          const AnnealSchedule& schedule) {
  schedule.validate();
  TimeDependentHamiltonian h(chain, Operator::zero(chain.dim()));
  h.add_term([schedule](double t) { return schedule.coupling(t); },
             build_target_xyz(chain, J, 2.0 * J / 3.0, J / 3.0, 0.0), "coupling");
  h.add_term([schedule](double t) { return schedule.field(t); },
             hz * site_sum(pauli(Axis::z), Sublattice::all, chain), "field");
  return h;
}

namespace {

struct TransmonPieces {
  Operator hopping;  // sum (a_j^dag a_{j+1} + h.c.)
  Operator anharmonic;  // sum (1/2) a^dag a^dag a a
};

TransmonPieces transmon_pieces(const ChainSpec& chain) {
  if (chain.local_dim != 3) throw DimensionError("transmon chain needs d = 3");
  require_bonds(chain, "transmon chain");
  const Ladder l = ladder(3);
  const Operator hop = bond_sum(l.raise, l.lower, chain) + bond_sum(l.lower, l.raise, chain);
  const Operator quartic = 0.5 * (l.raise * l.raise * l.lower * l.lower);
  return {Operator::hermitian(hop.matrix()),
          site_sum(Operator::hermitian(quartic.matrix()), Sublattice::all, chain)};
}

}  // namespace

TimeDependentHamiltonian build_transmon_chain(const ChainSpec& chain, const TransmonParams& p) {
  const TransmonPieces pieces = transmon_pieces(chain);
  p.validate(chain.n_sites);
  TimeDependentHamiltonian h(
      chain, Operator::hermitian((2.0 * p.J * pieces.hopping + p.anharmonicity * pieces.anharmonic)
                                     .matrix()));
  const Ladder l = ladder(3);
  const Operator number = Operator::hermitian((l.raise * l.lower).matrix());
  const Operator quad_x = Operator::hermitian((l.lower + l.raise).matrix());
  // Omega a + Omega^* a^dag = Re(Omega) (a + a^dag) + Im(Omega) i (a - a^dag)
  const Operator quad_y =
      Operator::hermitian((Complex(0.0, 1.0) * (l.lower - l.raise)).matrix());
  for (int j = 1; j <= chain.n_sites; ++j) {
    const std::string site = std::to_string(j);
    if (!p.detuning.empty() && p.detuning[j - 1]) {
      h.add_term(p.detuning[j - 1], embed(number, j, chain), "detuning_" + site);
    }
    if (!p.drive.empty() && p.drive[j - 1]) {
      const ComplexCoefficient om = p.drive[j - 1];
      h.add_term([om](double t) { return om(t).real(); }, embed(quad_x, j, chain),
                 "drive_re_" + site);
      h.add_term([om](double t) { return om(t).imag(); }, embed(quad_y, j, chain),
                 "drive_im_" + site);
    }
  }
  return h;
}

TimeDependentHamiltonian build_transmon_ising_anneal(
    const ChainSpec& chain, const IsingDriveParams& p,
    const std::optional<AnnealSchedule>& schedule, double anharmonicity) {
  p.validate();
  require_positive(anharmonicity, "anharmonicity");
  if (schedule) schedule->validate();
  const TransmonPieces pieces = transmon_pieces(chain);

  const Operator hop = Operator::hermitian((2.0 * p.J * pieces.hopping).matrix());
  const Operator anh = Operator::hermitian((anharmonicity * pieces.anharmonic).matrix());
  const bool ramp_j = schedule && schedule->ramp_coupling;
  TimeDependentHamiltonian h(chain, ramp_j ? anh : hop + anh);
  if (ramp_j) {
    const AnnealSchedule s = *schedule;
    h.add_term([s](double t) { return s.coupling(t); }, hop, "coupling");
  }

  const Ladder l = ladder(3);
  const Operator number = Operator::hermitian((l.raise * l.lower).matrix());
  const Operator quad_x = Operator::hermitian((l.lower + l.raise).matrix());
  const Operator x_even = site_sum(quad_x, Sublattice::even, chain);
  const Operator n_even = site_sum(number, Sublattice::even, chain);
  const Operator n_odd = site_sum(number, Sublattice::odd, chain);

  const double w = p.omega;
  const double chi = p.chi;
  const double amp = 0.5 * chi * w;
  h.add_term([amp, w](double t) { return amp * std::cos(w * t); }, x_even, "even_x_drive");

  // h sigma^z -> 2h n, dropping the constant.
  const double env = 2.0 * p.hz / (1.0 + bessel_j0(2.0 * chi));
  const std::optional<AnnealSchedule> s = schedule;
  h.add_term(
      [env, chi, w, s](double t) {
        const double ramp = s ? s->field(t) : 1.0;
        return 2.0 * ramp * env * std::cos(chi * std::sin(w * t));
      },
      n_even, "even_detuning");
  const double hz = p.hz;
  h.add_term([hz, s](double t) { return 2.0 * (s ? s->field(t) : 1.0) * hz; }, n_odd,
             "odd_detuning");

  const Operator block = qubit_block(3);
  const Operator logical_x = Operator::hermitian((block * quad_x * block).matrix());
  h.set_frame({site_sum(logical_x, Sublattice::even, chain),
               [chi, w](double t) { return 0.5 * chi * std::sin(w * t); }});
  h.set_period(p.period());
  return h;
}

Matrix qubit_embedding(int n_sites) {
  const ChainSpec qubits(n_sites, 2);
  const ChainSpec qutrits(n_sites, 3);
  Matrix v = Matrix::Zero(qutrits.dim(), qubits.dim());
  for (Index q = 0; q < qubits.dim(); ++q) {
    // Qubit bit 0 is |up> (sigma^z = +1), which maps to transmon level 1.
    Index k = 0;
    for (int site = 0; site < n_sites; ++site) {
      const Index bit = (q >> (n_sites - 1 - site)) & 1;
      k = 3 * k + (1 - bit);
    }
    v(k, q) = 1.0;
  }
  return v;
}

StateVector lift_to_qutrits(const StateVector& qubit_state, int n_sites) {
  const Matrix v = qubit_embedding(n_sites);
  if (qubit_state.dim() != v.cols()) throw DimensionError("lift_to_qutrits: dimension mismatch");
  return StateVector(v * qubit_state.amplitudes());
}

Matrix project_to_qubits(const Matrix& qutrit_op, int n_sites) {
  const Matrix v = qubit_embedding(n_sites);
  if (qutrit_op.rows() != v.rows() || qutrit_op.cols() != v.rows()) {
    throw DimensionError("project_to_qubits: dimension mismatch");
  }
  return v.adjoint() * qutrit_op * v;
}

}  // namespace floqsim
