#include "floqsim/floquet.hpp"

#include "floqsim/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace floqsim {

double XiMatrix::max_abs_diff(const XiMatrix& other) const {
  double worst = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      worst = std::max(worst, std::abs(entries[a][b] - other.entries[a][b]));
    }
  }
  return worst;
}

XiMatrix xi_instantaneous(const DriveConfig& cfg, double t) {
  cfg.validate();
  const double sw = std::sin(cfg.omega * t);
  return xi_closed_form(cfg.even.theta, cfg.even.phi, cfg.odd.theta, cfg.odd.phi,
                        -cfg.even.chi * sw, -cfg.odd.chi * sw);
}

XiMatrix xi_averaged(const DriveConfig& cfg) {
  cfg.validate();
  return xi_averaged_closed_form(cfg.even.theta, cfg.even.phi, cfg.odd.theta, cfg.odd.phi,
                                 cfg.even.chi, cfg.odd.chi);
}

Operator build_floquet_hamiltonian(const ChainSpec& chain, double J, const XiMatrix& xi) {
  if (chain.local_dim != 2) throw DimensionError("build_floquet_hamiltonian: needs qubits");
  if (chain.n_sites < 2) throw DomainError("build_floquet_hamiltonian: needs two sites");
  for (const auto& row : xi.entries) {
    for (double v : row) {
      if (!std::isfinite(v)) throw NumericalError("build_floquet_hamiltonian: non-finite xi");
    }
  }
  const Operator sig[3] = {pauli(Axis::x), pauli(Axis::y), pauli(Axis::z)};
  Matrix h = Matrix::Zero(chain.dim(), chain.dim());
  for (int bond = 1; bond < chain.n_sites; ++bond) {
    // The even site of bond (j, j+1) is whichever of the two is even.
    const int even_site = bond % 2 == 0 ? bond : bond + 1;
    const int odd_site = bond % 2 == 0 ? bond + 1 : bond;
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        const double v = xi.entries[a][b];
        if (v == 0.0) continue;
        h += (J * v) * embed(sig[a], even_site, chain).matrix() *
             embed(sig[b], odd_site, chain).matrix();
      }
    }
  }
  return Operator::hermitian(std::move(h));
}

double calibrate_ising_chi() {
  return bisect_root(bessel_j0, 2.0, 2.8, 1e-12);
}

DriveConfig uniform_x_drive(double omega, double chi) {
  DriveConfig cfg;
  cfg.omega = omega;
  cfg.even = {std::numbers::pi / 2, 0.0, chi};
  cfg.odd = {std::numbers::pi / 2, 0.0, chi};
  return cfg;
}

double calibrate_xyz_chi() {
  auto yy_gap = [](double chi) {
    return xi_averaged(uniform_x_drive(1.0, chi))(Axis::y, Axis::y) - 2.0 / 3.0;
  };
  const double chi = bisect_root(yy_gap, 0.5, 1.2, 1e-13);
  const XiMatrix xi = xi_averaged(uniform_x_drive(1.0, chi));
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      if (a != b && std::abs(xi.entries[a][b]) > 1e-10) {
        throw NumericalError("calibrate_xyz_chi: cross terms do not vanish");
      }
    }
  }
  if (std::abs(xi(Axis::z, Axis::z) - 1.0 / 3.0) > 1e-9) {
    throw NumericalError("calibrate_xyz_chi: zz coefficient is not 1/3");
  }
  return chi;
}

namespace {

Matrix period_propagator(const TimeDependentHamiltonian& h, double period, int substeps) {
  const double dt = period / substeps;
  Matrix u = Matrix::Identity(h.chain().dim(), h.chain().dim());
  Matrix hm;
  for (int k = 0; k < substeps; ++k) {
    h.evaluate_into((k + 0.5) * dt, hm);
    u = detail::expm_hermitian_matrix(hm, dt) * u;
  }
  return u;
}

Matrix log_over_period(const Matrix& u, double period) {
  return principal_log_unitary(Operator(u)).matrix() / period;
}

}  // namespace

FloquetOperator floquet_from_propagator(const TimeDependentHamiltonian& h, const DriveConfig& cfg,
                                        int substeps, double tolerance) {
  cfg.validate();
  if (substeps < 16) throw DomainError("floquet_from_propagator: need at least 16 substeps");
  const double period = cfg.period();
  const Matrix coarse = log_over_period(period_propagator(h, period, substeps), period);
  const Matrix fine = log_over_period(period_propagator(h, period, 2 * substeps), period);
  const double delta = max_abs(coarse - fine);
  if (delta > tolerance) {
    throw ConvergenceError("floquet_from_propagator: M vs 2M differ by " + std::to_string(delta));
  }
  return {Operator::hermitian(fine), delta, 2 * substeps};
}

FloquetOperator floquet_from_propagator(const TimeDependentHamiltonian& h, int substeps,
                                        double tolerance) {
  if (!h.period()) throw DomainError("floquet_from_propagator: Hamiltonian has no period");
  DriveConfig cfg;
  cfg.omega = 2.0 * std::numbers::pi / *h.period();
  return floquet_from_propagator(h, cfg, substeps, tolerance);
}

}  // namespace floqsim
