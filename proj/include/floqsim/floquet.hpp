#pragma once

// Rotating-frame coefficients of the driven XY chain, their period averages,
// the lowest-order effective Hamiltonian and the drive calibrations.

#include "floqsim/models.hpp"
#include "floqsim/special.hpp"
#include "floqsim/tensor.hpp"

#include <array>

namespace floqsim {

enum class XiKind { instantaneous, averaged };

/// 3x3 real bond coefficients; entry (a, b) multiplies sigma^a on the even
/// site and sigma^b on its odd neighbour.
struct XiMatrix {
  std::array<std::array<double, 3>, 3> entries{};
  XiKind kind = XiKind::instantaneous;

  double operator()(Axis even, Axis odd) const {
    return entries[static_cast<int>(even)][static_cast<int>(odd)];
  }
  double max_abs_diff(const XiMatrix& other) const;
};

/// Printed closed forms at explicit rotation angles (g_e, g_o). These use
/// the inverse-frame sign: they equal the conjugation for angles -g.
XiMatrix xi_closed_form(double theta_e, double phi_e, double theta_o, double phi_o, double g_e,
                        double g_o);

/// Period averages with drive amplitudes (chi_e, chi_o).
XiMatrix xi_averaged_closed_form(double theta_e, double phi_e, double theta_o, double phi_o,
                                 double chi_e, double chi_o);

/// Coefficients of U^dag(t) H0 U(t) / J for the drive of `cfg` at time t.
XiMatrix xi_instantaneous(const DriveConfig& cfg, double t);

XiMatrix xi_averaged(const DriveConfig& cfg);

/// J sum_j sum_ab xi_ab sigma^a_{2j} (sigma^b_{2j-1} + sigma^b_{2j+1}).
Operator build_floquet_hamiltonian(const ChainSpec& chain, double J, const XiMatrix& xi);

/// First zero of J0, 2.404826; the even-site amplitude that removes YY.
double calibrate_ising_chi();

/// Uniform x-drive amplitude with averaged (yy, zz) = (2/3, 1/3).
/// Throws NumericalError if the cross terms fail to vanish.
double calibrate_xyz_chi();

/// Uniform x drive of amplitude chi on both sublattices.
DriveConfig uniform_x_drive(double omega, double chi);

struct FloquetOperator {
  Operator hamiltonian;
  /// max|H_F(M) - H_F(2M)|
  double halving_delta = 0.0;
  int substeps = 0;
};

/// One-period propagator of `h`, U(T) = prod exp(-i dt H(t_mid)), and its
/// principal log H_F = i log U(T) / T. Computed at M and 2M substeps; if
/// they differ by more than `tolerance` (entrywise) ConvergenceError is
/// thrown.
FloquetOperator floquet_from_propagator(const TimeDependentHamiltonian& h, const DriveConfig& cfg,
                                        int substeps, double tolerance = 1e-6);

/// Same as above for a Hamiltonian that carries its own period.
FloquetOperator floquet_from_propagator(const TimeDependentHamiltonian& h, int substeps,
                                        double tolerance = 1e-6);

}  // namespace floqsim
