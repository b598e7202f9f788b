#pragma once

// Reference computations that share no code path with the library beyond
// dense linear algebra: quadrature, Bessel integrals, explicit rotations and
// brute-force diagonalisation.

#include "floqsim/tensor.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using floqsim::Complex;
using floqsim::Index;
using floqsim::Matrix;
using floqsim::Vector;

inline constexpr double kPi = std::numbers::pi;

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}
inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}
inline const std::array<Matrix, 3>& paulis() {
  static const std::array<Matrix, 3> p{pauli_x(), pauli_y(), pauli_z()};
  return p;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Single-site operators placed on sites 1..N (site 1 leftmost).
inline Matrix product(const std::vector<Matrix>& factors) {
  Matrix acc = Matrix::Identity(1, 1);
  for (const Matrix& f : factors) acc = kron(acc, f);
  return acc;
}

inline Matrix on_site(const Matrix& local, int site, int n) {
  std::vector<Matrix> f(n, Matrix::Identity(local.rows(), local.cols()));
  f[site - 1] = local;
  return product(f);
}

/// exp(-i angle n.sigma) by the half-angle formula.
inline Matrix rotation(double theta, double phi, double angle) {
  const double nx = std::sin(theta) * std::cos(phi);
  const double ny = std::sin(theta) * std::sin(phi);
  const double nz = std::cos(theta);
  const Matrix ns = nx * pauli_x() + ny * pauli_y() + nz * pauli_z();
  return std::cos(angle) * Matrix::Identity(2, 2) - Complex(0, std::sin(angle)) * ns;
}

/// exp(-i t H) by full diagonalisation.
inline Matrix expm(const Matrix& h, double t) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Vector ph = (-Complex(0, 1) * t * es.eigenvalues().cast<Complex>()).array().exp();
  return es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().adjoint();
}

struct Spectrum {
  Eigen::VectorXd values;
  Matrix vectors;
};

inline Spectrum diagonalize(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  return {es.eigenvalues(), es.eigenvectors()};
}

/// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-12, int depth = 40) {
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double lo, double hi, double flo, double fmid, double fhi, double whole, double eps,
          int d) -> double {
    const double mid = 0.5 * (lo + hi);
    const double lm = 0.5 * (lo + mid);
    const double rm = 0.5 * (mid + hi);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (mid - lo) / 6.0 * (flo + 4.0 * flm + fmid);
    const double right = (hi - mid) / 6.0 * (fmid + 4.0 * frm + fhi);
    if (d <= 0 || std::abs(left + right - whole) <= 15.0 * eps) {
      return left + right + (left + right - whole) / 15.0;
    }
    return rec(lo, mid, flo, flm, fmid, left, eps / 2.0, d - 1) +
           rec(mid, hi, fmid, frm, fhi, right, eps / 2.0, d - 1);
  };
  // Split first so the initial estimate cannot vanish by symmetry.
  const int pieces = 16;
  double total = 0.0;
  for (int k = 0; k < pieces; ++k) {
    const double lo = a + (b - a) * k / pieces;
    const double hi = a + (b - a) * (k + 1) / pieces;
    const double flo = f(lo), fhi = f(hi), fmid = f(0.5 * (lo + hi));
    const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
    total += rec(lo, hi, flo, fmid, fhi, whole, tol / pieces, depth);
  }
  return total;
}

/// J0(x) = (1/pi) int_0^pi cos(x sin s) ds
inline double bessel_j0_integral(double x) {
  return simpson([x](double s) { return std::cos(x * std::sin(s)); }, 0.0, kPi, 1e-14) / kPi;
}

/// J1 = -J0'
inline double bessel_j1_integral(double x) {
  return simpson([x](double s) { return std::cos(s - x * std::sin(s)); }, 0.0, kPi, 1e-14) / kPi;
}

/// Newton iteration on f with derivative df.
inline double newton(const std::function<double(double)>& f,
                     const std::function<double(double)>& df, double x0, int iters = 50) {
  double x = x0;
  for (int i = 0; i < iters; ++i) {
    const double step = f(x) / df(x);
    x -= step;
    if (std::abs(step) < 1e-15) break;
  }
  return x;
}

/// Coefficient of sigma^a_i sigma^b_j in an operator on n qubits,
/// tr(P^dag H) / 2^n.
inline double pauli_coefficient(const Matrix& h, int a, int i, int b, int j, int n) {
  std::vector<Matrix> f(n, Matrix::Identity(2, 2));
  f[i - 1] = paulis()[a];
  f[j - 1] = paulis()[b];
  const Matrix p = product(f);
  return ((p.adjoint() * h).trace() / static_cast<double>(h.rows())).real();
}

inline double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
