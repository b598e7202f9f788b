#pragma once

// Dense operators and states on open chains of qubits (d = 2) or transmon
// qutrits (d = 3). Site 1 is the leftmost tensor factor everywhere.

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <utility>

namespace floqsim {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

enum class Axis { x, y, z };

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kNormTol = 1e-10;

struct ChainSpec {
  int n_sites;
  int local_dim;

  ChainSpec(int n_sites, int local_dim = 2);

  static ChainSpec qubits(int n) { return {n, 2}; }
  static ChainSpec qutrits(int n) { return {n, 3}; }

  Index dim() const;

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

class Operator {
 public:
  Operator() = default;
  /// Wraps a square matrix without any Hermiticity claim.
  explicit Operator(Matrix m);

  /// Wraps `m` and records it as Hermitian. Throws NumericalError when
  /// max|M - M^dag| exceeds kHermitianTol (scaled by max(1, max|M|)).
  static Operator hermitian(Matrix m);
  static Operator identity(Index dim);
  static Operator zero(Index dim);

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  bool is_hermitian() const { return hermitian_; }

  Complex operator()(Index r, Index c) const { return m_(r, c); }

  Operator adjoint() const;

  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator*(double s, const Operator& a);
  friend Operator operator*(Complex s, const Operator& a);

 private:
  Matrix m_;
  bool hermitian_ = false;
};

Operator commutator(const Operator& a, const Operator& b);

/// max_ij |m_ij|
double max_abs(const Matrix& m);

/// Deviation from Hermiticity, max|M - M^dag|.
double hermiticity_defect(const Matrix& m);

class StateVector {
 public:
  /// Throws NumericalError if | ||amps|| - 1 | > kNormTol.
  explicit StateVector(Vector amplitudes);

  static StateVector basis(Index dim, Index k);
  /// Tensor product of normalised single-site states, site 1 leftmost.
  static StateVector product(std::span<const Vector> sites);
  /// Normalises `v` first; for states assembled from rounded coefficients.
  static StateVector normalized(Vector v);

  Index dim() const { return amps_.size(); }
  const Vector& amplitudes() const { return amps_; }
  Complex operator[](Index k) const { return amps_[k]; }

 private:
  Vector amps_;
};

Operator pauli(Axis axis);

struct Ladder {
  Operator lower;
  Operator raise;
};

/// Truncated bosonic ladder pair, lower|n> = sqrt(n)|n-1>.
Ladder ladder(int local_dim);

/// Places `local` on `site` (1-based) of `chain`, identity elsewhere.
Operator embed(const Operator& local, int site, const ChainSpec& chain);

Operator kron(const Operator& a, const Operator& b);

/// exp(-i * scale * h) by eigendecomposition. Requires a Hermitian h.
Operator expm_hermitian(const Operator& h, double scale);

/// |<b|a>|^2
double fidelity(const StateVector& a, const StateVector& b);

/// Hermitian H with exp(-iH) = u and eigenphases in (-pi, pi]. Refuses
/// input whose eigenphases come within `branch_margin` of +-pi.
Operator principal_log_unitary(const Operator& u, double branch_margin = 0.1);

/// u * psi; u must preserve the norm to kNormTol.
StateVector apply(const Operator& u, const StateVector& psi);

double expectation(const Operator& op, const StateVector& psi);

namespace detail {

/// In-place psi <- exp(-i dt h) psi. Hot path: no Hermiticity check.
void evolve_in_place(const Matrix& h, double dt, Vector& psi,
                     Eigen::SelfAdjointEigenSolver<Matrix>& solver);

Matrix expm_hermitian_matrix(const Matrix& h, double scale);

}  // namespace detail

}  // namespace floqsim
