#include "floqsim/tensor.hpp"

#include "floqsim/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace floqsim {

namespace {

void require_square(const Matrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("operator must be square, got " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()));
  }
}

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw NumericalError(std::string(what) + ": non-finite entries");
  }
}

}  // namespace

ChainSpec::ChainSpec(int n, int d) : n_sites(n), local_dim(d) {
  if (n_sites < 1) {
    throw DomainError("chain needs at least one site");
  }
  if (local_dim != 2 && local_dim != 3) {
    throw DomainError("local dimension must be 2 or 3, got " + std::to_string(local_dim));
  }
  if (n_sites > 10) {
    throw DomainError("chain too long for dense storage: " + std::to_string(n_sites));
  }
}

Index ChainSpec::dim() const {
  Index d = 1;
  for (int i = 0; i < n_sites; ++i) d *= local_dim;
  return d;
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const Matrix& m) {
  return max_abs(m - m.adjoint());
}

Operator::Operator(Matrix m) : m_(std::move(m)) {
  require_square(m_);
}

Operator Operator::hermitian(Matrix m) {
  require_square(m);
  const double defect = hermiticity_defect(m);
  const double scale = std::max(1.0, max_abs(m));
  if (!(defect <= kHermitianTol * scale)) {
    throw NumericalError("operator flagged Hermitian is not: max|M - M^dag| = " +
                         std::to_string(defect));
  }
  Operator op;
  op.m_ = std::move(m);
  op.hermitian_ = true;
  return op;
}

Operator Operator::identity(Index dim) {
  return hermitian(Matrix::Identity(dim, dim));
}

Operator Operator::zero(Index dim) {
  return hermitian(Matrix::Zero(dim, dim));
}

Operator Operator::adjoint() const {
  Operator out(m_.adjoint());
  out.hermitian_ = hermitian_;
  return out;
}

Operator operator+(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator sum: dimension mismatch");
  Operator out(a.m_ + b.m_);
  out.hermitian_ = a.hermitian_ && b.hermitian_;
  return out;
}

Operator operator-(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator difference: dimension mismatch");
  Operator out(a.m_ - b.m_);
  out.hermitian_ = a.hermitian_ && b.hermitian_;
  return out;
}

Operator operator*(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw DimensionError("operator product: dimension mismatch");
  return Operator(a.m_ * b.m_);
}

Operator operator*(double s, const Operator& a) {
  Operator out(s * a.m_);
  out.hermitian_ = a.hermitian_;
  return out;
}

Operator operator*(Complex s, const Operator& a) {
  Operator out(s * a.m_);
  out.hermitian_ = a.hermitian_ && s.imag() == 0.0;
  return out;
}

Operator commutator(const Operator& a, const Operator& b) {
  return a * b - b * a;
}

StateVector::StateVector(Vector amplitudes) : amps_(std::move(amplitudes)) {
  if (!amps_.allFinite()) {
    throw NumericalError("state has non-finite amplitudes");
  }
  const double n = amps_.norm();
  if (std::abs(n - 1.0) > kNormTol) {
    throw NumericalError("state is not normalised: ||psi|| = " + std::to_string(n));
  }
}

StateVector StateVector::basis(Index dim, Index k) {
  if (k < 0 || k >= dim) throw DimensionError("basis index out of range");
  Vector v = Vector::Zero(dim);
  v[k] = 1.0;
  return StateVector(std::move(v));
}

StateVector StateVector::product(std::span<const Vector> sites) {
  if (sites.empty()) throw DimensionError("product state needs at least one site");
  Vector acc = Vector::Ones(1);
  for (const Vector& s : sites) {
    const double n = s.norm();
    if (std::abs(n - 1.0) > kNormTol) {
      throw NumericalError("single-site state is not normalised");
    }
    Vector next(acc.size() * s.size());
    for (Index i = 0; i < acc.size(); ++i) {
      next.segment(i * s.size(), s.size()) = acc[i] * s;
    }
    acc = std::move(next);
  }
  return StateVector(std::move(acc));
}

StateVector StateVector::normalized(Vector v) {
  const double n = v.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw NumericalError("cannot normalise a zero state");
  return StateVector(v / n);
}

Operator pauli(Axis axis) {
  Matrix m(2, 2);
  const Complex i(0.0, 1.0);
  switch (axis) {
    case Axis::x: m << 0.0, 1.0, 1.0, 0.0; break;
    case Axis::y: m << 0.0, -i, i, 0.0; break;
    case Axis::z: m << 1.0, 0.0, 0.0, -1.0; break;
  }
  return Operator::hermitian(std::move(m));
}

Ladder ladder(int local_dim) {
  if (local_dim != 2 && local_dim != 3) {
    throw DomainError("ladder operators only for d = 2 or 3");
  }
  Matrix a = Matrix::Zero(local_dim, local_dim);
  for (int n = 1; n < local_dim; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  Operator lower(a);
  Operator raise(a.adjoint());
  return {std::move(lower), std::move(raise)};
}

Operator kron(const Operator& a, const Operator& b) {
  const Matrix& x = a.matrix();
  const Matrix& y = b.matrix();
  Matrix out(x.rows() * y.rows(), x.cols() * y.cols());
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      out.block(i * y.rows(), j * y.cols(), y.rows(), y.cols()) = x(i, j) * y;
    }
  }
  if (a.is_hermitian() && b.is_hermitian()) return Operator::hermitian(std::move(out));
  return Operator(std::move(out));
}

Operator embed(const Operator& local, int site, const ChainSpec& chain) {
  if (local.dim() != chain.local_dim) {
    throw DimensionError("embed: local operator has dim " + std::to_string(local.dim()) +
                         ", chain sites have dim " + std::to_string(chain.local_dim));
  }
  if (site < 1 || site > chain.n_sites) {
    throw DimensionError("embed: site " + std::to_string(site) + " outside 1.." +
                         std::to_string(chain.n_sites));
  }
  Index left = 1;
  for (int i = 1; i < site; ++i) left *= chain.local_dim;
  Index right = 1;
  for (int i = site + 1; i <= chain.n_sites; ++i) right *= chain.local_dim;

  // I_left (x) op (x) I_right, written out directly.
  const Index d = chain.local_dim;
  const Matrix& m = local.matrix();
  Matrix out = Matrix::Zero(left * d * right, left * d * right);
  for (Index l = 0; l < left; ++l) {
    for (Index a = 0; a < d; ++a) {
      for (Index b = 0; b < d; ++b) {
        const Complex v = m(a, b);
        if (v == Complex(0.0)) continue;
        for (Index r = 0; r < right; ++r) {
          out((l * d + a) * right + r, (l * d + b) * right + r) = v;
        }
      }
    }
  }
  if (local.is_hermitian()) return Operator::hermitian(std::move(out));
  return Operator(std::move(out));
}

namespace detail {

Matrix expm_hermitian_matrix(const Matrix& h, double scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  const Eigen::VectorXd& w = solver.eigenvalues();
  const Matrix& v = solver.eigenvectors();
  Vector phases(w.size());
  for (Index k = 0; k < w.size(); ++k) {
    phases[k] = std::polar(1.0, -scale * w[k]);
  }
  return v * phases.asDiagonal() * v.adjoint();
}

void evolve_in_place(const Matrix& h, double dt, Vector& psi,
                     Eigen::SelfAdjointEigenSolver<Matrix>& solver) {
  solver.compute(h);
  const Eigen::VectorXd& w = solver.eigenvalues();
  const Matrix& v = solver.eigenvectors();
  Vector c = v.adjoint() * psi;
  for (Index k = 0; k < c.size(); ++k) {
    c[k] *= std::polar(1.0, -dt * w[k]);
  }
  psi.noalias() = v * c;
}

}  // namespace detail

Operator expm_hermitian(const Operator& h, double scale) {
  require_finite(h.matrix(), "expm_hermitian");
  if (!h.is_hermitian()) {
    // Accept unflagged input only after the same check the flag would need.
    (void)Operator::hermitian(h.matrix());
  }
  return Operator(detail::expm_hermitian_matrix(h.matrix(), scale));
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw DimensionError("fidelity: dimension mismatch");
  const double f = std::norm(b.amplitudes().dot(a.amplitudes()));
  return std::clamp(f, 0.0, 1.0);
}

Operator principal_log_unitary(const Operator& u, double branch_margin) {
  const Matrix& m = u.matrix();
  require_finite(m, "principal_log_unitary");
  const double defect = max_abs(m.adjoint() * m - Matrix::Identity(m.rows(), m.cols()));
  if (defect > 1e-8) {
    throw NumericalError("principal_log_unitary: input not unitary (defect " +
                         std::to_string(defect) + ")");
  }
  // A unitary is normal, so its complex Schur form is diagonal.
  Eigen::ComplexSchur<Matrix> schur(m);
  if (schur.info() != Eigen::Success) throw NumericalError("Schur decomposition failed");
  const Matrix& q = schur.matrixU();
  const Matrix& t = schur.matrixT();
  Eigen::VectorXd theta(m.rows());
  for (Index k = 0; k < m.rows(); ++k) {
    const double phase = std::arg(t(k, k));
    if (std::abs(phase) > std::numbers::pi - branch_margin) {
      throw NumericalError("principal_log_unitary: eigenphase " + std::to_string(phase) +
                           " within margin of the branch cut");
    }
    theta[k] = -phase;  // exp(-i theta) = e^{i phase}
  }
  Matrix h = q * theta.cast<Complex>().asDiagonal() * q.adjoint();
  h = 0.5 * (h + h.adjoint()).eval();
  return Operator::hermitian(std::move(h));
}

StateVector apply(const Operator& u, const StateVector& psi) {
  if (u.dim() != psi.dim()) throw DimensionError("apply: dimension mismatch");
  return StateVector(u.matrix() * psi.amplitudes());
}

double expectation(const Operator& op, const StateVector& psi) {
  if (op.dim() != psi.dim()) throw DimensionError("expectation: dimension mismatch");
  return psi.amplitudes().dot(op.matrix() * psi.amplitudes()).real();
}

}  // namespace floqsim
