#include "oracles.hpp"

#include "floqsim/error.hpp"
#include "floqsim/floquet.hpp"
#include "floqsim/models.hpp"
#include "floqsim/propagation.hpp"

#include <doctest.h>

#include <random>

using namespace floqsim;

namespace {

Matrix xy_chain_oracle(int n, double J) {
  Matrix h = Matrix::Zero(1 << n, 1 << n);
  for (int j = 1; j < n; ++j) {
    for (const Matrix& p : {oracle::pauli_x(), oracle::pauli_y()}) {
      h += J * oracle::on_site(p, j, n) * oracle::on_site(p, j + 1, n);
    }
  }
  return h;
}

}  // namespace

TEST_SUITE("models") {

TEST_CASE("sublattices: even means sites 2, 4, ...") {
  CHECK(in_sublattice(2, Sublattice::even));
  CHECK_FALSE(in_sublattice(1, Sublattice::even));
  CHECK(in_sublattice(3, Sublattice::odd));
  CHECK(in_sublattice(3, Sublattice::all));
  const ChainSpec chain(4, 2);
  const Matrix zeven = site_sum(pauli(Axis::z), Sublattice::even, chain).matrix();
  const Matrix ref = oracle::on_site(oracle::pauli_z(), 2, 4) + oracle::on_site(oracle::pauli_z(), 4, 4);
  CHECK(oracle::max_abs(zeven - ref) < 1e-15);
}

TEST_CASE("XY chain and targets agree with explicit sums") {
  for (int n = 2; n <= 5; ++n) {
    const ChainSpec chain(n, 2);
    CHECK(oracle::max_abs(build_xy_chain(chain, -0.7).matrix() - xy_chain_oracle(n, -0.7)) < 1e-14);
    Matrix ising = Matrix::Zero(chain.dim(), chain.dim());
    for (int j = 1; j < n; ++j) {
      ising += -1.0 * oracle::on_site(oracle::pauli_x(), j, n) * oracle::on_site(oracle::pauli_x(), j + 1, n);
    }
    for (int j = 1; j <= n; ++j) ising += 1.5 * oracle::on_site(oracle::pauli_z(), j, n);
    CHECK(oracle::max_abs(build_target_ising(chain, -1.0, 1.5).matrix() - ising) < 1e-14);
  }
  CHECK_THROWS_AS(build_xy_chain(ChainSpec(1, 2), 1.0), DomainError);
  CHECK_THROWS_AS(build_xy_chain(ChainSpec(3, 3), 1.0), DimensionError);
}

TEST_CASE("XY chain conserves total magnetisation") {
  const ChainSpec chain(5, 2);
  const Operator h = build_xy_chain(chain, 1.0);
  const Operator mz = site_sum(pauli(Axis::z), Sublattice::all, chain);
  CHECK(max_abs(commutator(h, mz).matrix()) < 1e-13);
}

TEST_CASE("anneal schedule ramps the field down and the coupling up") {
  const AnnealSchedule s{10.0, true};
  CHECK(s.field(0.0) == 1.0);
  CHECK(s.field(10.0) == 0.0);
  CHECK(s.coupling(0.0) == 0.0);
  CHECK(s.coupling(5.0) == doctest::Approx(0.5));
  const AnnealSchedule fixed{10.0, false};
  CHECK(fixed.coupling(0.0) == 1.0);
  CHECK_THROWS_AS((AnnealSchedule{0.0, true}.validate()), DomainError);
}

TEST_CASE("drive amplitude conventions") {
  const IsingDriveParams a = IsingDriveParams::from_main_text(-1.0, 1.0, 1.2, 10.0);
  CHECK(a.chi == doctest::Approx(2.4));
  CHECK(a.lambda_text() == doctest::Approx(1.2));
  const IsingDriveParams b = IsingDriveParams::from_rotation_angle(-1.0, 1.0, 2.4, 10.0);
  CHECK(b.chi == a.chi);
  CHECK_THROWS_AS(IsingDriveParams::from_rotation_angle(-1.0, 1.0, 2.4, -1.0), DomainError);
}

TEST_CASE("driven chain: Hamiltonian is Hermitian and periodic") {
  const ChainSpec chain(3, 2);
  DriveConfig cfg;
  cfg.omega = 7.0;
  cfg.even = {0.4, 1.1, 1.3};
  cfg.odd = {2.0, -0.3, 0.6};
  const TimeDependentHamiltonian h = build_driven_chain(chain, -1.0, cfg);
  REQUIRE(h.period());
  for (double t : {0.0, 0.13, 0.71}) {
    const Matrix a = h.evaluate_matrix(t);
    CHECK(hermiticity_defect(a) < 1e-13);
    CHECK(oracle::max_abs(a - h.evaluate_matrix(t + *h.period())) < 1e-10);
  }
}

TEST_CASE("frame unitary is the accumulated drive rotation") {
  const ChainSpec chain(3, 2);
  DriveConfig cfg;
  cfg.omega = 5.0;
  cfg.even = {0.9, 0.2, 1.7};
  cfg.odd = {1.3, 2.2, 0.8};
  const TimeDependentHamiltonian h = build_driven_chain(chain, 1.0, cfg);
  const double t = 0.37;
  const double s = std::sin(cfg.omega * t) / 2.0;
  const Matrix odd = oracle::rotation(cfg.odd.theta, cfg.odd.phi, cfg.odd.chi * s);
  const Matrix even = oracle::rotation(cfg.even.theta, cfg.even.phi, cfg.even.chi * s);
  const Matrix ref = oracle::product({odd, even, odd});
  CHECK(oracle::max_abs(h.frame_unitary(t).matrix() - ref) < 1e-13);
}

TEST_CASE("qubit embedding and lift") {
  const int n = 3;
  const Matrix e = qubit_embedding(n);
  CHECK(e.rows() == 27);
  CHECK(e.cols() == 8);
  CHECK(oracle::max_abs(e.adjoint() * e - Matrix::Identity(8, 8)) < 1e-15);
  // |down down down> (qubit index 7) is the transmon vacuum.
  const StateVector vac = lift_to_qutrits(StateVector::basis(8, 7), n);
  CHECK(std::abs(vac[0] - Complex(1.0)) < 1e-15);
  // |up up up> is |111>, index 1*9 + 1*3 + 1.
  const StateVector top = lift_to_qutrits(StateVector::basis(8, 0), n);
  CHECK(std::abs(top[13] - Complex(1.0)) < 1e-15);
}

TEST_CASE("transmon Ising chain projects onto the qubit chain up to a constant") {
  const int n = 3;
  const IsingDriveParams p = IsingDriveParams::from_rotation_angle(-1.0, 0.8, 2.1, 9.0);
  const AnnealSchedule s{5.0, true};
  const TimeDependentHamiltonian q = build_ising_driven(ChainSpec(n, 2), p, s);
  const TimeDependentHamiltonian tr = build_transmon_ising_anneal(ChainSpec(n, 3), p, s, 50.0);
  for (double t : {0.0, 0.4, 1.9, 3.3}) {
    const Matrix diff = project_to_qubits(tr.evaluate_matrix(t), n) - q.evaluate_matrix(t);
    const Complex c = diff(0, 0);
    CHECK(oracle::max_abs(diff - c * Matrix::Identity(8, 8)) < 1e-12);
    CHECK(std::abs(c.imag()) < 1e-14);
  }
  // Frames agree on the logical block.
  const Matrix fq = q.frame_unitary(0.3).matrix();
  const Matrix ft = project_to_qubits(tr.frame_unitary(0.3).matrix(), n);
  CHECK(oracle::max_abs(fq - ft) < 1e-12);
}

TEST_CASE("transmon anharmonicity penalises the second level only") {
  const ChainSpec chain(2, 3);
  TransmonParams p;
  p.J = 0.0;
  p.anharmonicity = 40.0;
  const TimeDependentHamiltonian h = build_transmon_chain(chain, p);
  const Matrix m = h.evaluate_matrix(0.0);
  // |20> has index 6, |11> has index 4.
  CHECK(m(6, 6).real() == doctest::Approx(40.0));
  CHECK(std::abs(m(4, 4)) < 1e-14);
}

TEST_CASE("transmon drive with complex amplitude splits into quadratures") {
  const ChainSpec chain(2, 3);
  TransmonParams p;
  p.J = 0.0;
  p.anharmonicity = 1.0;
  p.drive = {[](double) { return Complex(0.0, 2.0); }, [](double) { return Complex(0.0); }};
  const Matrix m = build_transmon_chain(chain, p).evaluate_matrix(0.0);
  const Ladder l = ladder(3);
  const Matrix expect =
      2.0 * (Complex(0, 1) * (l.lower - l.raise)).matrix();  // Im part times i(a - a^dag)
  const Matrix site1 = oracle::kron(expect, Matrix::Identity(3, 3));
  const Matrix anh = build_transmon_chain(chain, TransmonParams{0.0, 1.0, {}, {}}).evaluate_matrix(0.0);
  CHECK(oracle::max_abs(m - anh - site1) < 1e-14);
}

}  // TEST_SUITE
