#include "oracles.hpp"

#include "floqsim/error.hpp"
#include "floqsim/floquet.hpp"
#include "floqsim/propagation.hpp"

#include <doctest.h>

#include <random>

using namespace floqsim;

namespace {

// H(t) run backwards: exp(+i dt H(t1 - t_mid)) steps undo the forward ones.
TimeDependentHamiltonian reversed(const TimeDependentHamiltonian& h, double t1) {
  TimeDependentHamiltonian r(h.chain(), -1.0 * h.static_part());
  for (const DriveTerm& term : h.terms()) {
    const Coefficient c = term.coefficient;
    r.add_term([c, t1](double t) { return c(t1 - t); }, -1.0 * term.op, term.label);
  }
  return r;
}

StateVector random_state(Index dim, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Vector v(dim);
  for (Index i = 0; i < dim; ++i) v[i] = Complex(g(rng), g(rng));
  return StateVector::normalized(v);
}

}  // namespace

TEST_SUITE("propagation") {

TEST_CASE("static Hamiltonian: exact evolution, norm and energy") {
  std::mt19937 rng(3);
  const ChainSpec chain(4, 2);
  const Operator h0 = build_target_ising(chain, -1.0, 0.7);
  const TimeDependentHamiltonian h(chain, h0);
  const StateVector psi0 = random_state(chain.dim(), rng);
  for (StepKernel k : {StepKernel::taylor, StepKernel::eigen, StepKernel::automatic}) {
    PropagationConfig pc;
    pc.steps_total = 50;
    pc.record_stride = 5;
    pc.kernel = k;
    const Trajectory traj = propagate(h, psi0, 0.0, 3.0, pc);
    const Matrix exact = oracle::expm(h0.matrix(), 3.0);
    CHECK((traj.final_state().amplitudes() - exact * psi0.amplitudes()).norm() < 1e-11);
    const double e0 = expectation(h0, psi0);
    for (const StateVector& s : traj.states) {
      CHECK(std::abs(s.amplitudes().norm() - 1.0) < 1e-12);
      CHECK(std::abs(expectation(h0, s) - e0) < 1e-10);
    }
    CHECK(traj.times.size() == 11);
  }
}

TEST_CASE("backward propagation returns to the initial state") {
  std::mt19937 rng(4);
  const ChainSpec chain(4, 2);
  const TimeDependentHamiltonian h = build_ising_anneal(chain, -1.0, 1.0, AnnealSchedule{6.0, true});
  const StateVector psi0 = random_state(chain.dim(), rng);
  PropagationConfig pc;
  pc.steps_total = 300;
  const StateVector fwd = propagate_state(h, psi0, 0.0, 6.0, pc);
  const StateVector back = propagate_state(reversed(h, 6.0), fwd, 0.0, 6.0, pc);
  CHECK((back.amplitudes() - psi0.amplitudes()).norm() < 1e-10);
}

TEST_CASE("midpoint stepping is second order") {
  const ChainSpec chain(3, 2);
  const TimeDependentHamiltonian h = build_ising_anneal(chain, -1.0, 1.0, AnnealSchedule{4.0, true});
  const StateVector psi0 = all_down(chain);
  PropagationConfig pc;
  pc.steps_total = 4096;
  const Vector ref = propagate_state(h, psi0, 0.0, 4.0, pc).amplitudes();
  double prev = 0.0;
  for (int m : {32, 64, 128}) {
    pc.steps_total = m;
    const double err = (propagate_state(h, psi0, 0.0, 4.0, pc).amplitudes() - ref).norm();
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.1));
    prev = err;
  }
}

TEST_CASE("stroboscopic samples land on whole periods") {
  const ChainSpec chain(2, 2);
  const IsingDriveParams p = IsingDriveParams::from_rotation_angle(-1.0, 1.0, 2.0, 30.0);
  const TimeDependentHamiltonian h = build_ising_driven(chain, p);
  PropagationConfig pc;
  pc.substeps_per_period = 32;
  const double T = p.period();
  const Trajectory traj = propagate(h, all_down(chain), 0.0, 3.5 * T, pc);
  REQUIRE(traj.stroboscopic_indices.size() == 4);
  for (std::size_t k = 0; k < 4; ++k) {
    CHECK(traj.times[traj.stroboscopic_indices[k]] == doctest::Approx(k * T));
  }
  CHECK(traj.times.back() == doctest::Approx(3.5 * T));
  CHECK(traj.steps == 3 * 32 + 16);
}

TEST_CASE("undriven target: stroboscopic fidelity is one") {
  const ChainSpec chain(3, 2);
  DriveConfig cfg;
  cfg.omega = 10.0;
  const TimeDependentHamiltonian h = build_driven_chain(chain, 1.0, cfg);
  const StateVector psi0 = StateVector::basis(chain.dim(), 3);
  PropagationConfig pc;
  pc.substeps_per_period = 64;
  const Trajectory traj = propagate(h, psi0, 0.0, 5 * cfg.period(), pc);
  for (double f : stroboscopic_fidelities(traj, build_xy_chain(chain, 1.0), psi0)) {
    CHECK(f == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("ground state matches brute-force diagonalisation") {
  const ChainSpec chain(4, 2);
  const Operator h = build_target_xyz(chain, -1.0, -2.0 / 3.0, -1.0 / 3.0, 0.2);
  const GroundState gs = ground_state(h);
  const oracle::Spectrum sp = oracle::diagonalize(h.matrix());
  CHECK(gs.energy == doctest::Approx(sp.values[0]).epsilon(1e-12));
  CHECK(gs.gap == doctest::Approx(sp.values[1] - sp.values[0]).epsilon(1e-10));
  CHECK(std::norm(sp.vectors.col(0).dot(gs.state.amplitudes())) == doctest::Approx(1.0));
}

TEST_CASE("GHZ target is the symmetric ground state of the ferromagnetic XX chain") {
  for (int n = 2; n <= 6; ++n) {
    const ChainSpec chain(n, 2);
    const StateVector g = ghz_target(n);
    const Operator xx = build_target_ising(chain, -1.0, 0.0);
    CHECK(expectation(xx, g) == doctest::Approx(-(n - 1)));
    // Same Z parity as |down>^N, which the anneal conserves.
    Operator pz = Operator::identity(1);
    for (int j = 0; j < n; ++j) pz = kron(pz, pauli(Axis::z));
    CHECK(expectation(pz, g) == doctest::Approx(n % 2 == 0 ? 1.0 : -1.0));
    CHECK(expectation(pz, all_down(chain)) == doctest::Approx(n % 2 == 0 ? 1.0 : -1.0));
  }
}

TEST_CASE("magnetisation per site") {
  const ChainSpec chain(3, 2);
  CHECK(magnetization(all_down(chain), chain, Axis::z) == doctest::Approx(-1.0));
  CHECK(magnetization(ghz_target(3), chain, Axis::z) == doctest::Approx(0.0));
  CHECK_THROWS_AS(magnetization(all_down(ChainSpec(2, 3)), ChainSpec(2, 3), Axis::z), DimensionError);
}

TEST_CASE("anneal with certification records a passing certificate") {
  const ChainSpec chain(3, 2);
  const TimeDependentHamiltonian h = build_ising_anneal(chain, -1.0, 1.0, AnnealSchedule{8.0, true});
  AnnealOptions o;
  o.propagation.steps_total = 2000;
  const RunSummary r = run_anneal(h, all_down(chain), ghz_target(3), 8.0, o);
  REQUIRE(r.certificate);
  CHECK(r.certificate->passed);
  CHECK(r.certificate->refined_substeps == 4000);
  CHECK(r.fidelity_series.size() == r.times.size());
  CHECK(r.final_fidelity > 0.9);
}

TEST_CASE("refinement doubles the step count until the check passes") {
  const ChainSpec chain(3, 2);
  const TimeDependentHamiltonian h = build_ising_anneal(chain, -1.0, 1.0, AnnealSchedule{8.0, true});
  AnnealOptions o;
  o.propagation.steps_total = 50;
  o.tolerance = 1e-6;
  const RunSummary bare = run_anneal(h, all_down(chain), ghz_target(3), 8.0, o);
  CHECK_FALSE(bare.certificate->passed);
  o.max_refinements = 8;
  const RunSummary refined = run_anneal(h, all_down(chain), ghz_target(3), 8.0, o);
  CHECK(refined.certificate->passed);
  CHECK(refined.certificate->substeps > 50);
  o.max_refinements = 0;
  o.throw_on_failure = true;
  CHECK_THROWS_AS(run_anneal(h, all_down(chain), ghz_target(3), 8.0, o), ConvergenceError);
}

TEST_CASE("propagation rejects bad input") {
  const ChainSpec chain(2, 2);
  const TimeDependentHamiltonian h(chain, build_xy_chain(chain, 1.0));
  PropagationConfig pc;
  CHECK_THROWS_AS(propagate(h, all_down(chain), 1.0, 0.0, pc), DomainError);
  CHECK_THROWS_AS(propagate(h, all_down(ChainSpec(3, 2)), 0.0, 1.0, pc), DimensionError);
  pc.steps_total = 0;
  CHECK_THROWS_AS(propagate(h, all_down(chain), 0.0, 1.0, pc), DomainError);
}

}  // TEST_SUITE
