#include "floqsim/propagation.hpp"

#include "floqsim/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace floqsim {

namespace {

constexpr double kTrajectoryNormTol = 1e-8;
// Beyond this ||H dt||_1 a diagonalisation is cheaper than the split series.
constexpr double kTaylorMaxNorm = 8.0;

// Rejects drift above tolerance, then removes the round-off that remains.
void check_norm(Vector& psi, double t) {
  if (!psi.allFinite()) {
    throw NumericalError("propagate: non-finite amplitudes at t = " + std::to_string(t));
  }
  const double drift = std::abs(psi.norm() - 1.0);
  if (drift > kTrajectoryNormTol) {
    throw NumericalError("propagate: norm drift " + std::to_string(drift) + " at t = " +
                         std::to_string(t));
  }
  psi /= psi.norm();
}

using Sparse = Eigen::SparseMatrix<Complex, Eigen::ColMajor>;

// H(t) on the union sparsity pattern of its parts. Each part keeps only its
// own non-zeros, as slots into the shared value array.
class CompiledHamiltonian {
 public:
  explicit CompiledHamiltonian(const TimeDependentHamiltonian& h) : ham_(h) {
    std::vector<const Matrix*> parts{&h.static_part().matrix()};
    for (const DriveTerm& term : h.terms()) parts.push_back(&term.op.matrix());
    const Index dim = h.chain().dim();
    Matrix mask = Matrix::Zero(dim, dim);
    for (const Matrix* m : parts) mask += m->cwiseAbs().cast<Complex>();
    pattern_ = mask.sparseView(0.0, 0.0);
    pattern_.makeCompressed();
    for (const Matrix* m : parts) {
      Part part;
      Index slot = 0;
      for (Index c = 0; c < pattern_.outerSize(); ++c) {
        for (Sparse::InnerIterator it(pattern_, c); it; ++it, ++slot) {
          const Complex v = (*m)(it.row(), c);
          if (v != Complex(0.0)) part.push_back({slot, v});
        }
      }
      parts_.push_back(std::move(part));
    }
  }

  // Fills the pattern with H(t); returns a bound on its induced 1-norm.
  double evaluate(double t) {
    Complex* out = pattern_.valuePtr();
    std::fill(out, out + pattern_.nonZeros(), Complex(0.0));
    for (const auto& [slot, v] : parts_[0]) out[slot] = v;
    for (std::size_t k = 1; k < parts_.size(); ++k) {
      const double c = ham_.terms()[k - 1].coefficient(t);
      if (c == 0.0) continue;
      for (const auto& [slot, v] : parts_[k]) out[slot] += c * v;
    }
    double norm = 0.0;
    for (Index c = 0; c < pattern_.outerSize(); ++c) {
      double col = 0.0;
      for (Sparse::InnerIterator it(pattern_, c); it; ++it) {
        col += std::abs(it.value().real()) + std::abs(it.value().imag());
      }
      norm = std::max(norm, col);
    }
    return norm;
  }

  const Sparse& matrix() const { return pattern_; }

 private:
  const TimeDependentHamiltonian& ham_;
  using Part = std::vector<std::pair<Index, Complex>>;

  Sparse pattern_;
  std::vector<Part> parts_;
};

// psi <- exp(-i dt h) psi by a Taylor series, split so that each piece has
// ||dt h||_1 <= 1 and summed until terms fall below round-off.
void taylor_step(const Sparse& h, double norm, double dt, Vector& psi, Vector& term,
                 Vector& scratch) {
  const int pieces = std::max(1, static_cast<int>(std::ceil(norm * std::abs(dt))));
  const double tau = dt / pieces;
  const Complex minus_i_tau(0.0, -tau);
  for (int p = 0; p < pieces; ++p) {
    term = psi;
    for (int k = 1; k < 40; ++k) {
      scratch.noalias() = h * term;
      term = scratch * (minus_i_tau / static_cast<double>(k));
      psi += term;
      if (term.cwiseAbs2().maxCoeff() < 1e-36) break;
    }
  }
}

struct Stepper {
  Stepper(const TimeDependentHamiltonian& ham, StepKernel k) : kernel(k), compiled(ham) {}

  StepKernel kernel;
  CompiledHamiltonian compiled;
  Matrix dense;
  Vector term;
  Vector scratch;
  Eigen::SelfAdjointEigenSolver<Matrix> solver;

  void step(double t_mid, double dt, Vector& psi) {
    const double norm = compiled.evaluate(t_mid);
    bool use_eigen = kernel == StepKernel::eigen;
    if (kernel == StepKernel::automatic) use_eigen = norm * std::abs(dt) > kTaylorMaxNorm;
    if (use_eigen) {
      dense = Matrix(compiled.matrix());
      detail::evolve_in_place(dense, dt, psi, solver);
    } else {
      taylor_step(compiled.matrix(), norm, dt, psi, term, scratch);
    }
  }
};

// Breakpoints of the step grid: t0, every whole period inside, t1.
struct Segment {
  double start;
  double end;
  int steps;
  bool end_is_stroboscopic;
};

std::vector<Segment> plan_segments(const TimeDependentHamiltonian& h, double t0, double t1,
                                   const PropagationConfig& cfg, bool& start_is_stroboscopic) {
  std::vector<Segment> segs;
  start_is_stroboscopic = false;
  if (t1 == t0) return segs;
  if (const auto period = h.period()) {
    const double T = *period;
    const double eps = 1e-9 * T;
    start_is_stroboscopic = std::abs(t0 / T - std::round(t0 / T)) * T < eps;
    double a = t0;
    long n = static_cast<long>(std::floor(t0 / T + 1e-9)) + 1;
    while (a < t1 - eps) {
      double b = n * T;
      bool strob = true;
      if (b > t1 - eps) {
        strob = std::abs(b - t1) < eps;
        b = t1;
      }
      if (b - a > eps || strob) {
        const int steps = std::max(
            1, static_cast<int>(std::ceil((b - a) / T * cfg.substeps_per_period - 1e-9)));
        segs.push_back({a, b, steps, strob});
      }
      a = b;
      ++n;
    }
  } else {
    segs.push_back({t0, t1, cfg.steps_total, false});
  }
  return segs;
}

}  // namespace

void PropagationConfig::validate() const {
  if (substeps_per_period < 16) throw DomainError("substeps_per_period must be at least 16");
  if (steps_total < 1) throw DomainError("steps_total must be positive");
  if (record_stride < 0) throw DomainError("record_stride must be non-negative");
}

PropagationConfig PropagationConfig::refined() const {
  PropagationConfig r = *this;
  r.substeps_per_period *= 2;
  r.steps_total *= 2;
  r.record_stride *= 2;
  return r;
}

Trajectory propagate(const TimeDependentHamiltonian& h, const StateVector& psi0, double t0,
                     double t1, const PropagationConfig& cfg) {
  cfg.validate();
  if (psi0.dim() != h.chain().dim()) throw DimensionError("propagate: state dimension mismatch");
  if (!(t1 >= t0)) throw DomainError("propagate: t1 must not precede t0");

  bool start_strob = false;
  const std::vector<Segment> segs = plan_segments(h, t0, t1, cfg, start_strob);

  Trajectory traj;
  traj.times.push_back(t0);
  traj.states.push_back(psi0);
  if (start_strob) traj.stroboscopic_indices.push_back(0);

  Stepper stepper(h, cfg.kernel);
  Vector psi = psi0.amplitudes();
  for (const Segment& seg : segs) {
    const double dt = (seg.end - seg.start) / seg.steps;
    for (int k = 0; k < seg.steps; ++k) {
      stepper.step(seg.start + (k + 0.5) * dt, dt, psi);
      ++traj.steps;
      if (cfg.record_stride > 0 && traj.steps % cfg.record_stride == 0 && k + 1 < seg.steps) {
        const double t = seg.start + (k + 1) * dt;
        check_norm(psi, t);
        traj.times.push_back(t);
        traj.states.emplace_back(psi);
      }
    }
    check_norm(psi, seg.end);
    traj.times.push_back(seg.end);
    traj.states.emplace_back(psi);
    if (seg.end_is_stroboscopic) traj.stroboscopic_indices.push_back(traj.times.size() - 1);
  }
  return traj;
}

StateVector propagate_state(const TimeDependentHamiltonian& h, const StateVector& psi0, double t0,
                            double t1, const PropagationConfig& cfg) {
  PropagationConfig quiet = cfg;
  quiet.record_stride = 0;
  return propagate(h, psi0, t0, t1, quiet).final_state();
}

std::vector<double> stroboscopic_fidelities(const Trajectory& traj, const Operator& target_h,
                                            const StateVector& psi0) {
  if (traj.stroboscopic_indices.empty()) {
    throw DomainError("stroboscopic_fidelities: trajectory has no stroboscopic samples");
  }
  std::vector<double> out;
  out.reserve(traj.stroboscopic_indices.size());
  for (std::size_t idx : traj.stroboscopic_indices) {
    const double t = traj.times[idx];
    const StateVector ideal = apply(expm_hermitian(target_h, t - traj.times.front()), psi0);
    out.push_back(fidelity(traj.states[idx], ideal));
  }
  return out;
}

double magnetization(const StateVector& psi, const ChainSpec& chain, Axis axis) {
  if (chain.local_dim != 2) throw DimensionError("magnetization: needs a qubit chain");
  if (psi.dim() != chain.dim()) throw DimensionError("magnetization: dimension mismatch");
  return expectation(site_sum(pauli(axis), Sublattice::all, chain), psi) / chain.n_sites;
}

GroundState ground_state(const Operator& h) {
  const Operator herm = h.is_hermitian() ? h : Operator::hermitian(h.matrix());
  Eigen::SelfAdjointEigenSolver<Matrix> solver(herm.matrix());
  if (solver.info() != Eigen::Success) throw NumericalError("ground_state: eigensolver failed");
  Vector v = solver.eigenvectors().col(0);
  for (Index k = 0; k < v.size(); ++k) {
    if (std::abs(v[k]) > 1e-12) {
      v *= std::conj(v[k]) / std::abs(v[k]);
      break;
    }
  }
  const Eigen::VectorXd& w = solver.eigenvalues();
  const double gap = w.size() > 1 ? w[1] - w[0] : std::numeric_limits<double>::infinity();
  return {w[0], StateVector::normalized(v), gap, gap < 1e-10};
}

StateVector ghz_target(int n_sites) {
  if (n_sites < 2) throw DomainError("ghz_target: needs at least two sites");
  const double r = 1.0 / std::sqrt(2.0);
  // Basis order per site is (|up>, |down>).
  Vector plus(2), minus(2);
  plus << r, r;
  minus << -r, r;
  const std::vector<Vector> p(n_sites, plus), m(n_sites, minus);
  const Vector sum = StateVector::product(p).amplitudes() + StateVector::product(m).amplitudes();
  return StateVector::normalized(sum);
}

StateVector all_down(const ChainSpec& chain) {
  if (chain.local_dim == 2) return StateVector::basis(chain.dim(), chain.dim() - 1);
  return StateVector::basis(chain.dim(), 0);
}

namespace {

struct SingleRun {
  std::vector<double> times;
  std::vector<double> fidelity;
  std::vector<std::array<double, 3>> magnet;
  double final_fidelity = 0.0;
};

SingleRun single_anneal(const TimeDependentHamiltonian& h, const StateVector& psi0,
                        const StateVector& target, double t_final, const AnnealOptions& opts,
                        bool record) {
  PropagationConfig cfg = opts.propagation;
  if (!record) cfg.record_stride = 0;
  const Trajectory traj = propagate(h, psi0, 0.0, t_final, cfg);
  const bool qubits = h.chain().local_dim == 2;
  const bool unframe = opts.remove_frame && h.has_frame();

  auto readout = [&](std::size_t i) {
    if (!unframe) return traj.states[i];
    return apply(h.frame_unitary(traj.times[i]).adjoint(), traj.states[i]);
  };

  SingleRun run;
  const std::size_t first = record ? 0 : traj.states.size() - 1;
  for (std::size_t i = first; i < traj.states.size(); ++i) {
    const StateVector s = readout(i);
    run.times.push_back(traj.times[i]);
    run.fidelity.push_back(fidelity(s, target));
    if (qubits) {
      run.magnet.push_back({magnetization(s, h.chain(), Axis::x),
                            magnetization(s, h.chain(), Axis::y),
                            magnetization(s, h.chain(), Axis::z)});
    }
  }
  run.final_fidelity = run.fidelity.back();
  return run;
}

std::string kernel_name(StepKernel k) {
  switch (k) {
    case StepKernel::automatic: return "automatic";
    case StepKernel::taylor: return "taylor";
    case StepKernel::eigen: return "eigen";
  }
  return "?";
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

RunSummary run_anneal(const TimeDependentHamiltonian& h, const StateVector& psi0,
                      const StateVector& target, double t_final, const AnnealOptions& opts) {
  if (target.dim() != psi0.dim()) throw DimensionError("run_anneal: target dimension mismatch");
  if (!(t_final > 0.0)) throw DomainError("run_anneal: t_final must be positive");

  AnnealOptions cur = opts;
  for (int attempt = 0;; ++attempt) {
    SingleRun run = single_anneal(h, psi0, target, t_final, cur, true);
    RunSummary out;
    out.times = std::move(run.times);
    out.fidelity_series = std::move(run.fidelity);
    out.magnetization = std::move(run.magnet);
    out.final_fidelity = run.final_fidelity;

    const bool periodic = h.period().has_value();
    const int m = periodic ? cur.propagation.substeps_per_period : cur.propagation.steps_total;
    out.metadata["scheme"] = "midpoint-exponential";
    out.metadata["kernel"] = kernel_name(cur.propagation.kernel);
    out.metadata[periodic ? "substeps_per_period" : "steps_total"] = std::to_string(m);
    out.metadata["t_final"] = fmt(t_final);
    out.metadata["frame_removed"] = cur.remove_frame && h.has_frame() ? "true" : "false";
    out.metadata["refinements"] = std::to_string(attempt);
    if (periodic) out.metadata["period"] = fmt(*h.period());
    if (!cur.certify) return out;

    AnnealOptions fine = cur;
    fine.propagation = cur.propagation.refined();
    const SingleRun check = single_anneal(h, psi0, target, t_final, fine, false);
    ConvergenceCertificate cert;
    cert.substeps = m;
    cert.refined_substeps = 2 * m;
    cert.delta = std::abs(check.final_fidelity - run.final_fidelity);
    cert.tolerance = cur.tolerance;
    cert.passed = cert.delta <= cur.tolerance;
    out.certificate = cert;
    if (cert.passed || attempt >= cur.max_refinements) {
      if (!cert.passed && cur.throw_on_failure) {
        throw ConvergenceError("run_anneal: |F(M) - F(2M)| = " + fmt(cert.delta) +
                               " exceeds " + fmt(cur.tolerance));
      }
      return out;
    }
    cur.propagation = fine.propagation;
  }
}

}  // namespace floqsim
