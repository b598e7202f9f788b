#include "floqsim/digital.hpp"

#include "floqsim/error.hpp"
#include "floqsim/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace floqsim {

std::string layer_name(Layer l) {
  switch (l) {
    case Layer::XY: return "XY";
    case Layer::XZ: return "XZ";
    case Layer::YZ: return "YZ";
    case Layer::Z: return "Z";
    case Layer::RX: return "RX";
    case Layer::RX_DAG: return "RX_DAG";
  }
  return "?";
}

Layer parse_layer(const std::string& name) {
  for (Layer l : {Layer::XY, Layer::XZ, Layer::YZ, Layer::Z, Layer::RX, Layer::RX_DAG}) {
    if (layer_name(l) == name) return l;
  }
  throw DomainError("unknown layer tag '" + name + "'");
}

TrotterPlan TrotterPlan::ising(int n_steps, double t_total, IsingCircuit circuit) {
  TrotterPlan p;
  p.n_steps = n_steps;
  p.dt = t_total / n_steps;
  p.layer_order = {Layer::XY, Layer::RX, Layer::XY, Layer::RX_DAG, Layer::Z};
  p.alphas = {1.0, 0.0, 0.0};
  p.circuit = circuit;
  p.validate();
  return p;
}

TrotterPlan TrotterPlan::xyz(int n_steps, double t_total, std::vector<Layer> order,
                             TrotterAlphas alphas) {
  TrotterPlan p;
  p.n_steps = n_steps;
  p.dt = t_total / n_steps;
  p.layer_order = std::move(order);
  p.alphas = alphas;
  p.validate();
  return p;
}

bool TrotterPlan::is_ising() const {
  return std::find(layer_order.begin(), layer_order.end(), Layer::RX) != layer_order.end();
}

void TrotterPlan::validate() const {
  if (n_steps < 1) throw DomainError("TrotterPlan: n_steps must be at least 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw DomainError("TrotterPlan: dt must be positive");
  if (!std::isfinite(alphas.xy) || !std::isfinite(alphas.xz) || !std::isfinite(alphas.yz)) {
    throw DomainError("TrotterPlan: alphas must be finite");
  }
  if (is_ising()) {
    const std::vector<Layer> expected{Layer::XY, Layer::RX, Layer::XY, Layer::RX_DAG, Layer::Z};
    if (layer_order != expected) {
      throw DomainError("TrotterPlan: Ising plan must be XY, RX, XY, RX_DAG, Z");
    }
    return;
  }
  for (Layer l : layer_order) {
    if (l == Layer::RX_DAG) throw DomainError("TrotterPlan: RX_DAG without RX");
  }
}

int ErrorModel::gates_per_step(int n_sites) {
  if (n_sites < 2) throw DomainError("gates_per_step: needs at least two sites");
  return 5 * n_sites - 4;
}

double ErrorModel::t_gate(double anharmonicity) const {
  if (!(anharmonicity > 0.0)) throw DomainError("t_gate: anharmonicity must be positive");
  return c_gate / anharmonicity;
}

double ErrorModel::trotter_step_time(int n_sites, double t_gate) {
  if (n_sites < 2) throw DomainError("trotter_step_time: needs at least two sites");
  return (2.0 * (n_sites - 1) + 3.0) * t_gate;
}

void ErrorModel::validate() const {
  if (!(eps >= 0.0 && eps < 1.0)) throw DomainError("ErrorModel: eps must lie in [0, 1)");
  if (!(c_gate > 0.0)) throw DomainError("ErrorModel: c_gate must be positive");
}

namespace {

void require_qubit_chain(const ChainSpec& chain) {
  if (chain.local_dim != 2) throw DimensionError("digital circuits need a qubit chain");
  if (chain.n_sites < 2) throw DomainError("digital circuits need at least two sites");
}

// (1/2)(XX + YY) on bonds starting at odd (1), even (2) or all (0) sites.
Matrix half_xy(const ChainSpec& chain, int first_site) {
  const Operator x = pauli(Axis::x);
  const Operator y = pauli(Axis::y);
  return 0.5 * (bond_sum(x, x, chain, first_site).matrix() +
                bond_sum(y, y, chain, first_site).matrix());
}

Matrix rotation(const ChainSpec& chain, Axis axis, Sublattice sub, double angle) {
  return detail::expm_hermitian_matrix(site_sum(pauli(axis), sub, chain).matrix(), angle);
}

struct IsingPieces {
  Matrix xy_odd, xy_even, xy_all, z_sum, rx;
};

IsingPieces ising_pieces(const ChainSpec& chain) {
  return {half_xy(chain, 1), half_xy(chain, 2), half_xy(chain, 0),
          site_sum(pauli(Axis::z), Sublattice::all, chain).matrix(),
          rotation(chain, Axis::x, Sublattice::even, std::numbers::pi / 2)};
}

Matrix ising_step(const IsingPieces& p, double J, double hz, double dt, IsingCircuit circuit) {
  const Matrix rx_dag = p.rx.adjoint();
  // Time order XY, RX, XY, RX_DAG: operator R^dag U R U.
  auto group = [&](const Matrix& xy) {
    const Matrix u = detail::expm_hermitian_matrix(J * xy, dt);
    return Matrix(rx_dag * u * p.rx * u);
  };
  Matrix step = circuit == IsingCircuit::pair_groups ? Matrix(group(p.xy_even) * group(p.xy_odd))
                                                     : group(p.xy_all);
  return detail::expm_hermitian_matrix(hz * p.z_sum, dt) * step;
}

struct XYZPieces {
  Matrix xy, z_sum, rx, ry;
};

XYZPieces xyz_pieces(const ChainSpec& chain) {
  const Operator x = pauli(Axis::x);
  const Operator y = pauli(Axis::y);
  return {bond_sum(x, x, chain).matrix() + bond_sum(y, y, chain).matrix(),
          site_sum(pauli(Axis::z), Sublattice::all, chain).matrix(),
          rotation(chain, Axis::x, Sublattice::all, std::numbers::pi / 4),
          rotation(chain, Axis::y, Sublattice::all, std::numbers::pi / 4)};
}

Matrix xyz_step(const XYZPieces& p, double J, const TrotterAlphas& a, double hz, double dt,
                const std::vector<Layer>& order) {
  const Index dim = p.xy.rows();
  Matrix step = Matrix::Identity(dim, dim);
  for (Layer l : order) {
    Matrix u;
    switch (l) {
      case Layer::XY:
        u = detail::expm_hermitian_matrix(a.xy * J * p.xy, dt);
        break;
      case Layer::XZ:
        // R_x(pi/2) on every site maps YY to ZZ.
        u = p.rx.adjoint() * detail::expm_hermitian_matrix(a.xz * J * p.xy, dt) * p.rx;
        break;
      case Layer::YZ:
        u = p.ry.adjoint() * detail::expm_hermitian_matrix(a.yz * J * p.xy, dt) * p.ry;
        break;
      case Layer::Z:
        u = detail::expm_hermitian_matrix(hz * p.z_sum, dt);
        break;
      case Layer::RX:
      case Layer::RX_DAG:
        throw DomainError("trotter_step_xyz: rotation tags belong to the Ising step");
    }
    step = u * step;
  }
  return step;
}

double schedule_time(int k, double dt, ScheduleSampling sampling) {
  return sampling == ScheduleSampling::midpoint ? (k + 0.5) * dt : (k + 1.0) * dt;
}

}  // namespace

Operator trotter_step_ising(const ChainSpec& chain, double J, double hz_effective, double dt,
                            IsingCircuit circuit) {
  require_qubit_chain(chain);
  return Operator(ising_step(ising_pieces(chain), J, hz_effective, dt, circuit));
}

Operator trotter_step_xyz(const ChainSpec& chain, double J, const TrotterAlphas& alphas,
                          double hz_effective, double dt, const std::vector<Layer>& layer_order) {
  require_qubit_chain(chain);
  return Operator(xyz_step(xyz_pieces(chain), J, alphas, hz_effective, dt, layer_order));
}

GroundState xyz_plan_target(const ChainSpec& chain, double J, const TrotterAlphas& a) {
  return ground_state(
      build_target_xyz(chain, J * (a.xy + a.xz), J * (a.xy + a.yz), J * (a.xz + a.yz), 0.0));
}

namespace {

template <class Visit>
void run_digital(const ChainSpec& chain, const TrotterPlan& plan, const AnnealSchedule& schedule,
                 double hz, double J, ScheduleSampling sampling, Visit&& visit) {
  require_qubit_chain(chain);
  plan.validate();
  schedule.validate();
  Vector psi = all_down(chain).amplitudes();
  if (plan.is_ising()) {
    const IsingPieces pieces = ising_pieces(chain);
    for (int k = 0; k < plan.n_steps; ++k) {
      const double t = schedule_time(k, plan.dt, sampling);
      psi = ising_step(pieces, schedule.coupling(t) * J, schedule.field(t) * hz, plan.dt,
                       plan.circuit) *
            psi;
      visit(k, psi);
    }
  } else {
    const XYZPieces pieces = xyz_pieces(chain);
    for (int k = 0; k < plan.n_steps; ++k) {
      const double t = schedule_time(k, plan.dt, sampling);
      psi = xyz_step(pieces, schedule.coupling(t) * J, plan.alphas, schedule.field(t) * hz,
                     plan.dt, plan.layer_order) *
            psi;
      visit(k, psi);
    }
  }
  if (std::abs(psi.norm() - 1.0) > 1e-8) throw NumericalError("digital_anneal: norm drift");
}

StateVector digital_target(const ChainSpec& chain, const TrotterPlan& plan, double J) {
  if (plan.is_ising()) return ghz_target(chain.n_sites);
  const GroundState gs = xyz_plan_target(chain, J, plan.alphas);
  if (gs.degenerate) throw NumericalError("digital_anneal: XYZ target is degenerate");
  return gs.state;
}

}  // namespace

RunSummary digital_anneal(const ChainSpec& chain, const TrotterPlan& plan,
                          const AnnealSchedule& schedule, double hz, double J,
                          const DigitalOptions& opts) {
  const StateVector target = digital_target(chain, plan, J);
  RunSummary out;
  if (opts.record) {
    out.times.push_back(0.0);
    out.fidelity_series.push_back(fidelity(all_down(chain), target));
  }
  run_digital(chain, plan, schedule, hz, J, opts.sampling, [&](int k, const Vector& psi) {
    if (opts.record || k + 1 == plan.n_steps) {
      out.times.push_back((k + 1) * plan.dt);
      out.fidelity_series.push_back(fidelity(StateVector::normalized(psi), target));
    }
  });
  out.final_fidelity = out.fidelity_series.back();
  std::string order;
  for (Layer l : plan.layer_order) order += (order.empty() ? "" : ",") + layer_name(l);
  out.metadata["layer_order"] = order;
  out.metadata["n_trotter"] = std::to_string(plan.n_steps);
  out.metadata["sampling"] = opts.sampling == ScheduleSampling::midpoint ? "midpoint" : "endpoint";
  if (plan.is_ising()) {
    out.metadata["circuit"] =
        plan.circuit == IsingCircuit::pair_groups ? "pair_groups" : "all_bonds";
  }
  return out;
}

StateVector digital_anneal_state(const ChainSpec& chain, const TrotterPlan& plan,
                                 const AnnealSchedule& schedule, double hz, double J,
                                 ScheduleSampling sampling) {
  Vector last;
  run_digital(chain, plan, schedule, hz, J, sampling, [&](int k, const Vector& psi) {
    if (k + 1 == plan.n_steps) last = psi;
  });
  return StateVector(last);
}

// Fidelities closer than this count as a tie.
constexpr double kOrderTieTol = 1e-12;

OrderSearchResult optimize_step_order(const ChainSpec& chain, double J,
                                      const TrotterAlphas& alphas, const AnnealSchedule& schedule,
                                      double hz, int n_steps, int workers) {
  std::vector<Layer> base{Layer::XY, Layer::XZ, Layer::YZ, Layer::Z};
  std::sort(base.begin(), base.end(),
            [](Layer a, Layer b) { return layer_name(a) < layer_name(b); });
  std::vector<std::vector<Layer>> orders;
  do {
    orders.push_back(base);
  } while (std::next_permutation(base.begin(), base.end(), [](Layer a, Layer b) {
    return layer_name(a) < layer_name(b);
  }));

  std::vector<double> fid(orders.size());
  DigitalOptions quiet;
  quiet.record = false;
  parallel_for(orders.size(), workers, [&](std::size_t i) {
    const TrotterPlan plan = TrotterPlan::xyz(n_steps, schedule.t_final, orders[i], alphas);
    fid[i] = digital_anneal(chain, plan, schedule, hz, J, quiet).final_fidelity;
  });

  OrderSearchResult out;
  std::size_t best = 0;
  for (std::size_t i = 0; i < orders.size(); ++i) {
    out.all.emplace_back(orders[i], fid[i]);
    if (fid[i] > fid[best] + kOrderTieTol) best = i;  // earlier (lexicographic) order wins ties
  }
  out.best_order = orders[best];
  out.best_fidelity = fid[best];
  return out;
}

double total_fidelity(const ErrorModel& em, int n_sites, int n_steps, double eps_dig) {
  em.validate();
  if (n_steps < 0) throw DomainError("total_fidelity: n_steps must be non-negative");
  if (!(eps_dig >= 0.0 && eps_dig <= 1.0)) {
    throw DomainError("total_fidelity: eps_dig must lie in [0, 1]");
  }
  const double eps_step = ErrorModel::gates_per_step(n_sites) * em.eps;
  if (eps_step >= 1.0) return 0.0;
  return std::pow(1.0 - eps_step, n_steps) * (1.0 - eps_dig);
}

TrotterOptimum optimize_n_trotter(const ErrorModel& em, int n_sites,
                                  const std::map<int, double>& eps_dig_table,
                                  std::optional<int> max_steps) {
  if (eps_dig_table.empty()) throw DomainError("optimize_n_trotter: empty table");
  TrotterOptimum best;
  for (const auto& [n, eps_dig] : eps_dig_table) {
    if (max_steps && n > *max_steps) continue;
    const double inf = 1.0 - total_fidelity(em, n_sites, n, eps_dig);
    if (!best.feasible || inf < best.infidelity) best = {true, n, inf};
  }
  return best;
}

int max_trotter_steps(const ErrorModel& em, int n_sites, double anharmonicity, double t_final) {
  const double t_tr = ErrorModel::trotter_step_time(n_sites, em.t_gate(anharmonicity));
  return static_cast<int>(std::floor(t_final / t_tr + 1e-12));
}

}  // namespace floqsim
