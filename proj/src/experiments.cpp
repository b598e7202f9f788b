#include "floqsim/experiments.hpp"

#include "floqsim/error.hpp"
#include "floqsim/floquet.hpp"
#include "floqsim/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <map>
#include <numbers>

namespace floqsim {

using json = nlohmann::ordered_json;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string cell_text(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) {
    if (std::isnan(*d)) return "";
    return format_real(*d);
  }
  if (const long long* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

double infidelity(const RunSummary& r) { return 1.0 - r.final_fidelity; }

AnnealOptions anneal_options(int substeps, int steps_total, double tolerance,
                             int max_refinements) {
  AnnealOptions o;
  o.max_refinements = max_refinements;
  o.propagation.substeps_per_period = substeps;
  o.propagation.steps_total = steps_total;
  o.tolerance = tolerance;
  return o;
}

double ising_chi(const ExperimentConfig& cfg) {
  const auto amp = cfg.get_real_or_auto("drive_amplitude");
  if (!amp) return calibrate_ising_chi();
  return cfg.get_text("amplitude_convention") == "main_text" ? 2.0 * *amp : *amp;
}

double xyz_chi(const ExperimentConfig& cfg) {
  const auto amp = cfg.get_real_or_auto("drive_amplitude");
  if (!amp) return calibrate_xyz_chi();
  return cfg.get_text("amplitude_convention") == "main_text" ? 2.0 * *amp : *amp;
}

IsingCircuit circuit_of(const ExperimentConfig& cfg) {
  return cfg.get_text("circuit") == "all_bonds" ? IsingCircuit::all_bonds
                                                : IsingCircuit::pair_groups;
}

ScheduleSampling sampling_of(const ExperimentConfig& cfg) {
  return cfg.get_text("sampling") == "endpoint" ? ScheduleSampling::endpoint
                                                : ScheduleSampling::midpoint;
}

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError(key, what);
}

IsingAnnealSetup ising_setup(const ExperimentConfig& cfg, int n_sites, double omega) {
  IsingAnnealSetup s;
  s.n_sites = n_sites;
  s.J = cfg.get_real("J");
  s.hz = cfg.get_real("hz");
  s.t_final = cfg.get_real("t_final");
  s.omega = omega;
  s.chi = ising_chi(cfg);
  s.ramp_coupling = cfg.get_bool("ramp_coupling");
  s.substeps = cfg.get_int("substeps");
  s.tolerance = cfg.get_real("tolerance");
  s.max_refinements = cfg.get_int("max_refinements");
  require(s.max_refinements >= 0, "max_refinements", "must be non-negative");
  require(s.t_final > 0.0, "t_final", "must be positive");
  require(s.substeps >= 16, "substeps", "must be at least 16");
  require(n_sites >= 2 && n_sites <= 6, "n_sites", "must lie in 2..6");
  return s;
}

IsingAnnealSetup ising_setup_undriven(const ExperimentConfig& cfg, int n_sites) {
  IsingAnnealSetup s;
  s.n_sites = n_sites;
  s.J = cfg.get_real("J");
  s.hz = cfg.get_real("hz");
  s.t_final = cfg.get_real("t_final");
  s.ramp_coupling = cfg.get_bool("ramp_coupling");
  s.tolerance = cfg.get_real("tolerance");
  s.max_refinements = cfg.get_int("max_refinements");
  require(s.max_refinements >= 0, "max_refinements", "must be non-negative");
  require(s.t_final > 0.0, "t_final", "must be positive");
  require(n_sites >= 2 && n_sites <= 6, "n_sites", "must lie in 2..6");
  return s;
}

CsvTable series_table(const std::string& name, const RunSummary& r) {
  CsvTable t{name, name + "/1", {"t", "fidelity", "infidelity"}, {}};
  const bool mag = !r.magnetization.empty();
  if (mag) t.columns.insert(t.columns.end(), {"m_x", "m_y", "m_z"});
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    std::vector<Cell> row{r.times[i], r.fidelity_series[i], 1.0 - r.fidelity_series[i]};
    if (mag) {
      row.insert(row.end(), {r.magnetization[i][0], r.magnetization[i][1],
                             r.magnetization[i][2]});
    }
    t.add_row(row);
  }
  return t;
}

// --- dynamics ------------------------------------------------------------

ResultRecord run_dynamics(const ExperimentConfig& cfg) {
  const int n = cfg.get_int("n_sites");
  require(n >= 2 && n <= 6, "n_sites", "must lie in 2..6");
  const int periods = cfg.get_int("periods");
  require(periods >= 1, "periods", "must be positive");
  const int n_trotter = cfg.get_int("n_trotter");
  require(n_trotter >= 1, "n_trotter", "must be positive");
  const int substeps = cfg.get_int("substeps");
  require(substeps >= 16, "substeps", "must be at least 16");

  const ChainSpec chain(n, 2);
  const IsingDriveParams p = IsingDriveParams::from_rotation_angle(
      cfg.get_real("J"), cfg.get_real("hz"), ising_chi(cfg), cfg.get_real("omega"));
  const TimeDependentHamiltonian h = build_ising_driven(chain, p);
  const double T = p.period();
  const double t_total = periods * T;

  // Odd sites (|up> - i|down>)/sqrt(2), even sites |up>.
  const double r = 1.0 / std::sqrt(2.0);
  Vector odd(2), even(2);
  odd << r, Complex(0.0, -r);
  even << 1.0, 0.0;
  std::vector<Vector> sites;
  for (int j = 1; j <= n; ++j) sites.push_back(j % 2 == 1 ? odd : even);
  const StateVector psi0 = StateVector::product(sites);

  const Operator target = build_target_ising(chain, p.J, p.hz);
  const StateVector ideal_final = apply(expm_hermitian(target, t_total), psi0);
  const double tol = cfg.get_real("tolerance");
  const int max_ref = cfg.get_int("max_refinements");
  PropagationConfig pc;
  pc.substeps_per_period = substeps;
  Trajectory traj;
  double delta = 0.0;
  for (int attempt = 0;; ++attempt) {
    traj = propagate(h, psi0, 0.0, t_total, pc);
    const StateVector refined = propagate_state(h, psi0, 0.0, t_total, pc.refined());
    delta = std::abs(fidelity(traj.final_state(), ideal_final) - fidelity(refined, ideal_final));
    if (delta <= tol || attempt >= max_ref) break;
    pc = pc.refined();
  }
  const std::vector<double> f_floq = stroboscopic_fidelities(traj, target, psi0);

  // Digital: constant-field Ising steps over the same window.
  const double dt = t_total / n_trotter;
  const Operator step = trotter_step_ising(chain, p.J, p.hz, dt, circuit_of(cfg));
  std::map<long, double> f_dig;
  StateVector psi_d = psi0;
  for (int k = 1; k <= n_trotter; ++k) {
    psi_d = apply(step, psi_d);
    const double periods_done = k * dt / T;
    const long nearest = std::lround(periods_done);
    if (std::abs(periods_done - nearest) < 1e-9) {
      const StateVector ideal = apply(expm_hermitian(target, nearest * T), psi0);
      f_dig[nearest] = fidelity(psi_d, ideal);
    }
  }

  ResultRecord rec;
  rec.config = cfg;
  CsvTable t{"dynamics",
             "dynamics/1",
             {"n", "t", "fidelity_floquet", "fidelity_digital", "m_x", "m_y", "m_z", "m_x_ideal",
              "m_y_ideal", "m_z_ideal"},
             {}};
  double max_dm = 0.0;
  for (std::size_t i = 0; i < traj.stroboscopic_indices.size(); ++i) {
    const std::size_t idx = traj.stroboscopic_indices[i];
    const double t_n = traj.times[idx];
    const long n_period = std::lround(t_n / T);
    if (n_period == 0) continue;
    const StateVector ideal = apply(expm_hermitian(target, t_n), psi0);
    std::array<double, 3> m{}, mi{};
    for (int a = 0; a < 3; ++a) {
      m[a] = magnetization(traj.states[idx], chain, static_cast<Axis>(a));
      mi[a] = magnetization(ideal, chain, static_cast<Axis>(a));
      max_dm = std::max(max_dm, std::abs(m[a] - mi[a]));
    }
    const auto dig = f_dig.find(n_period);
    t.add_row({static_cast<long long>(n_period), t_n, f_floq[i],
               dig == f_dig.end() ? std::numeric_limits<double>::quiet_NaN() : dig->second,
               m[0], m[1], m[2], mi[0], mi[1], mi[2]});
  }
  rec.tables.push_back(std::move(t));

  const double f_final = f_floq.back();
  const double f_dig_final = fidelity(psi_d, ideal_final);
  rec.headline["chi"] = p.chi;
  rec.headline["period"] = T;
  rec.headline["floquet_final_infidelity"] = 1.0 - f_final;
  rec.headline["digital_final_infidelity"] = 1.0 - f_dig_final;
  rec.headline["max_abs_magnetization_deviation"] = max_dm;
  rec.headline["floquet_beats_digital"] = (1.0 - f_final) < (1.0 - f_dig_final);
  rec.convergence.push_back({{"label", "floquet_dynamics"},
                             {"substeps", pc.substeps_per_period},
                             {"refined_substeps", 2 * pc.substeps_per_period},
                             {"delta", delta},
                             {"tolerance", tol},
                             {"passed", delta <= tol}});
  return rec;
}

// --- anneal --------------------------------------------------------------

ResultRecord run_anneal_scenario(const ExperimentConfig& cfg, int workers) {
  const int n = cfg.get_int("n_sites");
  const IsingAnnealSetup s = ising_setup(cfg, n, cfg.get_real("omega"));
  const double A = cfg.get_real("anharmonicity");
  require(A >= 0.0, "anharmonicity", "must be non-negative");
  const int n_trotter = cfg.get_int("n_trotter");
  require(n_trotter >= 1, "n_trotter", "must be positive");
  const int cont_steps = cfg.get_int("continuous_steps");
  require(cont_steps >= 1, "continuous_steps", "must be positive");

  RunSummary floq, cont, trans;
  parallel_for(A > 0.0 ? 3 : 2, workers, [&](std::size_t i) {
    if (i == 0) floq = floquet_ising_anneal(s);
    if (i == 1) cont = continuous_ising_anneal(s, cont_steps);
    if (i == 2) trans = transmon_ising_anneal(s, A);
  });

  const ChainSpec chain(n, 2);
  const AnnealSchedule sched{s.t_final, s.ramp_coupling};
  DigitalOptions dopt;
  dopt.sampling = sampling_of(cfg);
  const RunSummary dig = digital_anneal(
      chain, TrotterPlan::ising(n_trotter, s.t_final, circuit_of(cfg)), sched, s.hz, s.J, dopt);
  const ErrorModel em{cfg.get_real("eps"), 35.0};
  const double eps_dig = infidelity(dig);

  ResultRecord rec;
  rec.config = cfg;
  rec.tables.push_back(series_table("floquet_series", floq));
  rec.tables.push_back(series_table("continuous_series", cont));
  if (A > 0.0) rec.tables.push_back(series_table("transmon_series", trans));
  CsvTable dt{"digital_series", "digital_series/1", {"step", "t", "fidelity", "infidelity"}, {}};
  for (std::size_t k = 0; k < dig.times.size(); ++k) {
    dt.add_row({static_cast<long long>(k), dig.times[k], dig.fidelity_series[k],
                1.0 - dig.fidelity_series[k]});
  }
  rec.tables.push_back(std::move(dt));

  rec.headline["chi"] = s.chi;
  rec.headline["lambda_main_text"] = s.chi / 2.0;
  rec.headline["stroboscopic_periods"] = s.omega * s.t_final / kTwoPi;
  rec.headline["continuous_infidelity"] = infidelity(cont);
  rec.headline["floquet_infidelity"] = infidelity(floq);
  if (A > 0.0) rec.headline["transmon_floquet_infidelity"] = infidelity(trans);
  rec.headline["digital_infidelity"] = eps_dig;
  rec.headline["digital_total_infidelity"] =
      1.0 - total_fidelity(em, n, n_trotter, eps_dig);
  rec.convergence.push_back(certificate_json("floquet", floq));
  rec.convergence.push_back(certificate_json("continuous", cont));
  if (A > 0.0) rec.convergence.push_back(certificate_json("transmon_floquet", trans));
  return rec;
}

// --- sweep_omega ---------------------------------------------------------

ResultRecord run_sweep_omega(const ExperimentConfig& cfg, int workers) {
  const std::vector<int> sizes = cfg.get_ints("n_sites_list");
  const std::vector<double> counts = cfg.get_reals("omega_period_counts");
  const int cont_steps = cfg.get_int("continuous_steps");
  for (double c : counts) require(c > 0.0, "omega_period_counts", "entries must be positive");

  struct Point {
    int n;
    double count;
    RunSummary run;
  };
  std::vector<Point> points;
  for (int n : sizes) {
    for (double c : counts) points.push_back({n, c, {}});
  }
  std::vector<RunSummary> cont(sizes.size());
  const std::size_t total = points.size() + sizes.size();
  parallel_for(total, workers, [&](std::size_t i) {
    if (i < sizes.size()) {
      cont[i] = continuous_ising_anneal(ising_setup_undriven(cfg, sizes[i]), cont_steps);
      return;
    }
    Point& p = points[i - sizes.size()];
    const double t_f = cfg.get_real("t_final");
    p.run = floquet_ising_anneal(ising_setup(cfg, p.n, kTwoPi * p.count / t_f));
  });

  ResultRecord rec;
  rec.config = cfg;
  CsvTable t{"sweep_omega",
             "sweep_omega/1",
             {"n_sites", "period_count", "omega", "infidelity", "continuous_infidelity",
              "halving_delta"},
             {}};
  const double t_f = cfg.get_real("t_final");
  json per_size = json::object();
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    json curve = json::array();
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (const Point& p : points) {
      if (p.n != sizes[si]) continue;
      const double inf = infidelity(p.run);
      t.add_row({static_cast<long long>(p.n), p.count, kTwoPi * p.count / t_f, inf,
                 infidelity(cont[si]), p.run.certificate ? p.run.certificate->delta : 0.0});
      curve.push_back(inf);
      monotone = monotone && inf <= prev;
      prev = inf;
      rec.convergence.push_back(certificate_json(
          "floquet_n" + std::to_string(p.n) + "_count" + format_real(p.count), p.run));
    }
    per_size[std::to_string(sizes[si])] = {{"floquet_infidelity", curve},
                                           {"continuous_infidelity", infidelity(cont[si])},
                                           {"non_increasing", monotone}};
    rec.convergence.push_back(
        certificate_json("continuous_n" + std::to_string(sizes[si]), cont[si]));
  }
  rec.tables.push_back(std::move(t));
  rec.headline["by_n_sites"] = per_size;
  return rec;
}

// --- sweep_ntrotter ------------------------------------------------------

ResultRecord run_sweep_ntrotter(const ExperimentConfig& cfg, int workers) {
  const std::vector<int> sizes = cfg.get_ints("n_sites_list");
  const std::vector<int> grid = cfg.get_ints("ntrotter_grid");
  for (int g : grid) require(g >= 1, "ntrotter_grid", "entries must be positive");
  const int cont_steps = cfg.get_int("continuous_steps");

  std::vector<RunSummary> cont(sizes.size());
  std::vector<StateVector> cont_state;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    const IsingAnnealSetup s = ising_setup_undriven(cfg, sizes[si]);
    cont[si] = continuous_ising_anneal(s, cont_steps);
    const ChainSpec chain(sizes[si], 2);
    const AnnealSchedule sched{s.t_final, s.ramp_coupling};
    PropagationConfig pc;
    pc.steps_total = cont_steps;
    cont_state.push_back(propagate_state(build_ising_anneal(chain, s.J, s.hz, sched),
                                         all_down(chain), 0.0, s.t_final, pc));
  }

  struct Point {
    std::size_t si;
    int n_tr;
    double vs_target = 0.0;
    double vs_continuous = 0.0;
  };
  std::vector<Point> points;
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    for (int g : grid) points.push_back({si, g});
  }
  parallel_for(points.size(), workers, [&](std::size_t i) {
    Point& p = points[i];
    const IsingAnnealSetup s = ising_setup_undriven(cfg, sizes[p.si]);
    const ChainSpec chain(sizes[p.si], 2);
    const AnnealSchedule sched{s.t_final, s.ramp_coupling};
    const TrotterPlan plan = TrotterPlan::ising(p.n_tr, s.t_final, circuit_of(cfg));
    const StateVector psi = digital_anneal_state(chain, plan, sched, s.hz, s.J, sampling_of(cfg));
    p.vs_target = 1.0 - fidelity(psi, ghz_target(sizes[p.si]));
    p.vs_continuous = 1.0 - fidelity(psi, cont_state[p.si]);
  });

  ResultRecord rec;
  rec.config = cfg;
  CsvTable t{"sweep_ntrotter",
             "sweep_ntrotter/1",
             {"n_sites", "n_trotter", "infidelity", "infidelity_vs_continuous",
              "continuous_infidelity"},
             {}};
  json per_size = json::object();
  for (std::size_t si = 0; si < sizes.size(); ++si) {
    json curve = json::array();
    for (const Point& p : points) {
      if (p.si != si) continue;
      t.add_row({static_cast<long long>(sizes[si]), static_cast<long long>(p.n_tr), p.vs_target,
                 p.vs_continuous, infidelity(cont[si])});
      curve.push_back(p.vs_continuous);
    }
    per_size[std::to_string(sizes[si])] = {{"infidelity_vs_continuous", curve},
                                           {"continuous_infidelity", infidelity(cont[si])}};
    rec.convergence.push_back(
        certificate_json("continuous_n" + std::to_string(sizes[si]), cont[si]));
  }
  rec.tables.push_back(std::move(t));
  rec.headline["by_n_sites"] = per_size;
  return rec;
}

// --- sweep_anharmonicity -------------------------------------------------

ResultRecord run_sweep_anharmonicity(const ExperimentConfig& cfg, int workers) {
  const int n = cfg.get_int("n_sites");
  const std::vector<double> as = cfg.get_reals("anharmonicity_grid");
  const std::vector<double> omegas = cfg.get_reals("omega_grid");
  const std::vector<double> eps_grid = cfg.get_reals("eps_grid");
  const std::vector<int> ntr_grid = cfg.get_ints("ntrotter_grid");
  for (double a : as) require(a > 0.0, "anharmonicity_grid", "entries must be positive");
  for (double w : omegas) require(w > 0.0, "omega_grid", "entries must be positive");

  struct Point {
    double A;
    double omega;
    RunSummary run;
  };
  std::vector<Point> points;
  for (double a : as) {
    for (double w : omegas) points.push_back({a, w, {}});
  }
  parallel_for(points.size(), workers, [&](std::size_t i) {
    Point& p = points[i];
    p.run = transmon_ising_anneal(ising_setup(cfg, n, p.omega), p.A);
  });

  // Noiseless digitization errors from this module's own runs.
  const IsingAnnealSetup base = ising_setup_undriven(cfg, n);
  const ChainSpec chain(n, 2);
  const AnnealSchedule sched{base.t_final, base.ramp_coupling};
  std::map<int, double> eps_dig;
  std::vector<double> eps_vals(ntr_grid.size());
  parallel_for(ntr_grid.size(), workers, [&](std::size_t i) {
    const TrotterPlan plan = TrotterPlan::ising(ntr_grid[i], base.t_final, circuit_of(cfg));
    const StateVector psi =
        digital_anneal_state(chain, plan, sched, base.hz, base.J, sampling_of(cfg));
    eps_vals[i] = 1.0 - fidelity(psi, ghz_target(n));
  });
  for (std::size_t i = 0; i < ntr_grid.size(); ++i) eps_dig[ntr_grid[i]] = eps_vals[i];

  ResultRecord rec;
  rec.config = cfg;
  CsvTable grid{"anharmonicity_grid",
                "anharmonicity_grid/1",
                {"anharmonicity", "omega", "anharmonicity_over_omega", "infidelity"},
                {}};
  CsvTable opt{"anharmonicity_optimum",
               "anharmonicity_optimum/1",
               {"anharmonicity", "omega_opt", "infidelity_opt", "at_grid_edge"},
               {}};
  CsvTable digi{"digital_budget",
                "digital_budget/1",
                {"anharmonicity", "eps", "max_trotter_steps", "feasible", "n_opt", "infidelity"},
                {}};
  const double c_gate = cfg.get_real("c_gate");
  json optima = json::array();
  bool any_edge = false;
  for (double a : as) {
    std::size_t best = 0;
    std::vector<const Point*> row;
    for (const Point& p : points) {
      if (p.A != a) continue;
      row.push_back(&p);
      grid.add_row({a, p.omega, a / p.omega, infidelity(p.run)});
      rec.convergence.push_back(certificate_json(
          "transmon_A" + format_real(a) + "_omega" + format_real(p.omega), p.run));
    }
    for (std::size_t i = 1; i < row.size(); ++i) {
      if (infidelity(row[i]->run) < infidelity(row[best]->run)) best = i;
    }
    const bool edge = row.size() > 2 && (best == 0 || best + 1 == row.size());
    any_edge = any_edge || edge;
    opt.add_row({a, row[best]->omega, infidelity(row[best]->run),
                 std::string(edge ? "true" : "false")});
    optima.push_back({{"anharmonicity", a},
                      {"omega_opt", row[best]->omega},
                      {"infidelity", infidelity(row[best]->run)},
                      {"at_grid_edge", edge}});
    for (double e : eps_grid) {
      const ErrorModel em{e, c_gate};
      const int max_steps = max_trotter_steps(em, n, a, base.t_final);
      const TrotterOptimum o = optimize_n_trotter(em, n, eps_dig, max_steps);
      digi.add_row({a, e, static_cast<long long>(max_steps),
                    std::string(o.feasible ? "true" : "false"),
                    o.feasible ? Cell(static_cast<long long>(o.n_opt)) : Cell(std::string()),
                    o.feasible ? Cell(o.infidelity) : Cell(std::string())});
    }
  }
  CsvTable dig_table{"digitization", "digitization/1", {"n_trotter", "eps_dig"}, {}};
  for (const auto& [k, v] : eps_dig) dig_table.add_row({static_cast<long long>(k), v});
  rec.tables.push_back(std::move(grid));
  rec.tables.push_back(std::move(opt));
  rec.tables.push_back(std::move(digi));
  rec.tables.push_back(std::move(dig_table));
  rec.headline["optima"] = optima;
  rec.headline["search_flagged"] = any_edge;
  return rec;
}

// --- xyz_anneal ----------------------------------------------------------

ResultRecord run_xyz(const ExperimentConfig& cfg, int workers) {
  XYZAnnealSetup s;
  s.n_sites = cfg.get_int("n_sites");
  s.J = cfg.get_real("J");
  s.hz = cfg.get_real("hz");
  s.t_final = cfg.get_real("t_final");
  const int periods = cfg.get_int("periods");
  require(periods >= 1, "periods", "must be positive");
  require(s.t_final > 0.0, "t_final", "must be positive");
  require(s.n_sites >= 2 && s.n_sites <= 6, "n_sites", "must lie in 2..6");
  s.omega = kTwoPi * periods / s.t_final;
  s.chi = xyz_chi(cfg);
  s.ramp_coupling = cfg.get_bool("ramp_coupling");
  s.substeps = cfg.get_int("substeps");
  s.tolerance = cfg.get_real("tolerance");
  s.max_refinements = cfg.get_int("max_refinements");
  require(s.max_refinements >= 0, "max_refinements", "must be non-negative");
  const int n_trotter = cfg.get_int("n_trotter");
  require(n_trotter >= 1, "n_trotter", "must be positive");

  RunSummary floq, cont;
  parallel_for(2, workers, [&](std::size_t i) {
    if (i == 0) floq = floquet_xyz_anneal(s);
    if (i == 1) cont = continuous_xyz_anneal(s, cfg.get_int("continuous_steps"));
  });
  const ChainSpec chain(s.n_sites, 2);
  const AnnealSchedule sched{s.t_final, s.ramp_coupling};
  const OrderSearchResult search =
      optimize_step_order(chain, s.J, {2.0 / 3.0, 1.0 / 3.0, 0.0}, sched, s.hz, n_trotter,
                          workers);

  ResultRecord rec;
  rec.config = cfg;
  rec.tables.push_back(series_table("floquet_series", floq));
  rec.tables.push_back(series_table("continuous_series", cont));
  CsvTable perms{"layer_orders", "layer_orders/1", {"order", "fidelity", "infidelity"}, {}};
  double worst = 1.0;
  for (const auto& [order, f] : search.all) {
    std::string name;
    for (Layer l : order) name += (name.empty() ? "" : "-") + layer_name(l);
    perms.add_row({name, f, 1.0 - f});
    worst = std::min(worst, f);
  }
  rec.tables.push_back(std::move(perms));
  std::string best;
  for (Layer l : search.best_order) best += (best.empty() ? "" : "-") + layer_name(l);
  rec.headline["chi"] = s.chi;
  rec.headline["omega"] = s.omega;
  rec.headline["stroboscopic_periods"] = periods;
  rec.headline["floquet_infidelity"] = infidelity(floq);
  rec.headline["continuous_infidelity"] = infidelity(cont);
  rec.headline["digital_best_order"] = best;
  rec.headline["digital_best_infidelity"] = 1.0 - search.best_fidelity;
  rec.headline["digital_worst_infidelity"] = 1.0 - worst;
  rec.headline["permutations_evaluated"] = search.all.size();
  rec.headline["floquet_beats_digital"] = infidelity(floq) < 1.0 - search.best_fidelity;
  rec.convergence.push_back(certificate_json("floquet", floq));
  rec.convergence.push_back(certificate_json("continuous", cont));
  return rec;
}

// --- xi_table ------------------------------------------------------------

ResultRecord run_xi_table(const ExperimentConfig& cfg) {
  ResultRecord rec;
  rec.config = cfg;
  CsvTable t{"xi_table",
             "xi_table/1",
             {"chi_even", "chi_odd", "xx", "xy", "xz", "yx", "yy", "yz", "zx", "zy", "zz"},
             {}};
  for (double ce : cfg.get_reals("chi_even_grid")) {
    for (double co : cfg.get_reals("chi_odd_grid")) {
      require(ce >= 0.0 && co >= 0.0, "chi_even_grid", "amplitudes must be non-negative");
      DriveConfig d;
      d.omega = 1.0;
      d.even = {cfg.get_real("theta_even"), cfg.get_real("phi_even"), ce};
      d.odd = {cfg.get_real("theta_odd"), cfg.get_real("phi_odd"), co};
      const XiMatrix xi = xi_averaged(d);
      std::vector<Cell> row{ce, co};
      for (const auto& r : xi.entries) {
        for (double v : r) row.emplace_back(v);
      }
      t.add_row(row);
    }
  }
  rec.headline["rows"] = t.rows.size();
  rec.tables.push_back(std::move(t));
  return rec;
}

// --- estimates -----------------------------------------------------------

ResultRecord run_estimates(const ExperimentConfig& cfg, int workers) {
  const double j_mhz = cfg.get_real("J_mhz");
  require(j_mhz > 0.0, "J_mhz", "must be positive");
  const double omega = cfg.get_real("omega_mhz") / j_mhz;
  const double A = cfg.get_real("anharmonicity_mhz") / j_mhz;
  // t |J| = 2 pi (J/2pi in MHz) (t in us)
  const double t_f = kTwoPi * j_mhz * cfg.get_real("t_final_us");
  const double lambda = cfg.get_real("lambda_main_text");
  const int n = cfg.get_int("n_sites");

  IsingAnnealSetup s;
  s.n_sites = n;
  s.J = cfg.get_real("J") < 0.0 ? -1.0 : 1.0;
  s.hz = cfg.get_real("hz");
  s.t_final = t_f;
  s.omega = omega;
  s.ramp_coupling = cfg.get_bool("ramp_coupling");
  s.substeps = cfg.get_int("substeps");
  s.tolerance = cfg.get_real("tolerance");
  s.max_refinements = cfg.get_int("max_refinements");
  require(s.max_refinements >= 0, "max_refinements", "must be non-negative");
  require(s.substeps >= 16, "substeps", "must be at least 16");
  require(n >= 2 && n <= 5, "n_sites", "must lie in 2..5 for transmon runs");

  IsingAnnealSetup main_text = s;
  main_text.chi = 2.0 * lambda;
  IsingAnnealSetup rotation = s;
  rotation.chi = calibrate_ising_chi();
  const double a_limit = cfg.get_real("qubit_limit_anharmonicity");

  RunSummary r_main, r_rot, r_limit, r_qubit, r_cont;
  parallel_for(5, workers, [&](std::size_t i) {
    switch (i) {
      case 0: r_main = transmon_ising_anneal(main_text, A); break;
      case 1: r_rot = transmon_ising_anneal(rotation, A); break;
      case 2: r_limit = transmon_ising_anneal(rotation, a_limit); break;
      case 3: r_qubit = floquet_ising_anneal(rotation); break;
      case 4: r_cont = continuous_ising_anneal(s, cfg.get_int("continuous_steps")); break;
    }
  });

  const int n_trotter = cfg.get_int("n_trotter");
  const ChainSpec chain(n, 2);
  const AnnealSchedule sched{t_f, s.ramp_coupling};
  DigitalOptions dopt;
  dopt.sampling = sampling_of(cfg);
  dopt.record = false;
  const double eps_dig =
      infidelity(digital_anneal(chain, TrotterPlan::ising(n_trotter, t_f, circuit_of(cfg)),
                                sched, s.hz, s.J, dopt));
  const ErrorModel em{cfg.get_real("eps"), 35.0};
  const double t_gate_ns = cfg.get_real("t_gate_ns");
  const double t_tr_us = ErrorModel::trotter_step_time(n, t_gate_ns) * 1e-3;
  // c / A in ns, with A given as A / 2pi in MHz.
  const double t_gate_model_ns = em.c_gate / (kTwoPi * cfg.get_real("anharmonicity_mhz")) * 1e3;

  ResultRecord rec;
  rec.config = cfg;
  rec.notes["time_unit"] = "1/|J|";
  rec.notes["omega_over_J"] = omega;
  rec.notes["anharmonicity_over_J"] = A;
  rec.notes["t_final_times_J"] = t_f;
  rec.notes["conversion"] = "x / |J| = (x / 2pi in MHz) / (J / 2pi in MHz); t |J| = 2 pi J_mhz t_us";

  CsvTable t{"estimates", "estimates/1", {"quantity", "value", "reference"}, {}};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  t.add_row({std::string("continuous_infidelity"), infidelity(r_cont), 0.00616});
  t.add_row({std::string("transmon_floquet_infidelity_main_text"), infidelity(r_main), 0.037});
  t.add_row(
      {std::string("transmon_floquet_infidelity_rotation_angle"), infidelity(r_rot), 0.037});
  t.add_row({std::string("qubit_limit_floquet_infidelity"), infidelity(r_limit), nan});
  t.add_row({std::string("qubit_floquet_infidelity"), infidelity(r_qubit), nan});
  t.add_row({std::string("digital_infidelity"), eps_dig, 0.041});
  t.add_row({std::string("digital_total_infidelity"),
             1.0 - total_fidelity(em, n, n_trotter, eps_dig), nan});
  t.add_row({std::string("trotter_step_time_us"), t_tr_us, 0.162});
  t.add_row({std::string("gate_time_model_ns"), t_gate_model_ns, nan});
  t.add_row({std::string("gates_per_step"),
             static_cast<long long>(ErrorModel::gates_per_step(n)), 16.0});
  rec.tables.push_back(std::move(t));
  rec.tables.push_back(series_table("transmon_series", r_rot));

  rec.headline["chi_main_text"] = main_text.chi;
  rec.headline["chi_rotation_angle"] = rotation.chi;
  rec.headline["continuous_infidelity"] = infidelity(r_cont);
  rec.headline["transmon_floquet_infidelity_main_text"] = infidelity(r_main);
  rec.headline["transmon_floquet_infidelity_rotation_angle"] = infidelity(r_rot);
  rec.headline["qubit_limit_floquet_infidelity"] = infidelity(r_limit);
  rec.headline["qubit_floquet_infidelity"] = infidelity(r_qubit);
  rec.headline["digital_infidelity"] = eps_dig;
  rec.headline["digital_total_infidelity"] = 1.0 - total_fidelity(em, n, n_trotter, eps_dig);
  rec.headline["trotter_step_time_us"] = t_tr_us;
  rec.headline["gate_time_model_ns"] = t_gate_model_ns;
  rec.headline["gates_per_step"] = ErrorModel::gates_per_step(n);
  rec.convergence.push_back(certificate_json("transmon_main_text", r_main));
  rec.convergence.push_back(certificate_json("transmon_rotation_angle", r_rot));
  rec.convergence.push_back(certificate_json("transmon_qubit_limit", r_limit));
  rec.convergence.push_back(certificate_json("qubit_floquet", r_qubit));
  rec.convergence.push_back(certificate_json("continuous", r_cont));
  return rec;
}

}  // namespace

void CsvTable::add_row(const std::vector<Cell>& cells) {
  if (cells.size() != columns.size()) {
    throw DimensionError("CsvTable " + name + ": row has " + std::to_string(cells.size()) +
                         " cells, expected " + std::to_string(columns.size()));
  }
  std::vector<std::string> row;
  row.reserve(cells.size());
  for (const Cell& c : cells) row.push_back(cell_text(c));
  rows.push_back(std::move(row));
}

std::string to_csv(const CsvTable& table) {
  std::string out = "#schema=" + table.schema + "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    out += (i ? "," : "") + table.columns[i];
  }
  out += "\n";
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
    out += "\n";
  }
  return out;
}

bool ResultRecord::converged() const {
  for (const auto& c : convergence) {
    if (!c.value("passed", false)) return false;
  }
  return true;
}

const CsvTable& ResultRecord::table(const std::string& name) const {
  for (const CsvTable& t : tables) {
    if (t.name == name) return t;
  }
  throw DomainError("no table named " + name);
}

json summary_json(const ResultRecord& record) {
  json echo = json::object();
  echo["scenario"] = record.config.scenario();
  for (const auto& [k, v] : record.config.values()) echo[k] = v;
  json out;
  out["config_echo"] = echo;
  out["headline_numbers"] = record.headline;
  out["convergence"] = record.convergence;
  if (!record.notes.empty()) out["notes"] = record.notes;
  return out;
}

void write_outputs(const ResultRecord& record, const std::filesystem::path& dir, int workers) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& file, const std::string& body) {
    std::ofstream out(dir / file, std::ios::binary);
    if (!out) throw Error("cannot write " + (dir / file).string());
    out << body;
  };
  for (const CsvTable& t : record.tables) write(t.name + ".csv", to_csv(t));
  write("summary.json", summary_json(record).dump(2) + "\n");

  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&tt));
  json meta;
  meta["created_utc"] = stamp;
  meta["scenario"] = record.config.scenario();
  meta["workers"] = workers;
  meta["config"] = record.config.serialize();
  write("metadata.json", meta.dump(2) + "\n");
}

ResultRecord run_scenario(const ExperimentConfig& cfg, int workers) {
  const std::string& s = cfg.scenario();
  if (s == "dynamics") return run_dynamics(cfg);
  if (s == "anneal") return run_anneal_scenario(cfg, workers);
  if (s == "sweep_omega") return run_sweep_omega(cfg, workers);
  if (s == "sweep_ntrotter") return run_sweep_ntrotter(cfg, workers);
  if (s == "sweep_anharmonicity") return run_sweep_anharmonicity(cfg, workers);
  if (s == "xyz_anneal") return run_xyz(cfg, workers);
  if (s == "xi_table") return run_xi_table(cfg);
  if (s == "estimates") return run_estimates(cfg, workers);
  throw ConfigError("scenario", "unknown scenario '" + s + "'");
}

RunSummary floquet_ising_anneal(const IsingAnnealSetup& s) {
  const ChainSpec chain(s.n_sites, 2);
  const IsingDriveParams p = IsingDriveParams::from_rotation_angle(s.J, s.hz, s.chi, s.omega);
  const TimeDependentHamiltonian h =
      build_ising_driven(chain, p, AnnealSchedule{s.t_final, s.ramp_coupling});
  return run_anneal(h, all_down(chain), ghz_target(s.n_sites), s.t_final,
                    anneal_options(s.substeps, 1, s.tolerance, s.max_refinements));
}

RunSummary transmon_ising_anneal(const IsingAnnealSetup& s, double anharmonicity) {
  const ChainSpec chain(s.n_sites, 3);
  const IsingDriveParams p = IsingDriveParams::from_rotation_angle(s.J, s.hz, s.chi, s.omega);
  const TimeDependentHamiltonian h = build_transmon_ising_anneal(
      chain, p, AnnealSchedule{s.t_final, s.ramp_coupling}, anharmonicity);
  return run_anneal(h, all_down(chain), lift_to_qutrits(ghz_target(s.n_sites), s.n_sites),
                    s.t_final, anneal_options(s.substeps, 1, s.tolerance, s.max_refinements));
}

RunSummary continuous_ising_anneal(const IsingAnnealSetup& s, int steps) {
  const ChainSpec chain(s.n_sites, 2);
  const TimeDependentHamiltonian h =
      build_ising_anneal(chain, s.J, s.hz, AnnealSchedule{s.t_final, s.ramp_coupling});
  AnnealOptions o = anneal_options(16, steps, s.tolerance, s.max_refinements);
  o.propagation.record_stride = std::max(1, steps / 200);
  return run_anneal(h, all_down(chain), ghz_target(s.n_sites), s.t_final, o);
}

StateVector xyz_target(int n_sites, double J) {
  const GroundState gs =
      ground_state(build_target_xyz(ChainSpec(n_sites, 2), J, 2.0 * J / 3.0, J / 3.0, 0.0));
  if (gs.degenerate) throw NumericalError("xyz_target: ground state is degenerate");
  return gs.state;
}

RunSummary floquet_xyz_anneal(const XYZAnnealSetup& s) {
  const ChainSpec chain(s.n_sites, 2);
  const XYZDriveParams p{s.J, s.chi, s.omega, s.hz};
  const TimeDependentHamiltonian h =
      build_xyz_driven(chain, p, AnnealSchedule{s.t_final, s.ramp_coupling});
  return run_anneal(h, all_down(chain), xyz_target(s.n_sites, s.J), s.t_final,
                    anneal_options(s.substeps, 1, s.tolerance, s.max_refinements));
}

RunSummary continuous_xyz_anneal(const XYZAnnealSetup& s, int steps) {
  const ChainSpec chain(s.n_sites, 2);
  const TimeDependentHamiltonian h =
      build_xyz_anneal(chain, s.J, s.hz, AnnealSchedule{s.t_final, s.ramp_coupling});
  AnnealOptions o = anneal_options(16, steps, s.tolerance, s.max_refinements);
  o.propagation.record_stride = std::max(1, steps / 200);
  return run_anneal(h, all_down(chain), xyz_target(s.n_sites, s.J), s.t_final, o);
}

json certificate_json(const std::string& label, const RunSummary& run) {
  json c;
  c["label"] = label;
  if (!run.certificate) {
    c["passed"] = false;
    c["reason"] = "not certified";
    return c;
  }
  const ConvergenceCertificate& cert = *run.certificate;
  c["substeps"] = cert.substeps;
  c["refined_substeps"] = cert.refined_substeps;
  c["delta"] = cert.delta;
  c["tolerance"] = cert.tolerance;
  c["passed"] = cert.passed;
  return c;
}

}  // namespace floqsim
