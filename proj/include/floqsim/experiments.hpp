#pragma once

// Named scenarios: each turns an ExperimentConfig into CSV tables, headline
// numbers and convergence certificates.

#include "floqsim/config.hpp"
#include "floqsim/digital.hpp"
#include "floqsim/models.hpp"
#include "floqsim/propagation.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace floqsim {

using Cell = std::variant<double, long long, std::string>;

struct CsvTable {
  std::string name;
  /// Written as the first line, "#schema=<schema>".
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<Cell>& cells);
};

std::string to_csv(const CsvTable& table);

struct ResultRecord {
  ExperimentConfig config;
  std::vector<CsvTable> tables;
  nlohmann::ordered_json headline = nlohmann::ordered_json::object();
  nlohmann::ordered_json convergence = nlohmann::ordered_json::array();
  /// Unit conversions and similar facts that belong next to the numbers.
  nlohmann::ordered_json notes = nlohmann::ordered_json::object();

  bool converged() const;
  const CsvTable& table(const std::string& name) const;
};

/// {config_echo, headline_numbers, convergence}
nlohmann::ordered_json summary_json(const ResultRecord& record);

/// Writes <name>.csv per table, summary.json and metadata.json (the only
/// file with a timestamp) into `dir`.
void write_outputs(const ResultRecord& record, const std::filesystem::path& dir, int workers);

/// Runs the scenario named by cfg.scenario(). Sweep points are spread over
/// `workers` threads; output order follows the grid.
ResultRecord run_scenario(const ExperimentConfig& cfg, int workers = 1);

// Protocol runners shared by the scenarios and the tests. Energies are in
// units of |J|; the initial state is |down>^N.

struct IsingAnnealSetup {
  int n_sites = 4;
  double J = -1.0;
  double hz = 1.0;
  double t_final = 15.08;
  double omega = 9.8;
  double chi = 0.0;
  bool ramp_coupling = true;
  int substeps = 256;
  double tolerance = 1e-6;
  int max_refinements = 2;
};

/// Qubit chain with the sublattice drive; fidelity against the GHZ state in
/// the drive frame.
RunSummary floquet_ising_anneal(const IsingAnnealSetup& s);

/// Transmon chain with anharmonicity A; GHZ target lifted to the qutrits.
RunSummary transmon_ising_anneal(const IsingAnnealSetup& s, double anharmonicity);

/// Undriven J XX + hz Z anneal with `steps` midpoint steps.
RunSummary continuous_ising_anneal(const IsingAnnealSetup& s, int steps);

struct XYZAnnealSetup {
  int n_sites = 4;
  double J = -1.0;
  double hz = 1.0;
  double t_final = 200.0;
  double omega = 1.0;
  double chi = 0.0;
  bool ramp_coupling = true;
  int substeps = 128;
  double tolerance = 1e-6;
  int max_refinements = 2;
};

/// Ground state of J XX + 2J/3 YY + J/3 ZZ.
StateVector xyz_target(int n_sites, double J);

RunSummary floquet_xyz_anneal(const XYZAnnealSetup& s);
RunSummary continuous_xyz_anneal(const XYZAnnealSetup& s, int steps);

/// Certificate as JSON with a label.
nlohmann::ordered_json certificate_json(const std::string& label, const RunSummary& run);

}  // namespace floqsim
