#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "qae/ansatz.hpp"
#include "qae/ising.hpp"
#include "qae/optimizer.hpp"

namespace qae {

enum class Workload { ising, digits };

/// qae and ef_qae train from a seeded random start; ef_qae_star is an EF-QAE
/// warm-started from a finished QAE run's theta_opt.json.
enum class RunMode { qae, ef_qae, ef_qae_star };

const char* to_string(Workload workload);
const char* to_string(RunMode mode);
Workload workload_from_string(const std::string& name);
RunMode run_mode_from_string(const std::string& name);
Boundary boundary_from_string(const std::string& name);

struct ExperimentConfig {
  Workload workload = Workload::ising;
  RunMode mode = RunMode::qae;
  int n_qubits = 6;
  int n_trash = 2;
  int n_layers = 3;
  std::uint64_t seed = 9;
  OptimizerConfig optimizer;

  // Ising dataset: ground states over [lambda_min, lambda_max].
  double lambda_min = 0.5;
  double lambda_max = 1.0;
  int n_train_states = 20;
  int n_test_states = 60;
  Boundary boundary = Boundary::open;

  // Digits dataset: CSV fixtures.
  std::filesystem::path digits_train_path;
  std::filesystem::path digits_test_path;

  std::filesystem::path output_dir;
  std::filesystem::path warm_start_theta;

  /// Workload defaults: ising trains 3 layers on 20 ground states over
  /// [0.5, 1.0]; digits trains 4 layers on the 20-image fixture. Both use
  /// 6 qubits with 2 trash qubits.
  static ExperimentConfig defaults(Workload workload);

  void validate() const;

  /// Ansatz implied by mode (ef_qae_star trains an EF-QAE circuit) with a
  /// one-dimensional feature: the transverse field or the digit-class code.
  AnsatzSpec ansatz_spec() const;
};

/// Applies a flat key=value config file ('#' comments and blank lines
/// ignored) on top of `config`. Unknown keys or unparsable values ->
/// ConfigError with the line number.
void apply_config_file(ExperimentConfig& config, const std::filesystem::path& path);

struct RunSummary {
  std::filesystem::path bundle_dir;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  std::int64_t evaluations = 0;
  std::int64_t iterations = 0;
  TerminationReason termination = TerminationReason::max_evals;
};

/// Trains per config and writes the bundle: trace.csv, theta_opt.json,
/// fidelities.csv (train + test sweeps), trash_density.csv (ising probes
/// lambda = 0.60 and 0.75; digits probes one image per class), and for
/// digits reconstructed.csv with input/output pixel grids. Files are staged
/// in a scratch directory and renamed into place, so an interrupted run
/// leaves no partial bundle at output_dir.
RunSummary run_experiment(const ExperimentConfig& config);

struct FidelityDelta {
  std::string tag;
  std::string set;
  double delta = 0.0;  // run_a fidelity minus run_b fidelity
};

struct CompareThresholds {
  /// Pass requires final_cost_a / final_cost_b <= this.
  double max_cost_ratio = 1.0;
  /// Pass requires mean test-set fidelity delta (a - b) >= this.
  double min_mean_test_fidelity_delta = 0.0;
};

struct ComparisonReport {
  std::string run_a;
  std::string run_b;
  std::string workload;
  double final_cost_a = 0.0;
  double final_cost_b = 0.0;
  double cost_ratio = 0.0;
  std::vector<FidelityDelta> fidelity_deltas;
  double mean_test_fidelity_delta = 0.0;
  bool cost_ratio_ok = false;
  bool fidelity_ok = false;
  bool pass = false;
};

/// Compares two finished bundles of the same workload. Bundles whose
/// fidelity sweeps do not cover the same (tag, set) rows -> SchemaError.
ComparisonReport compare_runs(const std::filesystem::path& run_a,
                              const std::filesystem::path& run_b,
                              const CompareThresholds& thresholds = {});

std::string to_json(const ComparisonReport& report);

/// Re-derives the trash-qubit density matrix of a finished run on one probe
/// input and returns it as CSV rows (same columns as trash_density.csv).
/// The probe is a lambda value for ising bundles and a digit class ("0" or
/// "1") for digits bundles; anything else -> ArgumentError.
std::string export_trash_density(const std::filesystem::path& run_dir, const std::string& probe);

}  // namespace qae
