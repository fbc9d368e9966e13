#pragma once

#include <span>
#include <string>
#include <vector>

#include "qae/ansatz.hpp"
#include "qae/statevector.hpp"
#include "qae/training_set.hpp"

namespace qae {

/// Local compression cost C = 1/2 sum_k (1 - <Z_k>) over the trash qubits.
/// Zero iff the trash subsystem is exactly |0...0>; at most n_t.
double local_cost(const StateVector& encoded, std::span<const int> trash_qubits);

/// Same cost written as sum over trash measurement outcomes of probability
/// times Hamming distance to the all-zeros string. Agrees with local_cost
/// to rounding.
double hamming_weighted_cost(const StateVector& encoded, std::span<const int> trash_qubits);

/// Per-state costs and trash-qubit Z expectations for one parameter point.
struct CostReport {
  std::vector<double> per_state_costs;
  double averaged_cost = 0.0;
  /// [state][k] = <Z> on the k-th trash qubit.
  std::vector<std::vector<double>> per_trash_qubit_z;
  std::vector<std::string> tags;

  /// One row per training state (index, label, cost, <Z> per trash qubit),
  /// then a summary row with the averaged values.
  std::string to_csv() const;
};

/// Binds the circuit per entry (EF-QAE: the entry's features; QAE: features
/// ignored), encodes, and averages local_cost over the set.
CostReport averaged_cost(const AnsatzSpec& spec, std::span<const double> theta,
                         const TrainingSet& training_set);

/// Global depolarizing channel applied per circuit step: survival
/// probability q each step, depth steps in total.
struct NoiseModel {
  double q = 1.0;
  int depth = 1;

  void validate() const;
};

/// Noisy cost from clean Z expectations: 1/2 sum_k (1 - q^depth * z_k).
/// The maximally mixed component contributes nothing to <Z>.
double noisy_cost(std::span<const double> clean_z_expectations, const NoiseModel& noise);

}  // namespace qae
