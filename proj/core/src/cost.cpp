#include "qae/cost.hpp"

#include <bit>
#include <cmath>
#include <cstdio>

namespace qae {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

double local_cost(const StateVector& encoded, std::span<const int> trash_qubits) {
  double cost = 0.0;
  for (int q : trash_qubits) {
    cost += 0.5 * (1.0 - encoded.expectation_z(q));
  }
  return cost;
}

double hamming_weighted_cost(const StateVector& encoded, std::span<const int> trash_qubits) {
  const int n = encoded.n_qubits();
  std::size_t trash_mask = 0;
  for (int q : trash_qubits) {
    if (q < 0 || q >= n) {
      throw IndexError("trash qubit " + std::to_string(q) + " out of range");
    }
    trash_mask |= std::size_t{1} << (n - 1 - q);
  }
  // Outcome probabilities grouped by trash bits; each basis state contributes
  // its probability weighted by the Hamming distance of its trash bits to 0.
  double cost = 0.0;
  const auto amps = encoded.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    const int distance = std::popcount(i & trash_mask);
    if (distance > 0) cost += distance * std::norm(amps[i]);
  }
  return cost;
}

int TrainingSet::n_qubits() const {
  if (entries.empty()) {
    throw ArgumentError("training set is empty");
  }
  return entries.front().state.n_qubits();
}

int TrainingSet::feature_dim() const {
  if (entries.empty()) {
    throw ArgumentError("training set is empty");
  }
  return static_cast<int>(entries.front().feature.size());
}

void TrainingSet::validate() const {
  if (entries.empty()) {
    throw ArgumentError("training set is empty");
  }
  const int n = entries.front().state.n_qubits();
  const std::size_t fdim = entries.front().feature.size();
  for (const TrainingEntry& entry : entries) {
    if (entry.state.n_qubits() != n) {
      throw ArgumentError("training states disagree on qubit count");
    }
    if (entry.feature.size() != fdim) {
      throw ArgumentError("training features disagree on dimension");
    }
  }
}

CostReport averaged_cost(const AnsatzSpec& spec, std::span<const double> theta,
                         const TrainingSet& training_set) {
  training_set.validate();
  if (training_set.n_qubits() != spec.n_qubits) {
    throw ArgumentError("training states have " + std::to_string(training_set.n_qubits()) +
                        " qubits, ansatz expects " + std::to_string(spec.n_qubits));
  }

  CostReport report;
  report.per_state_costs.reserve(training_set.size());
  report.per_trash_qubit_z.reserve(training_set.size());
  report.tags.reserve(training_set.size());

  double sum = 0.0;
  for (const TrainingEntry& entry : training_set.entries) {
    const BoundCircuit circuit = bind(spec, theta, entry.feature);
    const StateVector encoded = apply_encoder(circuit, entry.state);
    std::vector<double> z;
    z.reserve(spec.trash_qubits.size());
    double cost = 0.0;
    for (int q : spec.trash_qubits) {
      const double zq = encoded.expectation_z(q);
      z.push_back(zq);
      cost += 0.5 * (1.0 - zq);
    }
    sum += cost;
    report.per_state_costs.push_back(cost);
    report.per_trash_qubit_z.push_back(std::move(z));
    report.tags.push_back(entry.tag);
  }
  report.averaged_cost = sum / static_cast<double>(training_set.size());
  return report;
}

std::string CostReport::to_csv() const {
  const std::size_t n_trash = per_trash_qubit_z.empty() ? 0 : per_trash_qubit_z.front().size();
  std::string out = "index,label,cost";
  for (std::size_t k = 0; k < n_trash; ++k) out += ",z_" + std::to_string(k);
  out += "\n";

  std::vector<double> z_means(n_trash, 0.0);
  for (std::size_t i = 0; i < per_state_costs.size(); ++i) {
    out += std::to_string(i) + "," + (i < tags.size() ? tags[i] : "") + "," +
           format_double(per_state_costs[i]);
    for (std::size_t k = 0; k < n_trash; ++k) {
      out += "," + format_double(per_trash_qubit_z[i][k]);
      z_means[k] += per_trash_qubit_z[i][k];
    }
    out += "\n";
  }
  out += "average,," + format_double(averaged_cost);
  for (std::size_t k = 0; k < n_trash; ++k) {
    out += "," + format_double(z_means[k] / static_cast<double>(per_state_costs.size()));
  }
  out += "\n";
  return out;
}

void NoiseModel::validate() const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw ArgumentError("depolarizing survival probability q must be in [0, 1], got " +
                        std::to_string(q));
  }
  if (depth < 1) {
    throw ArgumentError("noise depth must be positive");
  }
}

double noisy_cost(std::span<const double> clean_z_expectations, const NoiseModel& noise) {
  noise.validate();
  const double shrink = std::pow(noise.q, noise.depth);
  double cost = 0.0;
  for (double z : clean_z_expectations) {
    if (z < -1.0 - 1e-12 || z > 1.0 + 1e-12) {
      throw ArgumentError("Z expectation " + std::to_string(z) + " outside [-1, 1]");
    }
    cost += 0.5 * (1.0 - shrink * z);
  }
  return cost;
}

}  // namespace qae
