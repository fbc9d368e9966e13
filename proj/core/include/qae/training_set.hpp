#pragma once

#include <string>
#include <vector>

#include "qae/ansatz.hpp"
#include "qae/statevector.hpp"

namespace qae {

/// One input state with the classical feature vector that characterizes it
/// and a human-readable provenance tag (transverse-field value, digit class).
struct TrainingEntry {
  StateVector state;
  FeatureVector feature;
  std::string tag;
};

struct TrainingSet {
  std::vector<TrainingEntry> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }

  int n_qubits() const;
  int feature_dim() const;

  /// All states share a qubit count and all features share a dimension.
  void validate() const;
};

}  // namespace qae
