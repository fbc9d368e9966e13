#pragma once

#include <span>
#include <string>
#include <vector>

#include "qae/statevector.hpp"

namespace qae {

/// Per-input classical metadata fed into the rotation angles.
using FeatureVector = std::vector<double>;

/// Trainable parameters, flattened in layout order.
using ParameterVector = std::vector<double>;

enum class AnsatzMode { qae, ef_qae };

/// Layered hardware-style circuit: per layer, Ry on every qubit, CZ between
/// consecutive trash qubits, then a CZ cascade pairing trash qubits with the
/// compressed-state qubits; one final Ry on each trash qubit after the last
/// layer.
struct AnsatzSpec {
  int n_qubits = 0;
  std::vector<int> trash_qubits;
  int n_layers = 0;
  AnsatzMode mode = AnsatzMode::qae;
  int feature_dim = 0;

  /// Standard autoencoder: one parameter per rotation gate.
  static AnsatzSpec qae(int n_qubits, int n_trash, int n_layers);
  /// Feature-enhanced autoencoder: feature_dim weights plus a bias per gate.
  static AnsatzSpec ef_qae(int n_qubits, int n_trash, int n_layers, int feature_dim);

  void validate() const;

  int n_trash() const { return static_cast<int>(trash_qubits.size()); }
  int rotation_gate_count() const { return n_layers * n_qubits + n_trash(); }
  int params_per_gate() const { return mode == AnsatzMode::qae ? 1 : feature_dim + 1; }
  int total_parameter_count() const { return rotation_gate_count() * params_per_gate(); }

  /// Non-trash qubits, ascending.
  std::vector<int> compressed_qubits() const;
};

enum class GateKind { ry, cz };

/// Gate with an unresolved angle; `slot` is the rotation-gate ordinal in
/// layout order (-1 for CZ).
struct SymbolicGate {
  GateKind kind;
  int q0;
  int q1;  // -1 for single-qubit gates
  int slot;
};

struct BoundGate {
  GateKind kind;
  int q0;
  int q1;
  double angle;  // 0 for CZ
};

/// Concrete gate sequence after binding parameters and features.
struct BoundCircuit {
  int n_qubits = 0;
  std::vector<BoundGate> gates;
  /// Parallel step count under greedy as-soon-as-possible scheduling.
  int depth = 0;
};

/// Emits the gate sequence of the layered ansatz in deterministic order:
/// layer-major, qubit-ascending rotations first, then the trash-pair CZ
/// chain, then the cascade assigning compressed qubit c (ascending) to
/// trash_qubits[c mod n_t]; final trash rotations last.
std::vector<SymbolicGate> build_layout(const AnsatzSpec& spec);

/// Linear angle encoding: sum_j slice[j] * x[j] + slice.back(). The slice
/// must have length x.size() + 1; with no features the angle is the lone
/// parameter.
double resolve_angle(std::span<const double> theta_slice, const FeatureVector& x);

/// Deterministic binding of parameter slices to rotation gates in layout
/// order. QAE mode ignores `x` entirely.
BoundCircuit bind(const AnsatzSpec& spec, std::span<const double> theta, const FeatureVector& x);

StateVector apply_encoder(const BoundCircuit& circuit, const StateVector& input);

/// Exact inverse of the encoder: reversed gate order, negated angles.
StateVector apply_decoder(const BoundCircuit& circuit, const StateVector& state);

struct ReconstructionResult {
  StateVector output;
  double fidelity;
};

/// Encode, project the trash qubits onto |0...0> (renormalizing; throws
/// DegenerateProjectionError below kMinProjectionProbability), decode, and
/// report fidelity against the input.
ReconstructionResult reconstruct(const AnsatzSpec& spec, std::span<const double> theta,
                                 const FeatureVector& x, const StateVector& input);

inline constexpr double kMinProjectionProbability = 1e-12;

/// One gate per line: "RY q<i> <angle>" / "CZ q<i> q<j>".
std::string format_circuit(const BoundCircuit& circuit);

}  // namespace qae
