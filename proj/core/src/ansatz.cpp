#include "qae/ansatz.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_set>

namespace qae {

AnsatzSpec AnsatzSpec::qae(int n_qubits, int n_trash, int n_layers) {
  AnsatzSpec spec;
  spec.n_qubits = n_qubits;
  spec.trash_qubits.resize(n_trash);
  for (int i = 0; i < n_trash; ++i) spec.trash_qubits[i] = i;
  spec.n_layers = n_layers;
  spec.mode = AnsatzMode::qae;
  spec.feature_dim = 0;
  spec.validate();
  return spec;
}

AnsatzSpec AnsatzSpec::ef_qae(int n_qubits, int n_trash, int n_layers, int feature_dim) {
  AnsatzSpec spec = qae(n_qubits, n_trash, n_layers);
  spec.mode = AnsatzMode::ef_qae;
  spec.feature_dim = feature_dim;
  spec.validate();
  return spec;
}

void AnsatzSpec::validate() const {
  if (n_qubits < 2) {
    throw ArgumentError("ansatz needs at least 2 qubits");
  }
  if (n_layers < 1) {
    throw ArgumentError("ansatz needs at least 1 layer");
  }
  if (trash_qubits.empty() || static_cast<int>(trash_qubits.size()) >= n_qubits) {
    throw ArgumentError("trash qubit count must be in [1, n_qubits - 1]");
  }
  std::unordered_set<int> seen;
  for (int q : trash_qubits) {
    if (q < 0 || q >= n_qubits) {
      throw IndexError("trash qubit " + std::to_string(q) + " out of range");
    }
    if (!seen.insert(q).second) {
      throw ArgumentError("duplicate trash qubit " + std::to_string(q));
    }
  }
  if (mode == AnsatzMode::qae && feature_dim != 0) {
    throw ArgumentError("QAE mode requires feature_dim = 0");
  }
  if (mode == AnsatzMode::ef_qae && feature_dim < 1) {
    throw ArgumentError("EF-QAE mode requires feature_dim >= 1");
  }
}

std::vector<int> AnsatzSpec::compressed_qubits() const {
  std::unordered_set<int> trash(trash_qubits.begin(), trash_qubits.end());
  std::vector<int> out;
  out.reserve(n_qubits - trash.size());
  for (int q = 0; q < n_qubits; ++q) {
    if (!trash.count(q)) out.push_back(q);
  }
  return out;
}

std::vector<SymbolicGate> build_layout(const AnsatzSpec& spec) {
  spec.validate();
  const int n_t = spec.n_trash();
  const std::vector<int> compressed = spec.compressed_qubits();

  std::vector<SymbolicGate> gates;
  int slot = 0;
  for (int layer = 0; layer < spec.n_layers; ++layer) {
    for (int q = 0; q < spec.n_qubits; ++q) {
      gates.push_back({GateKind::ry, q, -1, slot++});
    }
    for (int t = 0; t + 1 < n_t; ++t) {
      gates.push_back({GateKind::cz, spec.trash_qubits[t], spec.trash_qubits[t + 1], -1});
    }
    for (std::size_t c = 0; c < compressed.size(); ++c) {
      gates.push_back({GateKind::cz, spec.trash_qubits[c % n_t], compressed[c], -1});
    }
  }
  for (int t = 0; t < n_t; ++t) {
    gates.push_back({GateKind::ry, spec.trash_qubits[t], -1, slot++});
  }
  return gates;
}

double resolve_angle(std::span<const double> theta_slice, const FeatureVector& x) {
  if (theta_slice.size() != x.size() + 1) {
    throw ArgumentError("parameter slice length " + std::to_string(theta_slice.size()) +
                        " does not match feature_dim + 1 = " + std::to_string(x.size() + 1));
  }
  double angle = theta_slice.back();
  for (std::size_t j = 0; j < x.size(); ++j) angle += theta_slice[j] * x[j];
  return angle;
}

namespace {

int circuit_depth(int n_qubits, const std::vector<BoundGate>& gates) {
  std::vector<int> busy(n_qubits, 0);
  int depth = 0;
  for (const BoundGate& g : gates) {
    int step = busy[g.q0] + 1;
    if (g.kind == GateKind::cz) step = std::max(step, busy[g.q1] + 1);
    busy[g.q0] = step;
    if (g.kind == GateKind::cz) busy[g.q1] = step;
    depth = std::max(depth, step);
  }
  return depth;
}

}  // namespace

BoundCircuit bind(const AnsatzSpec& spec, std::span<const double> theta, const FeatureVector& x) {
  if (static_cast<int>(theta.size()) != spec.total_parameter_count()) {
    throw ArgumentError("theta length " + std::to_string(theta.size()) + " does not match " +
                        std::to_string(spec.total_parameter_count()));
  }
  const bool enhanced = spec.mode == AnsatzMode::ef_qae;
  if (enhanced && static_cast<int>(x.size()) != spec.feature_dim) {
    throw ArgumentError("feature vector length " + std::to_string(x.size()) +
                        " does not match feature_dim " + std::to_string(spec.feature_dim));
  }
  static const FeatureVector no_features;
  const FeatureVector& features = enhanced ? x : no_features;
  const int pps = spec.params_per_gate();

  BoundCircuit circuit;
  circuit.n_qubits = spec.n_qubits;
  for (const SymbolicGate& g : build_layout(spec)) {
    if (g.kind == GateKind::ry) {
      const double angle = resolve_angle(theta.subspan(g.slot * pps, pps), features);
      if (!std::isfinite(angle)) {
        throw NumericError("resolved rotation angle is not finite");
      }
      circuit.gates.push_back({GateKind::ry, g.q0, -1, angle});
    } else {
      circuit.gates.push_back({GateKind::cz, g.q0, g.q1, 0.0});
    }
  }
  circuit.depth = circuit_depth(spec.n_qubits, circuit.gates);
  return circuit;
}

StateVector apply_encoder(const BoundCircuit& circuit, const StateVector& input) {
  if (input.n_qubits() != circuit.n_qubits) {
    throw ArgumentError("state has " + std::to_string(input.n_qubits()) +
                        " qubits, circuit expects " + std::to_string(circuit.n_qubits));
  }
  StateVector state = input;
  for (const BoundGate& g : circuit.gates) {
    if (g.kind == GateKind::ry) {
      state.apply_ry(g.q0, g.angle);
    } else {
      state.apply_cz(g.q0, g.q1);
    }
  }
  return state;
}

StateVector apply_decoder(const BoundCircuit& circuit, const StateVector& state) {
  if (state.n_qubits() != circuit.n_qubits) {
    throw ArgumentError("state has " + std::to_string(state.n_qubits()) +
                        " qubits, circuit expects " + std::to_string(circuit.n_qubits));
  }
  StateVector out = state;
  for (auto it = circuit.gates.rbegin(); it != circuit.gates.rend(); ++it) {
    if (it->kind == GateKind::ry) {
      out.apply_ry(it->q0, -it->angle);
    } else {
      out.apply_cz(it->q0, it->q1);
    }
  }
  return out;
}

ReconstructionResult reconstruct(const AnsatzSpec& spec, std::span<const double> theta,
                                 const FeatureVector& x, const StateVector& input) {
  const BoundCircuit circuit = bind(spec, theta, x);
  const StateVector encoded = apply_encoder(circuit, input);

  // Project the trash qubits onto |0...0> and renormalize.
  const int n = encoded.n_qubits();
  std::size_t trash_mask = 0;
  for (int q : spec.trash_qubits) trash_mask |= std::size_t{1} << (n - 1 - q);

  std::vector<complex> projected(encoded.amplitudes().begin(), encoded.amplitudes().end());
  double p = 0.0;
  for (std::size_t i = 0; i < projected.size(); ++i) {
    if (i & trash_mask) {
      projected[i] = complex(0.0, 0.0);
    } else {
      p += std::norm(projected[i]);
    }
  }
  if (p < kMinProjectionProbability) {
    throw DegenerateProjectionError("trash projection probability " + std::to_string(p) +
                                    " is below " + std::to_string(kMinProjectionProbability));
  }
  const double scale = 1.0 / std::sqrt(p);
  for (complex& a : projected) a *= scale;

  const StateVector output = apply_decoder(circuit, StateVector(n, std::move(projected)));
  return ReconstructionResult{output, fidelity(output, input)};
}

std::string format_circuit(const BoundCircuit& circuit) {
  std::string out;
  char line[96];
  for (const BoundGate& g : circuit.gates) {
    if (g.kind == GateKind::ry) {
      std::snprintf(line, sizeof(line), "RY q%d %.17g\n", g.q0, g.angle);
    } else {
      std::snprintf(line, sizeof(line), "CZ q%d q%d\n", g.q0, g.q1);
    }
    out += line;
  }
  return out;
}

}  // namespace qae
