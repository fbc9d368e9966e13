#include "qae/statevector.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qae/symmetric_eigen.hpp"

namespace qae {

namespace {

std::string index_message(const char* what, int value, int limit) {
  return std::string(what) + " " + std::to_string(value) + " out of range [0, " +
         std::to_string(limit) + ")";
}

}  // namespace

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
  if (n_qubits < 1 || n_qubits > 30) {
    throw ArgumentError("n_qubits must be in [1, 30], got " + std::to_string(n_qubits));
  }
  amps_.assign(std::size_t{1} << n_qubits, complex(0.0, 0.0));
  amps_[0] = complex(1.0, 0.0);
}

StateVector::StateVector(int n_qubits, std::vector<complex> amplitudes)
    : n_qubits_(n_qubits), amps_(std::move(amplitudes)) {
  if (n_qubits < 1 || n_qubits > 30) {
    throw ArgumentError("n_qubits must be in [1, 30], got " + std::to_string(n_qubits));
  }
  if (amps_.size() != (std::size_t{1} << n_qubits)) {
    throw ArgumentError("amplitude vector has length " + std::to_string(amps_.size()) +
                        ", expected 2^" + std::to_string(n_qubits));
  }
  check_normalized();
}

StateVector StateVector::basis_state(int n_qubits, std::uint64_t index) {
  StateVector s(n_qubits);
  if (index >= s.dim()) {
    throw IndexError("basis index " + std::to_string(index) + " out of range");
  }
  s.amps_[0] = complex(0.0, 0.0);
  s.amps_[index] = complex(1.0, 0.0);
  return s;
}

complex StateVector::amplitude(std::uint64_t basis_index) const {
  if (basis_index >= dim()) {
    throw IndexError("basis index " + std::to_string(basis_index) + " out of range");
  }
  return amps_[basis_index];
}

int StateVector::bit(std::uint64_t basis_index, int qubit) const {
  check_qubit(qubit);
  return static_cast<int>((basis_index >> (n_qubits_ - 1 - qubit)) & 1u);
}

void StateVector::check_qubit(int qubit) const {
  if (qubit < 0 || qubit >= n_qubits_) {
    throw IndexError(index_message("qubit", qubit, n_qubits_));
  }
}

void StateVector::check_normalized() const {
  const double n2 = norm_squared();
  if (std::abs(n2 - 1.0) > kNormTolerance) {
    throw NumericError("state norm^2 = " + std::to_string(n2) + " deviates from 1");
  }
}

double StateVector::norm_squared() const {
  double sum = 0.0;
  for (const complex& a : amps_) sum += std::norm(a);
  return sum;
}

void StateVector::apply_ry(int qubit, double angle) {
  check_qubit(qubit);
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const std::size_t mask = std::size_t{1} << (n_qubits_ - 1 - qubit);
  for (std::size_t base = 0; base < dim(); base += 2 * mask) {
    for (std::size_t off = 0; off < mask; ++off) {
      const std::size_t i0 = base + off;
      const std::size_t i1 = i0 + mask;
      const complex a0 = amps_[i0];
      const complex a1 = amps_[i1];
      amps_[i0] = c * a0 - s * a1;
      amps_[i1] = s * a0 + c * a1;
    }
  }
  check_normalized();
}

void StateVector::apply_cz(int a, int b) {
  check_qubit(a);
  check_qubit(b);
  if (a == b) {
    throw ArgumentError("CZ requires two distinct qubits, got " + std::to_string(a) + " twice");
  }
  const std::size_t mask =
      (std::size_t{1} << (n_qubits_ - 1 - a)) | (std::size_t{1} << (n_qubits_ - 1 - b));
  for (std::size_t i = 0; i < dim(); ++i) {
    if ((i & mask) == mask) amps_[i] = -amps_[i];
  }
  check_normalized();
}

double StateVector::expectation_z(int qubit) const {
  check_qubit(qubit);
  const std::size_t mask = std::size_t{1} << (n_qubits_ - 1 - qubit);
  double value = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double p = std::norm(amps_[i]);
    value += (i & mask) ? -p : p;
  }
  return value;
}

DensityMatrix::DensityMatrix(int n_qubits, std::vector<complex> elements)
    : n_qubits_(n_qubits), dim_(std::size_t{1} << n_qubits), elems_(std::move(elements)) {
  if (n_qubits < 1) {
    throw ArgumentError("density matrix needs at least one qubit");
  }
  if (elems_.size() != dim_ * dim_) {
    throw ArgumentError("density matrix element count " + std::to_string(elems_.size()) +
                        " does not match 4^" + std::to_string(n_qubits));
  }
  for (std::size_t r = 0; r < dim_; ++r) {
    for (std::size_t c = r; c < dim_; ++c) {
      if (std::abs(at(r, c) - std::conj(at(c, r))) > kTolerance) {
        throw NumericError("density matrix is not Hermitian within tolerance");
      }
    }
  }
  if (std::abs(trace_real() - 1.0) > kTolerance) {
    throw NumericError("density matrix trace deviates from 1");
  }
}

double DensityMatrix::trace_real() const {
  double tr = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) tr += at(i, i).real();
  return tr;
}

double DensityMatrix::min_eigenvalue() const {
  // Hermitian H embeds into the real symmetric [[Re, -Im], [Im, Re]], whose
  // spectrum is that of H with each eigenvalue doubled in multiplicity.
  const int d = static_cast<int>(dim_);
  RealMatrix m(2 * d);
  for (int r = 0; r < d; ++r) {
    for (int c = 0; c < d; ++c) {
      const complex v = at(r, c);
      m.at(r, c) = v.real();
      m.at(r + d, c + d) = v.real();
      m.at(r, c + d) = -v.imag();
      m.at(r + d, c) = v.imag();
    }
  }
  return symmetric_eigen(m).values.front();
}

double DensityMatrix::frobenius_distance(const DensityMatrix& other) const {
  if (other.dim_ != dim_) {
    throw ArgumentError("density matrix dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < elems_.size(); ++i) sum += std::norm(elems_[i] - other.elems_[i]);
  return std::sqrt(sum);
}

DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep) {
  if (keep.empty()) {
    throw ArgumentError("partial_trace requires a nonempty keep set");
  }
  const int n = state.n_qubits();
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] < 0 || kept[i] >= n) {
      throw IndexError("keep qubit " + std::to_string(kept[i]) + " out of range");
    }
    if (i > 0 && kept[i] == kept[i - 1]) {
      throw ArgumentError("keep set contains duplicate qubit " + std::to_string(kept[i]));
    }
  }

  const int k = static_cast<int>(kept.size());
  const int e = n - k;
  std::vector<int> env;
  env.reserve(e);
  for (int q = 0, j = 0; q < n; ++q) {
    if (j < k && kept[j] == q) {
      ++j;
    } else {
      env.push_back(q);
    }
  }

  // Embedding tables: reduced/environment assignments -> full-index fragments.
  const std::size_t kdim = std::size_t{1} << k;
  const std::size_t edim = std::size_t{1} << e;
  std::vector<std::size_t> kept_part(kdim, 0);
  for (std::size_t r = 0; r < kdim; ++r) {
    for (int t = 0; t < k; ++t) {
      if ((r >> (k - 1 - t)) & 1u) kept_part[r] |= std::size_t{1} << (n - 1 - kept[t]);
    }
  }
  std::vector<std::size_t> env_part(edim, 0);
  for (std::size_t v = 0; v < edim; ++v) {
    for (int u = 0; u < e; ++u) {
      if ((v >> (e - 1 - u)) & 1u) env_part[v] |= std::size_t{1} << (n - 1 - env[u]);
    }
  }

  const auto amps = state.amplitudes();
  std::vector<complex> rho(kdim * kdim, complex(0.0, 0.0));
  for (std::size_t r = 0; r < kdim; ++r) {
    for (std::size_t c = 0; c < kdim; ++c) {
      complex sum(0.0, 0.0);
      for (std::size_t v = 0; v < edim; ++v) {
        sum += amps[kept_part[r] | env_part[v]] * std::conj(amps[kept_part[c] | env_part[v]]);
      }
      rho[r * kdim + c] = sum;
    }
  }
  return DensityMatrix(k, std::move(rho));
}

double fidelity(const StateVector& a, const StateVector& b) {
  if (a.n_qubits() != b.n_qubits()) {
    throw ArgumentError("fidelity requires equal qubit counts, got " +
                        std::to_string(a.n_qubits()) + " and " + std::to_string(b.n_qubits()));
  }
  complex overlap(0.0, 0.0);
  const auto va = a.amplitudes();
  const auto vb = b.amplitudes();
  for (std::size_t i = 0; i < va.size(); ++i) overlap += std::conj(va[i]) * vb[i];
  return std::norm(overlap);
}

double bitstring_probability(const StateVector& state, std::span<const int> qubits,
                             std::span<const int> bits) {
  if (qubits.size() != bits.size()) {
    throw ArgumentError("qubit and bit lists must have equal length");
  }
  const int n = state.n_qubits();
  std::size_t mask = 0;
  std::size_t want = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const int q = qubits[i];
    if (q < 0 || q >= n) {
      throw IndexError("qubit " + std::to_string(q) + " out of range");
    }
    const std::size_t m = std::size_t{1} << (n - 1 - q);
    if (mask & m) {
      throw ArgumentError("duplicate qubit " + std::to_string(q) + " in measurement list");
    }
    if (bits[i] != 0 && bits[i] != 1) {
      throw ArgumentError("bits must be 0 or 1");
    }
    mask |= m;
    if (bits[i] == 1) want |= m;
  }
  double p = 0.0;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & mask) == want) p += std::norm(amps[i]);
  }
  return p;
}

}  // namespace qae
