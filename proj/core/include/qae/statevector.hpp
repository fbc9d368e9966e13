#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "qae/errors.hpp"

namespace qae {

using complex = std::complex<double>;

class DensityMatrix;

/// Dense pure state of n qubits as 2^n complex amplitudes.
///
/// Qubit 0 is the most significant bit of the basis-state index, so for
/// n = 2 the basis order is |00>, |01>, |10>, |11> and qubit 1 toggles the
/// low bit. Normalization is checked on construction and after every gate.
class StateVector {
 public:
  /// |0...0> on n qubits.
  explicit StateVector(int n_qubits);

  /// Takes ownership of an amplitude vector; must have length 2^n_qubits
  /// and unit norm within kNormTolerance.
  StateVector(int n_qubits, std::vector<complex> amplitudes);

  static StateVector basis_state(int n_qubits, std::uint64_t index);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amps_.size(); }
  std::span<const complex> amplitudes() const { return amps_; }
  complex amplitude(std::uint64_t basis_index) const;

  /// Bit of `qubit` inside a basis-state index (qubit 0 = MSB).
  int bit(std::uint64_t basis_index, int qubit) const;

  /// Rotation exp(-i angle Y/2): rows (cos a/2, -sin a/2), (sin a/2, cos a/2).
  void apply_ry(int qubit, double angle);

  /// Controlled-Z; symmetric in its two (distinct) qubits.
  void apply_cz(int a, int b);

  /// <Z_qubit> in [-1, 1].
  double expectation_z(int qubit) const;

  double norm_squared() const;

  static constexpr double kNormTolerance = 1e-10;

 private:
  void check_qubit(int qubit) const;
  void check_normalized() const;

  int n_qubits_;
  std::vector<complex> amps_;
};

/// Reduced state over a subset of qubits, 2^n x 2^n complex, row-major.
/// Hermiticity and unit trace are checked at construction.
class DensityMatrix {
 public:
  DensityMatrix(int n_qubits, std::vector<complex> elements);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return dim_; }
  complex at(std::size_t row, std::size_t col) const { return elems_[row * dim_ + col]; }

  double trace_real() const;

  /// Smallest eigenvalue, via the real symmetric embedding of the Hermitian
  /// matrix. Used to check positivity; not needed on any hot path.
  double min_eigenvalue() const;

  /// Frobenius distance to another matrix of the same dimension.
  double frobenius_distance(const DensityMatrix& other) const;

  static constexpr double kTolerance = 1e-10;

 private:
  int n_qubits_;
  std::size_t dim_;
  std::vector<complex> elems_;
};

/// Reduced density matrix over `keep` (all indices distinct, at least one;
/// the full set yields the pure projector). Kept qubits stay in ascending
/// order in the reduced index.
DensityMatrix partial_trace(const StateVector& state, std::span<const int> keep);

/// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

/// Marginal probability that measuring `qubits` gives `bits`.
double bitstring_probability(const StateVector& state, std::span<const int> qubits,
                             std::span<const int> bits);

}  // namespace qae
