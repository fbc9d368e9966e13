#pragma once

#include <vector>

#include "qae/statevector.hpp"
#include "qae/symmetric_eigen.hpp"
#include "qae/training_set.hpp"

namespace qae {

enum class Boundary { open, periodic };

/// Transverse-field Ising chain: H = sum_j Z_j Z_{j+1} + lambda * sum_j X_j.
/// The ZZ sum runs over n-1 bonds for an open chain, n for a periodic one.
struct IsingSpec {
  int n_sites = 6;
  double lambda = 0.0;
  Boundary boundary = Boundary::open;

  void validate() const;
};

/// Dense 2^n x 2^n matrix in the computational basis (site 0 = most
/// significant bit). Real because Z and X have real entries.
RealMatrix build_ising_hamiltonian(const IsingSpec& spec);

struct GroundState {
  double energy = 0.0;
  StateVector state;
};

/// Lowest eigenpair via the in-repo symmetric eigensolver. The returned state
/// is normalized, satisfies ||Hv - Ev|| < 1e-10, and carries a deterministic
/// global phase (first amplitude above 1e-12 is real positive).
GroundState ground_state(const IsingSpec& spec);

/// Equispaced lambda grid including both endpoints; step (max-min)/(n-1).
std::vector<double> training_lambda_grid(int n_states, double lambda_min, double lambda_max);

/// Midpoints of n_states equal subintervals: lambda_min + (k+0.5)*(max-min)/n.
/// Never lands on the inclusive training grid for the default 20/60 split.
std::vector<double> test_lambda_grid(int n_states, double lambda_min, double lambda_max);

/// Ground states over the inclusive grid; feature vector per entry is the
/// one-element (lambda), tag "lambda=<value>". spec_template supplies n_sites
/// and boundary; its lambda field is ignored.
TrainingSet build_ising_training_set(int n_states, double lambda_min, double lambda_max,
                                     const IsingSpec& spec_template);

/// Same construction over the midpoint grid, for held-out evaluation.
TrainingSet build_ising_test_set(int n_states, double lambda_min, double lambda_max,
                                 const IsingSpec& spec_template);

}  // namespace qae
