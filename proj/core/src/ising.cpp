#include "qae/ising.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "qae/errors.hpp"

namespace qae {

namespace {

constexpr int kMaxDenseSites = 14;
constexpr double kResidualTolerance = 1e-10;
constexpr double kPhaseTolerance = 1e-12;

std::string lambda_tag(double lambda) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "lambda=%.6f", lambda);
  return buf;
}

void check_grid_args(int n_states, int min_states, double lambda_min, double lambda_max) {
  if (n_states < min_states) {
    throw ArgumentError("n_states must be at least " + std::to_string(min_states));
  }
  if (!std::isfinite(lambda_min) || !std::isfinite(lambda_max) || lambda_min < 0.0 ||
      !(lambda_min < lambda_max)) {
    throw ArgumentError("lambda range must satisfy 0 <= lambda_min < lambda_max");
  }
}

TrainingSet set_from_grid(const std::vector<double>& grid, const IsingSpec& spec_template) {
  TrainingSet set;
  set.entries.reserve(grid.size());
  for (double lambda : grid) {
    IsingSpec spec = spec_template;
    spec.lambda = lambda;
    GroundState gs = ground_state(spec);
    set.entries.push_back({std::move(gs.state), {lambda}, lambda_tag(lambda)});
  }
  return set;
}

}  // namespace

void IsingSpec::validate() const {
  if (n_sites < 2) {
    throw ArgumentError("Ising chain needs at least 2 sites, got " + std::to_string(n_sites));
  }
  if (n_sites > kMaxDenseSites) {
    throw CapacityError("dense Hamiltonian limited to " + std::to_string(kMaxDenseSites) +
                        " sites, got " + std::to_string(n_sites));
  }
  if (!std::isfinite(lambda) || lambda < 0.0) {
    throw ArgumentError("transverse field must be finite and non-negative");
  }
}

RealMatrix build_ising_hamiltonian(const IsingSpec& spec) {
  spec.validate();
  const int n = spec.n_sites;
  const int dim = 1 << n;
  RealMatrix h(dim);

  const int n_bonds = (spec.boundary == Boundary::open) ? n - 1 : n;
  for (int i = 0; i < dim; ++i) {
    // Z_j eigenvalue on basis state i: +1 for bit 0, -1 for bit 1.
    double zz = 0.0;
    for (int b = 0; b < n_bonds; ++b) {
      const int j = b;
      const int k = (b + 1) % n;
      const int bit_j = (i >> (n - 1 - j)) & 1;
      const int bit_k = (i >> (n - 1 - k)) & 1;
      zz += (bit_j == bit_k) ? 1.0 : -1.0;
    }
    h.at(i, i) = zz;

    // X_j flips bit j and contributes lambda off the diagonal.
    if (spec.lambda != 0.0) {
      for (int j = 0; j < n; ++j) {
        const int flipped = i ^ (1 << (n - 1 - j));
        h.at(i, flipped) += spec.lambda;
      }
    }
  }
  return h;
}

GroundState ground_state(const IsingSpec& spec) {
  const RealMatrix h = build_ising_hamiltonian(spec);
  const SymmetricEigenResult eig = symmetric_eigen(h);

  const int dim = h.size();
  const double energy = eig.values[0];

  std::vector<complex> amps(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    amps[static_cast<std::size_t>(i)] = complex(eig.vectors.at(i, 0), 0.0);
  }

  // Fix the global sign: first amplitude above threshold made positive.
  double sign = 1.0;
  for (int i = 0; i < dim; ++i) {
    const double re = amps[static_cast<std::size_t>(i)].real();
    if (std::abs(re) > kPhaseTolerance) {
      sign = (re > 0.0) ? 1.0 : -1.0;
      break;
    }
  }
  if (sign < 0.0) {
    for (complex& a : amps) a = -a;
  }

  double residual_sq = 0.0;
  for (int r = 0; r < dim; ++r) {
    double hv = 0.0;
    for (int c = 0; c < dim; ++c) {
      hv += h.at(r, c) * amps[static_cast<std::size_t>(c)].real();
    }
    const double diff = hv - energy * amps[static_cast<std::size_t>(r)].real();
    residual_sq += diff * diff;
  }
  if (std::sqrt(residual_sq) >= kResidualTolerance) {
    throw NumericError("ground-state residual " + std::to_string(std::sqrt(residual_sq)) +
                       " exceeds tolerance");
  }

  return {energy, StateVector(spec.n_sites, std::move(amps))};
}

std::vector<double> training_lambda_grid(int n_states, double lambda_min, double lambda_max) {
  check_grid_args(n_states, 2, lambda_min, lambda_max);
  std::vector<double> grid(static_cast<std::size_t>(n_states));
  const double step = (lambda_max - lambda_min) / (n_states - 1);
  for (int i = 0; i < n_states; ++i) grid[static_cast<std::size_t>(i)] = lambda_min + i * step;
  grid.back() = lambda_max;
  return grid;
}

std::vector<double> test_lambda_grid(int n_states, double lambda_min, double lambda_max) {
  check_grid_args(n_states, 1, lambda_min, lambda_max);
  std::vector<double> grid(static_cast<std::size_t>(n_states));
  const double step = (lambda_max - lambda_min) / n_states;
  for (int i = 0; i < n_states; ++i) {
    grid[static_cast<std::size_t>(i)] = lambda_min + (i + 0.5) * step;
  }
  return grid;
}

TrainingSet build_ising_training_set(int n_states, double lambda_min, double lambda_max,
                                     const IsingSpec& spec_template) {
  return set_from_grid(training_lambda_grid(n_states, lambda_min, lambda_max), spec_template);
}

TrainingSet build_ising_test_set(int n_states, double lambda_min, double lambda_max,
                                 const IsingSpec& spec_template) {
  return set_from_grid(test_lambda_grid(n_states, lambda_min, lambda_max), spec_template);
}

}  // namespace qae
