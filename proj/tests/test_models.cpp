#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "qae/digits.hpp"
#include "qae/errors.hpp"
#include "qae/ising.hpp"
#include "qae/symmetric_eigen.hpp"
#include "test_support.hpp"

using qae::Boundary;
using qae::IsingSpec;
using qae::RealMatrix;

namespace {

/// Slow tensor-product oracle for the Ising Hamiltonian, site 0 = MSB.
RealMatrix kron_oracle(const IsingSpec& spec) {
  const int n = spec.n_sites;
  const int dim = 1 << n;

  auto embed_pair = [&](RealMatrix& h, int a, int b) {
    // Z_a Z_b term: diagonal, +1 when bits agree, -1 otherwise.
    for (int i = 0; i < dim; ++i) {
      const int bit_a = (i >> (n - 1 - a)) & 1;
      const int bit_b = (i >> (n - 1 - b)) & 1;
      h.at(i, i) += (bit_a == bit_b) ? 1.0 : -1.0;
    }
  };
  auto embed_x = [&](RealMatrix& h, int a) {
    for (int i = 0; i < dim; ++i) h.at(i, i ^ (1 << (n - 1 - a))) += spec.lambda;
  };

  RealMatrix h(dim);
  const int bonds = (spec.boundary == Boundary::open) ? n - 1 : n;
  for (int j = 0; j < bonds; ++j) embed_pair(h, j, (j + 1) % n);
  for (int j = 0; j < n; ++j) embed_x(h, j);
  return h;
}

double residual_norm(const RealMatrix& h, const qae::GroundState& gs) {
  const int dim = h.size();
  double out = 0.0;
  for (int r = 0; r < dim; ++r) {
    qae::complex hv{};
    for (int c = 0; c < dim; ++c) hv += h.at(r, c) * gs.state.amplitude(c);
    hv -= gs.energy * gs.state.amplitude(r);
    out += std::norm(hv);
  }
  return std::sqrt(out);
}

}  // namespace

TEST_CASE("hamiltonian matches the tensor-product oracle") {
  std::mt19937_64 rng(10);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  for (int trial = 0; trial < 12; ++trial) {
    IsingSpec spec;
    spec.n_sites = 2 + trial % 3;
    spec.lambda = lam(rng);
    spec.boundary = (trial % 2 == 0) ? Boundary::open : Boundary::periodic;

    RealMatrix fast = qae::build_ising_hamiltonian(spec);
    RealMatrix slow = kron_oracle(spec);
    REQUIRE(fast.size() == slow.size());
    for (int r = 0; r < fast.size(); ++r)
      for (int c = 0; c < fast.size(); ++c)
        CHECK(std::abs(fast.at(r, c) - slow.at(r, c)) <= 1e-13);
    CHECK(fast.is_symmetric(0.0));
  }
}

TEST_CASE("two-site hamiltonian is the exact diagonal plus flips") {
  IsingSpec spec;
  spec.n_sites = 2;
  spec.lambda = 0.0;
  RealMatrix h = qae::build_ising_hamiltonian(spec);
  CHECK(h.at(0, 0) == 1.0);
  CHECK(h.at(1, 1) == -1.0);
  CHECK(h.at(2, 2) == -1.0);
  CHECK(h.at(3, 3) == 1.0);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c)
      if (r != c) CHECK(h.at(r, c) == 0.0);

  CHECK(qae::ground_state(spec).energy == doctest::Approx(-1.0));
}

TEST_CASE("hamiltonian size and field validation") {
  IsingSpec tiny;
  tiny.n_sites = 1;
  CHECK_THROWS_AS(qae::build_ising_hamiltonian(tiny), qae::ArgumentError);

  IsingSpec huge;
  huge.n_sites = 15;
  CHECK_THROWS_AS(qae::build_ising_hamiltonian(huge), qae::CapacityError);

  IsingSpec negative;
  negative.lambda = -0.5;
  CHECK_THROWS_AS(qae::build_ising_hamiltonian(negative), qae::ArgumentError);
}

TEST_CASE("classical limit has the Neel ground state") {
  IsingSpec spec;  // 6 sites, lambda 0, open
  qae::GroundState gs = qae::ground_state(spec);
  CHECK(std::abs(gs.energy - (-5.0)) < 1e-10);

  // All weight on the two alternating configurations 010101 and 101010.
  const double neel_weight =
      std::norm(gs.state.amplitude(0b010101)) + std::norm(gs.state.amplitude(0b101010));
  CHECK(neel_weight == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("strong-field limit approaches the product of X eigenstates") {
  IsingSpec spec;
  spec.lambda = 1000.0;
  qae::GroundState gs = qae::ground_state(spec);
  CHECK(gs.energy == doctest::Approx(-6000.0).epsilon(0.01));
}

TEST_CASE("critical-region energy regression value") {
  IsingSpec spec;
  spec.lambda = 0.75;
  qae::GroundState gs = qae::ground_state(spec);
  // Frozen against an independent dense eigensolver.
  CHECK(std::abs(gs.energy - (-6.252159446400803)) < 1e-9);
}

TEST_CASE("ground states satisfy the eigenpair residual bound") {
  for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0, 1.5}) {
    for (int n : {4, 6}) {
      IsingSpec spec;
      spec.n_sites = n;
      spec.lambda = lambda;
      qae::GroundState gs = qae::ground_state(spec);
      RealMatrix h = qae::build_ising_hamiltonian(spec);
      CHECK(residual_norm(h, gs) < 1e-10);
      CHECK(std::abs(gs.state.norm_squared() - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("ground-state energy is non-increasing in the field") {
  IsingSpec spec;
  spec.n_sites = 5;
  double previous = qae::ground_state(spec).energy;
  for (double lambda : {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0}) {
    spec.lambda = lambda;
    const double energy = qae::ground_state(spec).energy;
    CHECK(energy <= previous + 1e-12);
    previous = energy;
  }
}

TEST_CASE("ground-state phase and value are deterministic") {
  IsingSpec spec;
  spec.lambda = 0.6;
  qae::GroundState a = qae::ground_state(spec);
  qae::GroundState b = qae::ground_state(spec);
  CHECK(a.energy == b.energy);
  for (std::size_t i = 0; i < a.state.dim(); ++i)
    CHECK(a.state.amplitude(i) == b.state.amplitude(i));

  // First amplitude above threshold is real positive.
  for (std::size_t i = 0; i < a.state.dim(); ++i) {
    const qae::complex amp = a.state.amplitude(i);
    if (std::abs(amp) > 1e-12) {
      CHECK(amp.imag() == 0.0);
      CHECK(amp.real() > 0.0);
      break;
    }
  }
}

TEST_CASE("lambda grids cover the range as specified") {
  const std::vector<double> train = qae::training_lambda_grid(20, 0.5, 1.0);
  REQUIRE(train.size() == 20);
  CHECK(train.front() == 0.5);
  CHECK(train.back() == 1.0);
  const double step = 0.5 / 19.0;
  for (std::size_t i = 1; i < train.size(); ++i)
    CHECK(train[i] - train[i - 1] == doctest::Approx(step).epsilon(1e-12));

  CHECK(qae::training_lambda_grid(2, 0.5, 1.0) == std::vector<double>{0.5, 1.0});

  const std::vector<double> test = qae::test_lambda_grid(60, 0.5, 1.0);
  REQUIRE(test.size() == 60);
  CHECK(test.front() == doctest::Approx(0.5 + 0.25 / 60.0));
  CHECK(test.back() < 1.0);
  for (double t : test) {
    CHECK(t > 0.5);
    CHECK(t < 1.0);
    double nearest = 1.0;
    for (double tr : train) nearest = std::min(nearest, std::abs(t - tr));
    CHECK(nearest > 1e-9);  // held-out points never coincide with training
  }

  CHECK_THROWS_AS(qae::training_lambda_grid(1, 0.5, 1.0), qae::ArgumentError);
  CHECK_THROWS_AS(qae::test_lambda_grid(0, 0.5, 1.0), qae::ArgumentError);
  CHECK_THROWS_AS(qae::training_lambda_grid(5, -0.1, 1.0), qae::ArgumentError);
  CHECK_THROWS_AS(qae::training_lambda_grid(5, 1.0, 0.5), qae::ArgumentError);
}

TEST_CASE("ising training sets carry states, features, and tags") {
  IsingSpec spec;
  qae::TrainingSet set = qae::build_ising_training_set(4, 0.5, 1.0, spec);
  REQUIRE(set.size() == 4);
  CHECK(set.n_qubits() == 6);
  CHECK(set.feature_dim() == 1);
  CHECK(set.entries[0].feature == qae::FeatureVector{0.5});
  CHECK(set.entries[3].feature == qae::FeatureVector{1.0});
  CHECK(set.entries[0].tag == "lambda=0.500000");
  CHECK(set.entries[3].tag == "lambda=1.000000");
  CHECK_NOTHROW(set.validate());

  qae::TrainingSet held_out = qae::build_ising_test_set(3, 0.5, 1.0, spec);
  REQUIRE(held_out.size() == 3);
  CHECK(held_out.entries[1].feature == qae::FeatureVector{0.75});
}

TEST_CASE("amplitude encoding maps pixels to amplitudes") {
  qae::DigitImage img;
  img.pixels[0] = 16;
  qae::StateVector s = qae::amplitude_encode(img);
  CHECK(s.n_qubits() == 6);
  CHECK(std::abs(s.amplitude(0) - qae::complex{1.0}) < 1e-15);

  qae::DigitImage uniform;
  uniform.pixels.fill(4);
  qae::StateVector u = qae::amplitude_encode(uniform);
  for (std::size_t i = 0; i < 64; ++i)
    CHECK(std::abs(u.amplitude(i) - qae::complex{0.125}) < 1e-15);

  qae::DigitImage spot;
  spot.pixels[5] = 7;
  qae::StateVector sp = qae::amplitude_encode(spot);
  CHECK(std::abs(sp.amplitude(5) - qae::complex{1.0}) < 1e-15);

  // Pixel ratios survive normalization.
  std::mt19937_64 rng(3);
  qae::DigitImage noisy;
  double norm_sq = 0.0;
  for (auto& p : noisy.pixels) {
    p = std::uniform_int_distribution<int>(0, 16)(rng);
    norm_sq += static_cast<double>(p) * p;
  }
  const double norm = std::sqrt(norm_sq);
  qae::StateVector ns = qae::amplitude_encode(noisy);
  for (std::size_t i = 0; i < 64; ++i)
    CHECK(std::abs(ns.amplitude(i).real() * norm - noisy.pixels[i]) < 1e-12);

  qae::DigitImage blank;
  CHECK_THROWS_AS(qae::amplitude_encode(blank), qae::ArgumentError);
}

TEST_CASE("digit fixtures load with the expected shape") {
  const auto train = qae::load_digits(qae_test::test_data_dir() / "digits_train.csv");
  REQUIRE(train.size() == 20);
  const auto test = qae::load_digits(qae_test::test_data_dir() / "digits_test.csv");
  REQUIRE(test.size() == 60);

  int zeros = 0;
  for (const auto& img : train) {
    CHECK((img.label == 0 || img.label == 1));
    if (img.label == 0) ++zeros;
    for (int p : img.pixels) {
      CHECK(p >= 0);
      CHECK(p <= 16);
    }
  }
  CHECK(zeros == 10);

  int test_zeros = 0;
  for (const auto& img : test)
    if (img.label == 0) ++test_zeros;
  CHECK(test_zeros == 30);
}

TEST_CASE("digits CSV parsing reports offending lines") {
  qae_test::TempDir dir("digits_csv");
  auto make_line = [](int first_pixel, int label) {
    std::string line = std::to_string(first_pixel);
    for (int i = 1; i < 64; ++i) line += ",0";
    line += "," + std::to_string(label);
    return line;
  };
  const std::string good = make_line(16, 0);

  const auto path = dir.path / "case.csv";

  qae_test::write_text_file(path, "");
  CHECK(qae::load_digits(path).empty());

  qae_test::write_text_file(path, good + "\n\n" + make_line(3, 1) + "\n");
  CHECK(qae::load_digits(path).size() == 2);  // blank lines are skipped

  qae_test::write_text_file(path, good + "\n" + make_line(17, 0) + "\n");
  CHECK_THROWS_WITH_AS(qae::load_digits(path),
                       doctest::Contains("line 2"), qae::ParseError);

  qae_test::write_text_file(path, make_line(5, 3) + "\n");
  CHECK_THROWS_WITH_AS(qae::load_digits(path),
                       doctest::Contains("line 1"), qae::ParseError);

  std::string short_line = "1";
  for (int i = 1; i < 64; ++i) short_line += ",0";  // 64 fields, no label
  qae_test::write_text_file(path, short_line + "\n");
  CHECK_THROWS_AS(qae::load_digits(path), qae::ParseError);

  qae_test::write_text_file(path, good + "\n" + "a" + good.substr(1) + "\n");
  CHECK_THROWS_AS(qae::load_digits(path), qae::ParseError);

  CHECK_THROWS_AS(qae::load_digits(dir.path / "missing.csv"), qae::IoError);
}

TEST_CASE("digits training set encodes labels as features") {
  qae::DigitImage zero;
  zero.pixels[0] = 8;
  zero.label = 0;
  qae::DigitImage one;
  one.pixels[1] = 8;
  one.label = 1;

  qae::TrainingSet set = qae::build_digits_training_set({zero, one, zero});
  REQUIRE(set.size() == 3);
  CHECK(set.entries[0].feature == qae::FeatureVector{1.0});
  CHECK(set.entries[1].feature == qae::FeatureVector{2.0});
  CHECK(set.entries[2].feature == qae::FeatureVector{1.0});
  CHECK(set.entries[0].tag == "digit0_00");
  CHECK(set.entries[1].tag == "digit1_01");
  CHECK(set.entries[2].tag == "digit0_02");

  CHECK_THROWS_AS(qae::build_digits_training_set({}), qae::ArgumentError);
}

TEST_CASE("eigensolver handles degenerate and clustered spectra") {
  // Permutation-symmetric matrix with known spectrum {-1, -1, 2} style
  // degeneracy: J = all-ones 3x3 has eigenvalues {0, 0, 3}.
  RealMatrix j(3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) j.at(r, c) = 1.0;
  qae::SymmetricEigenResult res = qae::symmetric_eigen(j);
  REQUIRE(res.values.size() == 3);
  CHECK(res.values[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.values[1] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(res.values[2] == doctest::Approx(3.0).epsilon(1e-12));

  // Eigenvector columns are orthonormal.
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double dot = 0.0;
      for (int r = 0; r < 3; ++r) dot += res.vectors.at(r, a) * res.vectors.at(r, b);
      CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-12));
    }
}
