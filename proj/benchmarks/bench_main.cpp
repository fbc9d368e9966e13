// Microbenchmarks for the hot paths: single-gate application across state
// sizes, the averaged training cost, one parameter-shift gradient, and a
// dense ground-state solve.

#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "qae/ansatz.hpp"
#include "qae/cost.hpp"
#include "qae/ising.hpp"
#include "qae/optimizer.hpp"
#include "qae/statevector.hpp"

namespace {

qae::StateVector random_state(int n_qubits, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<qae::complex> amps(std::size_t{1} << n_qubits);
  double norm_sq = 0.0;
  for (auto& a : amps) {
    a = {normal(rng), normal(rng)};
    norm_sq += std::norm(a);
  }
  const double scale = 1.0 / std::sqrt(norm_sq);
  for (auto& a : amps) a *= scale;
  return qae::StateVector(n_qubits, std::move(amps));
}

qae::TrainingSet ising_set(int n_states) {
  qae::IsingSpec spec;
  return qae::build_ising_training_set(n_states, 0.5, 1.0, spec);
}

void bm_apply_ry(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  qae::StateVector s = random_state(n, rng);
  int qubit = 0;
  for (auto _ : state) {
    s.apply_ry(qubit, 0.137);
    qubit = (qubit + 1) % n;
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(bm_apply_ry)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

void bm_apply_cz(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::mt19937_64 rng(7);
  qae::StateVector s = random_state(n, rng);
  for (auto _ : state) {
    s.apply_cz(0, n - 1);
    benchmark::DoNotOptimize(s);
  }
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << n));
}
BENCHMARK(bm_apply_cz)->Arg(8)->Arg(12)->Arg(16)->Arg(20);

void bm_averaged_cost(benchmark::State& state) {
  const auto set = ising_set(20);
  const auto spec = qae::AnsatzSpec::qae(6, 2, 3);
  std::vector<double> theta = qae::init_random_uniform(spec, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qae::averaged_cost(spec, theta, set).averaged_cost);
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(set.size()));
}
BENCHMARK(bm_averaged_cost);

void bm_gradient_parameter_shift(benchmark::State& state) {
  const auto set = ising_set(20);
  const auto spec = qae::AnsatzSpec::ef_qae(6, 2, 3, 1);
  std::vector<double> theta = qae::init_random_uniform(spec, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(qae::gradient_parameter_shift(spec, theta, set).gradient);
  }
}
BENCHMARK(bm_gradient_parameter_shift);

void bm_ground_state(benchmark::State& state) {
  qae::IsingSpec spec;
  spec.n_sites = static_cast<int>(state.range(0));
  spec.lambda = 0.75;
  for (auto _ : state) {
    benchmark::DoNotOptimize(qae::ground_state(spec).energy);
  }
}
BENCHMARK(bm_ground_state)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
