#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qae/ansatz.hpp"
#include "qae/training_set.hpp"

namespace qae {

struct OptimizerConfig {
  /// Budget on objective evaluations, gradient probe evaluations included.
  std::int64_t max_evaluations = 5000;
  double gradient_tolerance = 1e-8;
  double wolfe_c1 = 1e-4;
  double wolfe_c2 = 0.9;
  double initial_hessian_scale = 1.0;
  /// Seed consumed by init_random_uniform; bfgs_minimize itself is
  /// deterministic and never draws.
  std::uint64_t seed = 0;

  void validate() const;
};

struct TraceRecord {
  std::int64_t evaluation;  // 1-based, strictly increasing
  double cost;
};

/// Called once per objective evaluation, in evaluation order.
using TraceSink = std::function<void(const TraceRecord&)>;

/// Gradient plus the objective values consumed to compute it. Analytic
/// gradients leave probe_costs empty; the parameter-shift rule reports one
/// averaged cost per shifted evaluation so the trace accounts for every
/// objective call.
struct GradientEval {
  std::vector<double> gradient;
  std::vector<double> probe_costs;
};

using ObjectiveFn = std::function<double(std::span<const double>)>;
using GradientFn = std::function<GradientEval(std::span<const double>)>;

enum class TerminationReason { gradient_converged, max_evals, line_search_failed };

const char* to_string(TerminationReason reason);

struct OptimizationResult {
  ParameterVector theta_opt;
  double final_cost = 0.0;
  std::vector<TraceRecord> trace;
  TerminationReason termination = TerminationReason::max_evals;
  std::int64_t iterations = 0;
  /// Objective at the start point followed by the value after each accepted
  /// step; strictly decreasing, ends at final_cost.
  std::vector<double> accepted_costs;
};

/// BFGS with a strong-Wolfe line search. Every objective evaluation,
/// line-search probes and gradient probe costs included, lands in the trace
/// (and the sink, when given) in evaluation order. Throws NumericError on a
/// non-finite objective value.
OptimizationResult bfgs_minimize(const ObjectiveFn& objective, const GradientFn& gradient,
                                 ParameterVector theta0, const OptimizerConfig& config,
                                 const TraceSink& sink = {});

/// Analytic gradient of the averaged cost via the parameter-shift rule:
/// per rotation gate, dC/dphi = (C(phi + pi/2) - C(phi - pi/2)) / 2, chained
/// through the linear angle encoding (weight j picks up the factor x[j]) and
/// averaged over the training set. probe_costs holds the averaged cost of
/// each shifted evaluation, two per rotation gate, in slot order (+ then -).
GradientEval gradient_parameter_shift(const AnsatzSpec& spec, std::span<const double> theta,
                                      const TrainingSet& training_set);

/// Independent draws from U(0, 2pi), reproducible from the seed alone.
ParameterVector init_random_uniform(const AnsatzSpec& spec, std::uint64_t seed);

/// Embeds a trained QAE parameter vector into an EF-QAE one: each gate's QAE
/// angle becomes the bias slot and the feature weights start at zero, so the
/// warm-started circuit initially equals the trained QAE circuit for every
/// feature vector.
ParameterVector warm_start_parameters(const AnsatzSpec& ef_spec,
                                      std::span<const double> qae_theta);

}  // namespace qae
