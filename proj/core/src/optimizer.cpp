#include "qae/optimizer.hpp"

#include <cmath>
#include <random>
#include <string>

#include "qae/cost.hpp"

namespace qae {

void OptimizerConfig::validate() const {
  if (max_evaluations < 1) {
    throw ArgumentError("max_evaluations must be positive");
  }
  if (!(gradient_tolerance > 0.0)) {
    throw ArgumentError("gradient_tolerance must be positive");
  }
  if (!(0.0 < wolfe_c1 && wolfe_c1 < wolfe_c2 && wolfe_c2 < 1.0)) {
    throw ArgumentError("Wolfe constants must satisfy 0 < c1 < c2 < 1");
  }
  if (!(initial_hessian_scale > 0.0)) {
    throw ArgumentError("initial_hessian_scale must be positive");
  }
}

const char* to_string(TerminationReason reason) {
  switch (reason) {
    case TerminationReason::gradient_converged:
      return "gradient_converged";
    case TerminationReason::max_evals:
      return "max_evals";
    case TerminationReason::line_search_failed:
      return "line_search_failed";
  }
  return "unknown";
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Counts objective evaluations, streams them to the trace, enforces
// finiteness. Gradient probe costs count as objective evaluations.
class Evaluator {
 public:
  Evaluator(const ObjectiveFn& objective, const GradientFn& gradient,
            const OptimizerConfig& config, const TraceSink& sink,
            std::vector<TraceRecord>& trace)
      : objective_(objective), gradient_(gradient), config_(config), sink_(sink), trace_(trace) {}

  bool exhausted() const { return count_ >= config_.max_evaluations; }
  std::int64_t count() const { return count_; }

  double value(std::span<const double> x) {
    const double f = objective_(x);
    if (!std::isfinite(f)) {
      throw NumericError("objective returned non-finite value " + std::to_string(f) +
                         " at evaluation " + std::to_string(count_ + 1));
    }
    record(f);
    return f;
  }

  GradientEval grad(std::span<const double> x) {
    GradientEval eval = gradient_(x);
    if (eval.gradient.size() != x.size()) {
      throw ArgumentError("gradient length " + std::to_string(eval.gradient.size()) +
                          " does not match parameter count " + std::to_string(x.size()));
    }
    for (double g : eval.gradient) {
      if (!std::isfinite(g)) {
        throw NumericError("gradient returned non-finite component");
      }
    }
    for (double c : eval.probe_costs) {
      if (!std::isfinite(c)) {
        throw NumericError("gradient probe returned non-finite cost");
      }
      record(c);
    }
    return eval;
  }

 private:
  void record(double cost) {
    const TraceRecord rec{++count_, cost};
    trace_.push_back(rec);
    if (sink_) sink_(rec);
  }

  const ObjectiveFn& objective_;
  const GradientFn& gradient_;
  const OptimizerConfig& config_;
  const TraceSink& sink_;
  std::vector<TraceRecord>& trace_;
  std::int64_t count_ = 0;
};

struct LineSearchOutcome {
  enum class Status { accepted, failed, budget };
  Status status = Status::failed;
  double alpha = 0.0;
  double f = 0.0;
  std::vector<double> gradient;
};

class LineSearch {
 public:
  LineSearch(Evaluator& ev, std::span<const double> x, std::span<const double> p, double f0,
             double dphi0, const OptimizerConfig& config)
      : ev_(ev), x_(x), p_(p), f0_(f0), dphi0_(dphi0), config_(config), trial_(x.size()) {}

  // Strong-Wolfe search: bracketing phase with step doubling, then zoom with
  // safeguarded quadratic interpolation.
  LineSearchOutcome run() {
    double a_prev = 0.0;
    double f_prev = f0_;
    double d_prev = dphi0_;
    double a = 1.0;
    constexpr double kAlphaMax = 1e4;
    constexpr int kMaxBracket = 20;

    for (int iter = 1; iter <= kMaxBracket; ++iter) {
      if (ev_.exhausted()) return {LineSearchOutcome::Status::budget};
      const double fa = phi(a);
      if (fa > f0_ + config_.wolfe_c1 * a * dphi0_ || (iter > 1 && fa >= f_prev)) {
        return zoom(a_prev, f_prev, d_prev, a, fa);
      }
      if (ev_.exhausted()) return {LineSearchOutcome::Status::budget};
      std::vector<double> ga = grad_at_trial();
      const double da = dot(ga, p_);
      if (std::abs(da) <= -config_.wolfe_c2 * dphi0_) {
        return {LineSearchOutcome::Status::accepted, a, fa, std::move(ga)};
      }
      if (da >= 0.0) {
        return zoom(a, fa, da, a_prev, f_prev);
      }
      a_prev = a;
      f_prev = fa;
      d_prev = da;
      if (a >= kAlphaMax) break;
      a = std::min(2.0 * a, kAlphaMax);
    }
    return {LineSearchOutcome::Status::failed};
  }

 private:
  double phi(double a) {
    for (std::size_t i = 0; i < x_.size(); ++i) trial_[i] = x_[i] + a * p_[i];
    return ev_.value(trial_);
  }

  std::vector<double> grad_at_trial() { return ev_.grad(trial_).gradient; }

  LineSearchOutcome zoom(double a_lo, double f_lo, double d_lo, double a_hi, double f_hi) {
    constexpr int kMaxZoom = 30;
    for (int j = 0; j < kMaxZoom; ++j) {
      const double lo = std::min(a_lo, a_hi);
      const double hi = std::max(a_lo, a_hi);
      if (hi - lo < 1e-14 * std::max(1.0, hi)) {
        return {LineSearchOutcome::Status::failed};
      }

      // Minimizer of the quadratic through (a_lo, f_lo, d_lo) and (a_hi, f_hi),
      // bisection when the interpolant is degenerate or lands too close to an
      // endpoint.
      const double delta = a_hi - a_lo;
      double a = a_lo + 0.5 * delta;
      const double denom = 2.0 * (f_hi - f_lo - d_lo * delta);
      if (denom != 0.0) {
        const double t = -d_lo * delta * delta / denom;
        const double candidate = a_lo + t;
        const double margin = 0.1 * (hi - lo);
        if (std::isfinite(candidate) && candidate >= lo + margin && candidate <= hi - margin) {
          a = candidate;
        }
      }

      if (ev_.exhausted()) return {LineSearchOutcome::Status::budget};
      const double fa = phi(a);
      if (fa > f0_ + config_.wolfe_c1 * a * dphi0_ || fa >= f_lo) {
        a_hi = a;
        f_hi = fa;
      } else {
        if (ev_.exhausted()) return {LineSearchOutcome::Status::budget};
        std::vector<double> ga = grad_at_trial();
        const double da = dot(ga, p_);
        if (std::abs(da) <= -config_.wolfe_c2 * dphi0_) {
          return {LineSearchOutcome::Status::accepted, a, fa, std::move(ga)};
        }
        if (da * (a_hi - a_lo) >= 0.0) {
          a_hi = a_lo;
          f_hi = f_lo;
        }
        a_lo = a;
        f_lo = fa;
        d_lo = da;
      }
    }
    return {LineSearchOutcome::Status::failed};
  }

  Evaluator& ev_;
  std::span<const double> x_;
  std::span<const double> p_;
  double f0_;
  double dphi0_;
  const OptimizerConfig& config_;
  std::vector<double> trial_;
};

// Inverse-Hessian approximation, dense and symmetric.
class InverseHessian {
 public:
  InverseHessian(std::size_t dim, double scale) : dim_(dim) { reset(scale); }

  void reset(double scale) {
    h_.assign(dim_ * dim_, 0.0);
    for (std::size_t i = 0; i < dim_; ++i) h_[i * dim_ + i] = scale;
  }

  std::vector<double> apply(std::span<const double> v) const {
    std::vector<double> out(dim_, 0.0);
    for (std::size_t r = 0; r < dim_; ++r) {
      double s = 0.0;
      const double* row = &h_[r * dim_];
      for (std::size_t c = 0; c < dim_; ++c) s += row[c] * v[c];
      out[r] = s;
    }
    return out;
  }

  // H <- (I - rho s y^T) H (I - rho y s^T) + rho s s^T
  void update(std::span<const double> s, std::span<const double> y) {
    const double sy = dot(s, y);
    const double rho = 1.0 / sy;
    std::vector<double> hy = apply(y);
    const double yhy = dot(y, hy);
    // Expanded form: H - rho (s hy^T + hy s^T) + rho^2 yhy s s^T + rho s s^T
    const double c = rho * rho * yhy + rho;
    for (std::size_t r = 0; r < dim_; ++r) {
      for (std::size_t col = 0; col < dim_; ++col) {
        h_[r * dim_ + col] += c * s[r] * s[col] - rho * (s[r] * hy[col] + hy[r] * s[col]);
      }
    }
  }

 private:
  std::size_t dim_;
  std::vector<double> h_;
};

}  // namespace

OptimizationResult bfgs_minimize(const ObjectiveFn& objective, const GradientFn& gradient,
                                 ParameterVector theta0, const OptimizerConfig& config,
                                 const TraceSink& sink) {
  config.validate();
  for (double v : theta0) {
    if (!std::isfinite(v)) {
      throw ArgumentError("theta0 contains a non-finite component");
    }
  }

  OptimizationResult result;
  Evaluator ev(objective, gradient, config, sink, result.trace);

  std::vector<double> x = std::move(theta0);
  double f = ev.value(x);
  std::vector<double> g = ev.grad(x).gradient;

  InverseHessian hessian(x.size(), config.initial_hessian_scale);

  result.theta_opt = x;
  result.final_cost = f;
  result.termination = TerminationReason::max_evals;
  result.accepted_costs.push_back(f);

  while (true) {
    if (norm_inf(g) <= config.gradient_tolerance) {
      result.termination = TerminationReason::gradient_converged;
      break;
    }
    if (ev.exhausted()) {
      result.termination = TerminationReason::max_evals;
      break;
    }

    std::vector<double> p = hessian.apply(g);
    for (double& v : p) v = -v;
    double dphi0 = dot(g, p);
    if (dphi0 >= 0.0) {
      // Curvature information went stale; fall back to steepest descent.
      hessian.reset(config.initial_hessian_scale);
      p = g;
      for (double& v : p) v = -v * config.initial_hessian_scale;
      dphi0 = dot(g, p);
      if (dphi0 >= 0.0) {
        result.termination = TerminationReason::gradient_converged;
        break;
      }
    }

    LineSearchOutcome ls = LineSearch(ev, x, p, f, dphi0, config).run();
    if (ls.status == LineSearchOutcome::Status::budget) {
      result.termination = TerminationReason::max_evals;
      break;
    }
    if (ls.status == LineSearchOutcome::Status::failed) {
      result.termination = TerminationReason::line_search_failed;
      break;
    }

    std::vector<double> s(x.size());
    std::vector<double> y(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
      s[i] = ls.alpha * p[i];
      x[i] += s[i];
      y[i] = ls.gradient[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * norm2(s) * norm2(y)) {
      hessian.update(s, y);
    }
    f = ls.f;
    g = std::move(ls.gradient);
    ++result.iterations;
    result.theta_opt = x;
    result.final_cost = f;
    result.accepted_costs.push_back(f);
  }

  return result;
}

GradientEval gradient_parameter_shift(const AnsatzSpec& spec, std::span<const double> theta,
                                      const TrainingSet& training_set) {
  training_set.validate();
  if (training_set.n_qubits() != spec.n_qubits) {
    throw ArgumentError("training states have " + std::to_string(training_set.n_qubits()) +
                        " qubits, ansatz expects " + std::to_string(spec.n_qubits));
  }
  if (spec.mode == AnsatzMode::ef_qae && training_set.feature_dim() != spec.feature_dim) {
    throw ArgumentError("training feature dimension does not match ansatz feature_dim");
  }

  const std::size_t n_entries = training_set.size();
  const int n_gates = spec.rotation_gate_count();
  const int pps = spec.params_per_gate();
  const double inv_n = 1.0 / static_cast<double>(n_entries);

  std::vector<BoundCircuit> circuits;
  circuits.reserve(n_entries);
  for (const TrainingEntry& entry : training_set.entries) {
    circuits.push_back(bind(spec, theta, entry.feature));
  }

  // Rotation gates appear in slot order within the layout.
  std::vector<std::size_t> slot_to_gate;
  slot_to_gate.reserve(n_gates);
  for (std::size_t i = 0; i < circuits.front().gates.size(); ++i) {
    if (circuits.front().gates[i].kind == GateKind::ry) slot_to_gate.push_back(i);
  }

  GradientEval out;
  out.gradient.assign(theta.size(), 0.0);
  out.probe_costs.reserve(2 * static_cast<std::size_t>(n_gates));

  constexpr double kShift = M_PI / 2.0;
  std::vector<double> dphi(n_entries, 0.0);
  for (int g = 0; g < n_gates; ++g) {
    const std::size_t gate_index = slot_to_gate[g];
    double plus_sum = 0.0;
    double minus_sum = 0.0;
    for (std::size_t i = 0; i < n_entries; ++i) {
      BoundCircuit& circuit = circuits[i];
      const double original = circuit.gates[gate_index].angle;

      circuit.gates[gate_index].angle = original + kShift;
      const double cost_plus =
          local_cost(apply_encoder(circuit, training_set.entries[i].state), spec.trash_qubits);
      circuit.gates[gate_index].angle = original - kShift;
      const double cost_minus =
          local_cost(apply_encoder(circuit, training_set.entries[i].state), spec.trash_qubits);
      circuit.gates[gate_index].angle = original;

      plus_sum += cost_plus;
      minus_sum += cost_minus;
      dphi[i] = 0.5 * (cost_plus - cost_minus);
    }
    out.probe_costs.push_back(plus_sum * inv_n);
    out.probe_costs.push_back(minus_sum * inv_n);

    const std::size_t base = static_cast<std::size_t>(g) * pps;
    if (spec.mode == AnsatzMode::qae) {
      double sum = 0.0;
      for (std::size_t i = 0; i < n_entries; ++i) sum += dphi[i];
      out.gradient[base] = sum * inv_n;
    } else {
      for (int j = 0; j < spec.feature_dim; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n_entries; ++i) {
          sum += training_set.entries[i].feature[j] * dphi[i];
        }
        out.gradient[base + j] = sum * inv_n;
      }
      double sum = 0.0;
      for (std::size_t i = 0; i < n_entries; ++i) sum += dphi[i];
      out.gradient[base + spec.feature_dim] = sum * inv_n;
    }
  }
  return out;
}

ParameterVector init_random_uniform(const AnsatzSpec& spec, std::uint64_t seed) {
  spec.validate();
  std::mt19937_64 rng(seed);
  ParameterVector theta(spec.total_parameter_count());
  for (double& v : theta) {
    // 53-bit mantissa draw in [0, 1); stable across platforms, unlike
    // std::uniform_real_distribution.
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v = 2.0 * M_PI * u;
  }
  return theta;
}

ParameterVector warm_start_parameters(const AnsatzSpec& ef_spec,
                                      std::span<const double> qae_theta) {
  ef_spec.validate();
  if (ef_spec.mode != AnsatzMode::ef_qae) {
    throw ArgumentError("warm start targets an EF-QAE ansatz");
  }
  if (static_cast<int>(qae_theta.size()) != ef_spec.rotation_gate_count()) {
    throw ArgumentError("warm start source has " + std::to_string(qae_theta.size()) +
                        " parameters, expected one per rotation gate (" +
                        std::to_string(ef_spec.rotation_gate_count()) + ")");
  }
  const int pps = ef_spec.params_per_gate();
  ParameterVector theta(ef_spec.total_parameter_count(), 0.0);
  for (int g = 0; g < ef_spec.rotation_gate_count(); ++g) {
    theta[static_cast<std::size_t>(g) * pps + ef_spec.feature_dim] = qae_theta[g];
  }
  return theta;
}

}  // namespace qae
