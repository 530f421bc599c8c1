// Copyright 2026 The mbvqe Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <span>
#include <string>
#include <thread>
#include <vector>

#include "mbvqe/circuit.hpp"
#include "mbvqe/compile.hpp"
#include "mbvqe/errors.hpp"
#include "mbvqe/executor.hpp"
#include "mbvqe/models.hpp"
#include "mbvqe/pattern.hpp"
#include "mbvqe/random.hpp"
#include "mbvqe/state_vector.hpp"

namespace mbvqe {

enum class AnsatzKind { mbhva, mbhea, cbhva };
enum class BackendKind { circuit, mbqc_forced_zero, mbqc_sampled };
enum class GradientMethod { parameter_shift, reverse_mode };

inline const char* to_string(AnsatzKind k) {
  switch (k) {
    case AnsatzKind::mbhva: return "mbhva";
    case AnsatzKind::mbhea: return "mbhea";
    default: return "cbhva";
  }
}
inline const char* to_string(BackendKind k) {
  switch (k) {
    case BackendKind::circuit: return "circuit";
    case BackendKind::mbqc_forced_zero: return "mbqc_forced_zero";
    default: return "mbqc_sampled";
  }
}
inline const char* to_string(GradientMethod g) {
  return g == GradientMethod::parameter_shift ? "parameter_shift" : "reverse_mode";
}

/// Bell pairs on consecutive qubits for the Heisenberg and Hubbard models,
/// |+...+> for the TFIM.
inline StateVector default_initial_state(const ModelSpec& m) {
  if (m.kind == ModelKind::tfim) return StateVector::plus(m.n_qubits());
  return bell_pair_initial_state(m.n_qubits(), consecutive_pairs(m.n_qubits()));
}

/// An ansatz in both representations. `circuit` and `pattern` implement the
/// same unitary on the same parameter vector.
struct Ansatz {
  AnsatzKind kind = AnsatzKind::mbhva;
  CircuitIR circuit;
  PatternIR pattern;
  StateVector input;

  int n_params() const { return circuit.n_params(); }
  int n_qubits() const { return circuit.n_qubits(); }
};

/// mbhva: compiled pattern with the CBHVA circuit as its circuit form.
/// cbhva: CBHVA circuit with the naive translation of its native lowering.
/// mbhea: compiled pattern with the reference circuit.
inline Ansatz make_ansatz(const ModelSpec& model, AnsatzKind kind, int depth,
                          bool share_parameters = false) {
  Ansatz a;
  a.kind = kind;
  a.input = default_initial_state(model);
  switch (kind) {
    case AnsatzKind::mbhva:
      a.circuit = build_cbhva(model, depth, {share_parameters});
      a.pattern = compile_mbhva(model, depth, {share_parameters});
      break;
    case AnsatzKind::cbhva:
      a.circuit = build_cbhva(model, depth, {share_parameters});
      a.pattern = translate_circuit_naive(decompose_native(a.circuit));
      break;
    case AnsatzKind::mbhea:
      if (share_parameters) throw ArgumentError("parameter sharing applies to HVA ansatze only");
      a.circuit = build_mbhea_reference_circuit(model.n_qubits(), depth);
      a.pattern = compile_mbhea(model.n_qubits(), depth);
      break;
  }
  return a;
}

struct Backend {
  BackendKind kind = BackendKind::circuit;
  std::uint64_t seed = 0;

  static Backend circuit() { return {}; }
  static Backend forced_zero() { return {BackendKind::mbqc_forced_zero, 0}; }
  static Backend sampled(std::uint64_t seed) { return {BackendKind::mbqc_sampled, seed}; }
};

/// Output state of the ansatz on the chosen backend.
inline StateVector prepare_state(const Backend& b, const Ansatz& a, std::span<const double> params) {
  switch (b.kind) {
    case BackendKind::circuit: return simulate_circuit(a.circuit, params, a.input);
    case BackendKind::mbqc_forced_zero:
      return execute_pattern(a.pattern, params, a.input, ExecutionOptions::forced_zero()).state;
    default: {
      ExecutionResult r = execute_pattern(a.pattern, params, a.input, ExecutionOptions::sampled(b.seed));
      if (r.max_outcome_bias > 1e-9)
        throw NumericalError("non-uniform measurement outcome (|p0 - 1/2| = " +
                             std::to_string(r.max_outcome_bias) + ")");
      return std::move(r.state);
    }
  }
}

inline EnergyVariance state_moments(const StateVector& s, const PauliSumOperator& op) {
  if (s.dimension() != op.dimension())
    throw ArgumentError("state and Hamiltonian sizes differ");
  const auto m = op.moments(s.amplitudes());
  return {m.energy, clamp_variance(m.variance)};
}

inline EnergyVariance energy(const Backend& b, const Ansatz& a, std::span<const double> params,
                             const PauliSumOperator& op) {
  return state_moments(prepare_state(b, a, params), op);
}

inline EnergyVariance energy(const Backend& b, const Ansatz& a, std::span<const double> params,
                             const Hamiltonian& h) {
  return energy(b, a, params, PauliSumOperator(h));
}

namespace detail {

inline void require_unit_scale(const AngleSource& s) {
  if (s.is_param() && std::abs(std::abs(s.scale) - 1.0) > 1e-15)
    throw UnsupportedParameterization("parameter " + std::to_string(s.param) +
                                      " enters with scale " + std::to_string(s.scale) +
                                      "; the shift rule needs |scale| = 1");
}

inline double expectation_only(const StateVector& s, const PauliSumOperator& op) {
  return op.expectation(s.amplitudes());
}

}  // namespace detail

/// dE/dtheta_j = sum over occurrences of scale * (E(+pi/2) - E(-pi/2)) / 2,
/// where each occurrence's rotation angle is shifted on its own.
inline std::vector<double> parameter_shift_gradient(const Backend& b, const Ansatz& a,
                                                    std::span<const double> params,
                                                    const PauliSumOperator& op) {
  if (static_cast<int>(params.size()) != a.n_params())
    throw ArgumentError("ansatz expects " + std::to_string(a.n_params()) + " parameters, got " +
                        std::to_string(params.size()));
  std::vector<double> grad(params.size(), 0.0);
  const double s = kPi / 2;
  if (b.kind == BackendKind::circuit) {
    const auto& gates = a.circuit.gates();
    for (const Gate& g : gates) detail::require_unit_scale(g.angle);
    StateVector prefix = a.input;
    for (std::size_t k = 0; k < gates.size(); ++k) {
      const Gate& g = gates[k];
      if (g.angle.is_param() && g.is_rotation()) {
        double diff = 0.0;
        for (int sign : {1, -1}) {
          Gate shifted = g;
          shifted.angle.offset += sign * s;
          StateVector t = prefix;
          apply_gate(t, shifted, params);
          for (std::size_t r = k + 1; r < gates.size(); ++r) apply_gate(t, gates[r], params);
          diff += sign * detail::expectation_only(t, op);
        }
        grad[static_cast<std::size_t>(g.angle.param)] += g.angle.scale * diff / 2;
      }
      apply_gate(prefix, g, params);
    }
    return grad;
  }
  // Pattern backends: measurement base angles are negated rotation angles.
  for (const auto& m : a.pattern.commands) detail::require_unit_scale(m.base_angle);
  PatternIR shifted = a.pattern;
  std::uint64_t k = 0;
  for (std::size_t c = 0; c < a.pattern.commands.size(); ++c) {
    const AngleSource& base = a.pattern.commands[c].base_angle;
    if (!base.is_param()) continue;
    double diff = 0.0;
    for (int sign : {1, -1}) {
      shifted.commands[c].base_angle.offset = base.offset - sign * s;
      Backend bk = b;
      if (bk.kind == BackendKind::mbqc_sampled) bk.seed = mix_seed(b.seed + ++k);
      const StateVector out =
          bk.kind == BackendKind::mbqc_forced_zero
              ? execute_pattern(shifted, params, a.input, ExecutionOptions::forced_zero()).state
              : execute_pattern(shifted, params, a.input, ExecutionOptions::sampled(bk.seed)).state;
      diff += sign * detail::expectation_only(out, op);
    }
    shifted.commands[c].base_angle.offset = base.offset;
    grad[static_cast<std::size_t>(base.param)] += -base.scale * diff / 2;
  }
  return grad;
}

inline std::vector<double> parameter_shift_gradient(const Backend& b, const Ansatz& a,
                                                    std::span<const double> params,
                                                    const Hamiltonian& h) {
  return parameter_shift_gradient(b, a, params, PauliSumOperator(h));
}

struct EnergyAndGradient {
  EnergyVariance moments;
  std::vector<double> gradient;
};

/// Exact gradient of the circuit form by one forward and one reverse sweep:
/// dE/dphi_k = Im <lambda_k| P_k |phi_k>, with phi_k the state after gate k
/// and lambda_k the back-propagated H|psi>. Agrees with the shift rule.
inline EnergyAndGradient reverse_mode_gradient(const Ansatz& a, std::span<const double> params,
                                               const PauliSumOperator& op) {
  if (static_cast<int>(params.size()) != a.n_params())
    throw ArgumentError("ansatz expects " + std::to_string(a.n_params()) + " parameters, got " +
                        std::to_string(params.size()));
  const CircuitIR& c = a.circuit;
  StateVector phi = simulate_circuit(c, params, a.input);
  StateVector lambda = phi;
  op.apply(phi.amplitudes(), lambda.amplitudes());
  EnergyAndGradient out;
  {
    double e = 0.0;
    for (std::size_t i = 0; i < phi.dimension(); ++i) e += (std::conj(phi[i]) * lambda[i]).real();
    double var = 0.0;
    for (std::size_t i = 0; i < phi.dimension(); ++i) var += std::norm(lambda[i] - e * phi[i]);
    out.moments = {e, clamp_variance(var)};
  }
  out.gradient.assign(params.size(), 0.0);
  const auto& gates = c.gates();
  StateVector tmp = phi;
  for (std::size_t k = gates.size(); k-- > 0;) {
    const Gate& g = gates[k];
    if (g.angle.is_param() && g.is_rotation()) {
      tmp = phi;
      if (g.kind == GateKind::axis_rotation)
        apply_pauli(tmp, g.q0, g.axis);
      else
        apply_pauli_string(tmp, g.generator);
      const double d = inner_product(lambda, tmp).imag();
      out.gradient[static_cast<std::size_t>(g.angle.param)] += g.angle.scale * d;
    }
    Gate inv = g;
    if (g.is_rotation()) inv.angle = g.angle.negated();
    apply_gate(phi, inv, params);
    apply_gate(lambda, inv, params);
  }
  return out;
}

struct AdamConfig {
  double lr = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  int t = 0;
};

/// One bias-corrected Adam update, in place.
inline void adam_step(const AdamConfig& cfg, AdamState& st, std::vector<double>& params,
                      std::span<const double> grad) {
  if (!(cfg.lr > 0) || cfg.beta1 < 0 || cfg.beta1 >= 1 || cfg.beta2 < 0 || cfg.beta2 >= 1)
    throw ArgumentError("invalid Adam hyperparameters");
  if (grad.size() != params.size()) throw ArgumentError("gradient and parameter sizes differ");
  if (st.m.empty() && st.v.empty() && st.t == 0) {
    st.m.assign(params.size(), 0.0);
    st.v.assign(params.size(), 0.0);
  }
  if (st.m.size() != params.size() || st.v.size() != params.size())
    throw ArgumentError("Adam state sized for a different parameter vector");
  ++st.t;
  const double c1 = 1.0 - std::pow(cfg.beta1, st.t);
  const double c2 = 1.0 - std::pow(cfg.beta2, st.t);
  for (std::size_t i = 0; i < params.size(); ++i) {
    st.m[i] = cfg.beta1 * st.m[i] + (1 - cfg.beta1) * grad[i];
    st.v[i] = cfg.beta2 * st.v[i] + (1 - cfg.beta2) * grad[i] * grad[i];
    params[i] -= cfg.lr * (st.m[i] / c1) / (std::sqrt(st.v[i] / c2) + cfg.eps);
  }
}

struct VScoreParams {
  int n_sites = 1;
  double e_inf = 0.0;
};

/// N * Var(E) / (E - E_inf)^2.
inline double v_score(double e, double var_e, const VScoreParams& p) {
  if (p.n_sites < 1) throw ArgumentError("V-score needs n_sites >= 1");
  const double d = e - p.e_inf;
  if (d == 0.0) throw UndefinedVScore("V-score undefined: energy equals the zero point");
  return p.n_sites * var_e / (d * d);
}

struct ExperimentConfig {
  ModelSpec model;
  AnsatzKind ansatz = AnsatzKind::mbhva;
  int depth = 1;
  bool share_parameters = false;
  BackendKind backend = BackendKind::circuit;
  std::uint64_t seed = 0;
  AdamConfig adam;
  GradientMethod gradient = GradientMethod::parameter_shift;
  int steps = 200;
  int restarts = 1;
  double e_inf = 0.0;
  int workers = 1;  // restarts optimized concurrently
};

struct StepRecord {
  int step;
  double energy;
  double variance;
  double vscore;  // NaN when undefined
};

struct RunRecord {
  int run_id = 0;
  std::uint64_t seed = 0;
  std::vector<StepRecord> steps;
  std::vector<double> initial_params;
  std::vector<double> final_params;
  bool plateaued = false;
};

struct StepStats {
  int step;
  int runs;
  double mean_energy, min_energy, max_energy, var_energy;
  int vscore_runs;  // runs with a defined V-score
  double mean_vscore, min_vscore, max_vscore, var_vscore;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;
  std::vector<StepStats> stats;
};

inline constexpr double kPlateauGradient = 1e-3;
inline constexpr int kPlateauSteps = 30;

/// Per-step aggregates across runs; optionally skipping plateaued runs.
inline std::vector<StepStats> aggregate_runs(const std::vector<RunRecord>& runs,
                                             bool exclude_plateaued = false) {
  std::vector<StepStats> out;
  std::size_t n_steps = 0;
  for (const auto& r : runs) n_steps = std::max(n_steps, r.steps.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t s = 0; s < n_steps; ++s) {
    std::vector<double> es, vs;
    for (const auto& r : runs) {
      if (exclude_plateaued && r.plateaued) continue;
      if (s >= r.steps.size()) continue;
      es.push_back(r.steps[s].energy);
      if (!std::isnan(r.steps[s].vscore)) vs.push_back(r.steps[s].vscore);
    }
    auto summarize = [&](const std::vector<double>& x, double& mean, double& mn, double& mx, double& var) {
      if (x.empty()) {
        mean = mn = mx = var = nan;
        return;
      }
      double sum = 0.0;
      for (double v : x) sum += v;
      mean = sum / static_cast<double>(x.size());
      mn = *std::min_element(x.begin(), x.end());
      mx = *std::max_element(x.begin(), x.end());
      double sq = 0.0;
      for (double v : x) sq += (v - mean) * (v - mean);
      var = sq / static_cast<double>(x.size());
    };
    StepStats st{};
    st.step = static_cast<int>(s);
    st.runs = static_cast<int>(es.size());
    st.vscore_runs = static_cast<int>(vs.size());
    summarize(es, st.mean_energy, st.min_energy, st.max_energy, st.var_energy);
    summarize(vs, st.mean_vscore, st.min_vscore, st.max_vscore, st.var_vscore);
    out.push_back(st);
  }
  return out;
}

/// Seed of restart r under master seed s.
inline std::uint64_t restart_seed(std::uint64_t master, int r) {
  return Rng(master).stream_seed(static_cast<std::uint64_t>(r));
}

/// Uniform [-pi, pi) initial parameters from a restart seed.
inline std::vector<double> initial_parameters(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> p(static_cast<std::size_t>(n));
  for (auto& x : p) x = rng.uniform(-kPi, kPi);
  return p;
}

/// Seed of the sampled backend at one optimizer step of one run.
inline std::uint64_t step_backend_seed(std::uint64_t run_seed, int step) {
  return mix_seed(run_seed ^ (static_cast<std::uint64_t>(step) << 20));
}

using ProgressCallback = std::function<void(int run, int step, const StepRecord&)>;

/// Optimize from `restarts` random starts; step 0 records the initial point
/// and `steps` Adam updates follow.
inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressCallback& progress = {}) {
  if (cfg.steps < 0) throw ArgumentError("steps must be >= 0");
  if (cfg.restarts < 1) throw ArgumentError("restarts must be >= 1");
  if (cfg.gradient == GradientMethod::reverse_mode && cfg.backend != BackendKind::circuit)
    throw ArgumentError("reverse-mode gradients need the circuit backend");
  const Ansatz a = make_ansatz(cfg.model, cfg.ansatz, cfg.depth, cfg.share_parameters);
  const PauliSumOperator op(build_hamiltonian(cfg.model));
  const VScoreParams vp{cfg.model.n_sites(), cfg.e_inf};

  if (cfg.workers < 1) throw ArgumentError("workers must be >= 1");
  std::mutex progress_mu;
  auto run_one = [&](int r) {
    RunRecord run;
    run.run_id = r;
    run.seed = restart_seed(cfg.seed, r);
    std::vector<double> params = initial_parameters(a.n_params(), run.seed);
    run.initial_params = params;
    AdamState st;
    int small = 0;
    for (int step = 0; step <= cfg.steps; ++step) {
      Backend b{cfg.backend, step_backend_seed(run.seed, step)};
      EnergyVariance ev;
      std::vector<double> grad;
      const bool need_grad = step < cfg.steps;
      if (cfg.gradient == GradientMethod::reverse_mode) {
        EnergyAndGradient eg = reverse_mode_gradient(a, params, op);
        ev = eg.moments;
        grad = std::move(eg.gradient);
      } else {
        ev = energy(b, a, params, op);
        if (need_grad) grad = parameter_shift_gradient(b, a, params, op);
      }
      double vs;
      try {
        vs = v_score(ev.energy, ev.variance, vp);
      } catch (const UndefinedVScore&) {
        vs = std::numeric_limits<double>::quiet_NaN();
      }
      run.steps.push_back({step, ev.energy, ev.variance, vs});
      if (progress) {
        std::lock_guard<std::mutex> lock(progress_mu);
        progress(r, step, run.steps.back());
      }
      if (!need_grad) break;
      double gmax = 0.0;
      for (double g : grad) gmax = std::max(gmax, std::abs(g));
      small = gmax < kPlateauGradient ? small + 1 : 0;
      if (small >= kPlateauSteps) run.plateaued = true;
      adam_step(cfg.adam, st, params, grad);
    }
    run.final_params = params;
    return run;
  };

  ExperimentResult res;
  res.runs.resize(static_cast<std::size_t>(cfg.restarts));
  const int workers = std::min(cfg.workers, cfg.restarts);
  if (workers == 1) {
    for (int r = 0; r < cfg.restarts; ++r) res.runs[static_cast<std::size_t>(r)] = run_one(r);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int r = next++; r < cfg.restarts; r = next++) {
          try {
            res.runs[static_cast<std::size_t>(r)] = run_one(r);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mu);
            if (!failure) failure = std::current_exception();
          }
        }
      });
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
  }
  res.stats = aggregate_runs(res.runs);
  return res;
}

}  // namespace mbvqe
