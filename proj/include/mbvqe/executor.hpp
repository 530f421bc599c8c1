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
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mbvqe/errors.hpp"
#include "mbvqe/pattern.hpp"
#include "mbvqe/random.hpp"
#include "mbvqe/state_vector.hpp"

namespace mbvqe {

enum class OutcomeMode { sampled, forced_zero, forced };

inline const char* to_string(OutcomeMode m) {
  switch (m) {
    case OutcomeMode::sampled: return "sampled";
    case OutcomeMode::forced_zero: return "forced_zero";
    default: return "forced";
  }
}

struct ExecutionOptions {
  OutcomeMode mode = OutcomeMode::forced_zero;
  std::uint64_t seed = 0;                       // sampled mode
  std::unordered_map<Label, int> record;        // forced mode, label -> outcome

  static ExecutionOptions sampled(std::uint64_t seed) {
    ExecutionOptions o;
    o.mode = OutcomeMode::sampled;
    o.seed = seed;
    return o;
  }
  static ExecutionOptions forced_zero() { return {}; }
  static ExecutionOptions forced(std::unordered_map<Label, int> record) {
    ExecutionOptions o;
    o.mode = OutcomeMode::forced;
    o.record = std::move(record);
    return o;
  }
};

struct ExecutionResult {
  /// Output state; register position i holds logical wire i, labelled i.
  StateVector state;
  /// Outcomes in measurement order.
  std::vector<std::pair<Label, int>> outcomes;
  /// Largest |p0 - 1/2| seen over all measurements.
  double max_outcome_bias = 0.0;
  int peak_active_qubits = 0;
};

namespace detail {

/// Lazy schedule: a qubit is attached just before its first use; an edge is
/// applied just before either endpoint is measured, after any earlier
/// non-commuting edge sharing a qubit.
template <class Attach, class Entangle, class Measure>
void walk_lazy(const PatternIR& p, Attach&& attach, Entangle&& entangle, Measure&& measure) {
  const std::size_t ne = p.edges.size();
  std::unordered_map<Label, std::vector<std::size_t>> incident;
  for (std::size_t e = 0; e < ne; ++e) {
    incident[p.edges[e].control].push_back(e);
    if (p.edges[e].target != p.edges[e].control) incident[p.edges[e].target].push_back(e);
  }
  std::unordered_set<Label> live(p.inputs.begin(), p.inputs.end());
  std::unordered_set<Label> measured;
  std::vector<char> applied(ne, 0);

  auto ensure = [&](Label q) {
    if (measured.count(q))
      throw ExecutionError("qubit " + std::to_string(q) + " used after its measurement");
    if (live.insert(q).second) attach(q);
  };
  // Action of an edge on one of its qubits: 'Z' on the control (diagonal),
  // the edge Pauli on the target.
  auto action = [&](std::size_t e, Label q) {
    const auto& x = p.edges[e];
    return q == x.control ? Pauli::Z : x.pauli;
  };
  auto commute = [&](std::size_t a, std::size_t b) {
    for (Label q : {p.edges[a].control, p.edges[a].target})
      if (q == p.edges[b].control || q == p.edges[b].target)
        if (action(a, q) != action(b, q)) return false;
    return true;
  };
  std::vector<std::size_t> stack;
  auto apply = [&](std::size_t root) {
    // Iterative depth-first application of blocking predecessors.
    stack.assign(1, root);
    while (!stack.empty()) {
      const std::size_t e = stack.back();
      if (applied[e]) {
        stack.pop_back();
        continue;
      }
      bool pushed = false;
      for (Label q : {p.edges[e].control, p.edges[e].target}) {
        for (std::size_t f : incident[q]) {
          if (f >= e) break;
          if (!applied[f] && !commute(e, f)) {
            stack.push_back(f);
            pushed = true;
            break;
          }
        }
        if (pushed) break;
      }
      if (pushed) continue;
      ensure(p.edges[e].control);
      ensure(p.edges[e].target);
      entangle(p.edges[e]);
      applied[e] = 1;
      stack.pop_back();
    }
  };

  for (const auto& m : p.commands) {
    ensure(m.qubit);
    for (std::size_t e : incident[m.qubit]) apply(e);
    measure(m);
    measured.insert(m.qubit);
    live.erase(m.qubit);
  }
  for (std::size_t e = 0; e < ne; ++e) apply(e);
  for (Label o : p.outputs) ensure(o);
}

inline StateVector prepare_input(const PatternIR& p, StateVector input) {
  if (input.size() != p.inputs.size())
    throw ArgumentError("pattern has " + std::to_string(p.inputs.size()) +
                        " inputs, state has " + std::to_string(input.size()) + " qubits");
  input.relabel(p.inputs);
  return input;
}

class OutcomeSource {
 public:
  explicit OutcomeSource(const ExecutionOptions& o) : opt_(o), rng_(o.seed) {}

  MeasurementResult measure(StateVector& s, Label q, Plane plane, double angle) {
    switch (opt_.mode) {
      case OutcomeMode::sampled: return measure_in_plane(s, q, plane, angle, std::nullopt, &rng_);
      case OutcomeMode::forced_zero: return measure_in_plane(s, q, plane, angle, 0, nullptr);
      default: {
        auto it = opt_.record.find(q);
        if (it == opt_.record.end())
          throw ArgumentError("no forced outcome for qubit " + std::to_string(q));
        return measure_in_plane(s, q, plane, angle, it->second, nullptr);
      }
    }
  }

 private:
  const ExecutionOptions& opt_;
  Rng rng_;
};

inline void finish_output(const PatternIR& p, StateVector& s,
                          const std::unordered_map<Label, int>& outcomes) {
  for (const auto& c : p.corrections) {
    int parity = 0;
    for (Label d : c.deps) parity ^= outcomes.at(d);
    if (parity) apply_pauli(s, c.target, c.pauli);
  }
  s = s.permuted(p.outputs);
  std::vector<Label> reg(p.outputs.size());
  for (std::size_t i = 0; i < reg.size(); ++i) reg[i] = static_cast<Label>(i);
  s.relabel(std::move(reg));
}

}  // namespace detail

/// Execute a pattern on `input` (register position i feeds pattern input i)
/// with the lazy schedule.
inline ExecutionResult execute_pattern(const PatternIR& p, std::span<const double> params,
                                       StateVector input, const ExecutionOptions& opt = {}) {
  validate_pattern(p);
  if (static_cast<int>(params.size()) != p.n_params)
    throw ArgumentError("pattern expects " + std::to_string(p.n_params) + " parameters, got " +
                        std::to_string(params.size()));
  ExecutionResult r;
  StateVector s = detail::prepare_input(p, std::move(input));
  detail::OutcomeSource src(opt);
  std::unordered_map<Label, int> outcomes;
  r.peak_active_qubits = static_cast<int>(s.size());
  detail::walk_lazy(
      p,
      [&](Label q) {
        attach_plus_qubit(s, q);
        r.peak_active_qubits = std::max(r.peak_active_qubits, static_cast<int>(s.size()));
      },
      [&](const PatternEdge& e) { apply_controlled_pauli(s, e.control, e.target, e.pauli); },
      [&](const MeasurementCommand& m) {
        const double angle = effective_angle(m, params, outcomes);
        const MeasurementResult mr = src.measure(s, m.qubit, m.plane, angle);
        outcomes[m.qubit] = mr.outcome;
        r.outcomes.emplace_back(m.qubit, mr.outcome);
        r.max_outcome_bias = std::max(r.max_outcome_bias, std::abs(mr.p0 - 0.5));
      });
  detail::finish_output(p, s, outcomes);
  r.state = std::move(s);
  return r;
}

/// Largest number of simultaneously live qubits under the lazy schedule.
inline int peak_active_width(const PatternIR& p) {
  validate_pattern(p);
  int live = static_cast<int>(p.inputs.size());
  int peak = live;
  detail::walk_lazy(
      p, [&](Label) { peak = std::max(peak, ++live); }, [](const PatternEdge&) {},
      [&](const MeasurementCommand&) { --live; });
  return peak;
}

inline constexpr int kFullGraphMaxQubits = 14;

/// Reference executor: build the whole graph state first, then measure in
/// command order. Limited to small patterns.
inline ExecutionResult execute_reference_full_graph(const PatternIR& p,
                                                    std::span<const double> params,
                                                    StateVector input,
                                                    const ExecutionOptions& opt = {}) {
  validate_pattern(p);
  if (static_cast<int>(p.qubits.size()) > kFullGraphMaxQubits)
    throw CapacityError("full-graph execution limited to " + std::to_string(kFullGraphMaxQubits) +
                        " qubits, pattern has " + std::to_string(p.qubits.size()));
  if (static_cast<int>(params.size()) != p.n_params)
    throw ArgumentError("pattern expects " + std::to_string(p.n_params) + " parameters, got " +
                        std::to_string(params.size()));
  ExecutionResult r;
  StateVector s = detail::prepare_input(p, std::move(input));
  for (const auto& q : p.qubits)
    if (!q.input) attach_plus_qubit(s, q.label);
  r.peak_active_qubits = static_cast<int>(s.size());
  for (const auto& e : p.edges) apply_controlled_pauli(s, e.control, e.target, e.pauli);
  detail::OutcomeSource src(opt);
  std::unordered_map<Label, int> outcomes;
  for (const auto& m : p.commands) {
    const double angle = effective_angle(m, params, outcomes);
    const MeasurementResult mr = src.measure(s, m.qubit, m.plane, angle);
    outcomes[m.qubit] = mr.outcome;
    r.outcomes.emplace_back(m.qubit, mr.outcome);
    r.max_outcome_bias = std::max(r.max_outcome_bias, std::abs(mr.p0 - 0.5));
  }
  detail::finish_output(p, s, outcomes);
  r.state = std::move(s);
  return r;
}

}  // namespace mbvqe
