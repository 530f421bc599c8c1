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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mbvqe/circuit.hpp"
#include "mbvqe/errors.hpp"
#include "mbvqe/models.hpp"
#include "mbvqe/pattern.hpp"

namespace mbvqe {

struct MbhvaOptions {
  bool share_parameters_across_layers = false;
};

namespace detail {

/// Phase-insensitive equality of 2x2 unitaries.
inline bool same_up_to_phase(const Mat2& a, const Mat2& b, double tol = 1e-9) {
  cplx t = 0.0;
  for (int i = 0; i < 4; ++i) t += std::conj(a[i]) * b[i];
  return std::abs(std::abs(t) / 2.0 - 1.0) < tol;
}

/// If u is R_X(phi) up to phase, return phi in (-pi, pi].
inline std::optional<double> as_x_rotation(const Mat2& u, double tol = 1e-9) {
  const cplx d = std::abs(u[0]) >= std::abs(u[2]) ? u[0] : cplx(0, 1) * u[2];
  const cplx ph = d / std::abs(d);
  const cplx c = std::conj(ph) * u[0];
  const cplx s = std::conj(ph) * cplx(0, 1) * u[2];
  const double phi = 2.0 * std::atan2(s.real(), c.real());
  if (!same_up_to_phase(u, rotation_matrix(Pauli::X, phi), tol)) return std::nullopt;
  double r = std::remainder(phi, 2 * kPi);
  if (r <= -kPi + 1e-12) r += 2 * kPi;
  return r;
}

/// Emit the node realising a constant single-qubit unitary.
inline void emit_constant_node(PatternBuilder& b, int w, const Mat2& u) {
  if (auto phi = as_x_rotation(u)) {
    if (std::abs(*phi) > 1e-12) emit_orange(b, w, AngleSource::constant(*phi));
    return;
  }
  for (NodeTemplate t : {NodeTemplate::blue_minus, NodeTemplate::blue_plus, NodeTemplate::yellow, NodeTemplate::red})
    if (same_up_to_phase(u, template_unitary(t))) {
      emit_template(b, w, t);
      return;
    }
  throw CompilationError("single-qubit block on wire " + std::to_string(w) +
                         " matches no node template");
}

}  // namespace detail

/// Measurement-based HVA over an explicit generator list (one parameter per
/// generator and layer). Each generator becomes one green node framed by
/// basis changes (X: R_Y(-pi/2)..R_Y(pi/2), Y: R_X(pi/2)..R_X(-pi/2)); pending
/// basis changes on a wire are fused into a single orange, blue, yellow or
/// red node just before the wire is next used. Single-qubit X generators
/// become parameterized orange nodes.
inline PatternIR compile_pauli_rotations(int n, const std::vector<PauliString>& gens, int depth,
                                         const MbhvaOptions& opt = {}) {
  if (depth < 1) throw ArgumentError("ansatz depth must be >= 1, got " + std::to_string(depth));
  const int per_layer = static_cast<int>(gens.size());
  const int n_params = opt.share_parameters_across_layers ? per_layer : per_layer * depth;
  PatternBuilder b(n, n_params);
  const Mat2 id{1.0, 0.0, 0.0, 1.0};
  std::vector<Mat2> pending(static_cast<std::size_t>(n), id);
  std::vector<char> dirty(static_cast<std::size_t>(n), 0);
  auto push = [&](int w, const Mat2& m) {
    auto& p = pending[static_cast<std::size_t>(w)];
    p = matmul(m, p);
    dirty[static_cast<std::size_t>(w)] = 1;
  };
  auto flush = [&](int w) {
    const auto k = static_cast<std::size_t>(w);
    if (!dirty[k]) return;
    detail::emit_constant_node(b, w, pending[k]);
    pending[k] = id;
    dirty[k] = 0;
  };

  for (int d = 0; d < depth; ++d)
    for (int k = 0; k < per_layer; ++k) {
      const PauliString& g = gens[static_cast<std::size_t>(k)];
      const AngleSource theta =
          AngleSource::parameter(opt.share_parameters_across_layers ? k : d * per_layer + k);
      if (g.weight() == 1 && g.factors()[0].op == Pauli::X) {
        const int w = g.factors()[0].qubit;
        flush(w);
        emit_orange(b, w, theta);
        continue;
      }
      std::vector<int> ws;
      for (const auto& f : g.factors()) {
        if (f.op == Pauli::X) push(f.qubit, rotation_matrix(Pauli::Y, -kPi / 2));
        if (f.op == Pauli::Y) push(f.qubit, rotation_matrix(Pauli::X, kPi / 2));
        ws.push_back(f.qubit);
      }
      for (int w : ws) flush(w);
      emit_green(b, ws, Pauli::Z, theta);
      for (const auto& f : g.factors()) {
        if (f.op == Pauli::X) push(f.qubit, rotation_matrix(Pauli::Y, kPi / 2));
        if (f.op == Pauli::Y) push(f.qubit, rotation_matrix(Pauli::X, -kPi / 2));
      }
    }
  for (int w = 0; w < n; ++w) flush(w);
  return std::move(b).finish();
}

inline PatternIR compile_mbhva(const ModelSpec& model, int depth, const MbhvaOptions& opt = {}) {
  return compile_pauli_rotations(model.n_qubits(), hva_generators(model), depth, opt);
}

/// Measurement-based hardware-efficient ansatz: per layer, orange R_X, green
/// R_Z and orange R_X on every qubit, then one green R_{Z..Z} on all qubits.
/// Parameter order matches build_mbhea_reference_circuit.
inline PatternIR compile_mbhea(int n, int depth) {
  if (n < 1) throw ArgumentError("MBHEA needs at least one qubit");
  if (depth < 1) throw ArgumentError("ansatz depth must be >= 1, got " + std::to_string(depth));
  PatternBuilder b(n, (3 * n + 1) * depth);
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;
  int p = 0;
  for (int d = 0; d < depth; ++d) {
    for (int q = 0; q < n; ++q) {
      emit_orange(b, q, AngleSource::parameter(p++));
      emit_green(b, {q}, Pauli::Z, AngleSource::parameter(p++));
      emit_orange(b, q, AngleSource::parameter(p++));
    }
    emit_green(b, all, Pauli::Z, AngleSource::parameter(p++));
  }
  return std::move(b).finish();
}

/// Gate-by-gate translation policy for native circuits.
struct NaiveCostTable {
  /// Fuse maximal single-qubit runs between entanglers into one J-chain.
  bool fuse_single_qubit_runs = true;
  /// Runs made only of R_Z use one ancilla measurement per rotation.
  bool diagonal_runs_via_ancilla = true;

  /// Measurements per fragment, for reports.
  std::map<std::string, int> fragment_costs() const {
    return {{"cnot", 4},
            {"cz", 0},
            {"h", 1},
            {"rx", 2},
            {"rz", diagonal_runs_via_ancilla ? 1 : 2}};
  }
};

namespace detail {

struct WordOp {
  bool h;
  AngleSource angle;  // R_X angle when !h
};

inline void word_push_h(std::vector<WordOp>& w) {
  if (!w.empty() && w.back().h)
    w.pop_back();
  else
    w.push_back({true, {}});
}

inline void word_push_rx(std::vector<WordOp>& w, AngleSource a) {
  if (!w.empty() && !w.back().h) {
    AngleSource& last = w.back().angle;
    if (!last.is_param() || !a.is_param()) {
      if (a.is_param())
        last = AngleSource{a.param, a.scale, a.offset + last.offset};
      else
        last.offset += a.offset;
      return;
    }
    w.push_back({true, {}});
    w.push_back({true, {}});
  }
  w.push_back({false, a});
}

/// Realise a word of H and R_X factors (application order) as J-steps.
inline void emit_word(PatternBuilder& b, int wire, std::vector<WordOp> word) {
  if (word.empty()) return;
  if (!word.front().h) word.insert(word.begin(), 2, WordOp{true, {}});
  for (std::size_t i = 0; i < word.size();) {
    if (i + 1 < word.size() && !word[i + 1].h) {
      b.j_step(wire, word[i + 1].angle);
      i += 2;
    } else {
      b.j_step(wire, AngleSource::constant(0.0));
      i += 1;
    }
  }
}

}  // namespace detail

/// Translate a native circuit (R_X, R_Z, H, CNOT, CZ) fragment by fragment.
/// CNOT(c, t) costs four measurements: two identity J-steps on c and
/// H CZ H on t. CZ is a single edge.
inline PatternIR translate_circuit_naive(const CircuitIR& c, const NaiveCostTable& table = {}) {
  const int n = c.n_qubits();
  PatternBuilder b(n, c.n_params());
  std::vector<std::vector<Gate>> runs(static_cast<std::size_t>(n));

  auto flush = [&](int w) {
    auto& run = runs[static_cast<std::size_t>(w)];
    if (run.empty()) return;
    const bool diagonal = std::all_of(run.begin(), run.end(), [](const Gate& g) {
      return g.kind == GateKind::axis_rotation && g.axis == Pauli::Z;
    });
    if (diagonal && table.diagonal_runs_via_ancilla) {
      for (const Gate& g : run) emit_green(b, {w}, Pauli::Z, g.angle);
    } else if (table.fuse_single_qubit_runs) {
      std::vector<detail::WordOp> word;
      for (const Gate& g : run) {
        if (g.kind == GateKind::hadamard) {
          detail::word_push_h(word);
        } else if (g.axis == Pauli::X) {
          detail::word_push_rx(word, g.angle);
        } else {
          detail::word_push_h(word);
          detail::word_push_rx(word, g.angle);
          detail::word_push_h(word);
        }
      }
      detail::emit_word(b, w, std::move(word));
    } else {
      for (const Gate& g : run) {
        std::vector<detail::WordOp> word;
        if (g.kind == GateKind::hadamard) {
          detail::word_push_h(word);
        } else if (g.axis == Pauli::X) {
          detail::word_push_rx(word, g.angle);
        } else if (table.diagonal_runs_via_ancilla) {
          emit_green(b, {w}, Pauli::Z, g.angle);
          continue;
        } else {
          word = {{true, {}}, {false, g.angle}, {true, {}}};
        }
        detail::emit_word(b, w, std::move(word));
      }
    }
    run.clear();
  };

  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::axis_rotation:
        if (g.axis == Pauli::Y)
          throw CompilationError("naive translation expects native gates; found R_Y on qubit " +
                                 std::to_string(g.q0));
        runs[static_cast<std::size_t>(g.q0)].push_back(g);
        break;
      case GateKind::hadamard: runs[static_cast<std::size_t>(g.q0)].push_back(g); break;
      case GateKind::cz:
        flush(g.q0);
        flush(g.q1);
        b.cz(g.q0, g.q1);
        break;
      case GateKind::cnot:
        flush(g.q0);
        flush(g.q1);
        b.j_step(g.q0, AngleSource::constant(0.0));
        b.j_step(g.q0, AngleSource::constant(0.0));
        b.j_step(g.q1, AngleSource::constant(0.0));
        b.cz(g.q0, g.q1);
        b.j_step(g.q1, AngleSource::constant(0.0));
        break;
      default:
        throw CompilationError(std::string("naive translation expects native gates; found ") +
                               to_string(g.kind));
    }
  }
  for (int w = 0; w < n; ++w) flush(w);
  return std::move(b).finish();
}

}  // namespace mbvqe
