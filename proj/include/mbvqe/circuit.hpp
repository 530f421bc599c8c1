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
#include <set>
#include <span>
#include <string>
#include <vector>

#include "mbvqe/errors.hpp"
#include "mbvqe/models.hpp"
#include "mbvqe/pauli.hpp"
#include "mbvqe/resources.hpp"
#include "mbvqe/state_vector.hpp"

namespace mbvqe {

/// Either a constant angle or the affine function scale * theta[param] + offset.
struct AngleSource {
  int param = -1;
  double scale = 1.0;
  double offset = 0.0;

  static AngleSource constant(double value) { return {-1, 1.0, value}; }
  static AngleSource parameter(int index, double scale = 1.0, double offset = 0.0) {
    if (index < 0) throw ArgumentError("negative parameter index");
    if (!std::isfinite(scale) || scale == 0.0)
      throw ArgumentError("parameter scale must be finite and nonzero");
    return {index, scale, offset};
  }

  bool is_param() const noexcept { return param >= 0; }

  double value(std::span<const double> params) const {
    if (!is_param()) return offset;
    if (static_cast<std::size_t>(param) >= params.size())
      throw ArgumentError("parameter index " + std::to_string(param) + " out of range (" +
                          std::to_string(params.size()) + " values)");
    return scale * params[static_cast<std::size_t>(param)] + offset;
  }

  AngleSource negated() const { return {param, -scale, -offset}; }

  friend bool operator==(const AngleSource&, const AngleSource&) = default;
};

enum class GateKind { axis_rotation, pauli_rotation, hadamard, pauli, cz, cnot };

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::axis_rotation: return "rotation";
    case GateKind::pauli_rotation: return "pauli_rotation";
    case GateKind::hadamard: return "h";
    case GateKind::pauli: return "pauli";
    case GateKind::cz: return "cz";
    default: return "cnot";
  }
}

/// One circuit instruction. `q0` is the qubit of single-qubit gates and the
/// control of two-qubit gates; `q1` is the target. Pauli rotations keep their
/// support in `generator` (coefficient ignored).
struct Gate {
  GateKind kind = GateKind::hadamard;
  Pauli axis = Pauli::I;  // rotation axis, or the Pauli of a Pauli gate
  int q0 = -1;
  int q1 = -1;
  PauliString generator;
  AngleSource angle;

  static Gate rotation(Pauli axis, int q, AngleSource a) {
    if (axis == Pauli::I) throw ArgumentError("rotation axis must be X, Y or Z");
    return {GateKind::axis_rotation, axis, q, -1, {}, a};
  }
  static Gate rx(int q, AngleSource a) { return rotation(Pauli::X, q, a); }
  static Gate ry(int q, AngleSource a) { return rotation(Pauli::Y, q, a); }
  static Gate rz(int q, AngleSource a) { return rotation(Pauli::Z, q, a); }
  static Gate pauli_rotation(PauliString g, AngleSource a) {
    if (g.empty()) throw ArgumentError("Pauli rotation with empty support");
    return {GateKind::pauli_rotation, Pauli::I, -1, -1, g.with_coefficient(1.0), a};
  }
  static Gate h(int q) { return {GateKind::hadamard, Pauli::I, q, -1, {}, {}}; }
  static Gate pauli(Pauli p, int q) { return {GateKind::pauli, p, q, -1, {}, {}}; }
  static Gate cz(int a, int b) { return {GateKind::cz, Pauli::Z, a, b, {}, {}}; }
  static Gate cnot(int c, int t) { return {GateKind::cnot, Pauli::X, c, t, {}, {}}; }

  bool is_rotation() const {
    return kind == GateKind::axis_rotation || kind == GateKind::pauli_rotation;
  }
  bool is_two_qubit() const { return kind == GateKind::cz || kind == GateKind::cnot; }

  std::vector<int> qubits() const {
    if (kind == GateKind::pauli_rotation) return generator.support();
    if (is_two_qubit()) return {q0, q1};
    return {q0};
  }
};

class CircuitIR {
 public:
  CircuitIR() = default;
  explicit CircuitIR(int n_qubits, int n_params = 0) : n_qubits_(n_qubits), n_params_(n_params) {
    if (n_qubits <= 0) throw ArgumentError("circuit needs at least one qubit");
    if (n_params < 0) throw ArgumentError("negative parameter count");
  }

  void add(Gate g) {
    for (int q : g.qubits())
      if (q < 0 || q >= n_qubits_)
        throw ArgumentError("gate qubit " + std::to_string(q) + " outside circuit of " +
                            std::to_string(n_qubits_) + " qubits");
    if (g.is_two_qubit() && g.q0 == g.q1) throw ArgumentError("two-qubit gate on a single qubit");
    if (g.is_rotation() && g.angle.param >= n_params_)
      throw ArgumentError("gate references parameter " + std::to_string(g.angle.param) +
                          " but circuit has " + std::to_string(n_params_));
    gates_.push_back(std::move(g));
  }

  int n_qubits() const noexcept { return n_qubits_; }
  int n_params() const noexcept { return n_params_; }
  const std::vector<Gate>& gates() const noexcept { return gates_; }
  std::vector<Gate>& mutable_gates() noexcept { return gates_; }

 private:
  int n_qubits_ = 1;
  int n_params_ = 0;
  std::vector<Gate> gates_;
};

struct CbhvaOptions {
  /// Reuse one parameter per generator across all layers.
  bool share_parameters_across_layers = false;
};

/// Circuit-based HVA: per layer, one Pauli rotation per model generator.
inline CircuitIR build_cbhva(const ModelSpec& model, int depth, const CbhvaOptions& opt = {}) {
  if (depth < 1) throw ArgumentError("ansatz depth must be >= 1, got " + std::to_string(depth));
  const std::vector<PauliString> gens = hva_generators(model);
  const int per_layer = static_cast<int>(gens.size());
  const int n_params = opt.share_parameters_across_layers ? per_layer : per_layer * depth;
  CircuitIR c(model.n_qubits(), n_params);
  for (int d = 0; d < depth; ++d)
    for (int k = 0; k < per_layer; ++k) {
      const int idx = opt.share_parameters_across_layers ? k : d * per_layer + k;
      c.add(Gate::pauli_rotation(gens[static_cast<std::size_t>(k)], AngleSource::parameter(idx)));
    }
  return c;
}

/// Hardware-efficient reference: per layer R_X, R_Z, R_X on each qubit, then
/// one global R_{Z...Z}.
inline CircuitIR build_mbhea_reference_circuit(int n, int depth) {
  if (n < 1) throw ArgumentError("MBHEA needs at least one qubit");
  if (depth < 1) throw ArgumentError("ansatz depth must be >= 1, got " + std::to_string(depth));
  CircuitIR c(n, (3 * n + 1) * depth);
  int p = 0;
  std::vector<PauliFactor> all_z;
  for (int q = 0; q < n; ++q) all_z.push_back({q, Pauli::Z});
  for (int d = 0; d < depth; ++d) {
    for (int q = 0; q < n; ++q) {
      c.add(Gate::rx(q, AngleSource::parameter(p++)));
      c.add(Gate::rz(q, AngleSource::parameter(p++)));
      c.add(Gate::rx(q, AngleSource::parameter(p++)));
    }
    c.add(Gate::pauli_rotation(PauliString(all_z), AngleSource::parameter(p++)));
  }
  return c;
}

/// Apply one gate with resolved parameters.
inline void apply_gate(StateVector& s, const Gate& g, std::span<const double> params) {
  switch (g.kind) {
    case GateKind::axis_rotation: apply_axis_rotation(s, g.q0, g.axis, g.angle.value(params)); break;
    case GateKind::pauli_rotation:
      apply_pauli_string_rotation(s, g.generator, g.angle.value(params));
      break;
    case GateKind::hadamard: apply_hadamard(s, g.q0); break;
    case GateKind::pauli: apply_pauli(s, g.q0, g.axis); break;
    case GateKind::cz: apply_controlled_pauli(s, g.q0, g.q1, Pauli::Z); break;
    case GateKind::cnot: apply_controlled_pauli(s, g.q0, g.q1, Pauli::X); break;
  }
}

/// Run the circuit on `input`, whose register must hold labels 0..n-1.
inline StateVector simulate_circuit(const CircuitIR& c, std::span<const double> params,
                                    StateVector input) {
  if (static_cast<int>(params.size()) != c.n_params())
    throw ArgumentError("circuit expects " + std::to_string(c.n_params()) + " parameters, got " +
                        std::to_string(params.size()));
  if (static_cast<int>(input.size()) != c.n_qubits())
    throw ArgumentError("circuit on " + std::to_string(c.n_qubits()) +
                        " qubits given a register of size " + std::to_string(input.size()));
  for (const Gate& g : c.gates()) apply_gate(input, g, params);
  return input;
}

enum class Entangler { cnot, cz };

inline const char* to_string(Entangler e) { return e == Entangler::cnot ? "cnot" : "cz"; }

namespace detail {

/// Append a native gate, merging it into the previous gate on the same wire
/// when both are rotations about the same axis and at most one carries a
/// parameter. Rotations that merge to a multiple of 2*pi are dropped (global
/// phase).
inline void append_merged(std::vector<Gate>& out, Gate g) {
  if (g.kind == GateKind::axis_rotation) {
    for (std::size_t j = out.size(); j-- > 0;) {
      Gate& prev = out[j];
      const auto qs = prev.qubits();
      if (std::find(qs.begin(), qs.end(), g.q0) == qs.end()) continue;
      if (prev.kind == GateKind::axis_rotation && prev.axis == g.axis &&
          !(prev.angle.is_param() && g.angle.is_param())) {
        const AngleSource& p = prev.angle.is_param() ? prev.angle : g.angle;
        const AngleSource& c = prev.angle.is_param() ? g.angle : prev.angle;
        AngleSource merged = p;
        merged.offset += c.offset;
        if (!merged.is_param()) {
          const double r = std::remainder(merged.offset, 2 * kPi);
          if (std::abs(r) < 1e-12) {
            out.erase(out.begin() + static_cast<std::ptrdiff_t>(j));
            return;
          }
        }
        prev.angle = merged;
        return;
      }
      break;
    }
  }
  out.push_back(std::move(g));
}

inline void emit_ry(std::vector<Gate>& out, int q, AngleSource a) {
  // R_Y(phi) = R_X(pi/2) R_Z(-phi) R_X(-pi/2).
  append_merged(out, Gate::rx(q, AngleSource::constant(-kPi / 2)));
  append_merged(out, Gate::rz(q, a.negated()));
  append_merged(out, Gate::rx(q, AngleSource::constant(kPi / 2)));
}

inline void emit_h(std::vector<Gate>& out, int q) {
  // H = R_Z(pi/2) R_X(pi/2) R_Z(pi/2) up to phase.
  for (Pauli a : {Pauli::Z, Pauli::X, Pauli::Z})
    append_merged(out, Gate::rotation(a, q, AngleSource::constant(kPi / 2)));
}

inline void emit_cnot(std::vector<Gate>& out, int c, int t, Entangler e) {
  if (e == Entangler::cnot) {
    out.push_back(Gate::cnot(c, t));
    return;
  }
  emit_h(out, t);
  out.push_back(Gate::cz(c, t));
  emit_h(out, t);
}

inline void emit_native(std::vector<Gate>& out, const Gate& g, Entangler e) {
  switch (g.kind) {
    case GateKind::axis_rotation:
      if (g.axis == Pauli::Y) emit_ry(out, g.q0, g.angle);
      else append_merged(out, g);
      return;
    case GateKind::hadamard: emit_h(out, g.q0); return;
    case GateKind::pauli:
      if (g.axis == Pauli::Y) emit_ry(out, g.q0, AngleSource::constant(kPi));
      else if (g.axis != Pauli::I) append_merged(out, Gate::rotation(g.axis, g.q0, AngleSource::constant(kPi)));
      return;
    case GateKind::cnot: emit_cnot(out, g.q0, g.q1, e); return;
    case GateKind::cz:
      if (e == Entangler::cz) {
        out.push_back(g);
      } else {
        emit_h(out, g.q1);
        out.push_back(Gate::cnot(g.q0, g.q1));
        emit_h(out, g.q1);
      }
      return;
    case GateKind::pauli_rotation: break;
  }
  const auto& f = g.generator.factors();
  if (f.size() == 1) {
    if (f[0].op == Pauli::Y) emit_ry(out, f[0].qubit, g.angle);
    else append_merged(out, Gate::rotation(f[0].op, f[0].qubit, g.angle));
    return;
  }
  // Basis change into Z on every factor: X via R_Y(-pi/2), Y via R_X(pi/2).
  for (const auto& x : f) {
    if (x.op == Pauli::X) emit_ry(out, x.qubit, AngleSource::constant(-kPi / 2));
    if (x.op == Pauli::Y) append_merged(out, Gate::rx(x.qubit, AngleSource::constant(kPi / 2)));
  }
  for (std::size_t k = 0; k + 1 < f.size(); ++k) emit_cnot(out, f[k].qubit, f[k + 1].qubit, e);
  append_merged(out, Gate::rz(f.back().qubit, g.angle));
  for (std::size_t k = f.size() - 1; k-- > 0;) emit_cnot(out, f[k].qubit, f[k + 1].qubit, e);
  for (const auto& x : f) {
    if (x.op == Pauli::X) emit_ry(out, x.qubit, AngleSource::constant(kPi / 2));
    if (x.op == Pauli::Y) append_merged(out, Gate::rx(x.qubit, AngleSource::constant(-kPi / 2)));
  }
}

}  // namespace detail

/// Lower to {R_X, R_Z, entangler}: Z-string rotations become a linear CNOT
/// ladder around R_Z on the last support qubit, X and Y factors get basis
/// sandwiches, R_Y becomes R_X R_Z R_X, and adjacent coaxial rotations on the
/// same wire are merged. Equal to the input up to global phase.
inline CircuitIR decompose_native(const CircuitIR& c, Entangler e = Entangler::cnot) {
  CircuitIR out(c.n_qubits(), c.n_params());
  std::vector<Gate> gates;
  for (const Gate& g : c.gates()) detail::emit_native(gates, g, e);
  for (auto& g : gates) out.add(std::move(g));
  return out;
}

/// Merge adjacent coaxial rotations without any other lowering.
inline CircuitIR merge_rotations(const CircuitIR& c) {
  CircuitIR out(c.n_qubits(), c.n_params());
  std::vector<Gate> gates;
  for (const Gate& g : c.gates()) {
    if (g.kind == GateKind::axis_rotation) detail::append_merged(gates, g);
    else gates.push_back(g);
  }
  for (auto& g : gates) out.add(std::move(g));
  return out;
}

/// Gate counts by class. Pauli rotations of weight 1 count as single-qubit
/// rotations; `parameters` counts distinct parameters referenced.
inline ResourceReport count_circuit_resources(const CircuitIR& c) {
  ResourceReport r;
  std::set<int> params;
  for (const Gate& g : c.gates()) {
    if (g.is_rotation() && g.angle.is_param()) params.insert(g.angle.param);
    switch (g.kind) {
      case GateKind::axis_rotation: ++r.single_qubit_rotations; break;
      case GateKind::pauli_rotation:
        if (g.generator.weight() == 1) ++r.single_qubit_rotations;
        else ++r.multi_qubit_rotations;
        break;
      case GateKind::hadamard: ++r.hadamards; break;
      case GateKind::pauli: ++r.pauli_gates; break;
      case GateKind::cz:
      case GateKind::cnot: ++r.two_qubit_gates; break;
    }
  }
  r.parameters = static_cast<int>(params.size());
  return r;
}

}  // namespace mbvqe
