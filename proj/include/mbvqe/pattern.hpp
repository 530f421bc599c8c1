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
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "mbvqe/circuit.hpp"
#include "mbvqe/errors.hpp"
#include "mbvqe/pauli.hpp"
#include "mbvqe/resources.hpp"
#include "mbvqe/state_vector.hpp"

namespace mbvqe {

enum class NodeColor { green, orange, blue, yellow, red };

inline const char* to_string(NodeColor c) {
  switch (c) {
    case NodeColor::green: return "green";
    case NodeColor::orange: return "orange";
    case NodeColor::blue: return "blue";
    case NodeColor::yellow: return "yellow";
    default: return "red";
  }
}

/// Measurements consumed by one node of the given color.
inline int node_budget(NodeColor c) {
  switch (c) {
    case NodeColor::green: return 1;
    case NodeColor::orange: return 2;
    default: return 4;
  }
}

struct PatternQubit {
  Label label;
  bool input = false;
  bool output = false;

  const char* role() const {
    if (input && output) return "input_output";
    if (input) return "input";
    if (output) return "output";
    return "body";
  }
};

/// Controlled-P entangler; `control` is acted on diagonally, `target` by P.
/// CZ edges are symmetric.
struct PatternEdge {
  Label control;
  Label target;
  Pauli pauli = Pauli::Z;
};

/// Measure `qubit` in `plane` at (-1)^{s(sign_deps)} (base - pi s(offset_deps)),
/// s(.) being the parity of the listed outcomes.
struct MeasurementCommand {
  Label qubit;
  Plane plane;
  AngleSource base_angle;
  std::vector<Label> sign_deps;
  std::vector<Label> offset_deps;
  int node = -1;  // index into PatternIR::nodes, or -1
};

/// Apply `pauli` to an output qubit iff the parity of `deps` is odd.
struct CorrectionCommand {
  Pauli pauli;
  Label target;
  std::vector<Label> deps;
};

/// Bookkeeping for node-level resource counts and DOT coloring.
struct NodeRecord {
  NodeColor color;
  std::vector<int> wires;
  std::string label;  // e.g. "R_Y(-pi/2)" or "R_Z..Z(theta_3)"
};

struct PatternIR {
  std::vector<PatternQubit> qubits;
  std::vector<PatternEdge> edges;
  std::vector<MeasurementCommand> commands;
  std::vector<CorrectionCommand> corrections;
  std::vector<NodeRecord> nodes;
  int n_params = 0;
  std::vector<Label> inputs;   // logical wire i starts on inputs[i]
  std::vector<Label> outputs;  // logical wire i ends on outputs[i]

  const PatternQubit* find(Label q) const {
    for (const auto& x : qubits)
      if (x.label == q) return &x;
    return nullptr;
  }
};

/// Effective measurement angle for the given outcome record.
inline double effective_angle(const MeasurementCommand& m, std::span<const double> params,
                              const std::unordered_map<Label, int>& outcomes) {
  auto parity = [&](const std::vector<Label>& deps) {
    int s = 0;
    for (Label d : deps) {
      auto it = outcomes.find(d);
      if (it == outcomes.end())
        throw ExecutionError("measurement of " + std::to_string(m.qubit) +
                             " depends on unmeasured qubit " + std::to_string(d));
      s ^= it->second;
    }
    return s;
  };
  const double base = m.base_angle.value(params);
  const double a = base - kPi * parity(m.offset_deps);
  return parity(m.sign_deps) ? -a : a;
}

/// Structural checks: declared qubits, single measurement per qubit, outputs
/// unmeasured, dependencies measured earlier, corrections on outputs.
inline void validate_pattern(const PatternIR& p) {
  std::unordered_map<Label, const PatternQubit*> declared;
  for (const auto& q : p.qubits)
    if (!declared.emplace(q.label, &q).second)
      throw ExecutionError("qubit " + std::to_string(q.label) + " declared twice");
  auto lookup = [&](Label l) -> const PatternQubit* {
    auto it = declared.find(l);
    return it == declared.end() ? nullptr : it->second;
  };
  for (const auto& e : p.edges) {
    if (!lookup(e.control) || !lookup(e.target))
      throw ExecutionError("edge references an undeclared qubit");
    if (e.control == e.target) throw ExecutionError("self-loop edge");
  }
  std::unordered_set<Label> measured;
  for (const auto& m : p.commands) {
    const PatternQubit* q = lookup(m.qubit);
    if (q == nullptr) throw ExecutionError("measurement of undeclared qubit " + std::to_string(m.qubit));
    if (q->output) throw ExecutionError("output qubit " + std::to_string(m.qubit) + " is measured");
    for (const auto* deps : {&m.sign_deps, &m.offset_deps})
      for (Label d : *deps)
        if (!measured.count(d))
          throw ExecutionError("measurement of " + std::to_string(m.qubit) +
                               " depends on qubit " + std::to_string(d) +
                               " which is not measured earlier");
    if (!measured.insert(m.qubit).second)
      throw ExecutionError("qubit " + std::to_string(m.qubit) + " measured twice");
  }
  for (const auto& c : p.corrections) {
    const PatternQubit* q = lookup(c.target);
    if (q == nullptr || !q->output) throw ExecutionError("correction targets a non-output qubit");
    for (Label d : c.deps)
      if (!measured.count(d)) throw ExecutionError("correction depends on an unmeasured qubit");
  }
  for (Label o : p.outputs)
    if (lookup(o) == nullptr || !lookup(o)->output) throw ExecutionError("bad output map");
  for (Label i : p.inputs)
    if (lookup(i) == nullptr || !lookup(i)->input) throw ExecutionError("bad input map");
  if (measured.size() + p.outputs.size() != p.qubits.size())
    throw ExecutionError("every qubit must be either measured or an output");
}

/// Counts read directly from the IR.
inline ResourceReport count_pattern_resources(const PatternIR& p) {
  ResourceReport r;
  r.qubits = static_cast<int>(p.qubits.size());
  for (const auto& q : p.qubits)
    if (!q.input && !q.output) ++r.ancillas;
  r.edges = static_cast<int>(p.edges.size());
  r.measurements = static_cast<int>(p.commands.size());
  r.corrections = static_cast<int>(p.corrections.size());
  for (const auto& n : p.nodes) ++r.nodes[to_string(n.color)];
  std::set<int> params;
  for (const auto& m : p.commands)
    if (m.base_angle.is_param()) params.insert(m.base_angle.param);
  r.parameters = static_cast<int>(params.size());
  return r;
}

namespace detail {

/// Symmetric difference of two sorted label sets.
inline std::vector<Label> xor_sets(const std::vector<Label>& a, const std::vector<Label>& b) {
  std::vector<Label> out;
  std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace detail

/// Incremental pattern construction over logical wires with Pauli-frame
/// tracking. Each wire's current qubit carries a by-product X^x Z^z, where x
/// and z are parities of measured outcomes.
class PatternBuilder {
 public:
  /// Wires start on the given input labels; fresh qubits are numbered after
  /// the largest input label.
  PatternBuilder(std::vector<Label> inputs, int n_params) {
    if (inputs.empty()) throw ArgumentError("pattern needs at least one input wire");
    std::set<Label> seen(inputs.begin(), inputs.end());
    if (seen.size() != inputs.size()) throw ArgumentError("duplicate input labels");
    ir_.n_params = n_params;
    ir_.inputs = inputs;
    for (Label l : inputs) ir_.qubits.push_back({l, true, false});
    next_ = *std::max_element(inputs.begin(), inputs.end()) + 1;
    wires_.resize(inputs.size());
    for (std::size_t w = 0; w < inputs.size(); ++w) wires_[w].current = inputs[w];
  }

  explicit PatternBuilder(int n_wires, int n_params = 0)
      : PatternBuilder(range(n_wires), n_params) {}

  int n_wires() const { return static_cast<int>(wires_.size()); }
  Label current(int w) const { return wire(w).current; }

  /// J(theta) = R_X(theta) H on a wire: one fresh qubit, one XY measurement.
  void j_step(int w, AngleSource theta) {
    Wire& s = wire(w);
    const Label next = fresh();
    ir_.edges.push_back({s.current, next, Pauli::Z});
    ir_.commands.push_back({s.current, Plane::XY, theta.negated(), s.x, s.z, node_});
    const std::vector<Label> old_x = s.x;
    s.x = {s.current};
    s.z = old_x;
    s.current = next;
  }

  /// exp(-i theta P^{(x)k} / 2) on the given wires via one ancilla measured in
  /// the YZ plane, entangled by controlled-P edges.
  void multi_rotation(const std::vector<int>& ws, Pauli p, AngleSource theta) {
    if (ws.empty()) throw ArgumentError("rotation needs at least one target wire");
    if (p == Pauli::I) throw ArgumentError("rotation Pauli must be X, Y or Z");
    std::set<int> uniq(ws.begin(), ws.end());
    if (uniq.size() != ws.size()) throw ArgumentError("duplicate target wires");
    const Label a = fresh();
    std::vector<Label> sign;
    for (int w : ws) {
      const Wire& s = wire(w);
      ir_.edges.push_back({a, s.current, p});
      // By-product parts anticommuting with P flip the rotation sign.
      if (p == Pauli::Z || p == Pauli::Y) sign = detail::xor_sets(sign, s.x);
      if (p == Pauli::X || p == Pauli::Y) sign = detail::xor_sets(sign, s.z);
    }
    ir_.commands.push_back({a, Plane::YZ, theta.negated(), sign, {}, node_});
    for (int w : ws) {
      Wire& s = wire(w);
      if (p == Pauli::X || p == Pauli::Y) s.x = detail::xor_sets(s.x, {a});
      if (p == Pauli::Z || p == Pauli::Y) s.z = detail::xor_sets(s.z, {a});
    }
  }

  /// Logical CZ between the current qubits of two wires (no measurement).
  void cz(int w1, int w2) {
    if (w1 == w2) throw ArgumentError("CZ on a single wire");
    Wire& a = wire(w1);
    Wire& b = wire(w2);
    ir_.edges.push_back({a.current, b.current, Pauli::Z});
    const std::vector<Label> ax = a.x;
    a.z = detail::xor_sets(a.z, b.x);
    b.z = detail::xor_sets(b.z, ax);
  }

  /// Group subsequent commands under a node record until end_node().
  void begin_node(NodeColor c, std::vector<int> ws, std::string label) {
    if (node_ >= 0) throw ArgumentError("nested node");
    node_ = static_cast<int>(ir_.nodes.size());
    ir_.nodes.push_back({c, std::move(ws), std::move(label)});
  }
  void end_node() { node_ = -1; }

  /// Close the pattern: current wire qubits become outputs with X then Z
  /// frame corrections.
  PatternIR finish() && {
    for (const Wire& s : wires_) {
      ir_.outputs.push_back(s.current);
      for (auto& q : ir_.qubits)
        if (q.label == s.current) q.output = true;
      if (!s.x.empty()) ir_.corrections.push_back({Pauli::X, s.current, s.x});
      if (!s.z.empty()) ir_.corrections.push_back({Pauli::Z, s.current, s.z});
    }
    validate_pattern(ir_);
    return std::move(ir_);
  }

 private:
  struct Wire {
    Label current = 0;
    std::vector<Label> x;  // sorted
    std::vector<Label> z;  // sorted
  };

  static std::vector<Label> range(int n) {
    std::vector<Label> r(static_cast<std::size_t>(std::max(n, 0)));
    for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] = i;
    return r;
  }

  Wire& wire(int w) {
    if (w < 0 || w >= n_wires()) throw ArgumentError("wire " + std::to_string(w) + " out of range");
    return wires_[static_cast<std::size_t>(w)];
  }
  const Wire& wire(int w) const {
    if (w < 0 || w >= n_wires()) throw ArgumentError("wire " + std::to_string(w) + " out of range");
    return wires_[static_cast<std::size_t>(w)];
  }

  Label fresh() {
    const Label l = next_++;
    ir_.qubits.push_back({l, false, false});
    return l;
  }

  PatternIR ir_;
  std::vector<Wire> wires_;
  Label next_ = 0;
  int node_ = -1;
};

/// Constant single-qubit node templates (blue/yellow/red) and the J-angle
/// sequences realising them, in application order.
enum class NodeTemplate { blue_minus, blue_plus, yellow, red };

inline NodeColor template_color(NodeTemplate t) {
  switch (t) {
    case NodeTemplate::blue_minus:
    case NodeTemplate::blue_plus: return NodeColor::blue;
    case NodeTemplate::yellow: return NodeColor::yellow;
    default: return NodeColor::red;
  }
}

inline const char* template_label(NodeTemplate t) {
  switch (t) {
    case NodeTemplate::blue_minus: return "R_Y(-pi/2)";
    case NodeTemplate::blue_plus: return "R_Y(pi/2)";
    case NodeTemplate::yellow: return "R_X(pi/2) R_Y(pi/2)";
    default: return "R_Y(-pi/2) R_X(-pi/2)";
  }
}

/// Target unitary of a template (operator order: rightmost acts first).
inline Mat2 template_unitary(NodeTemplate t) {
  switch (t) {
    case NodeTemplate::blue_minus: return rotation_matrix(Pauli::Y, -kPi / 2);
    case NodeTemplate::blue_plus: return rotation_matrix(Pauli::Y, kPi / 2);
    case NodeTemplate::yellow:
      return matmul(rotation_matrix(Pauli::X, kPi / 2), rotation_matrix(Pauli::Y, kPi / 2));
    default: return matmul(rotation_matrix(Pauli::Y, -kPi / 2), rotation_matrix(Pauli::X, -kPi / 2));
  }
}

inline std::array<double, 4> template_j_angles(NodeTemplate t) {
  switch (t) {
    case NodeTemplate::blue_minus: return {0.0, -kPi / 2, kPi / 2, kPi / 2};
    case NodeTemplate::blue_plus: return {0.0, -kPi / 2, -kPi / 2, kPi / 2};
    case NodeTemplate::yellow: return {0.0, -kPi / 2, -kPi / 2, kPi};
    default: return {0.0, -kPi, kPi / 2, kPi / 2};
  }
}

inline std::string format_angle(const AngleSource& a) {
  char buf[64];
  if (!a.is_param()) {
    std::snprintf(buf, sizeof buf, "%.6g", a.offset);
    return buf;
  }
  std::string s = "theta_" + std::to_string(a.param);
  if (a.scale != 1.0) {
    std::snprintf(buf, sizeof buf, "%.6g*", a.scale);
    s = buf + s;
  }
  if (a.offset != 0.0) {
    std::snprintf(buf, sizeof buf, "%+.6g", a.offset);
    s += buf;
  }
  return s;
}

/// Orange node R_X(theta): J(0) then J(theta).
inline void emit_orange(PatternBuilder& b, int w, AngleSource theta) {
  b.begin_node(NodeColor::orange, {w}, "R_X(" + format_angle(theta) + ")");
  b.j_step(w, AngleSource::constant(0.0));
  b.j_step(w, theta);
  b.end_node();
}

inline void emit_template(PatternBuilder& b, int w, NodeTemplate t) {
  b.begin_node(template_color(t), {w}, template_label(t));
  for (double a : template_j_angles(t)) b.j_step(w, AngleSource::constant(a));
  b.end_node();
}

/// Green node: exp(-i theta P..P / 2) on the given wires.
inline void emit_green(PatternBuilder& b, const std::vector<int>& ws, Pauli p, AngleSource theta) {
  std::string label = "R_";
  for (std::size_t k = 0; k < ws.size(); ++k) label += to_char(p);
  label += "(" + format_angle(theta) + ")";
  b.begin_node(NodeColor::green, ws, label);
  b.multi_rotation(ws, p, theta);
  b.end_node();
}

/// Stand-alone multi-qubit P rotation on the given input labels.
inline PatternIR multi_qubit_rotation_pattern(const std::vector<Label>& targets, Pauli p,
                                              AngleSource angle) {
  if (targets.empty()) throw ArgumentError("rotation pattern needs targets");
  std::set<Label> uniq(targets.begin(), targets.end());
  if (uniq.size() != targets.size()) throw ArgumentError("duplicate rotation targets");
  PatternBuilder b(targets, angle.is_param() ? angle.param + 1 : 0);
  std::vector<int> ws(targets.size());
  for (std::size_t i = 0; i < ws.size(); ++i) ws[i] = static_cast<int>(i);
  emit_green(b, ws, p, angle);
  return std::move(b).finish();
}

/// Stand-alone single-wire node. Orange takes any angle; blue uses the sign of
/// `angle` (negative -> R_Y(-pi/2)); yellow and red ignore it.
inline PatternIR single_qubit_node(NodeColor color, AngleSource angle = AngleSource::constant(-kPi / 2)) {
  PatternBuilder b(1, angle.is_param() ? angle.param + 1 : 0);
  switch (color) {
    case NodeColor::green: emit_green(b, {0}, Pauli::Z, angle); break;
    case NodeColor::orange: emit_orange(b, 0, angle); break;
    case NodeColor::blue:
      emit_template(b, 0, angle.is_param() || angle.offset < 0 ? NodeTemplate::blue_minus : NodeTemplate::blue_plus);
      break;
    case NodeColor::yellow: emit_template(b, 0, NodeTemplate::yellow); break;
    case NodeColor::red: emit_template(b, 0, NodeTemplate::red); break;
    default: throw ArgumentError("unknown node color");
  }
  return std::move(b).finish();
}

/// Graphviz rendering: one node per qubit, solid entanglement edges, dashed
/// signal dependencies. Deterministic for a given IR.
inline std::string emit_dot(const PatternIR& p) {
  static const std::map<std::string, std::string> fill = {
      {"green", "palegreen"}, {"orange", "orange"}, {"blue", "lightskyblue"},
      {"yellow", "gold"}, {"red", "salmon"}};
  std::unordered_map<Label, const MeasurementCommand*> meas;
  for (const auto& m : p.commands) meas[m.qubit] = &m;
  std::ostringstream os;
  os << "digraph pattern {\n  rankdir=LR;\n  node [shape=circle, style=filled, fillcolor=white];\n";
  for (const auto& q : p.qubits) {
    os << "  q" << q.label << " [label=\"" << q.label;
    std::string color = "white";
    auto it = meas.find(q.label);
    if (it != meas.end()) {
      const auto& m = *it->second;
      os << "\\n" << to_string(m.plane) << " " << format_angle(m.base_angle);
      if (m.node >= 0) color = fill.at(to_string(p.nodes[static_cast<std::size_t>(m.node)].color));
    } else {
      os << "\\n" << q.role();
    }
    os << "\", fillcolor=" << color;
    if (q.input) os << ", shape=square";
    if (q.output) os << ", peripheries=2";
    os << "];\n";
  }
  for (const auto& e : p.edges) {
    os << "  q" << e.control << " -> q" << e.target << " [dir=none";
    if (e.pauli != Pauli::Z) os << ", label=\"C" << to_char(e.pauli) << "\"";
    os << "];\n";
  }
  for (const auto& m : p.commands) {
    for (Label d : m.sign_deps)
      os << "  q" << d << " -> q" << m.qubit << " [style=dashed, color=blue, constraint=false];\n";
    for (Label d : m.offset_deps)
      os << "  q" << d << " -> q" << m.qubit << " [style=dashed, color=red, constraint=false];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace mbvqe
