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

// JSON forms of circuits, patterns and resource reports. Layouts are
// documented in docs/formats.md; bump the version on any change.

#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "mbvqe/circuit.hpp"
#include "mbvqe/errors.hpp"
#include "mbvqe/pattern.hpp"
#include "mbvqe/resources.hpp"

namespace mbvqe {

using Json = nlohmann::ordered_json;

inline constexpr int kCircuitFormatVersion = 1;
inline constexpr int kPatternFormatVersion = 1;

namespace detail {

inline Json angle_to_json(const AngleSource& a) {
  if (!a.is_param()) return Json{{"value", a.offset}};
  return Json{{"param", a.param}, {"scale", a.scale}, {"offset", a.offset}};
}

inline AngleSource angle_from_json(const Json& j) {
  if (j.contains("value")) return AngleSource::constant(j.at("value").get<double>());
  return AngleSource::parameter(j.at("param").get<int>(), j.value("scale", 1.0), j.value("offset", 0.0));
}

inline std::string pauli_name(Pauli p) { return std::string(1, to_char(p)); }

inline Pauli pauli_from_json(const Json& j) {
  const std::string s = j.get<std::string>();
  if (s.size() != 1) throw ArgumentError("bad Pauli '" + s + "'");
  return pauli_from_char(s[0]);
}

inline void check_header(const Json& j, const char* format, int version) {
  if (j.value("format", std::string()) != format)
    throw ArgumentError(std::string("expected a document with format '") + format + "'");
  if (j.value("version", -1) != version)
    throw ArgumentError(std::string("unsupported ") + format + " version " +
                        std::to_string(j.value("version", -1)));
}

}  // namespace detail

inline Json circuit_to_json(const CircuitIR& c) {
  Json gates = Json::array();
  for (const Gate& g : c.gates()) {
    Json x;
    x["kind"] = to_string(g.kind);
    switch (g.kind) {
      case GateKind::axis_rotation:
        x["axis"] = detail::pauli_name(g.axis);
        x["qubit"] = g.q0;
        x["angle"] = detail::angle_to_json(g.angle);
        break;
      case GateKind::pauli_rotation: {
        Json f = Json::array();
        for (const auto& p : g.generator.factors()) f.push_back({{"qubit", p.qubit}, {"op", detail::pauli_name(p.op)}});
        x["generator"] = f;
        x["angle"] = detail::angle_to_json(g.angle);
        break;
      }
      case GateKind::hadamard: x["qubit"] = g.q0; break;
      case GateKind::pauli:
        x["axis"] = detail::pauli_name(g.axis);
        x["qubit"] = g.q0;
        break;
      case GateKind::cz:
      case GateKind::cnot:
        x["control"] = g.q0;
        x["target"] = g.q1;
        break;
    }
    gates.push_back(std::move(x));
  }
  return Json{{"format", "mbvqe-circuit"},
              {"version", kCircuitFormatVersion},
              {"n_qubits", c.n_qubits()},
              {"n_params", c.n_params()},
              {"gates", gates}};
}

inline CircuitIR circuit_from_json(const Json& j) {
  detail::check_header(j, "mbvqe-circuit", kCircuitFormatVersion);
  CircuitIR c(j.at("n_qubits").get<int>(), j.at("n_params").get<int>());
  for (const Json& x : j.at("gates")) {
    const std::string kind = x.at("kind").get<std::string>();
    if (kind == "rotation") {
      c.add(Gate::rotation(detail::pauli_from_json(x.at("axis")), x.at("qubit").get<int>(),
                           detail::angle_from_json(x.at("angle"))));
    } else if (kind == "pauli_rotation") {
      std::vector<PauliFactor> f;
      for (const Json& p : x.at("generator")) f.push_back({p.at("qubit").get<int>(), detail::pauli_from_json(p.at("op"))});
      c.add(Gate::pauli_rotation(PauliString(f), detail::angle_from_json(x.at("angle"))));
    } else if (kind == "h") {
      c.add(Gate::h(x.at("qubit").get<int>()));
    } else if (kind == "pauli") {
      c.add(Gate::pauli(detail::pauli_from_json(x.at("axis")), x.at("qubit").get<int>()));
    } else if (kind == "cz") {
      c.add(Gate::cz(x.at("control").get<int>(), x.at("target").get<int>()));
    } else if (kind == "cnot") {
      c.add(Gate::cnot(x.at("control").get<int>(), x.at("target").get<int>()));
    } else {
      throw ArgumentError("unknown gate kind '" + kind + "'");
    }
  }
  return c;
}

inline Json pattern_to_json(const PatternIR& p) {
  Json qubits = Json::array(), edges = Json::array(), commands = Json::array(),
       corrections = Json::array(), nodes = Json::array();
  for (const auto& q : p.qubits) qubits.push_back({{"label", q.label}, {"role", q.role()}});
  for (const auto& e : p.edges)
    edges.push_back({{"control", e.control}, {"target", e.target}, {"pauli", detail::pauli_name(e.pauli)}});
  for (const auto& m : p.commands) {
    Json c{{"qubit", m.qubit},
           {"plane", to_string(m.plane)},
           {"angle", detail::angle_to_json(m.base_angle)},
           {"sign_deps", m.sign_deps},
           {"offset_deps", m.offset_deps}};
    if (m.node >= 0) c["node"] = m.node;
    commands.push_back(std::move(c));
  }
  for (const auto& c : p.corrections)
    corrections.push_back({{"pauli", detail::pauli_name(c.pauli)}, {"target", c.target}, {"deps", c.deps}});
  for (const auto& n : p.nodes)
    nodes.push_back({{"color", to_string(n.color)}, {"wires", n.wires}, {"label", n.label}});
  return Json{{"format", "mbvqe-pattern"},
              {"version", kPatternFormatVersion},
              {"n_params", p.n_params},
              {"inputs", p.inputs},
              {"outputs", p.outputs},
              {"qubits", qubits},
              {"edges", edges},
              {"commands", commands},
              {"corrections", corrections},
              {"nodes", nodes}};
}

inline PatternIR pattern_from_json(const Json& j) {
  detail::check_header(j, "mbvqe-pattern", kPatternFormatVersion);
  PatternIR p;
  p.n_params = j.at("n_params").get<int>();
  p.inputs = j.at("inputs").get<std::vector<Label>>();
  p.outputs = j.at("outputs").get<std::vector<Label>>();
  for (const Json& q : j.at("qubits")) {
    const std::string role = q.at("role").get<std::string>();
    if (role != "input" && role != "output" && role != "input_output" && role != "body")
      throw ArgumentError("unknown qubit role '" + role + "'");
    p.qubits.push_back({q.at("label").get<Label>(), role.rfind("input", 0) == 0,
                        role == "output" || role == "input_output"});
  }
  for (const Json& e : j.at("edges"))
    p.edges.push_back({e.at("control").get<Label>(), e.at("target").get<Label>(),
                       detail::pauli_from_json(e.value("pauli", Json("Z")))});
  for (const Json& c : j.at("commands")) {
    const std::string plane = c.at("plane").get<std::string>();
    if (plane != "XY" && plane != "YZ") throw ArgumentError("unknown plane '" + plane + "'");
    p.commands.push_back({c.at("qubit").get<Label>(), plane == "XY" ? Plane::XY : Plane::YZ,
                          detail::angle_from_json(c.at("angle")),
                          c.value("sign_deps", std::vector<Label>{}),
                          c.value("offset_deps", std::vector<Label>{}), c.value("node", -1)});
  }
  for (const Json& c : j.at("corrections"))
    p.corrections.push_back({detail::pauli_from_json(c.at("pauli")), c.at("target").get<Label>(),
                             c.at("deps").get<std::vector<Label>>()});
  if (j.contains("nodes"))
    for (const Json& n : j.at("nodes")) {
      const std::string color = n.at("color").get<std::string>();
      NodeColor c = NodeColor::green;
      bool found = false;
      for (NodeColor k : {NodeColor::green, NodeColor::orange, NodeColor::blue, NodeColor::yellow, NodeColor::red})
        if (color == to_string(k)) {
          c = k;
          found = true;
        }
      if (!found) throw ArgumentError("unknown node color '" + color + "'");
      p.nodes.push_back({c, n.at("wires").get<std::vector<int>>(), n.value("label", std::string())});
    }
  validate_pattern(p);
  return p;
}

inline Json resources_to_json(const ResourceReport& r) {
  Json nodes = Json::object();
  for (const auto& [k, v] : r.nodes) nodes[k] = v;
  return Json{{"single_qubit_rotations", r.single_qubit_rotations},
              {"multi_qubit_rotations", r.multi_qubit_rotations},
              {"hadamards", r.hadamards},
              {"pauli_gates", r.pauli_gates},
              {"two_qubit_gates", r.two_qubit_gates},
              {"qubits", r.qubits},
              {"ancillas", r.ancillas},
              {"edges", r.edges},
              {"measurements", r.measurements},
              {"corrections", r.corrections},
              {"nodes", nodes},
              {"parameters", r.parameters}};
}

}  // namespace mbvqe
