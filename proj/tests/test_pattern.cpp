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

#include <catch_amalgamated.hpp>

#include "mbvqe/compile.hpp"
#include "mbvqe/executor.hpp"
#include "mbvqe/pattern.hpp"
#include "support/dense_oracle.hpp"

using namespace mbvqe;

namespace {

oracle::Mat mat(const Mat2& m) {
  oracle::Mat out(2, 2);
  out << m[0], m[1], m[2], m[3];
  return out;
}

/// Runs `p` under every outcome record and compares with `u` applied to a
/// random input.
void check_all_branches(const PatternIR& p, const oracle::Mat& u, std::span<const double> params,
                        Rng& rng) {
  const int k = static_cast<int>(p.inputs.size());
  const StateVector in = StateVector::random(k, rng);
  const oracle::Vec expect = u * oracle::vec(in);
  const std::size_t m = p.commands.size();
  REQUIRE(m < 20);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << m); ++bits) {
    std::unordered_map<Label, int> rec;
    for (std::size_t i = 0; i < m; ++i) rec[p.commands[i].qubit] = static_cast<int>((bits >> i) & 1U);
    const ExecutionResult r = execute_pattern(p, params, in, ExecutionOptions::forced(rec));
    CHECK(oracle::overlap(oracle::vec(r.state), expect) > 1 - 1e-10);
    CHECK(r.max_outcome_bias < 1e-9);
  }
}

}  // namespace

TEST_CASE("single-qubit node templates") {
  Rng rng(11);
  for (NodeTemplate t : {NodeTemplate::blue_minus, NodeTemplate::blue_plus, NodeTemplate::yellow, NodeTemplate::red}) {
    PatternBuilder b(1);
    emit_template(b, 0, t);
    const PatternIR p = std::move(b).finish();
    CHECK(static_cast<int>(p.commands.size()) == node_budget(template_color(t)));
    INFO(template_label(t));
    check_all_branches(p, mat(template_unitary(t)), {}, rng);
  }
  for (double th : {0.0, 0.7, -2.1, kPi}) {
    const PatternIR p = single_qubit_node(NodeColor::orange, AngleSource::constant(th));
    CHECK(p.commands.size() == 2);
    check_all_branches(p, mat(rotation_matrix(Pauli::X, th)), {}, rng);
  }
  const PatternIR par = single_qubit_node(NodeColor::orange, AngleSource::parameter(0));
  const std::vector<double> v{1.3};
  check_all_branches(par, mat(rotation_matrix(Pauli::X, 1.3)), v, rng);
}

TEST_CASE("multi-qubit rotation fragment") {
  Rng rng(12);
  for (int n = 1; n <= 4; ++n)
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      std::vector<Label> t(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = i;
      const PatternIR pat = multi_qubit_rotation_pattern(t, p, AngleSource::parameter(0));
      CHECK(pat.commands.size() == 1);
      CHECK(pat.qubits.size() == static_cast<std::size_t>(n + 1));
      const std::vector<double> th{rng.uniform(-kPi, kPi)};
      std::vector<PauliFactor> f;
      for (int i = 0; i < n; ++i) f.push_back({i, p});
      check_all_branches(pat, oracle::rotation(oracle::pauli_string(PauliString(f), n), th[0]), th, rng);
    }
  CHECK_THROWS_AS(multi_qubit_rotation_pattern({0, 0}, Pauli::Z, AngleSource::constant(1)), ArgumentError);
}

TEST_CASE("frame tracking through chained steps") {
  Rng rng(13);
  PatternBuilder b(2, 3);
  emit_template(b, 0, NodeTemplate::red);
  emit_orange(b, 1, AngleSource::parameter(0));
  emit_green(b, {0, 1}, Pauli::Z, AngleSource::parameter(1));
  b.cz(0, 1);
  emit_green(b, {1, 0}, Pauli::X, AngleSource::parameter(2, -2.0, 0.3));
  emit_template(b, 1, NodeTemplate::yellow);
  const PatternIR p = std::move(b).finish();
  const std::vector<double> th{0.4, -1.1, 0.8};
  oracle::Mat u = oracle::Mat::Identity(4, 4);
  u = oracle::single(2, 0, mat(template_unitary(NodeTemplate::red))) * u;
  u = oracle::single(2, 1, mat(rotation_matrix(Pauli::X, th[0]))) * u;
  u = oracle::rotation(oracle::pauli_string(PauliString::dense("ZZ"), 2), th[1]) * u;
  u = oracle::controlled(2, 0, 1, Pauli::Z) * u;
  u = oracle::rotation(oracle::pauli_string(PauliString::dense("XX"), 2), -2.0 * th[2] + 0.3) * u;
  u = oracle::single(2, 1, mat(template_unitary(NodeTemplate::yellow))) * u;
  const oracle::Mat uu = u;
  check_all_branches(p, uu, th, rng);
}

namespace {

std::vector<double> random_params(int n, Rng& rng) {
  std::vector<double> p(static_cast<std::size_t>(n));
  for (auto& x : p) x = rng.uniform(-kPi, kPi);
  return p;
}

/// Forced-zero and sampled execution of `p` against the circuit unitary.
void check_against_circuit(const PatternIR& p, const CircuitIR& c, Rng& rng, int trials = 2) {
  REQUIRE(p.n_params == c.n_params());
  for (int t = 0; t < trials; ++t) {
    const auto th = random_params(c.n_params(), rng);
    const StateVector in = StateVector::random(c.n_qubits(), rng);
    const StateVector expect = simulate_circuit(c, th, in);
    CHECK(equal_up_to_global_phase(execute_pattern(p, th, in).state, expect, 1e-10));
    CHECK(equal_up_to_global_phase(execute_pattern(p, th, in, ExecutionOptions::sampled(rng.engine()())).state, expect, 1e-10));
  }
}

}  // namespace

TEST_CASE("MBHVA compilation") {
  Rng rng(21);
  for (int n = 2; n <= 4; ++n)
    for (int d = 1; d <= 2; ++d) {
      const PatternIR p = compile_mbhva(ModelSpec::heisenberg(n), d);
      ResourceReport r = count_pattern_resources(p);
      CHECK(r.measurements == 46 * n * (n - 1) * d);
      CHECK(r.nodes["green"] == 6 * n * (n - 1) * d);
      CHECK(p.n_params == r.nodes["green"]);
    }
  CHECK(compile_mbhva(ModelSpec::heisenberg(4), 2).n_params == 144);
  MbhvaOptions shared;
  shared.share_parameters_across_layers = true;
  CHECK(compile_mbhva(ModelSpec::heisenberg(4), 2, shared).n_params == 72);

  const ResourceReport hub = count_pattern_resources(compile_mbhva(ModelSpec::hubbard(3, 1, 4), 1));
  CHECK(hub.measurements == 131);
  CHECK(hub.nodes.at("green") == 21);
  CHECK(hub.nodes.at("orange") == 7);
  CHECK(hub.nodes.at("blue") == 7);
  CHECK(hub.nodes.at("yellow") == 12);
  CHECK(hub.nodes.at("red") == 5);
  CHECK(count_pattern_resources(compile_mbhva(ModelSpec::hubbard(3, 1, 4), 2)).measurements == 262);

  check_against_circuit(compile_mbhva(ModelSpec::heisenberg(2), 2), build_cbhva(ModelSpec::heisenberg(2), 2), rng);
  check_against_circuit(compile_mbhva(ModelSpec::hubbard(2, 1, 2, Boundary::open), 2),
                        build_cbhva(ModelSpec::hubbard(2, 1, 2, Boundary::open), 2), rng);
  check_against_circuit(compile_mbhva(ModelSpec::tfim(3, 1, 1), 2), build_cbhva(ModelSpec::tfim(3, 1, 1), 2), rng);
  check_against_circuit(compile_mbhva(ModelSpec::heisenberg(2), 2, shared),
                        build_cbhva(ModelSpec::heisenberg(2), 2, {true}), rng);
  CHECK_THROWS_AS(compile_mbhva(ModelSpec::heisenberg(2), 0), ArgumentError);
}

TEST_CASE("MBHEA compilation") {
  Rng rng(22);
  CHECK(compile_mbhea(2, 1).commands.size() == 11);
  CHECK(compile_mbhea(16, 2).n_params == 98);
  for (int n = 1; n <= 3; ++n) check_against_circuit(compile_mbhea(n, 2), build_mbhea_reference_circuit(n, 2), rng);
}

TEST_CASE("naive translation") {
  Rng rng(23);
  CircuitIR cn(2);
  cn.add(Gate::cnot(0, 1));
  CHECK(translate_circuit_naive(cn).commands.size() == 4);
  check_against_circuit(translate_circuit_naive(cn), cn, rng);

  CircuitIR cz(2);
  cz.add(Gate::cz(0, 1));
  const PatternIR pcz = translate_circuit_naive(cz);
  CHECK(pcz.commands.empty());
  CHECK(pcz.edges.size() == 1);

  for (int n = 2; n <= 4; ++n)
    for (int d = 1; d <= 2; ++d)
      CHECK(translate_circuit_naive(decompose_native(build_cbhva(ModelSpec::heisenberg(n), d))).commands.size() ==
            static_cast<std::size_t>(94 * n * (n - 1) * d));

  const CircuitIR h2 = decompose_native(build_cbhva(ModelSpec::heisenberg(2), 1));
  check_against_circuit(translate_circuit_naive(h2), h2, rng);
  NaiveCostTable plain;
  plain.fuse_single_qubit_runs = false;
  plain.diagonal_runs_via_ancilla = false;
  check_against_circuit(translate_circuit_naive(h2, plain), h2, rng);

  CircuitIR mixed(2, 2);
  mixed.add(Gate::h(0));
  mixed.add(Gate::rx(0, AngleSource::parameter(0)));
  mixed.add(Gate::rx(0, AngleSource::parameter(1, -1.0, 0.2)));
  mixed.add(Gate::rz(0, AngleSource::constant(0.4)));
  mixed.add(Gate::h(0));
  mixed.add(Gate::h(0));
  mixed.add(Gate::rz(1, AngleSource::parameter(1)));
  mixed.add(Gate::cz(1, 0));
  mixed.add(Gate::rx(1, AngleSource::constant(0.9)));
  check_against_circuit(translate_circuit_naive(mixed), mixed, rng, 4);

  CircuitIR bad(1, 1);
  bad.add(Gate::ry(0, AngleSource::parameter(0)));
  CHECK_THROWS_AS(translate_circuit_naive(bad), CompilationError);
  CHECK_THROWS_AS(translate_circuit_naive(build_cbhva(ModelSpec::heisenberg(2), 1)), CompilationError);
}

TEST_CASE("pattern resources, widths and rendering") {
  CHECK(count_pattern_resources(PatternBuilder(2).finish()) == ResourceReport{[] {
          ResourceReport r;
          r.qubits = 2;
          return r;
        }()});
  for (int n = 1; n <= 5; ++n) {
    std::vector<Label> t;
    for (int i = 0; i < n; ++i) t.push_back(i);
    CHECK(peak_active_width(multi_qubit_rotation_pattern(t, Pauli::Z, AngleSource::constant(0.1))) == n + 1);
  }
  CHECK(peak_active_width(compile_mbhva(ModelSpec::heisenberg(2), 1)) == 5);
  CHECK(peak_active_width(PatternBuilder(3).finish()) == 3);

  const PatternIR g = multi_qubit_rotation_pattern({0, 1}, Pauli::Z, AngleSource::constant(0.3));
  const std::string dot = emit_dot(g);
  CHECK(dot == emit_dot(g));
  std::size_t nodes = 0, edges = 0;
  std::istringstream is(dot);
  for (std::string line; std::getline(is, line);) {
    if (line.rfind("  q", 0) == 0 && line.find("->") == std::string::npos) ++nodes;
    if (line.find("->") != std::string::npos && line.find("dashed") == std::string::npos) ++edges;
  }
  CHECK(nodes == 3);
  CHECK(edges == 2);
}

TEST_CASE("lazy and full-graph executors agree") {
  Rng rng(24);
  const PatternIR p = compile_mbhva(ModelSpec::heisenberg(2), 1);
  const CircuitIR single = build_mbhea_reference_circuit(2, 1);
  const PatternIR q = compile_mbhea(2, 1);
  const auto th = random_params(q.n_params, rng);
  const StateVector in = StateVector::random(2, rng);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto a = execute_pattern(q, th, in, ExecutionOptions::sampled(seed));
    const auto b = execute_reference_full_graph(q, th, in, ExecutionOptions::sampled(seed));
    CHECK(a.outcomes == b.outcomes);
    CHECK(equal_up_to_global_phase(a.state, b.state, 1e-10));
  }
  CHECK_THROWS_AS(execute_reference_full_graph(p, random_params(p.n_params, rng), StateVector::random(4, rng)), CapacityError);
  (void)single;
}
