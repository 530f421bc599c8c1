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

#include "mbvqe/eigensolver.hpp"
#include "mbvqe/vqe.hpp"
#include "support/dense_oracle.hpp"

using namespace mbvqe;
using Catch::Matchers::WithinAbs;

namespace {

Ansatz single_rz() {
  Ansatz a;
  a.circuit = CircuitIR(1, 1);
  a.circuit.add(Gate::rz(0, AngleSource::parameter(0)));
  a.pattern = translate_circuit_naive(a.circuit);
  a.input = StateVector::plus(1);
  return a;
}

Hamiltonian x_only() {
  Hamiltonian h(1);
  h.add(PauliString::single(0, Pauli::X));
  return h;
}

std::vector<double> finite_difference(const Backend& b, const Ansatz& a, std::vector<double> p,
                                      const PauliSumOperator& op, double h = 1e-4) {
  std::vector<double> g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double x = p[i];
    p[i] = x + h;
    const double ep = energy(b, a, p, op).energy;
    p[i] = x - h;
    const double em = energy(b, a, p, op).energy;
    p[i] = x;
    g[i] = (ep - em) / (2 * h);
  }
  return g;
}

}  // namespace

TEST_CASE("parameter shift on a single rotation") {
  const Ansatz a = single_rz();
  const Hamiltonian h = x_only();
  for (const Backend& b : {Backend::circuit(), Backend::forced_zero(), Backend::sampled(4)}) {
    const std::vector<double> p{kPi / 3};
    CHECK_THAT(energy(b, a, p, h).energy, WithinAbs(0.5, 1e-12));
    CHECK_THAT(parameter_shift_gradient(b, a, p, h)[0], WithinAbs(-std::sin(kPi / 3), 1e-12));
    CHECK_THAT(parameter_shift_gradient(b, a, std::vector<double>{0.0}, h)[0], WithinAbs(0.0, 1e-12));
  }
  CHECK_THAT(reverse_mode_gradient(a, std::vector<double>{kPi / 3}, PauliSumOperator(h)).gradient[0],
             WithinAbs(-std::sin(kPi / 3), 1e-12));
}

TEST_CASE("gradients against finite differences") {
  Rng rng(31);
  for (const auto& model : {ModelSpec::heisenberg(2), ModelSpec::tfim(3, 1, 0.7), ModelSpec::hubbard(2, 1, 2, Boundary::open)})
    for (AnsatzKind kind : {AnsatzKind::mbhva, AnsatzKind::mbhea}) {
      const Ansatz a = make_ansatz(model, kind, 1);
      const PauliSumOperator op(build_hamiltonian(model));
      for (int trial = 0; trial < 2; ++trial) {
        const std::vector<double> p = initial_parameters(a.n_params(), rng.engine()());
        const auto fd = finite_difference(Backend::circuit(), a, p, op);
        const auto ps = parameter_shift_gradient(Backend::circuit(), a, p, op);
        const auto rm = reverse_mode_gradient(a, p, op);
        const auto pz = parameter_shift_gradient(Backend::forced_zero(), a, p, op);
        CHECK_THAT(rm.moments.energy, WithinAbs(energy(Backend::circuit(), a, p, op).energy, 1e-10));
        for (std::size_t i = 0; i < p.size(); ++i) {
          CHECK_THAT(ps[i], WithinAbs(fd[i], 1e-6));
          CHECK_THAT(rm.gradient[i], WithinAbs(ps[i], 1e-10));
          CHECK_THAT(pz[i], WithinAbs(ps[i], 1e-9));
        }
      }
    }
  SECTION("shared parameters sum their shifts") {
    const Ansatz a = make_ansatz(ModelSpec::heisenberg(2), AnsatzKind::mbhva, 2, true);
    const PauliSumOperator op(build_hamiltonian(ModelSpec::heisenberg(2)));
    const std::vector<double> p = initial_parameters(a.n_params(), 5);
    const auto fd = finite_difference(Backend::circuit(), a, p, op);
    const auto ps = parameter_shift_gradient(Backend::circuit(), a, p, op);
    for (std::size_t i = 0; i < p.size(); ++i) CHECK_THAT(ps[i], WithinAbs(fd[i], 1e-6));
  }
  SECTION("non-unit scale is rejected") {
    Ansatz a = single_rz();
    a.circuit = CircuitIR(1, 1);
    a.circuit.add(Gate::rz(0, AngleSource::parameter(0, 2.0)));
    CHECK_THROWS_AS(parameter_shift_gradient(Backend::circuit(), a, std::vector<double>{0.1}, x_only()),
                    UnsupportedParameterization);
  }
}

TEST_CASE("backend agreement on energies") {
  const ModelSpec m = ModelSpec::heisenberg(2);
  const Hamiltonian h = build_hamiltonian(m);
  const Ansatz a = make_ansatz(m, AnsatzKind::mbhva, 1);
  const std::vector<double> zero(static_cast<std::size_t>(a.n_params()), 0.0);
  const EnergyVariance c = energy(Backend::circuit(), a, zero, h);
  const EnergyVariance z = energy(Backend::forced_zero(), a, zero, h);
  const StateVector bell = default_initial_state(m);
  const oracle::Mat hm = oracle::hamiltonian(h);
  const oracle::Vec v = oracle::vec(bell);
  const double e = (v.adjoint() * hm * v)(0).real();
  const double e2 = (v.adjoint() * hm * hm * v)(0).real();
  CHECK_THAT(c.energy, WithinAbs(e, 1e-10));
  CHECK_THAT(c.variance, WithinAbs(e2 - e * e, 1e-10));
  CHECK_THAT(z.energy, WithinAbs(c.energy, 1e-10));
  CHECK_THAT(z.variance, WithinAbs(c.variance, 1e-10));

  const std::vector<double> p = initial_parameters(a.n_params(), 77);
  CHECK_THAT(energy(Backend::forced_zero(), a, p, h).energy, WithinAbs(energy(Backend::circuit(), a, p, h).energy, 1e-8));
  CHECK_THAT(energy(Backend::sampled(3), a, p, h).energy, WithinAbs(energy(Backend::circuit(), a, p, h).energy, 1e-8));

  const Ansatz cb = make_ansatz(m, AnsatzKind::cbhva, 1);
  CHECK_THAT(energy(Backend::forced_zero(), cb, p, h).energy, WithinAbs(energy(Backend::circuit(), cb, p, h).energy, 1e-8));
}

TEST_CASE("Adam") {
  const AdamConfig cfg;
  SECTION("first step moves by lr against the gradient sign") {
    AdamState st;
    std::vector<double> p{0.3, -0.2, 1.0};
    const std::vector<double> g{2.0, -0.5, 1e-3};
    adam_step(cfg, st, p, g);
    CHECK_THAT(p[0], WithinAbs(0.3 - 0.1, 1e-6));
    CHECK_THAT(p[1], WithinAbs(-0.2 + 0.1, 1e-6));
    CHECK_THAT(p[2], WithinAbs(1.0 - 0.1, 1e-6));
    CHECK(st.t == 1);
  }
  SECTION("zero gradient leaves parameters and decays moments") {
    AdamState st;
    std::vector<double> p{0.3, -0.2};
    adam_step(cfg, st, p, std::vector<double>{1.0, 1.0});
    const AdamState before = st;
    adam_step(cfg, st, p, std::vector<double>{0.0, 0.0});
    CHECK_THAT(st.m[0], WithinAbs(0.9 * before.m[0], 1e-15));
    CHECK_THAT(st.v[0], WithinAbs(0.999 * before.v[0], 1e-15));
    // A decayed first moment still moves the parameter; only a zero history
    // leaves it in place.
    AdamState fresh;
    std::vector<double> r{0.5};
    adam_step(cfg, fresh, r, std::vector<double>{0.0});
    CHECK(r[0] == 0.5);
  }
  SECTION("deterministic and validated") {
    AdamState s1, s2;
    std::vector<double> p1{0.1, 0.2}, p2{0.1, 0.2};
    adam_step(cfg, s1, p1, std::vector<double>{0.3, -0.7});
    adam_step(cfg, s2, p2, std::vector<double>{0.3, -0.7});
    CHECK(p1 == p2);
    CHECK_THROWS_AS(adam_step(cfg, s1, p1, std::vector<double>{0.3}), ArgumentError);
  }
}

TEST_CASE("V-score") {
  CHECK(v_score(-3.0, 0.0, {4, 0.0}) == 0.0);
  CHECK_THAT(v_score(-2.0, 0.5, {16, 0.0}), WithinAbs(2.0, 1e-15));
  CHECK_THROWS_AS(v_score(1.5, 0.1, {4, 1.5}), UndefinedVScore);
  for (const auto& m : {ModelSpec::tfim(4, 1, 0.8), ModelSpec::heisenberg(2), ModelSpec::hubbard(2, 1, 4, Boundary::open)}) {
    const Hamiltonian h = build_hamiltonian(m);
    Eigen::SelfAdjointEigenSolver<oracle::Mat> es(oracle::hamiltonian(h));
    const oracle::Vec g = es.eigenvectors().col(0);
    std::vector<Label> reg;
    for (int i = 0; i < h.n_qubits(); ++i) reg.push_back(i);
    const EnergyVariance ev = expectation_and_variance(oracle::state(g, reg), h);
    CHECK(v_score(ev.energy, ev.variance, {m.n_sites(), 0.0}) < 1e-8);
  }
}

TEST_CASE("experiment driver") {
  ExperimentConfig cfg;
  cfg.model = ModelSpec::tfim(3, 1, 1);
  cfg.depth = 1;
  cfg.steps = 5;
  cfg.restarts = 2;
  cfg.seed = 9;
  const ExperimentResult a = run_experiment(cfg);
  const ExperimentResult b = run_experiment(cfg);
  REQUIRE(a.runs.size() == 2);
  CHECK(a.runs[0].steps.size() == 6);
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t s = 0; s < 6; ++s) {
      CHECK(a.runs[r].steps[s].energy == b.runs[r].steps[s].energy);
      CHECK(a.runs[r].steps[s].step == static_cast<int>(s));
    }
  CHECK(a.runs[0].seed != a.runs[1].seed);
  CHECK(a.stats.size() == 6);
  CHECK(a.stats[5].min_energy <= a.stats[5].mean_energy);

  for (double x : a.runs[0].initial_params) CHECK((x >= -kPi && x < kPi));

  cfg.workers = 2;
  const ExperimentResult w = run_experiment(cfg);
  for (std::size_t r = 0; r < 2; ++r) CHECK(w.runs[r].final_params == a.runs[r].final_params);
  cfg.workers = 1;

  cfg.gradient = GradientMethod::reverse_mode;
  const ExperimentResult c = run_experiment(cfg);
  for (std::size_t s = 0; s < 6; ++s) CHECK_THAT(c.runs[1].steps[s].energy, WithinAbs(a.runs[1].steps[s].energy, 1e-10));

  cfg.steps = 0;
  cfg.restarts = 1;
  CHECK(run_experiment(cfg).runs[0].steps.size() == 1);

  cfg.backend = BackendKind::mbqc_forced_zero;
  CHECK_THROWS_AS(run_experiment(cfg), ArgumentError);
}
