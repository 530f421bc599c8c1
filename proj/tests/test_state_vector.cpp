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

#include "mbvqe/state_vector.hpp"
#include "support/dense_oracle.hpp"

using namespace mbvqe;
using Catch::Matchers::WithinAbs;

namespace {

double max_diff(const oracle::Vec& a, const oracle::Vec& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("axis rotation: identity and pi rotation") {
  Rng rng(7);
  StateVector s = StateVector::random(3, rng);
  const oracle::Vec before = oracle::vec(s);
  apply_axis_rotation(s, 1, Pauli::X, 0.0);
  CHECK(max_diff(before, oracle::vec(s)) < 1e-15);

  StateVector z = StateVector::zeros(1);
  apply_axis_rotation(z, 0, Pauli::X, kPi);
  CHECK_THAT(std::abs(z[0]), WithinAbs(0.0, 1e-15));
  CHECK_THAT(z[1].real(), WithinAbs(0.0, 1e-15));
  CHECK_THAT(z[1].imag(), WithinAbs(-1.0, 1e-15));
}

TEST_CASE("axis rotation matches dense exponential") {
  Rng rng(11);
  for (Pauli axis : {Pauli::X, Pauli::Y, Pauli::Z}) {
    for (int q = 0; q < 3; ++q) {
      StateVector s = StateVector::random(3, rng);
      const oracle::Vec expect = oracle::single(3, q, oracle::rotation(oracle::pauli(axis), 0.7331)) * oracle::vec(s);
      apply_axis_rotation(s, q, axis, 0.7331);
      CHECK(max_diff(expect, oracle::vec(s)) < 1e-12);
      CHECK_THAT(s.norm(), WithinAbs(1.0, 1e-12));
    }
  }
}

TEST_CASE("axis rotation group law") {
  Rng rng(3);
  StateVector a = StateVector::random(2, rng);
  StateVector b = a;
  apply_axis_rotation(a, 0, Pauli::Y, 0.4);
  apply_axis_rotation(a, 0, Pauli::Y, 1.3);
  apply_axis_rotation(b, 0, Pauli::Y, 1.7);
  CHECK(max_diff(oracle::vec(a), oracle::vec(b)) < 1e-12);
}

TEST_CASE("unknown label is a register error") {
  StateVector s = StateVector::zeros(2);
  CHECK_THROWS_AS(apply_axis_rotation(s, 5, Pauli::X, 0.1), RegisterError);
}

TEST_CASE("controlled Pauli") {
  SECTION("CZ on |++> gives the two-qubit graph state") {
    StateVector s = StateVector::plus(2);
    apply_controlled_pauli(s, 0, 1, Pauli::Z);
    CHECK_THAT(s[0].real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(s[1].real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(s[2].real(), WithinAbs(0.5, 1e-15));
    CHECK_THAT(s[3].real(), WithinAbs(-0.5, 1e-15));
  }
  SECTION("CZ is an involution and symmetric") {
    Rng rng(5);
    StateVector s = StateVector::random(3, rng);
    StateVector t = s;
    const oracle::Vec v = oracle::vec(s);
    apply_controlled_pauli(s, 0, 2, Pauli::Z);
    apply_controlled_pauli(t, 2, 0, Pauli::Z);
    CHECK(max_diff(oracle::vec(s), oracle::vec(t)) < 1e-15);
    apply_controlled_pauli(s, 0, 2, Pauli::Z);
    CHECK(max_diff(oracle::vec(s), v) < 1e-15);
  }
  SECTION("CX truth table") {
    StateVector s = StateVector::basis_state({0, 1}, 0b01);  // qubit 0 set
    apply_controlled_pauli(s, 0, 1, Pauli::X);
    CHECK_THAT(std::abs(s[0b11]), WithinAbs(1.0, 1e-15));
  }
  SECTION("matches projector oracle for every Pauli") {
    Rng rng(9);
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) {
      StateVector s = StateVector::random(3, rng);
      const oracle::Vec expect = oracle::controlled(3, 2, 0, p) * oracle::vec(s);
      apply_controlled_pauli(s, 2, 0, p);
      CHECK(max_diff(expect, oracle::vec(s)) < 1e-14);
    }
  }
  SECTION("control equal to target") {
    StateVector s = StateVector::zeros(2);
    CHECK_THROWS_AS(apply_controlled_pauli(s, 1, 1, Pauli::Z), ArgumentError);
  }
}

TEST_CASE("Pauli string rotation") {
  SECTION("zero angle") {
    Rng rng(1);
    StateVector s = StateVector::random(3, rng);
    const oracle::Vec v = oracle::vec(s);
    apply_pauli_string_rotation(s, PauliString::dense("XYZ"), 0.0);
    CHECK(max_diff(v, oracle::vec(s)) < 1e-15);
  }
  SECTION("ZZ on |00> is a phase") {
    StateVector s = StateVector::zeros(2);
    apply_pauli_string_rotation(s, PauliString::dense("ZZ"), 0.9);
    CHECK_THAT(s[0].real(), WithinAbs(std::cos(0.45), 1e-15));
    CHECK_THAT(s[0].imag(), WithinAbs(-std::sin(0.45), 1e-15));
  }
  SECTION("matches dense exponential") {
    Rng rng(21);
    for (const char* ops : {"XZX", "YZY", "XYZ", "YYY", "ZIX", "IYI"}) {
      StateVector s = StateVector::random(3, rng);
      const PauliString p = PauliString::dense(ops);
      const oracle::Vec expect = oracle::rotation(oracle::pauli_string(p, 3), 1.1) * oracle::vec(s);
      apply_pauli_string_rotation(s, p, 1.1);
      CHECK(max_diff(expect, oracle::vec(s)) < 1e-12);
    }
  }
  SECTION("labels are resolved through the register") {
    Rng rng(4);
    StateVector s = StateVector::random(std::vector<Label>{10, 20, 30}, rng);
    StateVector t(std::vector<Label>{0, 1, 2}, std::vector<cplx>(s.amplitudes().begin(), s.amplitudes().end()));
    apply_pauli_string_rotation(s, PauliString({{10, Pauli::X}, {30, Pauli::Y}}), 0.3);
    apply_pauli_string_rotation(t, PauliString({{0, Pauli::X}, {2, Pauli::Y}}), 0.3);
    CHECK(max_diff(oracle::vec(s), oracle::vec(t)) < 1e-15);
  }
  SECTION("empty support") {
    StateVector s = StateVector::zeros(1);
    CHECK_THROWS_AS(apply_pauli_string_rotation(s, PauliString(), 0.3), ArgumentError);
  }
}

TEST_CASE("measurement") {
  Rng rng(2024);
  SECTION("|+> in XY at angle 0") {
    StateVector s = StateVector::plus(1);
    auto r = measure_in_plane(s, 0, Plane::XY, 0.0, std::nullopt, &rng);
    CHECK(r.outcome == 0);
    CHECK_THAT(r.p0, WithinAbs(1.0, 1e-15));
    CHECK(s.size() == 0);
  }
  SECTION("|0> in YZ at angle 0") {
    StateVector s = StateVector::zeros(1);
    auto r = measure_in_plane(s, 0, Plane::YZ, 0.0, std::nullopt, &rng);
    CHECK(r.outcome == 0);
    CHECK_THAT(r.p0, WithinAbs(1.0, 1e-15));
  }
  SECTION("forcing an impossible outcome") {
    StateVector s = StateVector::zeros(1);
    try {
      measure_in_plane(s, 0, Plane::YZ, 0.0, 1, nullptr);
      FAIL("expected MeasurementError");
    } catch (const MeasurementError& e) {
      CHECK_THAT(e.p0(), WithinAbs(1.0, 1e-15));
      CHECK_THAT(e.p1(), WithinAbs(0.0, 1e-15));
    }
  }
  SECTION("probabilities sum to one and post-state matches projector") {
    for (Plane plane : {Plane::XY, Plane::YZ}) {
      for (int b = 0; b < 2; ++b) {
        StateVector s = StateVector::random(3, rng);
        const oracle::Vec v = oracle::vec(s);
        const Basis basis = plane_basis(plane, 0.77);
        oracle::Vec e(2);
        const auto& bv = b == 0 ? basis.v0 : basis.v1;
        e << bv[0], bv[1];
        const oracle::Mat proj = oracle::single(3, 1, e * e.adjoint());
        const double pb = (proj * v).squaredNorm();
        auto r = measure_in_plane(s, 1, plane, 0.77, b, nullptr);
        CHECK_THAT(r.p0 + r.p1, WithinAbs(1.0, 1e-12));
        CHECK_THAT(b == 0 ? r.p0 : r.p1, WithinAbs(pb, 1e-12));
        CHECK_THAT(s.norm(), WithinAbs(1.0, 1e-12));
        CHECK(s.labels() == std::vector<Label>{0, 2});
        // Contract the measured qubit with <e| and compare.
        oracle::Vec expect(4);
        for (int k = 0; k < 4; ++k) {
          const int lo = k & 1, hi = (k >> 1) & 1;
          expect(k) = std::conj(bv[0]) * v(lo | (0 << 1) | (hi << 2)) + std::conj(bv[1]) * v(lo | (1 << 1) | (hi << 2));
        }
        expect /= expect.norm();
        CHECK(oracle::overlap(expect, oracle::vec(s)) > 1 - 1e-12);
      }
    }
  }
  SECTION("plane bases are the rotated computational / Hadamard bases") {
    const Basis xy = plane_basis(Plane::XY, 0.0);
    CHECK_THAT(std::abs(xy.v0[0] - xy.v0[1]), WithinAbs(0.0, 1e-15));
    CHECK_THAT(std::abs(xy.v1[0] + xy.v1[1]), WithinAbs(0.0, 1e-15));
    const Basis yz = plane_basis(Plane::YZ, 0.6);
    oracle::Vec r0 = oracle::rotation(oracle::pauli(Pauli::X), 0.6).col(0);
    CHECK_THAT(std::abs(yz.v0[0] - r0(0)) + std::abs(yz.v0[1] - r0(1)), WithinAbs(0.0, 1e-14));
  }
  SECTION("Bloch basis at phi = pi/2 equals YZ plane at -theta") {
    for (double theta : {0.0, 0.3, 1.9, -2.4, kPi}) {
      StateVector a = StateVector::random(3, rng);
      StateVector b = a;
      for (int out = 0; out < 2; ++out) {
        StateVector a1 = a, b1 = b;
        auto ra = measure_in_basis(a1, 0, bloch_basis(theta, kPi / 2), out, nullptr);
        auto rb = measure_in_plane(b1, 0, Plane::YZ, -theta, out, nullptr);
        CHECK_THAT(ra.p0, WithinAbs(rb.p0, 1e-12));
        CHECK_THAT(ra.p1, WithinAbs(rb.p1, 1e-12));
        CHECK(equal_up_to_global_phase(a1, b1, 1e-12));
      }
    }
  }
}

TEST_CASE("attach |+>") {
  SECTION("onto the empty state") {
    StateVector s;
    attach_plus_qubit(s, 4);
    CHECK(s.labels() == std::vector<Label>{4});
    CHECK_THAT(s[0].real(), WithinAbs(M_SQRT1_2, 1e-15));
    CHECK_THAT(s[1].real(), WithinAbs(M_SQRT1_2, 1e-15));
  }
  SECTION("onto |0>") {
    StateVector s = StateVector::zeros(1);
    attach_plus_qubit(s, 1);
    CHECK_THAT(s[0b00].real(), WithinAbs(M_SQRT1_2, 1e-15));
    CHECK_THAT(s[0b10].real(), WithinAbs(M_SQRT1_2, 1e-15));
    CHECK(std::abs(s[0b01]) == 0.0);
  }
  SECTION("round trip through an XY measurement") {
    Rng rng(8);
    StateVector s = StateVector::random(2, rng);
    const StateVector orig = s;
    attach_plus_qubit(s, 9);
    auto r = measure_in_plane(s, 9, Plane::XY, 0.0, std::nullopt, &rng);
    CHECK(r.outcome == 0);
    CHECK(equal_up_to_global_phase(s, orig, 1e-12));
  }
  SECTION("duplicate label") {
    StateVector s = StateVector::zeros(2);
    CHECK_THROWS_AS(attach_plus_qubit(s, 1), RegisterError);
  }
}

TEST_CASE("expectation and variance") {
  SECTION("eigenstate and non-eigenstate") {
    auto ez = expectation_and_variance(StateVector::zeros(1), Hamiltonian(1, {PauliString::single(0, Pauli::Z)}));
    CHECK_THAT(ez.energy, WithinAbs(1.0, 1e-15));
    CHECK_THAT(ez.variance, WithinAbs(0.0, 1e-15));
    auto ex = expectation_and_variance(StateVector::zeros(1), Hamiltonian(1, {PauliString::single(0, Pauli::X)}));
    CHECK_THAT(ex.energy, WithinAbs(0.0, 1e-15));
    CHECK_THAT(ex.variance, WithinAbs(1.0, 1e-15));
  }
  SECTION("random Heisenberg-type operator against dense matrix") {
    Rng rng(31);
    Hamiltonian h(4);
    for (auto [a, b] : {std::pair{0, 1}, {1, 2}, {2, 3}, {0, 3}})
      for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z})
        h.add(PauliString({{a, p}, {b, p}}, rng.uniform(-1, 1)));
    h.add(PauliString::single(2, Pauli::Y, 0.3));
    h.set_offset(-0.7);
    const StateVector s = StateVector::random(4, rng);
    const oracle::Mat m = oracle::hamiltonian(h);
    const oracle::Vec v = oracle::vec(s);
    const double e = v.dot(m * v).real();
    const double e2 = v.dot(m * m * v).real();
    auto r = expectation_and_variance(s, h);
    CHECK_THAT(r.energy, WithinAbs(e, 1e-10));
    CHECK_THAT(r.variance, WithinAbs(e2 - e * e, 1e-10));
    CHECK_THAT(PauliSumOperator(h).expectation(s.amplitudes()), WithinAbs(e, 1e-10));
  }
  SECTION("size mismatch") {
    CHECK_THROWS_AS(expectation_and_variance(StateVector::zeros(2), Hamiltonian(3)), ArgumentError);
  }
  SECTION("clamping") {
    CHECK(clamp_variance(-5e-11) == 0.0);
    CHECK(clamp_variance(-1e-9) < 0.0);
    CHECK(clamp_variance(0.25) == 0.25);
  }
}

TEST_CASE("global phase comparison") {
  Rng rng(12);
  StateVector v = StateVector::random(3, rng);
  StateVector w = v;
  for (auto& a : w.mutable_amplitudes()) a *= std::polar(1.0, 0.42);
  CHECK(equal_up_to_global_phase(v, w, 1e-12));
  CHECK(equal_up_to_global_phase(v, v, 1e-12));
  CHECK_FALSE(equal_up_to_global_phase(StateVector::basis_state({0}, 0), StateVector::basis_state({0}, 1), 1e-8));
  CHECK_THROWS_AS(equal_up_to_global_phase(StateVector::zeros(1), StateVector::zeros(2), 1e-8), ArgumentError);
}

TEST_CASE("permutation of the register") {
  Rng rng(13);
  StateVector s = StateVector::random(std::vector<Label>{5, 6, 7}, rng);
  StateVector p = s.permuted({7, 5, 6});
  CHECK(p.labels() == std::vector<Label>{7, 5, 6});
  // amplitude with 5=1, 6=0, 7=1 : old index 0b101, new index bits (7,5,6) = 1,1,0 -> 0b011
  CHECK(p[0b011] == s[0b101]);
  StateVector back = p.permuted({5, 6, 7});
  CHECK(max_diff(oracle::vec(back), oracle::vec(s)) == 0.0);
}
