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

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mbvqe/errors.hpp"
#include "mbvqe/pauli.hpp"
#include "mbvqe/random.hpp"

namespace mbvqe {

inline constexpr double kPi = std::numbers::pi;

/// Row-major 2x2 complex matrix.
using Mat2 = std::array<cplx, 4>;

inline Mat2 matmul(const Mat2& a, const Mat2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
          a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

inline Mat2 pauli_matrix(Pauli p) {
  const cplx I(0.0, 1.0);
  switch (p) {
    case Pauli::X: return {0.0, 1.0, 1.0, 0.0};
    case Pauli::Y: return {0.0, -I, I, 0.0};
    case Pauli::Z: return {1.0, 0.0, 0.0, -1.0};
    default: return {1.0, 0.0, 0.0, 1.0};
  }
}

/// exp(-i theta P / 2).
inline Mat2 rotation_matrix(Pauli axis, double theta) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const Mat2 p = pauli_matrix(axis);
  const cplx mis(0.0, -s);
  return {c + mis * p[0], mis * p[1], mis * p[2], c + mis * p[3]};
}

inline Mat2 hadamard_matrix() {
  const double r = 1.0 / std::sqrt(2.0);
  return {r, r, r, -r};
}

enum class Plane : std::uint8_t { XY, YZ };

inline const char* to_string(Plane p) { return p == Plane::XY ? "XY" : "YZ"; }

/// Orthonormal single-qubit measurement basis: outcome b projects on basis[b].
struct Basis {
  std::array<cplx, 2> v0;
  std::array<cplx, 2> v1;
};

/// Plane basis at angle a: XY -> {R_Z(a)|+>, R_Z(a)|->}, YZ -> {R_X(a)|0>,
/// R_X(a)|1>}.
inline Basis plane_basis(Plane plane, double angle) {
  if (plane == Plane::XY) {
    const Mat2 r = rotation_matrix(Pauli::Z, angle);
    const double h = 1.0 / std::sqrt(2.0);
    return {{h * r[0], h * r[3]}, {h * r[0], -h * r[3]}};
  }
  const Mat2 r = rotation_matrix(Pauli::X, angle);
  return {{r[0], r[2]}, {r[1], r[3]}};
}

/// Bloch-sphere basis {|up(theta, phi)>, |down(theta, phi)>}.
inline Basis bloch_basis(double theta, double phi) {
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const cplx e = std::polar(1.0, phi);
  return {{c, e * s}, {-s, e * c}};
}

/// Amplitudes over an ordered register of qubit labels. Bit i of the
/// amplitude index is register position i.
class StateVector {
 public:
  /// Empty register holding the scalar 1.
  StateVector() : amps_{cplx(1.0, 0.0)} {}

  StateVector(std::vector<Label> reg, std::vector<cplx> amps)
      : reg_(std::move(reg)), amps_(std::move(amps)) {
    if (reg_.size() > 30) throw CapacityError("register larger than 30 qubits");
    if (amps_.size() != (std::size_t{1} << reg_.size()))
      throw ArgumentError("amplitude count " + std::to_string(amps_.size()) +
                          " does not match register of size " + std::to_string(reg_.size()));
    for (std::size_t a = 0; a < reg_.size(); ++a)
      for (std::size_t b = a + 1; b < reg_.size(); ++b)
        if (reg_[a] == reg_[b]) throw RegisterError("duplicate label " + std::to_string(reg_[a]));
  }

  /// |0...0> on labels 0..n-1.
  static StateVector zeros(int n) {
    std::vector<Label> reg(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) reg[static_cast<std::size_t>(i)] = i;
    return basis_state(std::move(reg), 0);
  }

  /// |+...+> on labels 0..n-1.
  static StateVector plus(int n) {
    StateVector s = zeros(n);
    const double a = 1.0 / std::sqrt(static_cast<double>(s.dimension()));
    for (auto& x : s.amps_) x = a;
    return s;
  }

  static StateVector basis_state(std::vector<Label> reg, std::uint64_t index) {
    std::vector<cplx> amps(std::size_t{1} << reg.size(), 0.0);
    if (index >= amps.size()) throw ArgumentError("basis index out of range");
    amps[index] = 1.0;
    return StateVector(std::move(reg), std::move(amps));
  }

  /// Haar-like random state (normalized complex Gaussian vector).
  static StateVector random(std::vector<Label> reg, Rng& rng) {
    std::vector<cplx> amps(std::size_t{1} << reg.size());
    for (auto& a : amps) a = cplx(rng.normal(), rng.normal());
    StateVector s(std::move(reg), std::move(amps));
    s.normalize();
    return s;
  }

  static StateVector random(int n, Rng& rng) {
    std::vector<Label> reg(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) reg[static_cast<std::size_t>(i)] = i;
    return random(std::move(reg), rng);
  }

  const std::vector<Label>& labels() const noexcept { return reg_; }
  std::size_t size() const noexcept { return reg_.size(); }
  std::size_t dimension() const noexcept { return amps_.size(); }
  std::span<const cplx> amplitudes() const noexcept { return amps_; }
  std::span<cplx> amplitudes() noexcept { return amps_; }
  cplx operator[](std::size_t i) const { return amps_[i]; }

  bool contains(Label q) const noexcept {
    for (Label l : reg_)
      if (l == q) return true;
    return false;
  }

  std::size_t position(Label q) const {
    for (std::size_t i = 0; i < reg_.size(); ++i)
      if (reg_[i] == q) return i;
    throw RegisterError("qubit " + std::to_string(q) + " is not in the register");
  }

  double norm() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return std::sqrt(s);
  }

  void normalize() {
    const double n = norm();
    if (n == 0.0) throw NumericalError("cannot normalize the zero vector");
    for (auto& a : amps_) a /= n;
  }

  /// Same amplitudes reordered so the register reads `order`.
  StateVector permuted(const std::vector<Label>& order) const {
    if (order.size() != reg_.size())
      throw ArgumentError("permutation size does not match register");
    std::vector<std::size_t> src(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) src[i] = position(order[i]);
    std::vector<cplx> out(amps_.size());
    for (std::size_t x = 0; x < amps_.size(); ++x) {
      std::size_t y = 0;
      for (std::size_t i = 0; i < src.size(); ++i) y |= ((x >> src[i]) & 1U) << i;
      out[y] = amps_[x];
    }
    return StateVector(order, std::move(out));
  }

  /// Rename labels without touching amplitudes.
  void relabel(std::vector<Label> reg) {
    if (reg.size() != reg_.size()) throw ArgumentError("relabel size mismatch");
    *this = StateVector(std::move(reg), std::move(amps_));
  }

  // Raw mutation hooks used by the free functions below.
  std::vector<Label>& mutable_labels() noexcept { return reg_; }
  std::vector<cplx>& mutable_amplitudes() noexcept { return amps_; }

 private:
  std::vector<Label> reg_;
  std::vector<cplx> amps_;
};

/// Apply an arbitrary 2x2 matrix on one qubit.
inline void apply_matrix(StateVector& sv, Label q, const Mat2& m) {
  const std::size_t bit = std::size_t{1} << sv.position(q);
  auto& a = sv.mutable_amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (i & bit) continue;
    const cplx a0 = a[i], a1 = a[i | bit];
    a[i] = m[0] * a0 + m[1] * a1;
    a[i | bit] = m[2] * a0 + m[3] * a1;
  }
}

inline void apply_axis_rotation(StateVector& sv, Label q, Pauli axis, double theta) {
  if (axis == Pauli::I) throw ArgumentError("rotation axis must be X, Y or Z");
  apply_matrix(sv, q, rotation_matrix(axis, theta));
}

inline void apply_hadamard(StateVector& sv, Label q) { apply_matrix(sv, q, hadamard_matrix()); }

inline void apply_pauli(StateVector& sv, Label q, Pauli p) {
  if (p == Pauli::I) return;
  apply_matrix(sv, q, pauli_matrix(p));
}

inline void apply_controlled_pauli(StateVector& sv, Label control, Label target, Pauli p) {
  if (control == target) throw ArgumentError("controlled gate with control == target");
  if (p == Pauli::I) throw ArgumentError("controlled identity is not an entangler");
  const std::size_t cb = std::size_t{1} << sv.position(control);
  const std::size_t tb = std::size_t{1} << sv.position(target);
  const Mat2 m = pauli_matrix(p);
  auto& a = sv.mutable_amplitudes();
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(i & cb) || (i & tb)) continue;
    const cplx a0 = a[i], a1 = a[i | tb];
    a[i] = m[0] * a0 + m[1] * a1;
    a[i | tb] = m[2] * a0 + m[3] * a1;
  }
}

/// Masks of a Pauli string whose qubit indices are register labels.
inline PauliMasks register_masks(const StateVector& sv, const PauliString& p) {
  PauliMasks m;
  for (const auto& f : p.factors()) {
    const std::uint64_t bit = std::uint64_t{1} << sv.position(f.qubit);
    if (f.op == Pauli::X || f.op == Pauli::Y) m.x |= bit;
    if (f.op == Pauli::Z || f.op == Pauli::Y) m.z |= bit;
    if (f.op == Pauli::Y) ++m.ny;
  }
  return m;
}

/// exp(-i theta P / 2) for the tensor-product operator P. Generator qubit
/// indices are register labels; the coefficient is ignored.
inline void apply_pauli_string_rotation(StateVector& sv, const PauliString& gen, double theta) {
  if (gen.empty()) throw ArgumentError("Pauli rotation with empty support");
  const PauliMasks m = register_masks(sv, gen);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  const cplx iy = i_pow(m.ny);
  const cplx mis(0.0, -s);
  auto phase = [&](std::uint64_t x) { return (std::popcount(x & m.z) & 1) ? -iy : iy; };
  auto& a = sv.mutable_amplitudes();
  if (m.x == 0) {
    for (std::size_t x = 0; x < a.size(); ++x) a[x] *= c + mis * phase(x);
    return;
  }
  const std::uint64_t pivot = m.x & (~m.x + 1);
  for (std::size_t x = 0; x < a.size(); ++x) {
    if (x & pivot) continue;
    const std::size_t y = x ^ m.x;
    const cplx ax = a[x], ay = a[y];
    a[x] = c * ax + mis * phase(y) * ay;
    a[y] = c * ay + mis * phase(x) * ax;
  }
}

/// Apply the Pauli string itself (coefficient ignored).
inline void apply_pauli_string(StateVector& sv, const PauliString& p) {
  for (const auto& f : p.factors()) apply_pauli(sv, f.qubit, f.op);
}

/// Tensor |+> onto the register as its new most significant position.
inline void attach_plus_qubit(StateVector& sv, Label q) {
  if (sv.contains(q)) throw RegisterError("qubit " + std::to_string(q) + " already attached");
  if (sv.size() >= 30) throw CapacityError("register larger than 30 qubits");
  auto& a = sv.mutable_amplitudes();
  const std::size_t half = a.size();
  a.resize(2 * half);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < half; ++i) {
    a[i] *= r;
    a[i + half] = a[i];
  }
  sv.mutable_labels().push_back(q);
}

struct MeasurementResult {
  int outcome;
  double p0;
  double p1;
};

/// Project qubit q on basis.v0 (outcome 0) or basis.v1 (outcome 1), remove it
/// from the register and renormalize. With `forced` set, the outcome is
/// imposed; otherwise it is sampled from `rng`.
inline MeasurementResult measure_in_basis(StateVector& sv, Label q, const Basis& basis,
                                          std::optional<int> forced, Rng* rng) {
  const std::size_t p = sv.position(q);
  const std::size_t bit = std::size_t{1} << p;
  const std::size_t low = bit - 1;
  auto& a = sv.mutable_amplitudes();
  const std::size_t half = a.size() / 2;
  const cplx c00 = std::conj(basis.v0[0]), c01 = std::conj(basis.v0[1]);
  const cplx c10 = std::conj(basis.v1[0]), c11 = std::conj(basis.v1[1]);
  double p0 = 0.0, p1 = 0.0;
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t i0 = ((k & ~low) << 1) | (k & low);
    const cplx a0 = a[i0], a1 = a[i0 | bit];
    p0 += std::norm(c00 * a0 + c01 * a1);
    p1 += std::norm(c10 * a0 + c11 * a1);
  }
  const double total = p0 + p1;
  p0 /= total;
  p1 /= total;

  int outcome;
  if (forced) {
    if (*forced != 0 && *forced != 1) throw ArgumentError("forced outcome must be 0 or 1");
    outcome = *forced;
    const double pf = outcome == 0 ? p0 : p1;
    if (pf < 1e-12)
      throw MeasurementError("forced outcome " + std::to_string(outcome) + " on qubit " +
                                 std::to_string(q) + " has probability " + std::to_string(pf) +
                                 " (p0 = " + std::to_string(p0) + ", p1 = " + std::to_string(p1) +
                                 ")",
                             p0, p1);
  } else {
    if (rng == nullptr) throw ArgumentError("sampled measurement needs a random source");
    outcome = rng->uniform() < p0 ? 0 : 1;
  }

  const cplx d0 = outcome == 0 ? c00 : c10;
  const cplx d1 = outcome == 0 ? c01 : c11;
  const double scale = 1.0 / std::sqrt((outcome == 0 ? p0 : p1) * total);
  std::vector<cplx> out(half);
  for (std::size_t k = 0; k < half; ++k) {
    const std::size_t i0 = ((k & ~low) << 1) | (k & low);
    out[k] = scale * (d0 * a[i0] + d1 * a[i0 | bit]);
  }
  a = std::move(out);
  auto& reg = sv.mutable_labels();
  reg.erase(reg.begin() + static_cast<std::ptrdiff_t>(p));
  return {outcome, p0, p1};
}

inline MeasurementResult measure_in_plane(StateVector& sv, Label q, Plane plane, double angle,
                                          std::optional<int> forced, Rng* rng) {
  return measure_in_basis(sv, q, plane_basis(plane, angle), forced, rng);
}

struct EnergyVariance {
  double energy;
  double variance;
};

/// Clamp tiny negative variances (round-off) to zero.
inline double clamp_variance(double v) { return (v < 0.0 && v >= -1e-10) ? 0.0 : v; }

/// (<H>, <H^2> - <H>^2). Hamiltonian qubit i is register position i.
inline EnergyVariance expectation_and_variance(const StateVector& sv, const Hamiltonian& h) {
  if (static_cast<std::size_t>(h.n_qubits()) != sv.size())
    throw ArgumentError("Hamiltonian on " + std::to_string(h.n_qubits()) +
                        " qubits applied to register of size " + std::to_string(sv.size()));
  const auto m = PauliSumOperator(h).moments(sv.amplitudes());
  return {m.energy, clamp_variance(m.variance)};
}

inline cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) throw ArgumentError("inner product of registers of different size");
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.dimension(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// |<a|b>| >= 1 - tol. Amplitudes are compared position by position.
inline bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol) {
  if (a.size() != b.size())
    throw ArgumentError("cannot compare registers of size " + std::to_string(a.size()) +
                        " and " + std::to_string(b.size()));
  return std::abs(inner_product(a, b)) >= 1.0 - tol;
}

/// Bit pattern of register positions (for spans of labels).
inline std::uint64_t position_mask(const StateVector& sv, std::span<const Label> qs) {
  std::uint64_t m = 0;
  for (Label q : qs) m |= std::uint64_t{1} << sv.position(q);
  return m;
}

}  // namespace mbvqe
