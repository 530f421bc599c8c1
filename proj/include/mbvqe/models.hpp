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

#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "mbvqe/errors.hpp"
#include "mbvqe/pauli.hpp"
#include "mbvqe/state_vector.hpp"

namespace mbvqe {

enum class Boundary { open, periodic };
enum class SignConvention { as_written, antiferromagnetic };
enum class JWOrdering { interleaved, blocked };
enum class ModelKind { tfim, heisenberg2d, hubbard };

inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }
inline const char* to_string(SignConvention s) {
  return s == SignConvention::as_written ? "as_written" : "antiferromagnetic";
}
inline const char* to_string(JWOrdering o) {
  return o == JWOrdering::interleaved ? "interleaved" : "blocked";
}
inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::tfim: return "tfim";
    case ModelKind::heisenberg2d: return "heisenberg2d";
    default: return "hubbard";
  }
}

using Edge = std::pair<int, int>;

/// Nearest-neighbour bonds of a chain: (i, i+1), plus the wrap bond (N-1, 0)
/// when periodic. The wrap bond is dropped for N = 2, where it would repeat
/// the open bond.
inline std::vector<Edge> chain_bonds(int n, Boundary boundary) {
  if (n < 2) throw ArgumentError("chain needs at least 2 sites, got " + std::to_string(n));
  std::vector<Edge> e;
  for (int i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
  if (boundary == Boundary::periodic && n > 2) e.emplace_back(n - 1, 0);
  return e;
}

/// Edges of an n x n square lattice with row-major sites r*n + c. Column
/// (vertical) edges come first, column by column, then row edges row by row.
inline std::vector<Edge> square_edges(int n, Boundary boundary) {
  if (n < 2) throw ArgumentError("square lattice needs side >= 2, got " + std::to_string(n));
  const bool wrap = boundary == Boundary::periodic && n > 2;
  auto site = [n](int r, int c) { return r * n + c; };
  std::vector<Edge> e;
  for (int c = 0; c < n; ++c) {
    for (int r = 0; r + 1 < n; ++r) e.emplace_back(site(r, c), site(r + 1, c));
    if (wrap) e.emplace_back(site(n - 1, c), site(0, c));
  }
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c + 1 < n; ++c) e.emplace_back(site(r, c), site(r, c + 1));
    if (wrap) e.emplace_back(site(r, n - 1), site(r, 0));
  }
  return e;
}

/// Transverse-field Ising chain: -J Z_i Z_j per bond, then -Gamma X_i per site.
inline Hamiltonian build_tfim(int n, double J, double gamma, Boundary boundary) {
  if (n < 2) throw ArgumentError("TFIM needs N >= 2, got " + std::to_string(n));
  Hamiltonian h(n);
  for (auto [i, j] : chain_bonds(n, boundary))
    h.add(PauliString({{i, Pauli::Z}, {j, Pauli::Z}}, -J));
  for (int i = 0; i < n; ++i) h.add(PauliString::single(i, Pauli::X, -gamma));
  return h;
}

/// Square-lattice Heisenberg model with XX, YY, ZZ per edge. as_written uses
/// coefficient -J, antiferromagnetic uses +|J|.
inline Hamiltonian build_heisenberg2d(int n, double J, SignConvention sign, Boundary boundary) {
  if (n < 2) throw ArgumentError("Heisenberg lattice needs n >= 2, got " + std::to_string(n));
  const double c = sign == SignConvention::as_written ? -J : std::abs(J);
  Hamiltonian h(n * n);
  for (auto [i, j] : square_edges(n, boundary))
    for (Pauli p : {Pauli::X, Pauli::Y, Pauli::Z}) h.add(PauliString({{i, p}, {j, p}}, c));
  return h;
}

/// Qubit index of spin-orbital (site, spin) with spin 0 = up, 1 = down.
inline int jw_qubit(int site, int spin, int p, JWOrdering ordering) {
  return ordering == JWOrdering::interleaved ? 2 * site + spin : spin * p + site;
}

/// X_a Z...Z X_b (or the Y version) between qubits a and b.
inline PauliString jw_hop_string(int a, int b, Pauli end, double coefficient = 1.0) {
  if (a > b) std::swap(a, b);
  std::vector<PauliFactor> f{{a, end}};
  for (int k = a + 1; k < b; ++k) f.push_back({k, Pauli::Z});
  f.push_back({b, end});
  return PauliString(std::move(f), coefficient);
}

struct HubbardModel {
  Hamiltonian hamiltonian;
  std::vector<PauliString> generators;  // unit coefficients, HVA order
};

/// Fermi-Hubbard chain under Jordan-Wigner (occupied = |1>). Hops map to
/// -t/2 (X Z..Z X + Y Z..Z Y); U n_up n_dn maps to U/4 (1 - Z_up - Z_dn +
/// Z_up Z_dn), the constant going to the Hamiltonian offset.
///
/// Generator order per layer: Z on every up orbital, Z on every down orbital,
/// Z_up Z_dn per site, then hop strings (X then Y per bond) for up bonds in
/// chain order followed by down bonds starting from the second bond.
inline HubbardModel build_hubbard_jw(int p, double t, double U, Boundary boundary,
                                     JWOrdering ordering) {
  if (p < 2) throw ArgumentError("Hubbard chain needs p >= 2, got " + std::to_string(p));
  if (ordering != JWOrdering::interleaved && ordering != JWOrdering::blocked)
    throw ArgumentError("unsupported Jordan-Wigner ordering");
  auto q = [&](int site, int spin) { return jw_qubit(site, spin, p, ordering); };
  HubbardModel m{Hamiltonian(2 * p, {}, U * p / 4.0), {}};
  auto emit = [&](PauliString s, double coefficient) {
    m.generators.push_back(s.with_coefficient(1.0));
    if (coefficient != 0.0) m.hamiltonian.add(s.with_coefficient(coefficient));
  };
  for (int spin = 0; spin < 2; ++spin)
    for (int s = 0; s < p; ++s) emit(PauliString::single(q(s, spin), Pauli::Z), -U / 4.0);
  for (int s = 0; s < p; ++s)
    emit(PauliString({{q(s, 0), Pauli::Z}, {q(s, 1), Pauli::Z}}), U / 4.0);
  const std::vector<Edge> bonds = chain_bonds(p, boundary);
  for (int spin = 0; spin < 2; ++spin) {
    for (std::size_t k = 0; k < bonds.size(); ++k) {
      const auto [i, j] = bonds[(k + static_cast<std::size_t>(spin)) % bonds.size()];
      for (Pauli end : {Pauli::X, Pauli::Y}) emit(jw_hop_string(q(i, spin), q(j, spin), end), -t / 2.0);
    }
  }
  return m;
}

/// Support-size histogram of a generator list.
inline std::map<std::size_t, int> support_histogram(const std::vector<PauliString>& gens) {
  std::map<std::size_t, int> h;
  for (const auto& g : gens) ++h[g.weight()];
  return h;
}

/// Product of singlets (|01> - |10>)/sqrt(2) over disjoint pairs on labels
/// 0..n-1.
inline StateVector bell_pair_initial_state(int n, const std::vector<Edge>& pairing) {
  if (n <= 0 || n % 2 != 0) throw ArgumentError("Bell-pair state needs an even qubit count");
  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (auto [a, b] : pairing) {
    if (a < 0 || b < 0 || a >= n || b >= n || a == b)
      throw ArgumentError("invalid Bell pair (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    if (seen[static_cast<std::size_t>(a)]++ || seen[static_cast<std::size_t>(b)]++)
      throw ArgumentError("Bell pairing uses a qubit twice");
  }
  if (pairing.size() * 2 != static_cast<std::size_t>(n))
    throw ArgumentError("Bell pairing does not cover every qubit");
  StateVector s = StateVector::zeros(n);
  auto& a = s.mutable_amplitudes();
  a[0] = 0.0;
  const double amp = std::pow(0.5, static_cast<double>(pairing.size()) / 2.0);
  // Kets are written most significant qubit first, so for pair (x, y) with
  // x < y the + branch has x set and the - branch has y set.
  for (std::size_t choice = 0; choice < (std::size_t{1} << pairing.size()); ++choice) {
    std::size_t idx = 0;
    int sign = 1;
    for (std::size_t k = 0; k < pairing.size(); ++k) {
      const auto [x, y] = pairing[k];
      if ((choice >> k) & 1U) {
        idx |= std::size_t{1} << y;
        sign = -sign;
      } else {
        idx |= std::size_t{1} << x;
      }
    }
    a[idx] = sign * amp;
  }
  return s;
}

/// Consecutive pairs (0,1), (2,3), ...
inline std::vector<Edge> consecutive_pairs(int n) {
  std::vector<Edge> p;
  for (int i = 0; i + 1 < n; i += 2) p.emplace_back(i, i + 1);
  return p;
}

/// Full description of a model instance.
struct ModelSpec {
  ModelKind kind = ModelKind::heisenberg2d;
  int size = 2;  // chain length N, square side n, or Hubbard sites p
  Boundary boundary = Boundary::open;
  double J = 1.0;
  double gamma = 1.0;
  SignConvention sign = SignConvention::antiferromagnetic;
  double t = 1.0;
  double U = 1.0;
  JWOrdering ordering = JWOrdering::interleaved;

  static ModelSpec tfim(int n, double J, double gamma, Boundary b = Boundary::open) {
    ModelSpec m;
    m.kind = ModelKind::tfim;
    m.size = n;
    m.J = J;
    m.gamma = gamma;
    m.boundary = b;
    return m;
  }
  static ModelSpec heisenberg(int n, double J = 1.0,
                              SignConvention s = SignConvention::antiferromagnetic,
                              Boundary b = Boundary::open) {
    ModelSpec m;
    m.kind = ModelKind::heisenberg2d;
    m.size = n;
    m.J = J;
    m.sign = s;
    m.boundary = b;
    return m;
  }
  static ModelSpec hubbard(int p, double t, double U, Boundary b = Boundary::periodic,
                           JWOrdering o = JWOrdering::interleaved) {
    ModelSpec m;
    m.kind = ModelKind::hubbard;
    m.size = p;
    m.t = t;
    m.U = U;
    m.boundary = b;
    m.ordering = o;
    return m;
  }

  int n_qubits() const {
    switch (kind) {
      case ModelKind::tfim: return size;
      case ModelKind::heisenberg2d: return size * size;
      default: return 2 * size;
    }
  }

  /// Site count used to normalize the V-score.
  int n_sites() const { return kind == ModelKind::heisenberg2d ? size * size : size; }
};

inline Hamiltonian build_hamiltonian(const ModelSpec& m) {
  switch (m.kind) {
    case ModelKind::tfim: return build_tfim(m.size, m.J, m.gamma, m.boundary);
    case ModelKind::heisenberg2d: return build_heisenberg2d(m.size, m.J, m.sign, m.boundary);
    default: return build_hubbard_jw(m.size, m.t, m.U, m.boundary, m.ordering).hamiltonian;
  }
}

/// Ordered HVA generators (unit coefficients): one rotation per entry per
/// layer.
inline std::vector<PauliString> hva_generators(const ModelSpec& m) {
  if (m.kind == ModelKind::hubbard)
    return build_hubbard_jw(m.size, m.t, m.U, m.boundary, m.ordering).generators;
  // For the spin models every Hamiltonian term is one generator; rebuild with
  // unit couplings so a zero coupling does not drop a generator.
  Hamiltonian h = m.kind == ModelKind::tfim ? build_tfim(m.size, 1.0, 1.0, m.boundary)
                                            : build_heisenberg2d(m.size, 1.0, m.sign, m.boundary);
  std::vector<PauliString> g;
  for (const auto& t : h.terms()) g.push_back(t.with_coefficient(1.0));
  return g;
}

}  // namespace mbvqe
