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
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mbvqe/errors.hpp"

namespace mbvqe {

using cplx = std::complex<double>;
using Label = int;

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

inline char to_char(Pauli p) {
  constexpr char names[] = {'I', 'X', 'Y', 'Z'};
  return names[static_cast<int>(p)];
}

inline Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': return Pauli::I;
    case 'X': case 'x': return Pauli::X;
    case 'Y': case 'y': return Pauli::Y;
    case 'Z': case 'z': return Pauli::Z;
    default: throw ArgumentError(std::string("not a Pauli symbol: '") + c + "'");
  }
}

struct PauliFactor {
  int qubit;
  Pauli op;
  friend bool operator==(const PauliFactor&, const PauliFactor&) = default;
};

/// Weighted tensor product of single-qubit Paulis. Factors are kept sorted by
/// qubit index; identities are dropped.
class PauliString {
 public:
  PauliString() = default;

  PauliString(std::vector<PauliFactor> factors, double coefficient = 1.0)
      : coefficient_(coefficient) {
    if (!std::isfinite(coefficient)) throw ArgumentError("Pauli coefficient must be finite");
    std::erase_if(factors, [](const PauliFactor& f) { return f.op == Pauli::I; });
    std::sort(factors.begin(), factors.end(),
              [](const PauliFactor& a, const PauliFactor& b) { return a.qubit < b.qubit; });
    for (std::size_t k = 0; k < factors.size(); ++k) {
      if (factors[k].qubit < 0) throw ArgumentError("negative qubit index in Pauli string");
      if (k > 0 && factors[k].qubit == factors[k - 1].qubit)
        throw ArgumentError("repeated qubit " + std::to_string(factors[k].qubit) +
                            " in Pauli string");
    }
    factors_ = std::move(factors);
  }

  /// Dense spelling, e.g. ("XZX", first = 2) is X2 Z3 X4.
  static PauliString dense(const std::string& ops, int first = 0, double coefficient = 1.0) {
    std::vector<PauliFactor> f;
    for (std::size_t k = 0; k < ops.size(); ++k)
      f.push_back({first + static_cast<int>(k), pauli_from_char(ops[k])});
    return PauliString(std::move(f), coefficient);
  }

  /// Single factor.
  static PauliString single(int qubit, Pauli op, double coefficient = 1.0) {
    return PauliString({{qubit, op}}, coefficient);
  }

  const std::vector<PauliFactor>& factors() const noexcept { return factors_; }
  double coefficient() const noexcept { return coefficient_; }
  std::size_t weight() const noexcept { return factors_.size(); }
  bool empty() const noexcept { return factors_.empty(); }
  int max_qubit() const noexcept { return factors_.empty() ? -1 : factors_.back().qubit; }

  Pauli at(int qubit) const noexcept {
    for (const auto& f : factors_)
      if (f.qubit == qubit) return f.op;
    return Pauli::I;
  }

  std::vector<int> support() const {
    std::vector<int> s;
    s.reserve(factors_.size());
    for (const auto& f : factors_) s.push_back(f.qubit);
    return s;
  }

  PauliString with_coefficient(double c) const {
    PauliString p = *this;
    p.coefficient_ = c;
    return p;
  }

  /// Operator part only, e.g. "X0 Z1 X2" (empty string for the identity).
  std::string label() const {
    std::string s;
    for (const auto& f : factors_) {
      if (!s.empty()) s += ' ';
      s += to_char(f.op);
      s += std::to_string(f.qubit);
    }
    return s;
  }

  bool same_operator(const PauliString& o) const { return factors_ == o.factors_; }

  bool commutes_with(const PauliString& o) const {
    int anti = 0;
    for (const auto& f : factors_) {
      Pauli g = o.at(f.qubit);
      if (g != Pauli::I && g != f.op) ++anti;
    }
    return anti % 2 == 0;
  }

 private:
  std::vector<PauliFactor> factors_;
  double coefficient_ = 1.0;
};

/// Sum of real-weighted Pauli strings plus a scalar offset (identity term).
class Hamiltonian {
 public:
  Hamiltonian() = default;
  explicit Hamiltonian(int n_qubits, std::vector<PauliString> terms = {}, double offset = 0.0)
      : n_qubits_(n_qubits), offset_(offset) {
    if (n_qubits <= 0) throw ArgumentError("Hamiltonian needs a positive qubit count");
    for (auto& t : terms) add(std::move(t));
  }

  void add(PauliString term) {
    if (term.max_qubit() >= n_qubits_)
      throw ArgumentError("term " + term.label() + " exceeds n_qubits = " +
                          std::to_string(n_qubits_));
    if (term.empty()) {
      offset_ += term.coefficient();
      return;
    }
    terms_.push_back(std::move(term));
  }

  int n_qubits() const noexcept { return n_qubits_; }
  const std::vector<PauliString>& terms() const noexcept { return terms_; }
  double offset() const noexcept { return offset_; }
  void set_offset(double offset) { offset_ = offset; }

  bool is_diagonal() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const PauliString& t) {
      return std::all_of(t.factors().begin(), t.factors().end(),
                         [](const PauliFactor& f) { return f.op == Pauli::Z; });
    });
  }

 private:
  int n_qubits_ = 0;
  std::vector<PauliString> terms_;
  double offset_ = 0.0;
};

/// Bit masks of a Pauli string on register positions: P|x> =
/// i^{ny} (-1)^{popcount(x & z)} |x ^ x_mask>.
struct PauliMasks {
  std::uint64_t x = 0;
  std::uint64_t z = 0;
  int ny = 0;
};

inline PauliMasks pauli_masks(const PauliString& p) {
  PauliMasks m;
  for (const auto& f : p.factors()) {
    if (f.qubit >= 64) throw ArgumentError("qubit index too large for bit masks");
    const std::uint64_t bit = std::uint64_t{1} << f.qubit;
    if (f.op == Pauli::X || f.op == Pauli::Y) m.x |= bit;
    if (f.op == Pauli::Z || f.op == Pauli::Y) m.z |= bit;
    if (f.op == Pauli::Y) ++m.ny;
  }
  return m;
}

/// i^k for integer k.
inline cplx i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

/// Matrix-free operator for a Hamiltonian, with terms grouped by their X mask
/// so each group costs a single pass over the amplitudes. Qubit i of the
/// Hamiltonian is register position i.
class PauliSumOperator {
 public:
  explicit PauliSumOperator(const Hamiltonian& h) : n_(h.n_qubits()), offset_(h.offset()) {
    if (n_ > 30) throw ArgumentError("PauliSumOperator supports at most 30 qubits");
    std::map<std::uint64_t, std::size_t> index;
    for (const auto& t : h.terms()) {
      const PauliMasks m = pauli_masks(t);
      auto [it, fresh] = index.try_emplace(m.x, groups_.size());
      if (fresh) groups_.push_back(Group{m.x, {}});
      groups_[it->second].terms.push_back({m.z, t.coefficient() * i_pow(m.ny)});
    }
    const std::size_t dim = std::size_t{1} << n_;
    diag_.assign(dim, 0.0);
    std::erase_if(groups_, [&](const Group& g) {
      if (g.x != 0) return false;
      for (std::size_t s = 0; s < dim; ++s) diag_[s] = g.phase(s).real();
      return true;
    });
  }

  int n_qubits() const noexcept { return n_; }
  std::size_t dimension() const noexcept { return std::size_t{1} << n_; }
  double offset() const noexcept { return offset_; }

  /// out = (H - offset) in. `out` must not alias `in`.
  void apply_terms(std::span<const cplx> in, std::span<cplx> out) const {
    check(in.size());
    check(out.size());
    for (std::size_t s = 0; s < in.size(); ++s) out[s] = diag_[s] * in[s];
    for (const auto& g : groups_)
      for (std::size_t s = 0; s < in.size(); ++s) out[s ^ g.x] += g.phase(s) * in[s];
  }

  /// out = H in.
  void apply(std::span<const cplx> in, std::span<cplx> out) const {
    apply_terms(in, out);
    if (offset_ != 0.0)
      for (std::size_t s = 0; s < in.size(); ++s) out[s] += offset_ * in[s];
  }

  /// <psi|H|psi> for a normalized psi, without allocating.
  double expectation(std::span<const cplx> psi) const {
    check(psi.size());
    double e = 0.0;
    for (std::size_t s = 0; s < psi.size(); ++s) e += diag_[s] * std::norm(psi[s]);
    for (const auto& g : groups_) {
      cplx acc = 0.0;
      for (std::size_t s = 0; s < psi.size(); ++s)
        acc += std::conj(psi[s ^ g.x]) * g.phase(s) * psi[s];
      e += acc.real();
    }
    return e + offset_;
  }

  struct Moments {
    double energy;
    double variance;
  };

  /// Energy and variance. Variance is ||(H - E) psi||^2, non-negative by
  /// construction.
  Moments moments(std::span<const cplx> psi) const {
    std::vector<cplx> hpsi(psi.size());
    apply_terms(psi, hpsi);
    double et = 0.0;
    for (std::size_t s = 0; s < psi.size(); ++s) et += (std::conj(psi[s]) * hpsi[s]).real();
    double var = 0.0;
    for (std::size_t s = 0; s < psi.size(); ++s) var += std::norm(hpsi[s] - et * psi[s]);
    return {et + offset_, var};
  }

 private:
  struct Term {
    std::uint64_t z;
    cplx c;  // coefficient * i^ny
  };
  struct Group {
    std::uint64_t x;
    std::vector<Term> terms;
    cplx phase(std::size_t s) const {
      cplx acc = 0.0;
      for (const auto& t : terms) acc += (std::popcount(s & t.z) & 1) ? -t.c : t.c;
      return acc;
    }
  };

  void check(std::size_t size) const {
    if (size != dimension())
      throw ArgumentError("state dimension " + std::to_string(size) +
                          " does not match operator on " + std::to_string(n_) + " qubits");
  }

  int n_;
  double offset_;
  std::vector<double> diag_;
  std::vector<Group> groups_;
};

}  // namespace mbvqe
