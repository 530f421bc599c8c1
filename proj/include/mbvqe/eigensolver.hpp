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

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mbvqe/errors.hpp"
#include "mbvqe/pauli.hpp"
#include "mbvqe/random.hpp"

namespace mbvqe {

struct LanczosOptions {
  double tol = 1e-8;          // residual norm ||H x - e x|| at convergence
  int max_iterations = 5000;  // total matrix-vector products
  int max_qubits = 20;
  std::uint64_t seed = 12345;
  std::size_t memory_budget_bytes = std::size_t{768} << 20;  // Krylov basis cap
};

struct GroundStateResult {
  double energy;
  int iterations;
  double residual;
};

/// Lowest eigenvalue of a Hamiltonian by restarted Lanczos with full
/// reorthogonalization. H is applied matrix-free.
inline GroundStateResult exact_ground_energy(const Hamiltonian& h, const LanczosOptions& opt = {}) {
  if (h.n_qubits() > opt.max_qubits)
    throw CapacityError("exact diagonalization limited to " + std::to_string(opt.max_qubits) +
                        " qubits, got " + std::to_string(h.n_qubits()));
  using CVec = std::vector<cplx>;
  const PauliSumOperator op(h);
  const std::size_t dim = op.dimension();
  const std::size_t vec_bytes = dim * sizeof(cplx);
  const std::size_t krylov = std::clamp<std::size_t>(opt.memory_budget_bytes / vec_bytes, 8, 160);
  const std::size_t m_max = std::min(krylov, dim);

  auto dot = [](const CVec& a, const CVec& b) {
    cplx s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
    return s;
  };
  auto nrm = [&](const CVec& a) { return std::sqrt(dot(a, a).real()); };

  Rng rng(opt.seed);
  CVec start(dim);
  for (auto& x : start) x = cplx(rng.normal(), rng.normal());
  {
    const double n0 = nrm(start);
    for (auto& x : start) x /= n0;
  }

  // Lowest Ritz pair of the current tridiagonal matrix.
  auto ritz = [](const std::vector<double>& alpha, const std::vector<double>& beta) {
    const Eigen::Index m = static_cast<Eigen::Index>(alpha.size());
    Eigen::VectorXd diag(m), sub(std::max<Eigen::Index>(m - 1, 0));
    for (Eigen::Index i = 0; i < m; ++i) diag(i) = alpha[static_cast<std::size_t>(i)];
    for (Eigen::Index i = 0; i + 1 < m; ++i) sub(i) = beta[static_cast<std::size_t>(i)];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
    return std::pair<double, Eigen::VectorXd>(es.eigenvalues()(0), es.eigenvectors().col(0));
  };

  int iterations = 0;
  double energy = 0.0, residual = INFINITY;
  std::vector<CVec> basis;
  CVec w(dim);
  while (true) {
    basis.clear();
    basis.push_back(start);
    std::vector<double> alpha, beta;
    Eigen::VectorXd y;
    bool done = false;
    for (std::size_t k = 0; k < m_max; ++k) {
      op.apply_terms(basis[k], w);
      ++iterations;
      alpha.push_back(dot(basis[k], w).real());
      // Full reorthogonalization (two passes of classical Gram-Schmidt).
      for (int pass = 0; pass < 2; ++pass)
        for (const auto& v : basis) {
          const cplx c = dot(v, w);
          for (std::size_t i = 0; i < dim; ++i) w[i] -= c * v[i];
        }
      const double b = nrm(w);
      const bool invariant = b < 1e-13 * std::max(1.0, std::abs(alpha.back()));
      const bool last = k + 1 == m_max || iterations >= opt.max_iterations;
      if (invariant || last || alpha.size() % 10 == 0) {
        std::tie(energy, y) = ritz(alpha, beta);
        residual = invariant ? 0.0 : std::abs(b * y(y.size() - 1));
        if (invariant || residual <= opt.tol) done = true;
        if (done || last) break;
      }
      beta.push_back(b);
      CVec next(dim);
      for (std::size_t i = 0; i < dim; ++i) next[i] = w[i] / b;
      basis.push_back(std::move(next));
    }

    // Restart from (or finish with) the Ritz vector.
    std::fill(start.begin(), start.end(), cplx(0.0));
    for (Eigen::Index j = 0; j < y.size(); ++j) {
      const double c = y(j);
      const auto& v = basis[static_cast<std::size_t>(j)];
      for (std::size_t i = 0; i < dim; ++i) start[i] += c * v[i];
    }
    const double ns = nrm(start);
    for (auto& x : start) x /= ns;

    if (done) break;
    if (iterations >= opt.max_iterations)
      throw ConvergenceError("Lanczos did not converge in " + std::to_string(iterations) +
                                 " iterations (residual " + std::to_string(residual) + ")",
                             residual);
  }
  // Report the true residual of the returned Ritz pair.
  op.apply_terms(start, w);
  double r2 = 0.0;
  for (std::size_t i = 0; i < dim; ++i) r2 += std::norm(w[i] - energy * start[i]);
  residual = std::sqrt(r2);
  return {energy + op.offset(), iterations, residual};
}

}  // namespace mbvqe
