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

// Fermi-Hubbard chain built directly in the occupation-number basis, as an
// oracle for the Jordan-Wigner builder.

#pragma once

#include <Eigen/Dense>
#include <bit>
#include <utility>
#include <vector>

#include "mbvqe/models.hpp"

namespace oracle {

/// Hubbard chain in the occupation-number basis, built from fermionic
/// creation/annihilation signs. Mode index = 2*site + spin.
inline Eigen::MatrixXd fock_hubbard(int p, double t, double U, mbvqe::Boundary b) {
  const int modes = 2 * p;
  const int dim = 1 << modes;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  auto parity_below = [](int state, int mode) { return std::popcount(static_cast<unsigned>(state) & ((1U << mode) - 1U)) & 1; };
  // c_i^dag c_j |state>, returns (sign, new state) or sign 0.
  auto hop = [&](int i, int j, int state) -> std::pair<int, int> {
    if (!((state >> j) & 1)) return {0, 0};
    int sign = parity_below(state, j) ? -1 : 1;
    int s1 = state & ~(1 << j);
    if ((s1 >> i) & 1) return {0, 0};
    sign *= parity_below(s1, i) ? -1 : 1;
    return {sign, s1 | (1 << i)};
  };
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i + 1 < p; ++i) bonds.emplace_back(i, i + 1);
  if (b == mbvqe::Boundary::periodic && p > 2) bonds.emplace_back(p - 1, 0);
  for (int state = 0; state < dim; ++state) {
    for (auto [i, j] : bonds)
      for (int spin = 0; spin < 2; ++spin) {
        const int a = 2 * i + spin, c = 2 * j + spin;
        for (auto [x, y] : {std::pair{a, c}, std::pair{c, a}}) {
          auto [sign, out] = hop(x, y, state);
          if (sign) h(out, state) += -t * sign;
        }
      }
    for (int s = 0; s < p; ++s)
      if (((state >> (2 * s)) & 1) && ((state >> (2 * s + 1)) & 1)) h(state, state) += U;
  }
  return h;
}

}  // namespace oracle
