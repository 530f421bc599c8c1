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

#include <map>
#include <string>

namespace mbvqe {

/// Operation counts for a circuit or a measurement pattern. Fields that do
/// not apply to the counted object stay zero.
struct ResourceReport {
  // circuits
  int single_qubit_rotations = 0;
  int multi_qubit_rotations = 0;
  int hadamards = 0;
  int pauli_gates = 0;
  int two_qubit_gates = 0;
  // patterns
  int qubits = 0;
  int ancillas = 0;  // non-input, non-output qubits
  int edges = 0;
  int measurements = 0;
  int corrections = 0;
  std::map<std::string, int> nodes;  // node color -> count
  // both
  int parameters = 0;

  int single_qubit_gates() const { return single_qubit_rotations + hadamards + pauli_gates; }
  int total_gates() const { return single_qubit_gates() + two_qubit_gates + multi_qubit_rotations; }

  friend bool operator==(const ResourceReport&, const ResourceReport&) = default;
};

}  // namespace mbvqe
