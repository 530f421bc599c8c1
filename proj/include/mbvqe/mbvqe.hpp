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

// Everything: library and CLI command layer.

#pragma once

#include "mbvqe/circuit.hpp"
#include "mbvqe/commands.hpp"
#include "mbvqe/compile.hpp"
#include "mbvqe/config.hpp"
#include "mbvqe/eigensolver.hpp"
#include "mbvqe/errors.hpp"
#include "mbvqe/executor.hpp"
#include "mbvqe/models.hpp"
#include "mbvqe/pattern.hpp"
#include "mbvqe/pauli.hpp"
#include "mbvqe/random.hpp"
#include "mbvqe/resources.hpp"
#include "mbvqe/serialize.hpp"
#include "mbvqe/state_vector.hpp"
#include "mbvqe/vqe.hpp"
