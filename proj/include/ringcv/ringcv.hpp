// Copyright 2026 The ringcv Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella header: the whole library.

#include "ringcv/core.hpp"        // IWYU pragma: export
#include "ringcv/fock.hpp"        // IWYU pragma: export
#include "ringcv/hamiltonian.hpp" // IWYU pragma: export
#include "ringcv/ladder.hpp"      // IWYU pragma: export
#include "ringcv/lindblad.hpp"    // IWYU pragma: export
#include "ringcv/modes.hpp"       // IWYU pragma: export
#include "ringcv/protocol.hpp"    // IWYU pragma: export
#include "ringcv/squeezers.hpp"   // IWYU pragma: export
#include "ringcv/version.hpp"     // IWYU pragma: export
