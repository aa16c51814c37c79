// SPDX-License-Identifier: Apache-2.0
//
// Copyright (C) 2026 The cfmimo authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <random>

namespace cfmimo {

using Rng = std::mt19937_64;

// Independent stream for realization `index` of an experiment seeded with `seed`.
// Streams are a pure function of (seed, index, purpose), so realizations can be
// evaluated in any order or in parallel.
Rng make_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t purpose = 0);

}  // namespace cfmimo
