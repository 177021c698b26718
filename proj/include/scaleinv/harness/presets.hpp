/* Copyright 2026 The scaleinv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "scaleinv/harness/config.hpp"

namespace scaleinv::harness {

/// Canned desk-scale sweeps behind one figure. Realization counts and sizes
/// are reduced from the publication runs; each sweep's config (and so its
/// manifest) records the counts actually used.
struct Preset {
  std::string id;
  std::string description;
  std::vector<SweepConfig> sweeps;  // each sweep's name is its output subdirectory
};

/// fig1, fig2, fig3, figS1 .. figS6.
std::vector<std::string> preset_ids();
/// Throws InvalidArgument for an unknown id.
Preset make_preset(std::string_view id);

}  // namespace scaleinv::harness
