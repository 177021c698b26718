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

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

#include "scaleinv/harness/config.hpp"
#include "scaleinv/harness/results.hpp"

namespace scaleinv::harness {

struct RunOptions {
  int workers = 1;
  /// Per-realization records are written here (atomically) and reused on resume.
  std::optional<std::filesystem::path> checkpoint_dir;
  bool resume = false;
  /// Discard an existing checkpoint instead of refusing to start.
  bool force = false;
  /// Stop after computing this many realization jobs (cached records do not
  /// count); the returned ResultSet is then marked incomplete.
  std::optional<std::size_t> stop_after;
  std::ostream* log = nullptr;
};

struct Timing {
  double total_seconds = 0.0;
  std::vector<double> point_seconds;
  std::vector<int> point_workers;
};

/// Runs every scan point of the sweep. The ResultSet is a pure function of the
/// configuration: realization r of every point uses derive_seed(master_seed, r)
/// and reductions run in realization order, whatever the worker count.
ResultSet run_sweep(const SweepConfig& config, const RunOptions& options = {},
                    Timing* timing = nullptr);

/// Loads the configuration stored in the checkpoint and continues it.
ResultSet resume_sweep(const std::filesystem::path& checkpoint_dir, RunOptions options = {},
                       Timing* timing = nullptr);

/// Estimated peak bytes held by one worker for a realization of dimension D.
std::size_t worker_memory_bytes(std::size_t dim, bool vectors, std::size_t plane_wave_families);

/// Worker count after applying the memory budget (at least 1).
int effective_workers(const SweepConfig& config, std::size_t dim, int requested);

/// Pins the BLAS/LAPACK library to `threads` threads when it supports it.
void configure_blas_threads(int threads);

}  // namespace scaleinv::harness
