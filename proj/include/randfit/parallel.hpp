// Copyright 2026 The randfit Authors
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

#include <cstddef>
#include <functional>

namespace randfit {

/// Worker count from RANDFIT_WORKERS, falling back to the hardware
/// concurrency (at least 1).
std::size_t default_workers();

/// Runs body(i) for i in [0, count) on up to `workers` threads. Work is
/// handed out dynamically; the first exception thrown by any body is
/// rethrown on the calling thread after all workers have joined.
/// workers <= 1 runs inline in index order.
void parallel_for(std::size_t count, std::size_t workers,
                  const std::function<void(std::size_t)>& body);

}  // namespace randfit
