// Copyright 2026 The recurdim Authors
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

#ifndef RECURDIM_PARALLEL_HPP_
#define RECURDIM_PARALLEL_HPP_

#include <cstddef>
#include <functional>

namespace recurdim {

// Worker count from RECURDIM_WORKERS, else the hardware concurrency.
int default_workers();

// Runs task(i) for every i in [0, count) on up to `workers` threads.
// Callers write results by index, so the outcome never depends on the
// schedule. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, int workers,
                  const std::function<void(std::size_t)>& task);

}  // namespace recurdim

#endif  // RECURDIM_PARALLEL_HPP_
