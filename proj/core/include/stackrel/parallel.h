// Copyright 2026 The Stackrel Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef STACKREL_PARALLEL_H_
#define STACKREL_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace stackrel {

// Runs body(i) for i in [0, count) on up to `jobs` threads. Each index is
// visited exactly once; callers write results into pre-sized slots so the
// outcome does not depend on scheduling. The first exception thrown by any
// body is rethrown after all workers join. jobs == 0 means hardware
// concurrency.
void ParallelFor(std::size_t count, std::size_t jobs,
                 const std::function<void(std::size_t)>& body);

}  // namespace stackrel

#endif  // STACKREL_PARALLEL_H_
