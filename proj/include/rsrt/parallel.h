// Copyright 2026 The rsrt Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#ifndef RSRT_PARALLEL_H_
#define RSRT_PARALLEL_H_

#include <cstddef>
#include <functional>

namespace rsrt {

/// Worker count for a requested value; 0 means one per hardware thread.
int ResolveThreads(int requested);

/// Runs body(i) for every i in [0, count) on up to `threads` workers (0 =
/// auto). Items are claimed dynamically, so `body` must write only to
/// per-item state. The first exception thrown by any body is rethrown after
/// all workers have joined.
void ParallelFor(std::size_t count, int threads,
                 const std::function<void(std::size_t)>& body);

}  // namespace rsrt

#endif  // RSRT_PARALLEL_H_
