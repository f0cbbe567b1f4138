#pragma once

#include <cstddef>
#include <functional>

namespace invsrc {

// Runs fn(i) for i in [0, n) on up to `threads` workers (<= 1: inline).
// Indices are split into contiguous blocks; exceptions from workers are
// rethrown on the calling thread.  Callers must make fn(i) write only to
// slot i so results cannot depend on scheduling.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& fn);

// Hardware thread count, at least 1.
int default_thread_count();

}  // namespace invsrc
