#pragma once

#include <functional>

namespace g2patch {

// Thread count from G2PATCH_THREADS, else 1.
int default_threads();

// Runs f(0..n-1) on up to `threads` workers; each index runs exactly once. Results must be
// written to per-index slots so that the outcome does not depend on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& f);

} // namespace g2patch
