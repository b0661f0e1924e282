#pragma once

#include <cstdint>
#include <exception>
#include <functional>

namespace mwls {

/// Caps worker threads used by parallel loops (0 restores the default).
void set_max_threads(int n);
int max_threads();

/// Runs body(k) for k in [0, n). Iterations must be independent. The exception
/// of the lowest failing iteration is rethrown after the loop.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& body);

}  // namespace mwls
