#pragma once

#include <cstddef>

namespace giant_heom::parallel {

// Environment variable holding the worker count.
inline constexpr const char* kWorkersEnv = "GIANT_HEOM_WORKERS";

// Workers requested through GIANT_HEOM_WORKERS, or the hardware concurrency
// when unset. Throws ConfigError on a value that is not a positive integer.
std::size_t worker_count();

// Applies worker_count() to the OpenMP runtime (no-op without OpenMP).
void configure_workers();

}  // namespace giant_heom::parallel
