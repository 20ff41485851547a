#include "giant_heom/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <string>
#include <thread>

#ifdef GIANT_HEOM_HAVE_OPENMP
#include <omp.h>
#endif

#include "giant_heom/errors.hpp"

namespace giant_heom::parallel {

std::size_t worker_count() {
    const char* raw = std::getenv(kWorkersEnv);
    if (raw == nullptr || *raw == '\0') {
        const unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : hw;
    }
    const std::string text{raw};
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || value == 0) {
        throw ConfigError(std::string(kWorkersEnv) + ": expected a positive integer, got '" + text + "'");
    }
    return value;
}

void configure_workers() {
    const std::size_t n = worker_count();
#ifdef GIANT_HEOM_HAVE_OPENMP
    omp_set_num_threads(static_cast<int>(n));
#else
    (void)n;
#endif
}

}  // namespace giant_heom::parallel
