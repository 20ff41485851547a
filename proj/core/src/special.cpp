#include "giant_heom/special.hpp"

#include <array>
#include <cmath>
#include <string>

#include "giant_heom/errors.hpp"

namespace giant_heom::special {

namespace {

constexpr double kAsymptoticRadius = 12.0;

// B_2, B_4, ..., B_16
constexpr std::array<double, 8> kBernoulli = {
    1.0 / 6.0,   -1.0 / 30.0,   1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0,  -691.0 / 2730.0, 7.0 / 6.0, -3617.0 / 510.0,
};

bool is_pole(std::complex<double> z) {
    return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

}  // namespace

std::complex<double> trigamma(std::complex<double> z) {
    if (is_pole(z)) {
        throw DomainError("trigamma: pole at z = " + std::to_string(z.real()));
    }
    std::complex<double> shift{0.0, 0.0};
    while (std::abs(z) < kAsymptoticRadius || z.real() < 0.0) {
        shift += 1.0 / (z * z);
        z += 1.0;
    }
    const std::complex<double> inv = 1.0 / z;
    const std::complex<double> inv2 = inv * inv;
    // Horner in 1/z^2 for the Bernoulli tail.
    std::complex<double> tail{0.0, 0.0};
    for (auto it = kBernoulli.rbegin(); it != kBernoulli.rend(); ++it) {
        tail = tail * inv2 + *it;
    }
    const std::complex<double> series = inv + 0.5 * inv2 + tail * inv2 * inv;
    return shift + series;
}

}  // namespace giant_heom::special
