#pragma once

#include <complex>

namespace giant_heom::special {

// First derivative of the digamma function, psi(1, z), for complex z.
//
// Upward recurrence psi1(z) = 1/z^2 + psi1(z+1) until |z| >= 12 (and Re z >= 0),
// then the asymptotic series 1/z + 1/(2z^2) + sum_{n=1..8} B_2n / z^(2n+1).
// Relative accuracy is ~1e-15 on the closed right half-plane.
// Throws DomainError at the poles z = 0, -1, -2, ...
std::complex<double> trigamma(std::complex<double> z);

}  // namespace giant_heom::special
