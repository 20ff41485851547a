#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <vector>

namespace giant_heom::quadrature {

using ComplexFn = std::function<std::complex<double>(double)>;

// Running integral F_n = int_0^{n h} f(s) ds for n = 0..n_steps.
// Each grid interval is split into `subdivisions` pieces and integrated with a
// 10-point Gauss-Legendre rule, so f is never sampled on the grid itself.
std::vector<std::complex<double>> cumulative_integral(const ComplexFn& f, double h,
                                                      std::size_t n_steps,
                                                      std::size_t subdivisions = 1);

// Cubic Hermite interpolation on a uniform grid from values and derivatives.
std::complex<double> hermite_uniform(const std::vector<std::complex<double>>& values,
                                     const std::vector<std::complex<double>>& derivatives,
                                     double h, double t);

}  // namespace giant_heom::quadrature
