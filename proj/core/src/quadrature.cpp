#include "giant_heom/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>

#include "giant_heom/errors.hpp"

namespace giant_heom::quadrature {

using cplx = std::complex<double>;

std::vector<cplx> cumulative_integral(const ComplexFn& f, double h, std::size_t n_steps,
                                      std::size_t subdivisions) {
    using boost::math::quadrature::gauss;
    if (!(h > 0.0)) throw DomainError("cumulative_integral: step must be positive");
    subdivisions = std::max<std::size_t>(subdivisions, 1);
    const double piece = h / static_cast<double>(subdivisions);

    std::vector<cplx> out(n_steps + 1);
    out[0] = cplx{0.0, 0.0};
    for (std::size_t n = 0; n < n_steps; ++n) {
        cplx acc{0.0, 0.0};
        const double t0 = h * static_cast<double>(n);
        for (std::size_t k = 0; k < subdivisions; ++k) {
            const double a = t0 + piece * static_cast<double>(k);
            acc += gauss<double, 10>::integrate(f, a, a + piece);
        }
        out[n + 1] = out[n] + acc;
    }
    return out;
}

cplx hermite_uniform(const std::vector<cplx>& values, const std::vector<cplx>& derivatives,
                     double h, double t) {
    if (values.empty() || values.size() != derivatives.size()) {
        throw DomainError("hermite_uniform: mismatched tables");
    }
    const double last = h * static_cast<double>(values.size() - 1);
    if (t < 0.0 || t > last * (1.0 + 1e-12)) {
        throw DomainError("hermite_uniform: t outside the tabulated range");
    }
    if (values.size() == 1) return values[0];
    auto j = static_cast<std::size_t>(std::floor(t / h));
    j = std::min(j, values.size() - 2);
    const double s = t / h - static_cast<double>(j);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * values[j] + h10 * h * derivatives[j] + h01 * values[j + 1] +
           h11 * h * derivatives[j + 1];
}

}  // namespace giant_heom::quadrature
