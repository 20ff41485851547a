#include "giant_heom/heom.hpp"

#include <cmath>
#include <string>

#include "giant_heom/errors.hpp"

namespace giant_heom::heom {

namespace {

cplx component_amplitude(const expfit::ExponentialSum& c_r, const expfit::ExponentialSum& c_i,
                         std::size_t k) {
    return k < c_r.size() ? c_r.terms()[k].c : c_i.terms()[k - c_r.size()].c;
}

cplx component_rate(const expfit::ExponentialSum& c_r, const expfit::ExponentialSum& c_i, std::size_t k) {
    return k < c_r.size() ? c_r.terms()[k].g : c_i.terms()[k - c_r.size()].g;
}

}  // namespace

Generator::Generator(const HierarchySpace& space, const expfit::ExponentialSum& c_r,
                     const expfit::ExponentialSum& c_i, double omega0, GeneratorOptions options)
    : space_(&space), omega0_(omega0) {
    if (c_r.size() != space.n_r() || c_i.size() != space.n_i()) {
        throw DomainError("Generator: fit sizes (" + std::to_string(c_r.size()) + ", " +
                          std::to_string(c_i.size()) + ") do not match the hierarchy (" +
                          std::to_string(space.n_r()) + ", " + std::to_string(space.n_i()) + ")");
    }
    const std::size_t n_comp = space.n_components();
    const std::size_t n_ado = space.size();

    std::vector<double> scale(n_comp, 1.0);
    rates_.resize(n_comp);
    for (std::size_t k = 0; k < n_comp; ++k) {
        rates_[k] = component_rate(c_r, c_i, k);
        if (options.scaled) {
            const double s = std::sqrt(std::abs(component_amplitude(c_r, c_i, k)));
            if (s > 0.0) scale[k] = s;
        }
    }

    damping_.assign(n_ado, cplx{0.0, 0.0});
    down_coef_.clear();
    down_is_real_.clear();
    for (std::size_t p = 0; p < n_ado; ++p) {
        for (auto e = space.down_begin(p); e != space.down_end(p); ++e) {
            const std::size_t k = e->component;
            const double n_k = e->count;
            damping_[p] += n_k * rates_[k];
            const cplx c = component_amplitude(c_r, c_i, k);
            down_coef_.push_back(options.scaled ? c * std::sqrt(n_k) / scale[k] : c * n_k);
            down_is_real_.push_back(k < space.n_r() ? 1 : 0);
        }
    }

    if (options.scaled) {
        up_coef_.assign(space.n_nonterminal() * n_comp, cplx{0.0, 0.0});
        for (std::size_t p = 0; p < space.n_nonterminal(); ++p) {
            const std::vector<unsigned> n = space.counts(p);
            for (std::size_t k = 0; k < n_comp; ++k) {
                up_coef_[p * n_comp + k] = scale[k] * std::sqrt(static_cast<double>(n[k]) + 1.0);
            }
        }
    }
}

void Generator::apply(const AdoVector& in, AdoVector& out) const {
    const HierarchySpace& space = *space_;
    const auto n_ado = static_cast<std::ptrdiff_t>(space.size());
    const std::size_t n_comp = space.n_components();
    const std::size_t n_nonterminal = space.n_nonterminal();
    const bool scaled = !up_coef_.empty();
    const cplx* x = in.data();
    cplx* y = out.data();
    const cplx iw{0.0, omega0_};
    const cplx mi{0.0, -1.0};

#ifdef GIANT_HEOM_HAVE_OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t ps = 0; ps < n_ado; ++ps) {
        const auto p = static_cast<std::size_t>(ps);
        cplx sc[4] = {};
        cplx sa[4] = {};
        const std::size_t first_edge = static_cast<std::size_t>(space.down_begin(p) - space.down_begin(0));
        std::size_t e_idx = first_edge;
        for (auto e = space.down_begin(p); e != space.down_end(p); ++e, ++e_idx) {
            const cplx* b = x + 4 * static_cast<std::size_t>(e->source);
            const cplx c = down_coef_[e_idx];
            cplx* acc = down_is_real_[e_idx] ? sc : sa;
            acc[0] += c * b[0];
            acc[1] += c * b[1];
            acc[2] += c * b[2];
            acc[3] += c * b[3];
        }
        if (p < n_nonterminal) {
            for (std::size_t k = 0; k < n_comp; ++k) {
                const cplx* b = x + 4 * static_cast<std::size_t>(space.up_unchecked(p, k));
                if (scaled) {
                    const cplx c = up_coef_[p * n_comp + k];
                    sc[0] += c * b[0];
                    sc[1] += c * b[1];
                    sc[2] += c * b[2];
                    sc[3] += c * b[3];
                } else {
                    sc[0] += b[0];
                    sc[1] += b[1];
                    sc[2] += b[2];
                    sc[3] += b[3];
                }
            }
        }
        const cplx* a = x + 4 * p;
        const cplx d = damping_[p];
        cplx* o = y + 4 * p;
        // -i [sx, Sc] + {sx, Sa}
        o[0] = -d * a[0] + mi * (sc[2] - sc[1]) + (sa[2] + sa[1]);
        o[1] = (iw - d) * a[1] + mi * (sc[3] - sc[0]) + (sa[3] + sa[0]);
        o[2] = (-iw - d) * a[2] + mi * (sc[0] - sc[3]) + (sa[0] + sa[3]);
        o[3] = -d * a[3] + mi * (sc[1] - sc[2]) + (sa[1] + sa[2]);
    }
}

Eigen::MatrixXcd Generator::dense() const {
    const auto n = static_cast<Eigen::Index>(dimension());
    Eigen::MatrixXcd out(n, n);
    AdoVector e = AdoVector::Zero(n);
    AdoVector col(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        e(j) = 1.0;
        apply(e, col);
        out.col(j) = col;
        e(j) = 0.0;
    }
    return out;
}

PropagateResult propagate(const HierarchySpace& space, const expfit::ExponentialSum& c_r,
                          const expfit::ExponentialSum& c_i, double omega0, const qubit::QubitState& rho0,
                          const std::vector<double>& t_grid, const PropagateOptions& options) {
    if (t_grid.empty() || t_grid.front() != 0.0) throw DomainError("propagate: t_grid must start at 0");
    const Generator gen(space, c_r, c_i, omega0, options.generator);
    AdoVector y = AdoVector::Zero(static_cast<Eigen::Index>(gen.dimension()));
    const qubit::Matrix2& r0 = rho0.matrix();
    y(0) = r0(0, 0);
    y(1) = r0(0, 1);
    y(2) = r0(1, 0);
    y(3) = r0(1, 1);

    PropagateResult result;
    const auto rhs = [&](double, const AdoVector& in, AdoVector& out) { gen.apply(in, out); };
    const auto observe = [&](std::size_t, double t, const AdoVector& state) {
        qubit::Matrix2 rho;
        rho << state(0), state(1), state(2), state(3);
        result.trajectory.push_back(t, rho);
    };
    result.stats = ode::integrate(rhs, 0.0, y, t_grid, observe, options.integrator);
    return result;
}

}  // namespace giant_heom::heom
