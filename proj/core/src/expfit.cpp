#include "giant_heom/expfit.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>
#include <type_traits>

#include "giant_heom/errors.hpp"

namespace giant_heom::expfit {

namespace {

template <class S>
using Mat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using Vec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

template <class S>
struct Subspace {
    Mat<S> u;            // left singular vectors of the Hankel matrix
    std::size_t rank{0}; // singular values above kRankThreshold * max
};

template <class S>
Subspace<S> signal_subspace(const std::vector<S>& y) {
    const auto n = static_cast<Eigen::Index>(y.size());
    const Eigen::Index rows = n / 2;
    const Eigen::Index cols = n - rows + 1;
    Mat<S> hankel(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j) {
        for (Eigen::Index i = 0; i < rows; ++i) hankel(i, j) = y[static_cast<std::size_t>(i + j)];
    }
    Eigen::BDCSVD<Mat<S>> svd(hankel, Eigen::ComputeThinU);
    Subspace<S> out;
    out.u = svd.matrixU();
    const auto& sv = svd.singularValues();
    if (sv.size() > 0 && sv(0) > 0.0) {
        for (Eigen::Index k = 0; k < sv.size(); ++k) {
            if (sv(k) > kRankThreshold * sv(0)) ++out.rank;
        }
    }
    return out;
}

template <class S>
std::vector<cplx> shift_eigenvalues(const Mat<S>& u, std::size_t order) {
    const auto r = static_cast<Eigen::Index>(order);
    const Eigen::Index rows = u.rows() - 1;
    const Mat<S> top = u.topLeftCorner(rows, r);
    const Mat<S> bottom = u.block(1, 0, rows, r);
    const Mat<S> phi = top.colPivHouseholderQr().solve(bottom);
    std::vector<cplx> z(order);
    if constexpr (std::is_same_v<S, double>) {
        Eigen::EigenSolver<Mat<double>> es(phi, false);
        if (es.info() != Eigen::Success) throw ConvergenceError("ESPRIT: eigen solver failed");
        for (Eigen::Index k = 0; k < r; ++k) z[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    } else {
        Eigen::ComplexEigenSolver<Mat<cplx>> es(phi, false);
        if (es.info() != Eigen::Success) throw ConvergenceError("ESPRIT: eigen solver failed");
        for (Eigen::Index k = 0; k < r; ++k) z[static_cast<std::size_t>(k)] = es.eigenvalues()(k);
    }
    return z;
}

cplx rate_from_eigenvalue(cplx z, double dt) { return -std::log(z) / dt; }
cplx eigenvalue_from_rate(cplx g, double dt) { return std::exp(-g * dt); }

// Drops eigenvalues within kMergeDistance of an earlier one.
std::vector<cplx> merge_duplicates(const std::vector<cplx>& z, std::size_t* merged) {
    std::vector<cplx> out;
    out.reserve(z.size());
    for (const cplx& zi : z) {
        const bool dup = std::any_of(out.begin(), out.end(),
                                     [&](const cplx& zj) { return std::abs(zi - zj) <= kMergeDistance; });
        if (!dup) out.push_back(zi);
    }
    if (merged) *merged = z.size() - out.size();
    return out;
}

template <class S>
double norm2(const std::vector<S>& y) {
    double acc = 0.0;
    for (const S& v : y) acc += std::norm(v);
    return acc;
}

template <class S>
double relative_error_impl(const ExponentialSum& sum, const std::vector<S>& y, double dt) {
    double num = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        num += std::norm(sum.evaluate(dt * static_cast<double>(i)) - cplx(y[i]));
    }
    const double den = norm2(y);
    if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return std::sqrt(num / den);
}

template <class S>
RateEstimate esprit_impl(const std::vector<S>& y, double dt, std::size_t order) {
    if (y.size() < 4) throw DomainError("esprit_rates: need at least 4 samples");
    if (!(dt > 0.0)) throw DomainError("esprit_rates: dt must be positive");
    if (order > y.size() / 2) throw DomainError("esprit_rates: order exceeds floor(n/2)");
    const Subspace<S> sub = signal_subspace(y);
    const std::size_t achievable = std::min<std::size_t>(sub.rank, static_cast<std::size_t>(sub.u.rows() - 1));
    RateEstimate out;
    out.achieved_order = std::min(order, achievable);
    if (out.achieved_order == 0) return out;
    for (const cplx& z : shift_eigenvalues(sub.u, out.achieved_order)) {
        out.rates.push_back(rate_from_eigenvalue(z, dt));
    }
    return out;
}

// Conjugate-closed least squares: each rate with Im z > 0 stands for a
// pair, rates with real z stand alone, so the fitted sum is real on the grid.
ExponentialSum amplitude_real(const std::vector<double>& y, double dt, const std::vector<cplx>& rates,
                              std::size_t* merged) {
    std::vector<cplx> z;
    z.reserve(rates.size());
    for (const cplx& g : rates) z.push_back(eigenvalue_from_rate(g, dt));
    z = merge_duplicates(z, merged);

    std::vector<cplx> singles;
    std::vector<cplx> pairs;
    for (const cplx& zi : z) {
        if (zi.imag() == 0.0) {
            singles.push_back(zi);
        } else if (zi.imag() > 0.0) {
            pairs.push_back(zi);
        } else {
            const cplx partner = std::conj(zi);
            const bool present = std::any_of(z.begin(), z.end(), [&](const cplx& w) {
                return std::abs(w - partner) <= kMergeDistance;
            });
            if (!present) pairs.push_back(partner);
        }
    }

    std::vector<cplx> g_single;
    std::vector<cplx> g_pair;
    for (const cplx& zi : singles) g_single.push_back(rate_from_eigenvalue(zi, dt));
    for (const cplx& zi : pairs) g_pair.push_back(rate_from_eigenvalue(zi, dt));

    const auto n = static_cast<Eigen::Index>(y.size());
    const auto ns = static_cast<Eigen::Index>(singles.size());
    const auto np = static_cast<Eigen::Index>(pairs.size());
    if (ns + np == 0) return ExponentialSum{};
    Mat<double> a(n, ns + 2 * np);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = dt * static_cast<double>(i);
        for (Eigen::Index k = 0; k < ns; ++k) a(i, k) = std::exp(-g_single[static_cast<std::size_t>(k)] * t).real();
        for (Eigen::Index k = 0; k < np; ++k) {
            const cplx e = std::exp(-g_pair[static_cast<std::size_t>(k)] * t);
            a(i, ns + 2 * k) = e.real();
            a(i, ns + 2 * k + 1) = e.imag();
        }
    }
    const Vec<double> b = Eigen::Map<const Vec<double>>(y.data(), n);
    const Vec<double> x = a.colPivHouseholderQr().solve(b);

    std::vector<ExpTerm> terms;
    terms.reserve(static_cast<std::size_t>(ns + 2 * np));
    for (Eigen::Index k = 0; k < ns; ++k) terms.push_back({cplx{x(k), 0.0}, g_single[static_cast<std::size_t>(k)]});
    for (Eigen::Index k = 0; k < np; ++k) {
        // c e^{-g t} + conj(c) e^{-conj(g) t} = 2 Re(c) Re(e) - 2 Im(c) Im(e)
        const cplx c{0.5 * x(ns + 2 * k), -0.5 * x(ns + 2 * k + 1)};
        const cplx g = g_pair[static_cast<std::size_t>(k)];
        terms.push_back({c, g});
        terms.push_back({std::conj(c), std::conj(g)});
    }
    return ExponentialSum{std::move(terms)};
}

ExponentialSum amplitude_complex(const std::vector<cplx>& y, double dt, const std::vector<cplx>& rates,
                                 std::size_t* merged) {
    std::vector<cplx> z;
    z.reserve(rates.size());
    for (const cplx& g : rates) z.push_back(eigenvalue_from_rate(g, dt));
    z = merge_duplicates(z, merged);
    if (z.empty()) return ExponentialSum{};

    std::vector<cplx> g;
    for (const cplx& zi : z) g.push_back(rate_from_eigenvalue(zi, dt));
    const auto n = static_cast<Eigen::Index>(y.size());
    const auto r = static_cast<Eigen::Index>(g.size());
    Mat<cplx> a(n, r);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double t = dt * static_cast<double>(i);
        for (Eigen::Index k = 0; k < r; ++k) a(i, k) = std::exp(-g[static_cast<std::size_t>(k)] * t);
    }
    const Vec<cplx> b = Eigen::Map<const Vec<cplx>>(y.data(), n);
    const Vec<cplx> x = a.colPivHouseholderQr().solve(b);
    std::vector<ExpTerm> terms;
    for (Eigen::Index k = 0; k < r; ++k) terms.push_back({x(k), g[static_cast<std::size_t>(k)]});
    return ExponentialSum{std::move(terms)};
}

ExponentialSum amplitudes(const std::vector<double>& y, double dt, const std::vector<cplx>& rates,
                          std::size_t* merged) {
    return amplitude_real(y, dt, rates, merged);
}
ExponentialSum amplitudes(const std::vector<cplx>& y, double dt, const std::vector<cplx>& rates,
                          std::size_t* merged) {
    return amplitude_complex(y, dt, rates, merged);
}

template <class S>
FitResult fit_signal_impl(const std::vector<S>& y, const SamplingGrid& grid, double eps_r) {
    grid.validate();
    if (y.size() != grid.n_samples) throw DomainError("fit_signal: sample count does not match grid");
    if (!(eps_r > 0.0 && eps_r < 1.0)) throw ConfigError("eps_r: must lie in (0, 1)");
    const double dt = grid.spacing();
    const Subspace<S> sub = signal_subspace(y);
    const std::size_t initial = std::min<std::size_t>(sub.rank, static_cast<std::size_t>(sub.u.rows() - 1));

    std::size_t iterations = 0;
    std::map<std::size_t, FitResult> tried;
    const auto attempt = [&](std::size_t order) -> const FitResult& {
        if (auto it = tried.find(order); it != tried.end()) return it->second;
        ++iterations;
        FitResult res;
        std::vector<cplx> rates;
        for (const cplx& z : shift_eigenvalues(sub.u, order)) {
            cplx g = rate_from_eigenvalue(z, dt);
            if (g.real() < -kStabilityBound) {
                g = cplx{0.0, g.imag()};
                ++res.report.reflected_rates;
            }
            rates.push_back(g);
        }
        res.sum = amplitudes(y, dt, rates, &res.report.merged_terms);
        res.report.rel_l2_error = relative_error_impl(res.sum, y, dt);
        res.report.n_terms = res.sum.size();
        res.report.converged = res.report.rel_l2_error < eps_r;
        return tried.emplace(order, std::move(res)).first->second;
    };

    // The error is not strictly monotone in the order (at the highest orders
    // the noise subspace can spoil the fit), so the bisection runs even when
    // the initial order fails and the smallest-error candidate is the fallback.
    FitResult best;
    if (initial == 0) {
        best.report.rel_l2_error = relative_error_impl(best.sum, y, dt);
        best.report.converged = best.report.rel_l2_error < eps_r;
    } else {
        attempt(initial);
        std::size_t lo = 1;
        std::size_t hi = initial;
        while (lo < hi) {
            const std::size_t mid = lo + (hi - lo) / 2;
            if (attempt(mid).report.converged) {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
        if (attempt(lo).report.converged) {
            best = attempt(lo);
        } else {
            const auto it = std::min_element(tried.begin(), tried.end(), [](const auto& a, const auto& b) {
                return a.second.report.rel_l2_error < b.second.report.rel_l2_error;
            });
            best = it->second;
        }
    }
    best.report.grid = grid;
    best.report.iterations = iterations;
    best.report.initial_order = initial;
    return best;
}

}  // namespace

cplx ExponentialSum::evaluate(double t) const {
    cplx acc{0.0, 0.0};
    for (const ExpTerm& term : terms_) acc += term.c * std::exp(-term.g * t);
    return acc;
}

double ExponentialSum::min_decay_rate() const {
    double out = std::numeric_limits<double>::infinity();
    for (const ExpTerm& term : terms_) out = std::min(out, term.g.real());
    return out;
}

void SamplingGrid::validate() const {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw ConfigError("fit_t_max: must be > 0");
    if (n_samples < 4) throw ConfigError("fit_points: must be >= 4");
}

std::vector<double> sample_signal(const std::function<double(double)>& f, double t_max, std::size_t n) {
    const SamplingGrid grid{t_max, n};
    grid.validate();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = i + 1 == n ? t_max : grid.time(i);
        out[i] = f(t);
        if (!std::isfinite(out[i])) {
            throw ConfigError("sample_signal: non-finite sample at t = " + std::to_string(t));
        }
    }
    return out;
}

RateEstimate esprit_rates(const std::vector<double>& samples, double dt, std::size_t order) {
    return esprit_impl(samples, dt, order);
}
RateEstimate esprit_rates(const std::vector<cplx>& samples, double dt, std::size_t order) {
    return esprit_impl(samples, dt, order);
}

ExponentialSum amplitude_lsq(const std::vector<double>& samples, double dt, const std::vector<cplx>& rates,
                             std::size_t* merged) {
    return amplitude_real(samples, dt, rates, merged);
}
ExponentialSum amplitude_lsq(const std::vector<cplx>& samples, double dt, const std::vector<cplx>& rates,
                             std::size_t* merged) {
    return amplitude_complex(samples, dt, rates, merged);
}

double relative_l2_error(const ExponentialSum& sum, const std::vector<double>& samples, double dt) {
    return relative_error_impl(sum, samples, dt);
}
double relative_l2_error(const ExponentialSum& sum, const std::vector<cplx>& samples, double dt) {
    return relative_error_impl(sum, samples, dt);
}

FitResult fit_signal(const std::vector<double>& samples, const SamplingGrid& grid, double eps_r) {
    return fit_signal_impl(samples, grid, eps_r);
}
FitResult fit_signal(const std::vector<cplx>& samples, const SamplingGrid& grid, double eps_r) {
    return fit_signal_impl(samples, grid, eps_r);
}

SamplingGrid default_grid(const bath::BathParams& p) {
    const double t_max = p.tau > 0.0 ? 3.0 * p.tau : 100.0 / p.omega_c;
    const double max_step = 2.0 * std::numbers::pi / p.omega_c / 32.0;
    const auto intervals = static_cast<std::size_t>(std::ceil(t_max / max_step));
    return SamplingGrid{t_max, intervals + 1};
}

BcfFit fit_bcf(const bath::BathParams& p, double eps_r, const SamplingGrid& grid) {
    p.validate();
    grid.validate();
    std::vector<double> re(grid.n_samples);
    std::vector<double> im(grid.n_samples);
    for (std::size_t i = 0; i < grid.n_samples; ++i) {
        const cplx c = bath::bcf_analytic(p, grid.time(i));
        re[i] = c.real();
        im[i] = c.imag();
    }
    BcfFit out;
    out.eps_r = eps_r;
    out.real_part = fit_signal(re, grid, eps_r);
    out.imag_part = fit_signal(im, grid, eps_r);
    return out;
}

}  // namespace giant_heom::expfit
