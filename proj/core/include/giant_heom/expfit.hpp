#pragma once

// Exponential decomposition of sampled signals by ESPRIT with iterative
// model-order reduction.
//
// A real signal y(t) sampled on a uniform grid is approximated as
//   y(t) ~ sum_k c_k exp(-g_k t)
// with complex c_k, g_k occurring in conjugate pairs so that the sum is real.

#include <complex>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "giant_heom/bath.hpp"

namespace giant_heom::expfit {

using cplx = std::complex<double>;

struct ExpTerm {
    cplx c;  // amplitude
    cplx g;  // rate; the term is c * exp(-g t)

    friend bool operator==(const ExpTerm&, const ExpTerm&) = default;
};

class ExponentialSum {
public:
    ExponentialSum() = default;
    explicit ExponentialSum(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {}

    const std::vector<ExpTerm>& terms() const noexcept { return terms_; }
    std::size_t size() const noexcept { return terms_.size(); }
    bool empty() const noexcept { return terms_.empty(); }

    cplx evaluate(double t) const;

    // Smallest Re(g) over all terms (+inf when empty).
    double min_decay_rate() const;

    friend bool operator==(const ExponentialSum&, const ExponentialSum&) = default;

private:
    std::vector<ExpTerm> terms_;
};

struct SamplingGrid {
    double t_max{0.0};
    std::size_t n_samples{0};

    double spacing() const { return t_max / static_cast<double>(n_samples - 1); }
    double time(std::size_t i) const { return spacing() * static_cast<double>(i); }

    // Throws ConfigError unless t_max > 0 and n_samples >= 4.
    void validate() const;

    friend bool operator==(const SamplingGrid&, const SamplingGrid&) = default;
};

struct FitReport {
    std::size_t n_terms{0};
    double rel_l2_error{0.0};
    SamplingGrid grid;
    std::size_t iterations{0};      // candidate fits evaluated by the reduction loop
    std::size_t initial_order{0};   // order from the singular-value threshold
    std::size_t merged_terms{0};    // near-duplicate rates folded together
    std::size_t reflected_rates{0}; // growing modes moved onto Re(g) = 0
    bool converged{false};          // rel_l2_error below the requested threshold
};

struct FitResult {
    ExponentialSum sum;
    FitReport report;
};

struct BcfFit {
    FitResult real_part;  // C_R(t)
    FitResult imag_part;  // C_I(t)
    double eps_r{0.0};
};

// Stabilization bound: no returned rate has Re(g) < -kStabilityBound.
inline constexpr double kStabilityBound = 0.0;

// Singular values below this fraction of the largest are treated as zero.
inline constexpr double kRankThreshold = 1e-12;

// Rates whose shift eigenvalues differ by at most this are merged.
inline constexpr double kMergeDistance = 1e-12;

// f on the uniform grid t_i = i t_max / (n - 1). Throws ConfigError on a
// non-finite sample or invalid grid.
std::vector<double> sample_signal(const std::function<double(double)>& f, double t_max,
                                  std::size_t n);

struct RateEstimate {
    std::vector<cplx> rates;
    std::size_t achieved_order{0};  // < requested when the Hankel matrix is rank deficient
};

// ESPRIT: Hankel matrix with L = floor(n/2) rows, dominant `order` left
// singular vectors, least-squares shift-invariance operator, rates
// g = -log(z)/dt from its eigenvalues.
RateEstimate esprit_rates(const std::vector<double>& samples, double dt, std::size_t order);
RateEstimate esprit_rates(const std::vector<cplx>& samples, double dt, std::size_t order);

// Least-squares amplitudes for fixed rates via column-pivoted QR of the
// Vandermonde system. Near-duplicate rates are merged first; the number of
// merged rates is written to `merged` when given. For real samples the rates
// are treated as conjugate-closed and the result is real on the grid.
ExponentialSum amplitude_lsq(const std::vector<double>& samples, double dt,
                             const std::vector<cplx>& rates, std::size_t* merged = nullptr);
ExponentialSum amplitude_lsq(const std::vector<cplx>& samples, double dt,
                             const std::vector<cplx>& rates, std::size_t* merged = nullptr);

// Relative discrete L2 distance between the sum and the samples on the grid.
double relative_l2_error(const ExponentialSum& sum, const std::vector<double>& samples, double dt);
double relative_l2_error(const ExponentialSum& sum, const std::vector<cplx>& samples, double dt);

// Full reduction loop on one signal: start from the singular-value-threshold
// order, bisect on the order and keep the smallest passing fit. When no
// candidate passes, returns the one with the smallest error and converged = false.
FitResult fit_signal(const std::vector<double>& samples, const SamplingGrid& grid, double eps_r);
FitResult fit_signal(const std::vector<cplx>& samples, const SamplingGrid& grid, double eps_r);

// Default sampling grid: t_max = 3 tau (100/omega_c when tau = 0) with step
// no larger than (2 pi / omega_c) / 32.
SamplingGrid default_grid(const bath::BathParams& p);

// Fits C_R and C_I of the analytic BCF independently.
BcfFit fit_bcf(const bath::BathParams& p, double eps_r, const SamplingGrid& grid);

// JSON document with {c_re, c_im, g_re, g_im} per term for C_R and C_I plus both reports.
std::string to_json(const BcfFit& fit);
BcfFit from_json(const std::string& text);

}  // namespace giant_heom::expfit
