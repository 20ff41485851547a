#pragma once

// Hierarchical equations of motion for the two-level giant atom.
//
// Given C_R(t) = sum_k cR_k exp(-gR_k t) and C_I(t) = sum_k cI_k exp(-gI_k t),
// every auxiliary density operator rho^n obeys
//
//   d rho^n/dt = -i w0 [|e><e|, rho^n] - (sum_jk n_jk g_jk) rho^n
//                - i sum_k cR_k nR_k [sx, rho^{n - R_k}]
//                +   sum_k cI_k nI_k {sx, rho^{n - I_k}}
//                - i sum_jk [sx, rho^{n + jk}]
//
// with total-depth truncation sum n <= N_c. Up-couplings out of the deepest
// level are dropped. Index 0 is the physical reduced state.

#include <Eigen/Core>

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "giant_heom/expfit.hpp"
#include "giant_heom/ode.hpp"
#include "giant_heom/qubit.hpp"

namespace giant_heom::heom {

using cplx = std::complex<double>;
using AdoVector = Eigen::VectorXcd;  // 4 entries (row-major 2x2) per hierarchy index

inline constexpr std::size_t kDefaultIndexBudget = 5'000'000;

// Number of multi-indices with n_components entries and total weight <= depth,
// saturating at SIZE_MAX.
std::size_t hierarchy_count(std::size_t n_components, std::size_t depth);

class HierarchySpace {
public:
    static constexpr std::uint32_t kAbsent = 0xffffffffu;

    // Enumerates level by level, lexicographically within a level. Throws
    // ResourceError when the count exceeds `max_indices`.
    static HierarchySpace enumerate(std::size_t n_r, std::size_t n_i, std::size_t depth,
                                    std::size_t max_indices = kDefaultIndexBudget);

    // Single index, no bath components: the closed-system limit.
    static HierarchySpace bare();

    std::size_t size() const noexcept { return level_.size(); }
    std::size_t n_r() const noexcept { return n_r_; }
    std::size_t n_i() const noexcept { return n_i_; }
    std::size_t n_components() const noexcept { return n_r_ + n_i_; }
    std::size_t depth() const noexcept { return depth_; }
    std::size_t level(std::size_t pos) const { return level_[pos]; }
    // Indices at level < depth come first; they are the only ones with up-couplings.
    std::size_t n_nonterminal() const noexcept { return n_nonterminal_; }

    // Dense counts (all R components, then all I components).
    std::vector<unsigned> counts(std::size_t pos) const;
    std::optional<std::size_t> position(const std::vector<unsigned>& counts) const;

    std::optional<std::size_t> up(std::size_t pos, std::size_t k) const;
    std::optional<std::size_t> down(std::size_t pos, std::size_t k) const;

    struct DownEdge {
        std::uint32_t source;     // position of n - e_k
        std::uint32_t component;  // k
        std::uint32_t count;      // n_k
    };
    // Down-couplings of `pos`, one per nonzero component.
    const DownEdge* down_begin(std::size_t pos) const { return down_edges_.data() + down_offsets_[pos]; }
    const DownEdge* down_end(std::size_t pos) const { return down_edges_.data() + down_offsets_[pos + 1]; }
    // Up-neighbour of a non-terminal index for component k.
    std::uint32_t up_unchecked(std::size_t pos, std::size_t k) const { return up_[pos * n_components() + k]; }

private:
    std::size_t n_r_{0};
    std::size_t n_i_{0};
    std::size_t depth_{0};
    std::size_t n_nonterminal_{0};
    std::vector<std::uint16_t> level_;
    std::vector<std::uint32_t> components_;  // sorted multiset per index, padded with kAbsent
    std::vector<std::size_t> down_offsets_;
    std::vector<DownEdge> down_edges_;
    std::vector<std::uint32_t> up_;
};

struct GeneratorOptions {
    // Amplitude-normalized ADOs rho~^n = rho^n / prod_k (s_k^{n_k} sqrt(n_k!)),
    // s_k = sqrt|c_k|. Index 0 is unchanged, so the reduced state is identical.
    bool scaled{false};

    friend bool operator==(const GeneratorOptions&, const GeneratorOptions&) = default;
};

class Generator {
public:
    Generator(const HierarchySpace& space, const expfit::ExponentialSum& c_r,
              const expfit::ExponentialSum& c_i, double omega0, GeneratorOptions options = {});

    std::size_t dimension() const noexcept { return 4 * space_->size(); }
    const HierarchySpace& space() const noexcept { return *space_; }

    // out = L in; parallel over hierarchy indices, each output block written once.
    void apply(const AdoVector& in, AdoVector& out) const;

    // Dense matrix of the linear map (small hierarchies only).
    Eigen::MatrixXcd dense() const;

private:
    const HierarchySpace* space_;
    double omega0_;
    std::vector<cplx> rates_;         // g_k over all components
    std::vector<cplx> damping_;       // sum_k n_k g_k per index
    std::vector<cplx> down_coef_;     // per down edge
    std::vector<unsigned char> down_is_real_;
    std::vector<cplx> up_coef_;       // per (non-terminal index, component); empty when unscaled
};

struct PropagateOptions {
    ode::IntegratorConfig integrator;
    GeneratorOptions generator;
};

struct PropagateResult {
    qubit::Trajectory trajectory;
    ode::IntegratorStats stats;
};

// Integrates from the product state (all ADOs except index 0 zero) and
// records rho_S at every grid time. t_grid must start at 0 and increase strictly.
PropagateResult propagate(const HierarchySpace& space, const expfit::ExponentialSum& c_r,
                          const expfit::ExponentialSum& c_i, double omega0,
                          const qubit::QubitState& rho0, const std::vector<double>& t_grid,
                          const PropagateOptions& options = {});

}  // namespace giant_heom::heom
