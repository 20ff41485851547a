#include <algorithm>
#include <limits>
#include <string>
#include <unordered_map>

#include "giant_heom/errors.hpp"
#include "giant_heom/heom.hpp"

namespace giant_heom::heom {

namespace {
__extension__ using u128 = unsigned __int128;
}  // namespace

std::size_t hierarchy_count(std::size_t n_components, std::size_t depth) {
    // C(K + N, N) built as C(K + i, i) = C(K + i - 1, i - 1) (K + i) / i.
    u128 r = 1;
    constexpr auto cap = static_cast<u128>(std::numeric_limits<std::size_t>::max());
    for (std::size_t i = 1; i <= depth; ++i) {
        r = r * (n_components + i) / i;
        if (r > cap) return std::numeric_limits<std::size_t>::max();
    }
    return static_cast<std::size_t>(r);
}

HierarchySpace HierarchySpace::enumerate(std::size_t n_r, std::size_t n_i, std::size_t depth,
                                         std::size_t max_indices) {
    const std::size_t k_total = n_r + n_i;
    if (k_total == 0) throw DomainError("enumerate_hierarchy: need at least one exponential component");
    if (depth == 0) throw DomainError("enumerate_hierarchy: depth must be >= 1");
    if (depth > std::numeric_limits<std::uint16_t>::max()) throw DomainError("enumerate_hierarchy: depth too large");
    const std::size_t count = hierarchy_count(k_total, depth);
    if (count > max_indices || count >= kAbsent) {
        throw ResourceError("enumerate_hierarchy: " + std::to_string(count) +
                            " hierarchy indices exceed the budget of " + std::to_string(max_indices));
    }

    HierarchySpace s;
    s.n_r_ = n_r;
    s.n_i_ = n_i;
    s.depth_ = depth;
    s.level_.reserve(count);
    s.components_.reserve(count * depth);

    s.level_.push_back(0);
    s.components_.resize(depth, kAbsent);
    std::size_t begin = 0;
    std::size_t end = 1;
    for (std::size_t l = 0; l < depth; ++l) {
        for (std::size_t p = begin; p < end; ++p) {
            const std::uint32_t first = l == 0 ? 0 : s.components_[p * depth + l - 1];
            for (std::uint32_t k = first; k < k_total; ++k) {
                for (std::size_t j = 0; j < depth; ++j) {
                    s.components_.push_back(j == l ? k : s.components_[p * depth + j]);
                }
                s.level_.push_back(static_cast<std::uint16_t>(l + 1));
            }
        }
        if (l + 1 == depth) s.n_nonterminal_ = end;
        begin = end;
        end = s.level_.size();
    }

    const auto key_of = [&](std::size_t p, std::size_t skip) {
        std::u32string key;
        for (std::size_t j = 0; j < s.level_[p]; ++j) {
            if (j != skip) key.push_back(static_cast<char32_t>(s.components_[p * depth + j]));
        }
        return key;
    };
    std::unordered_map<std::u32string, std::uint32_t> lookup;
    lookup.reserve(count);
    for (std::size_t p = 0; p < count; ++p) {
        lookup.emplace(key_of(p, depth), static_cast<std::uint32_t>(p));
    }

    s.up_.assign(s.n_nonterminal_ * k_total, kAbsent);
    s.down_offsets_.assign(count + 1, 0);
    s.down_edges_.reserve(count * std::min<std::size_t>(depth, 2));
    for (std::size_t p = 0; p < count; ++p) {
        s.down_offsets_[p] = s.down_edges_.size();
        const std::size_t lvl = s.level_[p];
        std::size_t j = 0;
        while (j < lvl) {
            const std::uint32_t k = s.components_[p * depth + j];
            std::size_t run = 1;
            while (j + run < lvl && s.components_[p * depth + j + run] == k) ++run;
            const std::uint32_t src = lookup.at(key_of(p, j));
            s.down_edges_.push_back({src, k, static_cast<std::uint32_t>(run)});
            s.up_[src * k_total + k] = static_cast<std::uint32_t>(p);
            j += run;
        }
    }
    s.down_offsets_[count] = s.down_edges_.size();
    return s;
}

HierarchySpace HierarchySpace::bare() {
    HierarchySpace s;
    s.level_.push_back(0);
    s.down_offsets_.assign(2, 0);
    return s;
}

std::vector<unsigned> HierarchySpace::counts(std::size_t pos) const {
    std::vector<unsigned> out(n_components(), 0);
    for (std::size_t j = 0; j < level_[pos]; ++j) ++out[components_[pos * depth_ + j]];
    return out;
}

std::optional<std::size_t> HierarchySpace::position(const std::vector<unsigned>& counts) const {
    if (counts.size() != n_components()) return std::nullopt;
    std::size_t pos = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        for (unsigned c = 0; c < counts[k]; ++c) {
            const auto next = up(pos, k);
            if (!next) return std::nullopt;
            pos = *next;
        }
    }
    return pos;
}

std::optional<std::size_t> HierarchySpace::up(std::size_t pos, std::size_t k) const {
    if (pos >= size() || k >= n_components() || pos >= n_nonterminal_) return std::nullopt;
    const std::uint32_t q = up_[pos * n_components() + k];
    if (q == kAbsent) return std::nullopt;
    return q;
}

std::optional<std::size_t> HierarchySpace::down(std::size_t pos, std::size_t k) const {
    if (pos >= size()) return std::nullopt;
    for (const DownEdge* e = down_begin(pos); e != down_end(pos); ++e) {
        if (e->component == k) return e->source;
    }
    return std::nullopt;
}

}  // namespace giant_heom::heom
