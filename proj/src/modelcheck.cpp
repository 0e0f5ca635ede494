#include "teamlog/modelcheck.hpp"

#include "teamlog/errors.hpp"

#include <algorithm>
#include <bit>

namespace teamlog {

SubteamSet::SubteamSet(std::size_t team_size)
    : team_size_(team_size), words_(((std::size_t{1} << team_size) + 63) / 64, 0) {}

std::size_t SubteamSet::count() const noexcept {
    std::size_t n = 0;
    for (auto w : words_) n += static_cast<std::size_t>(std::popcount(w));
    return n;
}

std::vector<std::uint64_t> SubteamSet::members() const {
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        for (auto w = words_[i]; w; w &= w - 1) out.push_back(i * 64 + static_cast<std::uint64_t>(std::countr_zero(w)));
    }
    return out;
}

bool SubteamSet::subset_of(const SubteamSet& other) const noexcept {
    for (std::size_t i = 0; i < words_.size(); ++i) {
        if (words_[i] & ~other.words_[i]) return false;
    }
    return true;
}

SubteamSet intersect(const SubteamSet& a, const SubteamSet& b) {
    SubteamSet out = a;
    for (std::size_t i = 0; i < out.words_.size(); ++i) out.words_[i] &= b.words_[i];
    return out;
}

namespace {

SubteamSet leaf_set(const AtomChecker& checker, std::size_t n) {
    SubteamSet out(n);
    for (std::uint64_t m = 0; m < out.universe(); ++m) {
        if (checker.holds(m)) out.insert(m);
    }
    return out;
}

// Disjoint unions: M is in the result iff M = A + B with A, B disjoint.
SubteamSet strict_unions(const SubteamSet& a, const SubteamSet& b) {
    SubteamSet out(a.team_size());
    for (std::uint64_t m = 0; m < out.universe(); ++m) {
        std::uint64_t s = m;
        for (;;) {
            if (a.contains(s) && b.contains(m ^ s)) {
                out.insert(m);
                break;
            }
            if (s == 0) break;
            s = (s - 1) & m;
        }
    }
    return out;
}

// All unions A | B. Counting pairs through the subset-sum transform gives
// the same set as enumerating pairs, in O(n 2^n) instead of O(4^n).
SubteamSet lax_unions(const SubteamSet& a, const SubteamSet& b) {
    const std::size_t n = a.team_size();
    const std::uint64_t u = a.universe();
    std::vector<std::int64_t> fa(u), fb(u);
    for (std::uint64_t m = 0; m < u; ++m) {
        fa[m] = a.contains(m);
        fb[m] = b.contains(m);
    }
    for (std::size_t bit = 0; bit < n; ++bit) {
        const std::uint64_t step = std::uint64_t{1} << bit;
        for (std::uint64_t m = 0; m < u; ++m) {
            if (m & step) {
                fa[m] += fa[m ^ step];
                fb[m] += fb[m ^ step];
            }
        }
    }
    for (std::uint64_t m = 0; m < u; ++m) fa[m] *= fb[m];
    for (std::size_t bit = 0; bit < n; ++bit) {
        const std::uint64_t step = std::uint64_t{1} << bit;
        for (std::uint64_t m = 0; m < u; ++m) {
            if (m & step) fa[m] -= fa[m ^ step];
        }
    }
    SubteamSet out(n);
    for (std::uint64_t m = 0; m < u; ++m) {
        if (fa[m] > 0) out.insert(m);
    }
    return out;
}

}  // namespace

SatSetTable build_sat_sets(const Team& team, const Formula& f, SemanticsMode mode, std::size_t max_team_size) {
    if (team.size() > max_team_size || team.size() > 16) {
        throw ResourceLimit("team of " + std::to_string(team.size()) + " rows exceeds the enumeration cap of " +
                            std::to_string(std::min<std::size_t>(max_team_size, 16)));
    }
    SatSetTable table;
    table.tree = index_formula(f, true);
    table.team_size = team.size();
    table.sets.resize(table.tree.size());
    for (std::size_t i = table.tree.size(); i-- > 0;) {
        const auto& node = table.tree.nodes[i];
        auto l = table.tree.left[i];
        auto r = table.tree.right[i];
        switch (node.kind()) {
            case NodeKind::And:
                table.sets[i] = intersect(table.sets[static_cast<std::size_t>(l)], table.sets[static_cast<std::size_t>(r)]);
                break;
            case NodeKind::Or:
                table.sets[i] = mode == SemanticsMode::Strict
                                    ? strict_unions(table.sets[static_cast<std::size_t>(l)], table.sets[static_cast<std::size_t>(r)])
                                    : lax_unions(table.sets[static_cast<std::size_t>(l)], table.sets[static_cast<std::size_t>(r)]);
                break;
            default:
                table.sets[i] = leaf_set(AtomChecker(team, node), team.size());
                break;
        }
    }
    return table;
}

bool mc_bottom_up(const Team& team, const Formula& f, SemanticsMode mode, std::size_t max_team_size) {
    auto table = build_sat_sets(team, f, mode, max_team_size);
    // The root set is exact, so the final check is membership of the full team.
    return table.root().contains(table.root().universe() - 1);
}

bool mc(const Team& team, const Formula& f, SemanticsMode mode, McAlgorithm algo, std::size_t max_team_size) {
    return algo == McAlgorithm::Recursive ? evaluate(team, f, mode, max_team_size)
                                          : mc_bottom_up(team, f, mode, max_team_size);
}

}  // namespace teamlog
