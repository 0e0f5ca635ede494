#pragma once

#include "teamlog/formula.hpp"
#include "teamlog/semantics.hpp"
#include "teamlog/team.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace teamlog {

/// A set of subteams of a team with n <= 16 rows, one bit per subteam mask.
class SubteamSet {
public:
    SubteamSet() = default;
    explicit SubteamSet(std::size_t team_size);

    [[nodiscard]] std::size_t team_size() const noexcept { return team_size_; }
    [[nodiscard]] std::uint64_t universe() const noexcept { return std::uint64_t{1} << team_size_; }

    [[nodiscard]] bool contains(std::uint64_t mask) const noexcept { return words_[mask >> 6] >> (mask & 63) & 1U; }
    void insert(std::uint64_t mask) noexcept { words_[mask >> 6] |= std::uint64_t{1} << (mask & 63); }

    [[nodiscard]] std::size_t count() const noexcept;
    [[nodiscard]] std::vector<std::uint64_t> members() const;
    [[nodiscard]] bool subset_of(const SubteamSet& other) const noexcept;

    friend bool operator==(const SubteamSet&, const SubteamSet&) = default;

private:
    friend SubteamSet intersect(const SubteamSet& a, const SubteamSet& b);

    std::size_t team_size_ = 0;
    std::vector<std::uint64_t> words_;
};

[[nodiscard]] SubteamSet intersect(const SubteamSet& a, const SubteamSet& b);

/// For every node of the syntax tree (pre-order, negative literals expanded
/// as in subformulas()), the subteams of the team that satisfy it.
struct SatSetTable {
    IndexedFormula tree;
    std::vector<SubteamSet> sets;
    std::size_t team_size = 0;

    [[nodiscard]] const SubteamSet& root() const { return sets.front(); }
};

/// Builds the table leaf-to-root. Atoms are tested on every subteam; a
/// conjunction keeps the subteams both conjuncts accept; a disjunction takes
/// all unions A | B of child entries, restricted to disjoint pairs in strict
/// mode. Throws ResourceLimit when |T| exceeds max_team_size (at most 16).
[[nodiscard]] SatSetTable build_sat_sets(const Team& team, const Formula& f, SemanticsMode mode,
                                         std::size_t max_team_size = kDefaultTeamCap);

/// Bottom-up model checking: T |= f iff the full team is in the root's set.
[[nodiscard]] bool mc_bottom_up(const Team& team, const Formula& f, SemanticsMode mode,
                                std::size_t max_team_size = kDefaultTeamCap);

enum class McAlgorithm { Recursive, BottomUp };

[[nodiscard]] bool mc(const Team& team, const Formula& f, SemanticsMode mode, McAlgorithm algo,
                      std::size_t max_team_size = kDefaultTeamCap);

}  // namespace teamlog
