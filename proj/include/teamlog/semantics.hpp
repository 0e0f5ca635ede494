#pragma once

#include "teamlog/formula.hpp"
#include "teamlog/team.hpp"

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace teamlog {

/// Strict splits are partitions of the team; lax splits are covers.
enum class SemanticsMode { Strict, Lax };

[[nodiscard]] std::string_view to_string(SemanticsMode mode) noexcept;

/// Default upper bound on |T| for the exponential split enumerations.
inline constexpr std::size_t kDefaultTeamCap = 16;

[[nodiscard]] bool eval_literal(const Team& team, const Var& v, bool positive);
[[nodiscard]] bool eval_dep(const Team& team, const VarTuple& x, const VarTuple& y);
[[nodiscard]] bool eval_inc(const Team& team, const VarTuple& x, const VarTuple& y);
[[nodiscard]] bool eval_indep(const Team& team, const VarTuple& x, const VarTuple& y, const VarTuple& z);

/// Checks one leaf formula (literal, constant or dependency atom) against
/// subteams of a fixed team, given as bitmasks over its canonical row order.
class AtomChecker {
public:
    /// Throws UnknownVariable if the leaf mentions a variable outside the team domain.
    AtomChecker(const Team& team, const Formula& leaf);

    [[nodiscard]] bool holds(std::uint64_t mask) const;

private:
    NodeKind kind_;
    std::uint64_t allowed_ = 0;  // literals: rows satisfying the literal
    // Per-row dense ids of the projections onto the atom's tuples. For
    // inclusion atoms x and y share one id space; for independence atoms
    // xz_ identifies the joint (x, z) projection.
    std::vector<std::uint8_t> x_, y_, z_, xz_;
};

/// Team satisfaction by direct recursion on the definition: Or enumerates
/// every partition (strict, 2^|T|) or cover (lax, 3^|T|) of the current team.
/// Throws ResourceLimit when |T| exceeds max_team_size.
[[nodiscard]] bool evaluate(const Team& team, const Formula& f, SemanticsMode mode,
                            std::size_t max_team_size = kDefaultTeamCap);

}  // namespace teamlog
