#pragma once

// Satisfiability engines. A formula is satisfiable when some non-empty team
// satisfies it. Every engine reports witnesses as teams over variables(f).
//
//   sat_brute       all teams over VAR(f); the reference for the others
//   sat_singleton   PL / PDL / PIND: satisfiable iff some singleton is
//   sat_fixpoint    PINC: determinised subteam-growing fixpoint search
//   sat_split_free  PINC without splits: polynomial labelling procedure

#include "teamlog/errors.hpp"
#include "teamlog/formula.hpp"
#include "teamlog/semantics.hpp"
#include "teamlog/team.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

namespace teamlog {

/// The formula's logic kind or shape is outside what the engine decides.
class InapplicableEngine : public Error {
public:
    using Error::Error;
};

enum class SatStatus { Satisfiable, Unsatisfiable, ResourceExhausted };

[[nodiscard]] std::string_view to_string(SatStatus status) noexcept;

struct SatResult {
    SatStatus status = SatStatus::Unsatisfiable;
    std::optional<Team> witness;
    /// Search nodes expanded (engine specific).
    std::size_t steps = 0;

    [[nodiscard]] bool satisfiable() const noexcept { return status == SatStatus::Satisfiable; }
};

/// Enumerates non-empty teams over VAR(f) by size, then by row mask, and
/// returns the first that satisfies f. Limited to 4 variables (2^16 teams).
[[nodiscard]] SatResult sat_brute(const Formula& f, SemanticsMode mode, std::size_t max_vars = 4);

/// Searches singleton teams {s}; on singletons dependence and independence
/// atoms hold trivially, so this is classical evaluation. Throws
/// InapplicableEngine for PINC formulas.
[[nodiscard]] SatResult sat_singleton(const Formula& f, std::size_t max_vars = 24);

/// One round of inclusion repair: if S already satisfies inc(x; y) it is
/// returned unchanged; otherwise, for each s in S, a row t with t(y) = s(x)
/// (all other values copied from s) is added, so |T| <= 2|S|. When x and y
/// share no variable the result satisfies the atom. Returns nullopt when
/// some s(x) cannot be a y-value at all (y repeats a variable at positions
/// where s(x) differs), in which case no superset of S satisfies the atom.
[[nodiscard]] std::optional<Team> repair_inclusion(const Team& s, const Formula& inc_atom);

/// Teams attached to each node of index_formula(f, false) at one round.
struct FixpointState {
    std::size_t round = 0;
    std::vector<Team> teams;
};

struct FixpointOptions {
    /// Maximum number of bottom-up rounds explored across all branches.
    std::size_t budget = 2'000'000;
    std::size_t max_vars = 20;
    /// Called after every bottom-up round with the previous bottom-up state
    /// of the same branch (or the initial guess) and the new one.
    std::function<void(const FixpointState& before, const FixpointState& after)> on_round;
    /// Called for every inclusion repair with the sizes before and after.
    std::function<void(std::size_t before, std::size_t after)> on_repair;
};

/// PINC satisfiability by exhaustive search over the nondeterministic choices
/// of the subteam-growing fixpoint procedure:
///   - initial subteams for inclusion atoms (rows with pairwise distinct
///     y-values, so at most 2^arity rows); when all are empty, a single row
///     at one literal or verum leaf;
///   - odd rounds, bottom-up: atoms are repaired, connectives take unions;
///   - even rounds, top-down: conjunctions copy their team to both
///     children, disjunctions distribute new rows (to one side only in
///     strict mode).
/// A branch accepts when the state is stable and the root team is non-empty.
/// Throws InapplicableEngine for PDL / PIND input.
[[nodiscard]] SatResult sat_fixpoint(const Formula& f, SemanticsMode mode, const FixpointOptions& options = {});

/// Labels computed by the split-free procedure. Variables in one class of
/// `equal` take equal values in every satisfying team.
struct LabelState {
    std::map<Var, std::uint8_t> labels;
    std::vector<std::vector<Var>> equal;
    bool conflict = false;
};

/// Literal labelling with propagation through inclusion atoms, to a fixpoint.
/// Throws InapplicableEngine if f contains a split or non-inclusion atoms.
[[nodiscard]] LabelState label_split_free(const Formula& f);

/// Satisfiability of split-free PINC formulas in polynomial time. The witness
/// fixes labelled variables and ranges freely over the rest; it is omitted
/// when that would exceed 2^max_witness_free_vars rows.
[[nodiscard]] SatResult sat_split_free(const Formula& f, std::size_t max_witness_free_vars = 16);

}  // namespace teamlog
