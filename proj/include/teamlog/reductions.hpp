#pragma once

#include "teamlog/formula.hpp"
#include "teamlog/team.hpp"

#include "json.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace teamlog {

/// A family of subsets of a finite base set. Sets refer to elements by index.
struct SetSplittingInstance {
    std::vector<std::string> elements;
    std::vector<std::vector<std::size_t>> sets;

    /// Throws Error on an out-of-range element index.
    void validate() const;
};

/// {"elements": [names], "sets": [[names]]}. Throws ParseError or Error.
[[nodiscard]] SetSplittingInstance parse_setsplit_json(const nlohmann::json& doc);
[[nodiscard]] nlohmann::json setsplit_to_json(const SetSplittingInstance& inst);

/// Element indices of the two parts.
using Split = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;

/// Exhaustive search for a partition in which every set meets both parts.
/// The first part is the lowest mask found. Throws ResourceLimit above 20 elements.
[[nodiscard]] std::optional<Split> setsplit_brute(const SetSplittingInstance& inst);

struct ReducedInstance {
    Team team;
    Formula formula;
};

/// Builds (T_F, phi_F): the instance is splittable iff T_F satisfies phi_F
/// under strict semantics. Variables p1..pk, q1..qn, p_top, p_c, p_d.
[[nodiscard]] ReducedInstance setsplit_to_pinc_mc(const SetSplittingInstance& inst);

/// Replaces every =(x; y) by ind(y; y | x). Throws FormulaError for PINC / PIND input.
[[nodiscard]] Formula dep_to_indep(const Formula& f);

struct RandomFormulaConfig {
    LogicKind logic = LogicKind::PL;
    std::size_t max_vars = 3;
    std::size_t max_nodes = 9;
    std::size_t max_arity = 2;
    std::uint64_t seed = 0;
    /// Upper bound on Or nodes; 0 gives split-free formulas.
    std::size_t max_splits = SIZE_MAX;
};

/// Random formula over x1..x{max_vars} with at most max_nodes syntax-tree
/// nodes. For PDL / PINC / PIND at least one atom of that kind occurs.
/// Deterministic for a given config.
[[nodiscard]] Formula random_formula(const RandomFormulaConfig& cfg);

/// Random team over `domain` with at most max_rows distinct rows.
[[nodiscard]] Team random_team(const std::vector<Var>& domain, std::size_t max_rows, std::uint64_t seed);

}  // namespace teamlog
