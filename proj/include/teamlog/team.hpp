#pragma once

#include "teamlog/formula.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace teamlog {

/// Bit values positional over the enclosing team's domain.
using Assignment = std::vector<std::uint8_t>;

/// A set of assignments over a shared, ordered variable domain.
/// Rows are kept in lexicographic order of their bit values, so
/// iteration is deterministic and row i of one team means the same
/// thing across runs.
class Team {
public:
    Team() = default;
    explicit Team(std::vector<Var> domain);
    /// Throws TeamError on arity mismatch, non-bit values or duplicate rows.
    Team(std::vector<Var> domain, std::vector<Assignment> rows);
    /// Rows from a set; duplicates are impossible by construction.
    Team(std::vector<Var> domain, const std::set<Assignment>& rows);

    [[nodiscard]] const std::vector<Var>& domain() const noexcept { return domain_; }
    [[nodiscard]] const std::vector<Assignment>& rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t size() const noexcept { return rows_.size(); }
    [[nodiscard]] bool empty() const noexcept { return rows_.empty(); }

    [[nodiscard]] std::optional<std::size_t> index_of(const Var& v) const;
    /// Throws UnknownVariable.
    [[nodiscard]] std::size_t require_index(const Var& v) const;
    [[nodiscard]] std::vector<std::size_t> indices(const VarTuple& vars) const;

    /// Rows selected by bit i of mask (i < 64).
    [[nodiscard]] Team subteam(std::uint64_t mask) const;
    [[nodiscard]] bool contains(const Assignment& row) const;

    friend bool operator==(const Team&, const Team&) = default;

private:
    void check_domain() const;

    std::vector<Var> domain_;
    std::vector<Assignment> rows_;
};

/// Text format ("x1 x2\n01\n10\n") or, when the first non-space
/// character is '{', the structured {"vars": [...], "rows": [[0,1],...]} format.
[[nodiscard]] Team parse_team(std::string_view text);
[[nodiscard]] Team parse_team_json(const nlohmann::json& doc);

[[nodiscard]] std::string render_team(const Team& team);
[[nodiscard]] nlohmann::json team_to_json(const Team& team);

}  // namespace teamlog
