#pragma once

// Syntax-structure graphs, tree decompositions and instance parameters.

#include "teamlog/formula.hpp"
#include "teamlog/team.hpp"

#include "json.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace teamlog {

enum class VertexKind { Subformula, Variable, TeamConstant };
enum class EdgeTag { Child, Dep, IsTrue, IsFalse };

[[nodiscard]] std::string_view to_string(VertexKind kind) noexcept;
[[nodiscard]] std::string_view to_string(EdgeTag tag) noexcept;

struct GaifmanVertex {
    VertexKind kind;
    /// Subformula text, variable name, or c1, c2, ... for team rows.
    std::string label;
};

struct GaifmanEdge {
    std::size_t u;
    std::size_t v;
    EdgeTag tag;
};

/// Simple undirected graph; each edge keeps the tag it was first added with.
class GaifmanGraph {
public:
    std::size_t add_vertex(VertexKind kind, std::string label);
    /// Ignores loops and edges already present.
    void add_edge(std::size_t u, std::size_t v, EdgeTag tag);

    [[nodiscard]] std::size_t num_vertices() const noexcept { return vertices_.size(); }
    [[nodiscard]] std::size_t num_edges() const noexcept { return edges_.size(); }
    [[nodiscard]] const std::vector<GaifmanVertex>& vertices() const noexcept { return vertices_; }
    [[nodiscard]] const std::vector<GaifmanEdge>& edges() const noexcept { return edges_; }
    [[nodiscard]] bool has_edge(std::size_t u, std::size_t v) const;
    [[nodiscard]] const std::vector<std::size_t>& neighbours(std::size_t v) const { return adj_.at(v); }

    /// First vertex of the given kind with this label.
    [[nodiscard]] std::optional<std::size_t> find(VertexKind kind, std::string_view label) const;

private:
    std::vector<GaifmanVertex> vertices_;
    std::vector<GaifmanEdge> edges_;
    std::vector<std::vector<std::size_t>> adj_;
};

/// Vertices: subformula occurrences and variables (a positive variable leaf
/// is the variable vertex itself; !x is its own vertex with an edge to x),
/// plus one constant c_i per team row when a team is given. Edges: parent to
/// child, atom to each of its variables, all variables of one atom pairwise,
/// and every c_i to every variable of f (tagged by the row's value).
/// Throws UnknownVariable if the team lacks a variable of f.
[[nodiscard]] GaifmanGraph build_gaifman(const Formula& f, const Team* team = nullptr);

struct TreeDecomposition {
    std::vector<std::vector<std::size_t>> bags;
    std::vector<std::pair<std::size_t, std::size_t>> edges;

    /// Largest bag size minus one (0 for no bags).
    [[nodiscard]] std::size_t width() const noexcept;
};

struct DecompositionCheck {
    bool valid = false;
    std::size_t width = 0;
    std::string violation;
};

/// Checks that the bags form a tree covering every vertex and edge, and that
/// the bags holding any one vertex are connected.
[[nodiscard]] DecompositionCheck validate_decomposition(const GaifmanGraph& g, const TreeDecomposition& d);

/// Bag per eliminated vertex: the vertex and its later neighbours in the filled graph.
[[nodiscard]] TreeDecomposition decomposition_from_order(const GaifmanGraph& g, const std::vector<std::size_t>& order);

enum class TreewidthMethod { MinFill, MinDegree };

[[nodiscard]] std::string_view to_string(TreewidthMethod method) noexcept;

struct TreewidthResult {
    std::size_t width = 0;
    TreeDecomposition decomposition;
    std::vector<std::size_t> order;
};

/// Greedy elimination ordering; the width is an upper bound.
[[nodiscard]] TreewidthResult treewidth_upper(const GaifmanGraph& g, TreewidthMethod method = TreewidthMethod::MinFill);

inline constexpr std::size_t kDefaultExactVertexCap = 16;

/// Branch and bound over elimination orderings. Throws ResourceLimit when the
/// graph has more than max_vertices vertices (hard limit 64).
[[nodiscard]] TreewidthResult treewidth_exact(const GaifmanGraph& g, std::size_t max_vertices = kDefaultExactVertexCap);

[[nodiscard]] std::string to_dot(const GaifmanGraph& g);
[[nodiscard]] nlohmann::json to_json(const GaifmanGraph& g);
/// {"bags": [[ids]], "edges": [[i, j]], "width": n}
[[nodiscard]] nlohmann::json to_json(const TreeDecomposition& d);

struct TreewidthValue {
    std::size_t width = 0;
    std::string method;
    bool exact = false;
};

struct ParameterReport {
    std::optional<std::size_t> teamsize;
    std::size_t formula_size = 0;
    /// Symbol length: syntax-tree nodes plus variable occurrences inside atoms.
    std::size_t formula_length = 0;
    std::size_t formula_depth = 0;
    std::size_t num_variables = 0;
    std::size_t num_splits = 0;
    /// Dependence and inclusion atoms: |x|; independence atoms: distinct variables.
    std::size_t arity = 0;
    TreewidthValue formula_tw;
    std::optional<TreewidthValue> formula_team_tw;
};

/// With exact_tw, treewidths are exact when the graph fits max_exact_vertices
/// and min-fill bounds (exact = false) otherwise.
[[nodiscard]] ParameterReport parameters(const Formula& f, const Team* team = nullptr, bool exact_tw = false,
                                         std::size_t max_exact_vertices = kDefaultExactVertexCap);

[[nodiscard]] nlohmann::json to_json(const ParameterReport& r);

/// Parameter inequalities for a team over VAR(f):
/// teamsize <= 2^variables, teamsize <= 2^length, size <= 2^(2 depth).
/// Atoms are single nodes but may mention several variables, so the second
/// bound uses the symbol length rather than the node count.
struct ParameterBoundsCheck {
    bool teamsize_by_variables = true;
    bool teamsize_by_size = true;
    bool size_by_depth = true;

    [[nodiscard]] bool ok() const noexcept { return teamsize_by_variables && teamsize_by_size && size_by_depth; }
};

[[nodiscard]] ParameterBoundsCheck check_parameter_bounds(const ParameterReport& r);

}  // namespace teamlog
