#pragma once

// Formula AST for propositional team logics.
//
// A Formula is an immutable, reference-counted tree. Negation is atomic: a
// literal carries its polarity. The syntax-tree view used for sizes and
// subformula listings treats a negative literal !x as two nodes (the
// negation and its variable), so |!x| = 2 and depth(!x) = 1.
//
// Every formula carries a LogicKind. PL formulas contain no dependency
// atoms; PDL, PINC and PIND formulas contain atoms of exactly one form.

#include <cstddef>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace teamlog {

/// Identifier matching [A-Za-z_][A-Za-z0-9_]*, excluding the constants "T" and "B".
[[nodiscard]] bool is_identifier(std::string_view text) noexcept;

class Var {
public:
    /// Throws FormulaError for names that are not identifiers.
    explicit Var(std::string name);

    [[nodiscard]] const std::string& name() const noexcept { return name_; }

    friend bool operator==(const Var&, const Var&) = default;
    friend auto operator<=>(const Var&, const Var&) = default;

private:
    std::string name_;
};

using VarTuple = std::vector<Var>;

enum class LogicKind { PL, PDL, PINC, PIND };

enum class NodeKind { Top, Bot, Lit, And, Or, Dep, Inc, Indep };

[[nodiscard]] std::string_view to_string(LogicKind kind) noexcept;
[[nodiscard]] std::string_view to_string(NodeKind kind) noexcept;

class Formula {
public:
    static Formula top();
    static Formula bot();
    static Formula lit(Var v, bool positive = true);
    /// Throws FormulaError if the operands carry different dependency-atom kinds.
    static Formula conj(Formula lhs, Formula rhs);
    static Formula disj(Formula lhs, Formula rhs);
    static Formula dep(VarTuple x, VarTuple y);
    /// Throws FormulaError unless |x| == |y|.
    static Formula inc(VarTuple x, VarTuple y);
    /// ind(x; y | z): x and y independent given z.
    static Formula indep(VarTuple x, VarTuple y, VarTuple z);

    [[nodiscard]] NodeKind kind() const noexcept;
    [[nodiscard]] LogicKind logic() const noexcept;

    [[nodiscard]] bool is_leaf() const noexcept;
    [[nodiscard]] bool is_dependency_atom() const noexcept;

    // Lit only.
    [[nodiscard]] const Var& var() const;
    [[nodiscard]] bool positive() const;

    // And / Or only.
    [[nodiscard]] const Formula& left() const;
    [[nodiscard]] const Formula& right() const;

    // Dependency atoms. For Dep and Inc, z() is empty.
    [[nodiscard]] const VarTuple& x() const;
    [[nodiscard]] const VarTuple& y() const;
    [[nodiscard]] const VarTuple& z() const;

    /// Syntax-tree node count (a negative literal counts 2).
    [[nodiscard]] std::size_t size() const noexcept;
    /// Longest root-to-leaf path, in edges.
    [[nodiscard]] std::size_t depth() const noexcept;

    /// Identity of the underlying node; equal for copies of the same occurrence.
    [[nodiscard]] const void* id() const noexcept { return node_.get(); }

    friend bool operator==(const Formula& a, const Formula& b);

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

    std::shared_ptr<const Node> node_;
};

/// Parses the textual grammar; throws ParseError.
[[nodiscard]] Formula parse_formula(std::string_view text);

/// Canonical, fully parenthesised text. parse_formula(render_formula(f)) == f.
[[nodiscard]] std::string render_formula(const Formula& f);

std::ostream& operator<<(std::ostream& os, const Formula& f);

/// Syntax-tree children; the child of a negative literal is its positive variable leaf.
[[nodiscard]] std::vector<Formula> children(const Formula& f);

/// All syntax-tree nodes in pre-order, including f and atomic leaves.
[[nodiscard]] std::vector<Formula> subformulas(const Formula& f);

/// Distinct variables of f, sorted by name.
[[nodiscard]] std::vector<Var> variables(const Formula& f);

/// Number of Or nodes.
[[nodiscard]] std::size_t count_splits(const Formula& f);

/// Pre-order indexed view of a formula for table-driven algorithms.
/// Children always carry larger indices than their parent, so a reverse
/// sweep visits children first.
struct IndexedFormula {
    std::vector<Formula> nodes;
    std::vector<int> left;
    std::vector<int> right;
    std::vector<int> parent;

    [[nodiscard]] std::size_t size() const noexcept { return nodes.size(); }
};

/// With expand_negation, each negative literal gets its variable leaf as a
/// left child (matching subformulas()); otherwise literals are leaves.
[[nodiscard]] IndexedFormula index_formula(const Formula& f, bool expand_negation);

}  // namespace teamlog
