#pragma once

// Reference implementations used only by tests. They follow the textbook
// definitions as literally as possible and share no code with the library
// beyond the Formula accessors.

#include "teamlog/formula.hpp"
#include "teamlog/team.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace oracle {

using teamlog::Formula;
using teamlog::NodeKind;
using teamlog::VarTuple;

using Row = std::map<std::string, int>;
using Rows = std::vector<Row>;

inline Rows rows_of(const teamlog::Team& t) {
    Rows out;
    for (const auto& a : t.rows()) {
        Row r;
        for (std::size_t i = 0; i < t.domain().size(); ++i) r[t.domain()[i].name()] = a[i];
        out.push_back(r);
    }
    return out;
}

inline std::vector<int> tuple(const Row& r, const VarTuple& vs) {
    std::vector<int> out;
    for (const auto& v : vs) out.push_back(r.at(v.name()));
    return out;
}

inline bool dep(const Rows& t, const VarTuple& x, const VarTuple& y) {
    for (const auto& a : t)
        for (const auto& b : t)
            if (tuple(a, x) == tuple(b, x) && tuple(a, y) != tuple(b, y)) return false;
    return true;
}

inline bool inc(const Rows& t, const VarTuple& x, const VarTuple& y) {
    for (const auto& a : t) {
        bool found = false;
        for (const auto& b : t) found = found || tuple(a, x) == tuple(b, y);
        if (!found) return false;
    }
    return true;
}

// For t, t' agreeing on z some t'' has t''(x) = t(x), t''(z) = t(z), t''(y) = t'(y).
inline bool indep(const Rows& t, const VarTuple& x, const VarTuple& y, const VarTuple& z) {
    for (const auto& a : t)
        for (const auto& b : t) {
            if (tuple(a, z) != tuple(b, z)) continue;
            bool found = false;
            for (const auto& c : t) {
                found = found || (tuple(c, x) == tuple(a, x) && tuple(c, z) == tuple(a, z) && tuple(c, y) == tuple(b, y));
            }
            if (!found) return false;
        }
    return true;
}

// Or: every row is labelled left, right (or both in lax mode).
inline bool holds(const Formula& f, const Rows& t, bool strict) {
    switch (f.kind()) {
        case NodeKind::Top:
            return true;
        case NodeKind::Bot:
            return t.empty();
        case NodeKind::Lit:
            return std::all_of(t.begin(), t.end(), [&](const Row& r) { return r.at(f.var().name()) == (f.positive() ? 1 : 0); });
        case NodeKind::Dep:
            return dep(t, f.x(), f.y());
        case NodeKind::Inc:
            return inc(t, f.x(), f.y());
        case NodeKind::Indep:
            return indep(t, f.x(), f.y(), f.z());
        case NodeKind::And:
            return holds(f.left(), t, strict) && holds(f.right(), t, strict);
        case NodeKind::Or: {
            const int choices = strict ? 2 : 3;
            std::vector<int> label(t.size(), 0);
            for (;;) {
                Rows l, r;
                for (std::size_t i = 0; i < t.size(); ++i) {
                    if (label[i] != 1) l.push_back(t[i]);
                    if (label[i] != 0) r.push_back(t[i]);
                }
                if (holds(f.left(), l, strict) && holds(f.right(), r, strict)) return true;
                std::size_t i = 0;
                while (i < label.size() && ++label[i] == choices) label[i++] = 0;
                if (i == label.size()) return false;
            }
        }
    }
    return false;
}

inline bool holds(const Formula& f, const teamlog::Team& t, bool strict) { return holds(f, rows_of(t), strict); }

/// All assignments over the given variables, in lexicographic order.
inline std::vector<teamlog::Assignment> all_assignments(std::size_t n) {
    std::vector<teamlog::Assignment> out;
    for (std::uint32_t c = 0; c < (1U << n); ++c) {
        teamlog::Assignment a(n);
        for (std::size_t i = 0; i < n; ++i) a[i] = (c >> (n - 1 - i)) & 1U;
        out.push_back(a);
    }
    return out;
}

/// All teams over `domain` (2^(2^n) of them), including the empty team.
inline std::vector<teamlog::Team> all_teams(const std::vector<teamlog::Var>& domain) {
    auto rows = all_assignments(domain.size());
    std::vector<teamlog::Team> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << rows.size()); ++m) {
        std::vector<teamlog::Assignment> pick;
        for (std::size_t i = 0; i < rows.size(); ++i)
            if (m >> i & 1U) pick.push_back(rows[i]);
        out.emplace_back(domain, pick);
    }
    return out;
}

/// Satisfiability by trying every non-empty team over VAR(f).
inline bool satisfiable(const Formula& f, bool strict) {
    for (const auto& t : all_teams(teamlog::variables(f))) {
        if (!t.empty() && holds(f, t, strict)) return true;
    }
    return false;
}

/// Graph given as an edge list over vertices 0..n-1.
struct SmallGraph {
    std::size_t n = 0;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// Treewidth as the minimum over all elimination orders of the largest
/// number of later neighbours in the filled graph. Factorial; n <= 8.
inline std::size_t treewidth_by_permutations(const SmallGraph& g) {
    if (g.n == 0) return 0;
    std::vector<std::size_t> order(g.n);
    for (std::size_t i = 0; i < g.n; ++i) order[i] = i;
    std::size_t best = g.n;
    do {
        std::vector<std::set<std::size_t>> adj(g.n);
        for (auto [u, v] : g.edges) {
            adj[u].insert(v);
            adj[v].insert(u);
        }
        std::size_t width = 0;
        for (auto v : order) {
            width = std::max(width, adj[v].size());
            for (auto a : adj[v])
                for (auto b : adj[v])
                    if (a != b) adj[a].insert(b);
            for (auto a : adj[v]) adj[a].erase(v);
            adj[v].clear();
        }
        best = std::min(best, width);
    } while (std::next_permutation(order.begin(), order.end()));
    return best;
}

}  // namespace oracle
