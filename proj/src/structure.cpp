#include "teamlog/structure.hpp"

#include "teamlog/errors.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>

namespace teamlog {

std::string_view to_string(VertexKind kind) noexcept {
    switch (kind) {
        case VertexKind::Subformula:
            return "subformula";
        case VertexKind::Variable:
            return "variable";
        case VertexKind::TeamConstant:
            return "team_constant";
    }
    return "unknown";
}

std::string_view to_string(EdgeTag tag) noexcept {
    switch (tag) {
        case EdgeTag::Child:
            return "child";
        case EdgeTag::Dep:
            return "dep";
        case EdgeTag::IsTrue:
            return "isTrue";
        case EdgeTag::IsFalse:
            return "isFalse";
    }
    return "unknown";
}

std::string_view to_string(TreewidthMethod method) noexcept {
    return method == TreewidthMethod::MinFill ? "min_fill" : "min_degree";
}

std::size_t GaifmanGraph::add_vertex(VertexKind kind, std::string label) {
    vertices_.push_back({kind, std::move(label)});
    adj_.emplace_back();
    return vertices_.size() - 1;
}

void GaifmanGraph::add_edge(std::size_t u, std::size_t v, EdgeTag tag) {
    if (u == v || has_edge(u, v)) return;
    edges_.push_back({std::min(u, v), std::max(u, v), tag});
    adj_[u].push_back(v);
    adj_[v].push_back(u);
}

bool GaifmanGraph::has_edge(std::size_t u, std::size_t v) const {
    const auto& a = adj_.at(u);
    return std::find(a.begin(), a.end(), v) != a.end();
}

std::optional<std::size_t> GaifmanGraph::find(VertexKind kind, std::string_view label) const {
    for (std::size_t i = 0; i < vertices_.size(); ++i) {
        if (vertices_[i].kind == kind && vertices_[i].label == label) return i;
    }
    return std::nullopt;
}

GaifmanGraph build_gaifman(const Formula& f, const Team* team) {
    GaifmanGraph g;
    const auto tree = index_formula(f, true);
    std::map<Var, std::size_t> var_vertex;
    const auto vars = variables(f);
    // Variables first so their ids do not depend on where they occur.
    for (const auto& v : vars) var_vertex.emplace(v, g.add_vertex(VertexKind::Variable, v.name()));

    std::vector<std::size_t> vertex_of(tree.size());
    for (std::size_t i = 0; i < tree.size(); ++i) {
        const auto& node = tree.nodes[i];
        if (node.kind() == NodeKind::Lit && node.positive()) {
            vertex_of[i] = var_vertex.at(node.var());
        } else {
            vertex_of[i] = g.add_vertex(VertexKind::Subformula, render_formula(node));
        }
    }
    for (std::size_t i = 0; i < tree.size(); ++i) {
        for (int c : {tree.left[i], tree.right[i]}) {
            if (c >= 0) g.add_edge(vertex_of[i], vertex_of[static_cast<std::size_t>(c)], EdgeTag::Child);
        }
        const auto& node = tree.nodes[i];
        if (!node.is_dependency_atom()) continue;
        std::set<std::size_t> atom_vars;
        for (const auto* t : {&node.x(), &node.y(), &node.z()}) {
            for (const auto& v : *t) atom_vars.insert(var_vertex.at(v));
        }
        for (auto v : atom_vars) g.add_edge(vertex_of[i], v, EdgeTag::Dep);
        for (auto a : atom_vars) {
            for (auto b : atom_vars) {
                if (a < b) g.add_edge(a, b, EdgeTag::Dep);
            }
        }
    }
    if (team) {
        std::vector<std::size_t> cols;
        for (const auto& v : vars) cols.push_back(team->require_index(v));
        for (std::size_t r = 0; r < team->size(); ++r) {
            auto c = g.add_vertex(VertexKind::TeamConstant, "c" + std::to_string(r + 1));
            for (std::size_t k = 0; k < vars.size(); ++k) {
                g.add_edge(c, var_vertex.at(vars[k]), team->rows()[r][cols[k]] ? EdgeTag::IsTrue : EdgeTag::IsFalse);
            }
        }
    }
    return g;
}

std::size_t TreeDecomposition::width() const noexcept {
    std::size_t w = 0;
    for (const auto& b : bags) w = std::max(w, b.size());
    return w == 0 ? 0 : w - 1;
}

DecompositionCheck validate_decomposition(const GaifmanGraph& g, const TreeDecomposition& d) {
    DecompositionCheck out;
    const std::size_t n = g.num_vertices();
    const std::size_t b = d.bags.size();
    if (b == 0) {
        if (n == 0) out.valid = true;
        else out.violation = "no bags for a non-empty graph";
        return out;
    }
    std::vector<std::vector<std::size_t>> tree(b);
    for (auto [i, j] : d.edges) {
        if (i >= b || j >= b || i == j) {
            out.violation = "tree edge {" + std::to_string(i) + ", " + std::to_string(j) + "} is invalid";
            return out;
        }
        tree[i].push_back(j);
        tree[j].push_back(i);
    }
    if (d.edges.size() != b - 1) {
        out.violation = "bags do not form a tree: " + std::to_string(d.edges.size()) + " edges for " +
                        std::to_string(b) + " bags";
        return out;
    }
    // Connected with b - 1 edges means a tree.
    std::vector<char> seen(b, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        auto x = stack.back();
        stack.pop_back();
        for (auto y : tree[x]) {
            if (!seen[y]) {
                seen[y] = 1;
                ++reached;
                stack.push_back(y);
            }
        }
    }
    if (reached != b) {
        out.violation = "bags do not form a tree: not connected";
        return out;
    }

    std::vector<std::vector<char>> in_bag(b, std::vector<char>(n, 0));
    for (std::size_t i = 0; i < b; ++i) {
        for (auto v : d.bags[i]) {
            if (v >= n) {
                out.violation = "bag " + std::to_string(i) + " names unknown vertex " + std::to_string(v);
                return out;
            }
            in_bag[i][v] = 1;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::size_t> holders;
        for (std::size_t i = 0; i < b; ++i) {
            if (in_bag[i][v]) holders.push_back(i);
        }
        if (holders.empty()) {
            out.violation = "vertex " + g.vertices()[v].label + " is in no bag";
            return out;
        }
        // The bags holding v must induce a connected subtree.
        std::vector<char> vis(b, 0);
        std::vector<std::size_t> st{holders.front()};
        vis[holders.front()] = 1;
        std::size_t count = 1;
        while (!st.empty()) {
            auto x = st.back();
            st.pop_back();
            for (auto y : tree[x]) {
                if (!vis[y] && in_bag[y][v]) {
                    vis[y] = 1;
                    ++count;
                    st.push_back(y);
                }
            }
        }
        if (count != holders.size()) {
            out.violation = "bags containing " + g.vertices()[v].label + " are not connected";
            return out;
        }
    }
    for (const auto& e : g.edges()) {
        bool covered = false;
        for (std::size_t i = 0; i < b && !covered; ++i) covered = in_bag[i][e.u] && in_bag[i][e.v];
        if (!covered) {
            out.violation = "edge {" + g.vertices()[e.u].label + ", " + g.vertices()[e.v].label + "} is in no bag";
            return out;
        }
    }
    out.valid = true;
    out.width = d.width();
    return out;
}

namespace {

using AdjSets = std::vector<std::set<std::size_t>>;

AdjSets adjacency_sets(const GaifmanGraph& g) {
    AdjSets adj(g.num_vertices());
    for (const auto& e : g.edges()) {
        adj[e.u].insert(e.v);
        adj[e.v].insert(e.u);
    }
    return adj;
}

std::size_t fill_in(const AdjSets& adj, std::size_t v) {
    std::size_t missing = 0;
    for (auto a = adj[v].begin(); a != adj[v].end(); ++a) {
        for (auto b = std::next(a); b != adj[v].end(); ++b) {
            if (!adj[*a].count(*b)) ++missing;
        }
    }
    return missing;
}

void eliminate(AdjSets& adj, std::size_t v) {
    for (auto a : adj[v]) {
        for (auto b : adj[v]) {
            if (a != b) adj[a].insert(b);
        }
        adj[a].erase(v);
    }
    adj[v].clear();
}

}  // namespace

TreeDecomposition decomposition_from_order(const GaifmanGraph& g, const std::vector<std::size_t>& order) {
    const std::size_t n = g.num_vertices();
    TreeDecomposition d;
    if (n == 0) return d;
    AdjSets adj = adjacency_sets(g);
    std::vector<std::size_t> position(n);
    for (std::size_t i = 0; i < order.size(); ++i) position[order[i]] = i;
    std::vector<std::size_t> next_bag(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto v = order[i];
        std::vector<std::size_t> bag{v};
        std::size_t parent = n;
        for (auto u : adj[v]) {
            bag.push_back(u);
            if (parent == n || position[u] < position[parent]) parent = u;
        }
        std::sort(bag.begin(), bag.end());
        d.bags.push_back(std::move(bag));
        next_bag[i] = parent == n ? n : position[parent];
        eliminate(adj, v);
    }
    // Link each bag to the bag of its earliest later neighbour; bags without
    // one start a new component and are chained to the next bag.
    for (std::size_t i = 0; i + 1 < n; ++i) d.edges.emplace_back(i, next_bag[i] == n ? i + 1 : next_bag[i]);
    return d;
}

TreewidthResult treewidth_upper(const GaifmanGraph& g, TreewidthMethod method) {
    const std::size_t n = g.num_vertices();
    AdjSets adj = adjacency_sets(g);
    std::vector<char> done(n, 0);
    TreewidthResult out;
    for (std::size_t step = 0; step < n; ++step) {
        std::size_t best = n;
        std::pair<std::size_t, std::size_t> best_key{SIZE_MAX, SIZE_MAX};
        for (std::size_t v = 0; v < n; ++v) {
            if (done[v]) continue;
            std::pair<std::size_t, std::size_t> key = method == TreewidthMethod::MinFill
                                                          ? std::pair{fill_in(adj, v), adj[v].size()}
                                                          : std::pair{adj[v].size(), fill_in(adj, v)};
            if (key < best_key) {
                best_key = key;
                best = v;
            }
        }
        out.width = std::max(out.width, adj[best].size());
        out.order.push_back(best);
        done[best] = 1;
        eliminate(adj, best);
    }
    out.decomposition = decomposition_from_order(g, out.order);
    return out;
}

namespace {

using Mask = std::uint64_t;

// Lower bound by contraction: repeatedly take a vertex of minimum degree,
// record the degree, and merge it into its least-degree neighbour.
std::size_t minor_min_width(std::vector<Mask> adj, Mask alive) {
    std::size_t lb = 0;
    while (std::popcount(alive) > 1) {
        std::size_t v = 64;
        int best = 65;
        for (Mask m = alive; m; m &= m - 1) {
            auto u = static_cast<std::size_t>(std::countr_zero(m));
            int d = std::popcount(adj[u]);
            if (d < best) {
                best = d;
                v = u;
            }
        }
        lb = std::max(lb, static_cast<std::size_t>(best));
        if (best == 0) {
            alive &= ~(Mask{1} << v);
            continue;
        }
        std::size_t w = 64;
        int wd = 65;
        for (Mask m = adj[v]; m; m &= m - 1) {
            auto u = static_cast<std::size_t>(std::countr_zero(m));
            int d = std::popcount(adj[u]);
            if (d < wd) {
                wd = d;
                w = u;
            }
        }
        // Contract v into w.
        const Mask vbit = Mask{1} << v;
        const Mask wbit = Mask{1} << w;
        Mask merged = (adj[v] | adj[w]) & ~vbit & ~wbit;
        for (Mask m = adj[v]; m; m &= m - 1) adj[static_cast<std::size_t>(std::countr_zero(m))] &= ~vbit;
        for (Mask m = merged; m; m &= m - 1) adj[static_cast<std::size_t>(std::countr_zero(m))] |= wbit;
        adj[w] = merged;
        adj[v] = 0;
        alive &= ~vbit;
    }
    return lb;
}

class ExactSearch {
public:
    ExactSearch(std::vector<Mask> adj, std::size_t upper, std::vector<std::size_t> upper_order)
        : n_(adj.size()), adj0_(std::move(adj)), best_(upper), best_order_(std::move(upper_order)) {}

    void run() {
        std::vector<std::size_t> order;
        const Mask all = n_ == 64 ? ~Mask{0} : (Mask{1} << n_) - 1;
        dfs(adj0_, all, 0, order);
    }

    [[nodiscard]] std::size_t best() const noexcept { return best_; }
    [[nodiscard]] const std::vector<std::size_t>& best_order() const noexcept { return best_order_; }

private:
    static void eliminate(std::vector<Mask>& adj, std::size_t v) {
        const Mask nb = adj[v];
        const Mask vbit = Mask{1} << v;
        for (Mask m = nb; m; m &= m - 1) {
            auto u = static_cast<std::size_t>(std::countr_zero(m));
            adj[u] = (adj[u] | nb) & ~(Mask{1} << u) & ~vbit;
        }
        adj[v] = 0;
    }

    [[nodiscard]] static bool is_clique(const std::vector<Mask>& adj, Mask vs) {
        for (Mask m = vs; m; m &= m - 1) {
            auto u = static_cast<std::size_t>(std::countr_zero(m));
            if ((((adj[u] | (Mask{1} << u)) & vs) ^ vs) != 0) return false;
        }
        return true;
    }

    void finish(Mask alive, std::size_t width, std::vector<std::size_t>& order) {
        // The remaining vertices are eliminated in any order within this width.
        const std::size_t before = order.size();
        for (Mask m = alive; m; m &= m - 1) order.push_back(static_cast<std::size_t>(std::countr_zero(m)));
        if (width < best_) {
            best_ = width;
            best_order_ = order;
        }
        order.resize(before);
    }

    void dfs(std::vector<Mask> adj, Mask alive, std::size_t width, std::vector<std::size_t>& order) {
        const auto left = static_cast<std::size_t>(std::popcount(alive));
        if (left == 0 || left - 1 <= width) {
            finish(alive, width, order);
            return;
        }
        auto [it, inserted] = memo_.try_emplace(alive, width);
        if (!inserted) {
            if (it->second <= width) return;
            it->second = width;
        }
        const std::size_t lb = std::max(width, minor_min_width(adj, alive));
        if (lb >= best_) return;

        // A simplicial vertex can be eliminated first without loss.
        for (Mask m = alive; m; m &= m - 1) {
            auto v = static_cast<std::size_t>(std::countr_zero(m));
            if (is_clique(adj, adj[v])) {
                const auto deg = static_cast<std::size_t>(std::popcount(adj[v]));
                if (std::max(width, deg) >= best_) return;
                order.push_back(v);
                auto next = adj;
                eliminate(next, v);
                dfs(std::move(next), alive & ~(Mask{1} << v), std::max(width, deg), order);
                order.pop_back();
                return;
            }
        }
        std::vector<std::pair<int, std::size_t>> cand;
        for (Mask m = alive; m; m &= m - 1) {
            auto v = static_cast<std::size_t>(std::countr_zero(m));
            cand.push_back({std::popcount(adj[v]), v});
        }
        std::sort(cand.begin(), cand.end());
        for (auto [deg, v] : cand) {
            const std::size_t w = std::max(width, static_cast<std::size_t>(deg));
            if (w >= best_) continue;
            order.push_back(v);
            auto next = adj;
            eliminate(next, v);
            dfs(std::move(next), alive & ~(Mask{1} << v), w, order);
            order.pop_back();
        }
    }

    std::size_t n_;
    std::vector<Mask> adj0_;
    std::size_t best_;
    std::vector<std::size_t> best_order_;
    std::unordered_map<Mask, std::size_t> memo_;
};

}  // namespace

TreewidthResult treewidth_exact(const GaifmanGraph& g, std::size_t max_vertices) {
    const std::size_t n = g.num_vertices();
    if (n > max_vertices || n > 64) {
        throw ResourceLimit("exact treewidth limited to " + std::to_string(std::min<std::size_t>(max_vertices, 64)) +
                            " vertices; graph has " + std::to_string(n));
    }
    auto upper = treewidth_upper(g, TreewidthMethod::MinFill);
    if (n == 0) return upper;
    std::vector<Mask> adj(n, 0);
    for (const auto& e : g.edges()) {
        adj[e.u] |= Mask{1} << e.v;
        adj[e.v] |= Mask{1} << e.u;
    }
    ExactSearch search(std::move(adj), upper.width, upper.order);
    search.run();
    TreewidthResult out;
    out.width = search.best();
    out.order = search.best_order();
    out.decomposition = decomposition_from_order(g, out.order);
    return out;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string to_dot(const GaifmanGraph& g) {
    std::ostringstream os;
    os << "graph gaifman {\n";
    for (std::size_t i = 0; i < g.num_vertices(); ++i) {
        const auto& v = g.vertices()[i];
        os << "  n" << i << " [label=\"" << dot_escape(v.label) << "\", kind=\"" << to_string(v.kind) << "\"";
        if (v.kind == VertexKind::Variable) os << ", shape=box";
        if (v.kind == VertexKind::TeamConstant) os << ", shape=diamond";
        os << "];\n";
    }
    for (const auto& e : g.edges()) {
        os << "  n" << e.u << " -- n" << e.v << " [tag=\"" << to_string(e.tag) << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

nlohmann::json to_json(const GaifmanGraph& g) {
    nlohmann::json vertices = nlohmann::json::array();
    for (std::size_t i = 0; i < g.num_vertices(); ++i) {
        vertices.push_back({{"id", i}, {"label", g.vertices()[i].label}, {"kind", to_string(g.vertices()[i].kind)}});
    }
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : g.edges()) edges.push_back({{"u", e.u}, {"v", e.v}, {"tag", to_string(e.tag)}});
    return {{"vertices", vertices}, {"edges", edges}};
}

nlohmann::json to_json(const TreeDecomposition& d) {
    nlohmann::json edges = nlohmann::json::array();
    for (auto [i, j] : d.edges) edges.push_back({i, j});
    return {{"bags", d.bags}, {"edges", edges}, {"width", d.width()}};
}

namespace {

std::size_t atom_arity(const Formula& f) {
    if (f.kind() == NodeKind::Indep) {
        std::set<Var> vs(f.x().begin(), f.x().end());
        vs.insert(f.y().begin(), f.y().end());
        vs.insert(f.z().begin(), f.z().end());
        return vs.size();
    }
    return f.x().size();
}

TreewidthValue measure(const GaifmanGraph& g, bool exact, std::size_t cap) {
    if (exact && g.num_vertices() <= std::min<std::size_t>(cap, 64)) {
        return {treewidth_exact(g, cap).width, "exact", true};
    }
    return {treewidth_upper(g, TreewidthMethod::MinFill).width, std::string(to_string(TreewidthMethod::MinFill)), false};
}

}  // namespace

ParameterReport parameters(const Formula& f, const Team* team, bool exact_tw, std::size_t max_exact_vertices) {
    ParameterReport r;
    r.formula_size = f.size();
    r.formula_depth = f.depth();
    r.num_variables = variables(f).size();
    r.num_splits = count_splits(f);
    r.formula_length = r.formula_size;
    for (const auto& node : index_formula(f, false).nodes) {
        if (!node.is_dependency_atom()) continue;
        r.arity = std::max(r.arity, atom_arity(node));
        r.formula_length += node.x().size() + node.y().size() + node.z().size();
    }
    r.formula_tw = measure(build_gaifman(f), exact_tw, max_exact_vertices);
    if (team) {
        r.teamsize = team->size();
        r.formula_team_tw = measure(build_gaifman(f, team), exact_tw, max_exact_vertices);
    }
    return r;
}

namespace {

nlohmann::json tw_json(const TreewidthValue& v) {
    return {{"width", v.width}, {"method", v.method}, {"exact", v.exact}};
}

}  // namespace

nlohmann::json to_json(const ParameterReport& r) {
    nlohmann::json out = {
        {"formula_size", r.formula_size}, {"formula_length", r.formula_length}, {"formula_depth", r.formula_depth}, {"num_variables", r.num_variables},
        {"num_splits", r.num_splits},     {"arity", r.arity},                 {"formula_tw", tw_json(r.formula_tw)},
    };
    if (r.teamsize) out["teamsize"] = *r.teamsize;
    if (r.formula_team_tw) out["formula_team_tw"] = tw_json(*r.formula_team_tw);
    return out;
}

namespace {

// 2^e compared without overflow.
bool le_pow2(std::size_t value, std::size_t e) { return e >= 63 || value <= (std::size_t{1} << e); }

}  // namespace

ParameterBoundsCheck check_parameter_bounds(const ParameterReport& r) {
    ParameterBoundsCheck c;
    if (r.teamsize) {
        c.teamsize_by_variables = le_pow2(*r.teamsize, r.num_variables);
        c.teamsize_by_size = le_pow2(*r.teamsize, r.formula_length);
    }
    c.size_by_depth = le_pow2(r.formula_size, 2 * r.formula_depth);
    return c;
}

}  // namespace teamlog
