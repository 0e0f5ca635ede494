#include "teamlog/sat.hpp"

#include "teamlog/errors.hpp"
#include "teamlog/modelcheck.hpp"

#include <algorithm>
#include <bit>
#include <iterator>
#include <numeric>
#include <string>
#include <unordered_set>

namespace teamlog {

std::string_view to_string(SatStatus status) noexcept {
    switch (status) {
        case SatStatus::Satisfiable:
            return "satisfiable";
        case SatStatus::Unsatisfiable:
            return "unsatisfiable";
        case SatStatus::ResourceExhausted:
            return "resource_exhausted";
    }
    return "unknown";
}

namespace {

// Rows over a fixed variable list, packed as integers. Variable i is bit
// (nv - 1 - i), so integer order is the lexicographic row order.
using Code = std::uint32_t;
using RowSet = std::vector<Code>;  // sorted, unique

struct CodeSpace {
    std::vector<Var> vars;

    [[nodiscard]] unsigned nv() const noexcept { return static_cast<unsigned>(vars.size()); }
    [[nodiscard]] unsigned shift(std::size_t i) const noexcept { return nv() - 1 - static_cast<unsigned>(i); }
    [[nodiscard]] std::uint8_t bit(Code c, std::size_t i) const noexcept { return c >> shift(i) & 1U; }

    [[nodiscard]] std::size_t index(const Var& v) const {
        auto it = std::lower_bound(vars.begin(), vars.end(), v);
        if (it == vars.end() || *it != v) throw UnknownVariable(v.name());
        return static_cast<std::size_t>(it - vars.begin());
    }

    [[nodiscard]] std::vector<std::size_t> indices(const VarTuple& t) const {
        std::vector<std::size_t> out;
        for (const auto& v : t) out.push_back(index(v));
        return out;
    }

    // Tuple value as an integer; position k is bit k.
    [[nodiscard]] std::uint64_t project(Code c, const std::vector<std::size_t>& idx) const noexcept {
        std::uint64_t out = 0;
        for (std::size_t k = 0; k < idx.size(); ++k) out |= std::uint64_t{bit(c, idx[k])} << k;
        return out;
    }

    [[nodiscard]] Assignment decode(Code c) const {
        Assignment row(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) row[i] = bit(c, i);
        return row;
    }

    [[nodiscard]] Team team(const RowSet& rows) const {
        std::vector<Assignment> out;
        out.reserve(rows.size());
        for (auto c : rows) out.push_back(decode(c));
        return Team(vars, std::move(out));
    }
};

CodeSpace space_of(const Formula& f) {
    auto vars = variables(f);
    return CodeSpace{std::vector<Var>(vars.begin(), vars.end())};
}

struct IncAtom {
    std::vector<std::size_t> x, y;
};

bool inc_holds(const CodeSpace& sp, const IncAtom& a, const RowSet& rows) {
    std::unordered_set<std::uint64_t> ys;
    for (auto c : rows) ys.insert(sp.project(c, a.y));
    for (auto c : rows) {
        if (!ys.count(sp.project(c, a.x))) return false;
    }
    return true;
}

// One repair round; see repair_inclusion.
std::optional<RowSet> repair_round(const CodeSpace& sp, const IncAtom& a, const RowSet& rows) {
    if (inc_holds(sp, a, rows)) return rows;
    RowSet out = rows;
    for (auto s : rows) {
        Code t = s;
        Code fixed = 0;
        for (std::size_t k = 0; k < a.y.size(); ++k) {
            const Code m = Code{1} << sp.shift(a.y[k]);
            const Code want = sp.bit(s, a.x[k]) ? m : 0;
            if ((fixed & m) && (t & m) != want) return std::nullopt;
            fixed |= m;
            t = (t & ~m) | want;
        }
        out.push_back(t);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

RowSet set_union(const RowSet& a, const RowSet& b) {
    RowSet out;
    out.reserve(a.size() + b.size());
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

RowSet set_difference(const RowSet& a, const RowSet& b) {
    RowSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

bool intersects(const RowSet& a, const RowSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

bool contains(const RowSet& a, Code c) { return std::binary_search(a.begin(), a.end(), c); }

// Classical truth value; dependency atoms read as true (singleton teams).
bool classical(const Formula& f, const CodeSpace& sp, Code c) {
    switch (f.kind()) {
        case NodeKind::Top:
        case NodeKind::Dep:
        case NodeKind::Indep:
            return true;
        case NodeKind::Bot:
            return false;
        case NodeKind::Lit:
            return sp.bit(c, sp.index(f.var())) == (f.positive() ? 1 : 0);
        case NodeKind::And:
            return classical(f.left(), sp, c) && classical(f.right(), sp, c);
        case NodeKind::Or:
            return classical(f.left(), sp, c) || classical(f.right(), sp, c);
        case NodeKind::Inc:
            break;
    }
    throw InapplicableEngine("inclusion atoms are not classical");
}

// Literals forced on every row of a node's team: a pair of bit masks, or
// `dead` when no row can be placed there at all.
struct Requirement {
    Code ones = 0;
    Code zeros = 0;
    bool dead = false;

    [[nodiscard]] bool admits(Code c) const noexcept {
        return !dead && (c & ones) == ones && (c & zeros) == 0;
    }

    void merge(const Requirement& o) noexcept {
        ones |= o.ones;
        zeros |= o.zeros;
        dead = dead || o.dead || (ones & zeros) != 0;
    }
};

class FixpointSearch {
public:
    FixpointSearch(const Formula& f, SemanticsMode mode, const FixpointOptions& options)
        : tree_(index_formula(f, false)), space_(space_of(f)), mode_(mode), options_(options) {
        const std::size_t n = tree_.size();
        inc_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (tree_.nodes[i].kind() == NodeKind::Inc) {
                inc_[i] = IncAtom{space_.indices(tree_.nodes[i].x()), space_.indices(tree_.nodes[i].y())};
            }
        }
        compute_requirements();
    }

    SatResult run() {
        SatResult result;
        try {
            std::vector<std::size_t> incs;
            for (std::size_t i = 0; i < tree_.size(); ++i) {
                if (tree_.nodes[i].kind() == NodeKind::Inc) incs.push_back(i);
            }
            std::vector<std::vector<RowSet>> options;
            for (auto i : incs) options.push_back(initial_options(i));

            State f0(tree_.size());
            bool found = guess(incs, options, 0, f0, false);
            if (!found) {
                // Only literal and verum leaves hold rows: one row suffices.
                for (std::size_t i = 0; i < tree_.size() && !found; ++i) {
                    const auto kind = tree_.nodes[i].kind();
                    if (kind != NodeKind::Lit && kind != NodeKind::Top) continue;
                    for (Code c = 0; c < universe() && !found; ++c) {
                        if (!req_[i].admits(c)) continue;
                        State start(tree_.size());
                        start[i] = {c};
                        found = explore(start, start, 1);
                    }
                }
            }
            if (found) {
                result.status = SatStatus::Satisfiable;
                result.witness = space_.team(witness_);
            }
        } catch (const Exhausted&) {
            result.status = SatStatus::ResourceExhausted;
        }
        result.steps = steps_;
        return result;
    }

private:
    using State = std::vector<RowSet>;
    struct Exhausted {};

    [[nodiscard]] Code universe() const noexcept { return Code{1} << space_.nv(); }

    [[nodiscard]] std::size_t lchild(std::size_t i) const { return static_cast<std::size_t>(tree_.left[i]); }
    [[nodiscard]] std::size_t rchild(std::size_t i) const { return static_cast<std::size_t>(tree_.right[i]); }

    void compute_requirements() {
        const std::size_t n = tree_.size();
        // Literals reachable through conjunctions only.
        std::vector<Requirement> own(n);
        for (std::size_t i = n; i-- > 0;) {
            const auto& node = tree_.nodes[i];
            if (node.kind() == NodeKind::Lit) {
                const Code m = Code{1} << space_.shift(space_.index(node.var()));
                (node.positive() ? own[i].ones : own[i].zeros) = m;
            } else if (node.kind() == NodeKind::Bot) {
                own[i].dead = true;
            } else if (node.kind() == NodeKind::And) {
                own[i] = own[lchild(i)];
                own[i].merge(own[rchild(i)]);
            }
        }
        req_.assign(n, Requirement{});
        for (std::size_t i = 0; i < n; ++i) {
            req_[i].merge(own[i]);
            if (!tree_.nodes[i].is_leaf()) {
                req_[lchild(i)] = req_[i];
                req_[rchild(i)] = req_[i];
            }
        }
    }

    // Initial subteams of an inclusion atom: admissible rows with pairwise
    // distinct y-values, ordered by size and then lexicographically.
    std::vector<RowSet> initial_options(std::size_t node) const {
        std::vector<std::pair<std::uint64_t, RowSet>> groups;
        for (Code c = 0; c < universe(); ++c) {
            if (!req_[node].admits(c)) continue;
            auto y = space_.project(c, inc_[node].y);
            auto it = std::find_if(groups.begin(), groups.end(), [&](const auto& g) { return g.first == y; });
            if (it == groups.end()) {
                groups.push_back({y, {c}});
            } else {
                it->second.push_back(c);
            }
        }
        std::vector<RowSet> out{RowSet{}};
        for (const auto& g : groups) {
            const std::size_t before = out.size();
            for (std::size_t k = 0; k < before; ++k) {
                for (auto c : g.second) {
                    RowSet next = out[k];
                    next.push_back(c);
                    out.push_back(std::move(next));
                }
            }
            if (out.size() > options_.budget) throw Exhausted{};
        }
        for (auto& rs : out) std::sort(rs.begin(), rs.end());
        std::sort(out.begin(), out.end(), [](const RowSet& a, const RowSet& b) {
            return a.size() != b.size() ? a.size() < b.size() : a < b;
        });
        return out;
    }

    bool guess(const std::vector<std::size_t>& incs, const std::vector<std::vector<RowSet>>& options, std::size_t k,
               State& f0, bool nonempty) {
        if (k == incs.size()) return nonempty && explore(f0, f0, 1);
        for (const auto& opt : options[k]) {
            f0[incs[k]] = opt;
            if (guess(incs, options, k + 1, f0, nonempty || !opt.empty())) return true;
        }
        f0[incs[k]].clear();
        return false;
    }

    // Bottom-up round. Returns false when the branch is rejected.
    bool odd_round(State& g) {
        for (std::size_t i = tree_.size(); i-- > 0;) {
            const auto& node = tree_.nodes[i];
            switch (node.kind()) {
                case NodeKind::Top:
                    break;
                case NodeKind::Bot:
                    if (!g[i].empty()) return false;
                    break;
                case NodeKind::Lit:
                    for (auto c : g[i]) {
                        if (!req_[i].admits(c)) return false;
                    }
                    break;
                case NodeKind::Inc: {
                    const std::size_t before = g[i].size();
                    auto repaired = repair_round(space_, inc_[i], g[i]);
                    if (!repaired) return false;
                    if (options_.on_repair) options_.on_repair(before, repaired->size());
                    g[i] = std::move(*repaired);
                    break;
                }
                case NodeKind::And:
                case NodeKind::Or: {
                    const auto& l = g[lchild(i)];
                    const auto& r = g[rchild(i)];
                    if (node.kind() == NodeKind::Or && mode_ == SemanticsMode::Strict && intersects(l, r)) return false;
                    g[i] = set_union(l, r);
                    break;
                }
                default:
                    throw InapplicableEngine("unexpected atom in inclusion formula");
            }
        }
        return true;
    }

    // A state is stable when no round would change it: every inclusion atom
    // holds and both conjuncts carry their parent's team.
    bool stable(const State& g) const {
        for (std::size_t i = 0; i < tree_.size(); ++i) {
            const auto kind = tree_.nodes[i].kind();
            if (kind == NodeKind::Inc && !inc_holds(space_, inc_[i], g[i])) return false;
            if (kind == NodeKind::And && (g[lchild(i)] != g[i] || g[rchild(i)] != g[i])) return false;
        }
        return true;
    }

    static std::string key(const State& s) {
        std::string out;
        for (const auto& rows : s) {
            for (auto c : rows) out.append(reinterpret_cast<const char*>(&c), sizeof c);
            out.append(4, '\xff');
        }
        return out;
    }

    FixpointState snapshot(const State& s, std::size_t round) const {
        FixpointState out;
        out.round = round;
        for (const auto& rows : s) out.teams.push_back(space_.team(rows));
        return out;
    }

    // Runs the odd round on f, then branches over the even-round choices.
    bool explore(const State& f, const State& prev_odd, std::size_t round) {
        if (++steps_ > options_.budget) throw Exhausted{};
        State g = f;
        if (!odd_round(g)) return false;
        if (options_.on_round) options_.on_round(snapshot(prev_odd, round >= 2 ? round - 2 : 0), snapshot(g, round));
        if (!seen_.insert(key(g)).second) return false;
        if (stable(g)) {
            if (g.front().empty()) return false;
            witness_ = g.front();
            return true;
        }
        State h = g;
        return distribute(g, h, 0, round);
    }

    // Even round over nodes in pre-order; h[i] is final when node i is reached.
    bool distribute(const State& g, State& h, std::size_t pos, std::size_t round) {
        for (; pos < tree_.size(); ++pos) {
            const auto kind = tree_.nodes[pos].kind();
            if (kind == NodeKind::And) {
                h[lchild(pos)] = h[pos];
                h[rchild(pos)] = h[pos];
            } else if (kind == NodeKind::Or) {
                RowSet fresh = set_difference(h[pos], g[pos]);
                std::vector<std::size_t> choice(fresh.size(), 0);
                return route(g, h, pos, fresh, choice, 0, round);
            }
        }
        return explore(h, g, round + 2);
    }

    // Chooses a side (left, right, or both in lax mode) for each fresh row.
    bool route(const State& g, State& h, std::size_t pos, const RowSet& fresh, std::vector<std::size_t>& choice,
               std::size_t k, std::size_t round) {
        const std::size_t l = lchild(pos);
        const std::size_t r = rchild(pos);
        if (k == fresh.size()) {
            RowSet to_l, to_r;
            for (std::size_t j = 0; j < fresh.size(); ++j) {
                if (choice[j] != 1) to_l.push_back(fresh[j]);
                if (choice[j] != 0) to_r.push_back(fresh[j]);
            }
            const RowSet saved_l = h[l];
            const RowSet saved_r = h[r];
            h[l] = set_union(g[l], to_l);
            h[r] = set_union(g[r], to_r);
            bool ok = distribute(g, h, pos + 1, round);
            h[l] = saved_l;
            h[r] = saved_r;
            return ok;
        }
        const Code c = fresh[k];
        const bool strict = mode_ == SemanticsMode::Strict;
        const bool can_l = req_[l].admits(c) && !(strict && contains(g[r], c));
        const bool can_r = req_[r].admits(c) && !(strict && contains(g[l], c));
        // 0: left, 1: right, 2: both
        for (std::size_t opt = 0; opt < (strict ? 2U : 3U); ++opt) {
            if ((opt != 1 && !can_l) || (opt != 0 && !can_r)) continue;
            choice[k] = opt;
            if (route(g, h, pos, fresh, choice, k + 1, round)) return true;
        }
        return false;
    }

    IndexedFormula tree_;
    CodeSpace space_;
    SemanticsMode mode_;
    const FixpointOptions& options_;
    std::vector<IncAtom> inc_;
    std::vector<Requirement> req_;
    std::unordered_set<std::string> seen_;
    std::size_t steps_ = 0;
    RowSet witness_;
};

// Union-find over variable indices with an optional 0/1 label per class.
class LabelClasses {
public:
    explicit LabelClasses(std::size_t n) : parent_(n), label_(n, -1) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t v) {
        while (parent_[v] != v) v = parent_[v] = parent_[parent_[v]];
        return v;
    }

    [[nodiscard]] int label(std::size_t v) { return label_[find(v)]; }

    // Returns true if anything changed.
    bool set_label(std::size_t v, int value) {
        auto r = find(v);
        if (label_[r] == value) return false;
        if (label_[r] >= 0) conflict_ = true;
        label_[r] = value;
        return true;
    }

    bool unite(std::size_t a, std::size_t b) {
        auto ra = find(a);
        auto rb = find(b);
        if (ra == rb) return false;
        if (label_[ra] >= 0 && label_[rb] >= 0 && label_[ra] != label_[rb]) conflict_ = true;
        if (label_[ra] < 0) label_[ra] = label_[rb];
        parent_[rb] = ra;
        return true;
    }

    [[nodiscard]] bool conflict() const noexcept { return conflict_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<int> label_;
    bool conflict_ = false;
};

struct Labelling {
    CodeSpace space;
    LabelClasses classes;
    bool bottom = false;
};

Labelling compute_labels(const Formula& f) {
    if (f.logic() == LogicKind::PDL || f.logic() == LogicKind::PIND) {
        throw InapplicableEngine("the split-free procedure handles inclusion atoms only");
    }
    if (count_splits(f) != 0) throw InapplicableEngine("formula contains a split");
    Labelling out{space_of(f), LabelClasses(variables(f).size())};
    std::vector<IncAtom> atoms;
    for (const auto& node : index_formula(f, false).nodes) {
        if (node.kind() == NodeKind::Lit) {
            out.classes.set_label(out.space.index(node.var()), node.positive() ? 1 : 0);
        } else if (node.kind() == NodeKind::Bot) {
            out.bottom = true;
        } else if (node.kind() == NodeKind::Inc) {
            atoms.push_back(IncAtom{out.space.indices(node.x()), out.space.indices(node.y())});
        }
    }
    // Values of x in inc(x; y) must occur as values of y: labels on y pass to
    // x, and positions sharing a y-class force equal x-values.
    for (bool changed = true; changed && !out.classes.conflict();) {
        changed = false;
        for (const auto& a : atoms) {
            for (std::size_t i = 0; i < a.y.size(); ++i) {
                const int l = out.classes.label(a.y[i]);
                if (l >= 0) changed |= out.classes.set_label(a.x[i], l);
                for (std::size_t j = i + 1; j < a.y.size(); ++j) {
                    if (out.classes.find(a.y[i]) == out.classes.find(a.y[j])) {
                        changed |= out.classes.unite(a.x[i], a.x[j]);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace

SatResult sat_brute(const Formula& f, SemanticsMode mode, std::size_t max_vars) {
    SatResult result;
    const auto sp = space_of(f);
    if (sp.nv() > std::min<std::size_t>(max_vars, 4)) {
        result.status = SatStatus::ResourceExhausted;
        return result;
    }
    RowSet all(std::size_t{1} << sp.nv());
    std::iota(all.begin(), all.end(), Code{0});
    const Team universe = sp.team(all);
    // The root set of the full universe is exactly the set of satisfying teams.
    const auto table = build_sat_sets(universe, f, mode, universe.size());
    std::optional<std::uint64_t> best;
    for (auto m : table.root().members()) {
        result.steps++;
        if (m == 0) continue;
        if (!best || std::popcount(m) < std::popcount(*best) ||
            (std::popcount(m) == std::popcount(*best) && m < *best)) {
            best = m;
        }
    }
    if (best) {
        result.status = SatStatus::Satisfiable;
        result.witness = universe.subteam(*best);
    }
    return result;
}

SatResult sat_singleton(const Formula& f, std::size_t max_vars) {
    if (f.logic() == LogicKind::PINC) throw InapplicableEngine("singleton search does not decide inclusion logic");
    SatResult result;
    const auto sp = space_of(f);
    if (sp.nv() > max_vars || sp.nv() > 31) {
        result.status = SatStatus::ResourceExhausted;
        return result;
    }
    const std::uint64_t count = std::uint64_t{1} << sp.nv();
    for (std::uint64_t c = 0; c < count; ++c) {
        result.steps++;
        if (classical(f, sp, static_cast<Code>(c))) {
            result.status = SatStatus::Satisfiable;
            result.witness = sp.team({static_cast<Code>(c)});
            return result;
        }
    }
    return result;
}

std::optional<Team> repair_inclusion(const Team& s, const Formula& inc_atom) {
    if (inc_atom.kind() != NodeKind::Inc) throw FormulaError("repair_inclusion needs an inclusion atom");
    if (s.domain().size() > 31) throw ResourceLimit("repair supports at most 31 variables");
    CodeSpace sp{s.domain()};
    // Code bits follow the team's domain order, which need not be sorted.
    auto idx = [&](const VarTuple& t) {
        std::vector<std::size_t> out;
        for (const auto& v : t) out.push_back(s.require_index(v));
        return out;
    };
    IncAtom atom{idx(inc_atom.x()), idx(inc_atom.y())};
    RowSet rows;
    for (const auto& row : s.rows()) {
        Code c = 0;
        for (std::size_t i = 0; i < row.size(); ++i) c |= Code{row[i]} << sp.shift(i);
        rows.push_back(c);
    }
    std::sort(rows.begin(), rows.end());
    auto repaired = repair_round(sp, atom, rows);
    if (!repaired) return std::nullopt;
    return sp.team(*repaired);
}

SatResult sat_fixpoint(const Formula& f, SemanticsMode mode, const FixpointOptions& options) {
    if (f.logic() == LogicKind::PDL || f.logic() == LogicKind::PIND) {
        throw InapplicableEngine("the fixpoint search handles inclusion atoms only");
    }
    if (variables(f).size() > std::min<std::size_t>(options.max_vars, 24)) {
        SatResult r;
        r.status = SatStatus::ResourceExhausted;
        return r;
    }
    FixpointSearch search(f, mode, options);
    return search.run();
}

LabelState label_split_free(const Formula& f) {
    auto lab = compute_labels(f);
    LabelState out;
    out.conflict = lab.classes.conflict() || lab.bottom;
    std::map<std::size_t, std::vector<Var>> groups;
    for (std::size_t i = 0; i < lab.space.vars.size(); ++i) {
        const int l = lab.classes.label(i);
        if (l >= 0) {
            out.labels.emplace(lab.space.vars[i], static_cast<std::uint8_t>(l));
        } else {
            groups[lab.classes.find(i)].push_back(lab.space.vars[i]);
        }
    }
    for (auto& [root, vars] : groups) {
        if (vars.size() > 1) out.equal.push_back(std::move(vars));
    }
    return out;
}

SatResult sat_split_free(const Formula& f, std::size_t max_witness_free_vars) {
    auto lab = compute_labels(f);
    SatResult result;
    result.steps = 1;
    if (lab.bottom || lab.classes.conflict()) return result;
    result.status = SatStatus::Satisfiable;

    const std::size_t n = lab.space.vars.size();
    std::vector<std::size_t> free_roots;
    for (std::size_t i = 0; i < n; ++i) {
        if (lab.classes.label(i) < 0 && lab.classes.find(i) == i) free_roots.push_back(i);
    }
    if (free_roots.size() > max_witness_free_vars) return result;
    // One row per assignment to the unlabelled classes.
    std::vector<Assignment> rows;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << free_roots.size()); ++bits) {
        Assignment row(n);
        for (std::size_t i = 0; i < n; ++i) {
            const int l = lab.classes.label(i);
            if (l >= 0) {
                row[i] = static_cast<std::uint8_t>(l);
            } else {
                auto k = std::find(free_roots.begin(), free_roots.end(), lab.classes.find(i)) - free_roots.begin();
                row[i] = static_cast<std::uint8_t>(bits >> k & 1U);
            }
        }
        rows.push_back(std::move(row));
    }
    result.witness = Team(lab.space.vars, std::move(rows));
    return result;
}

}  // namespace teamlog
