#include "teamlog/semantics.hpp"

#include "teamlog/errors.hpp"

#include <array>
#include <bit>
#include <bitset>
#include <map>
#include <optional>
#include <set>

namespace teamlog {

std::string_view to_string(SemanticsMode mode) noexcept {
    return mode == SemanticsMode::Strict ? "strict" : "lax";
}

namespace {

std::string project(const Assignment& row, const std::vector<std::size_t>& idx) {
    std::string out(idx.size(), '0');
    for (std::size_t i = 0; i < idx.size(); ++i) out[i] = static_cast<char>('0' + row[idx[i]]);
    return out;
}

std::vector<std::string> project_all(const Team& team, const VarTuple& vars) {
    auto idx = team.indices(vars);
    std::vector<std::string> out;
    out.reserve(team.size());
    for (const auto& row : team.rows()) out.push_back(project(row, idx));
    return out;
}

std::uint64_t full_mask(std::size_t n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

void require_maskable(const Team& team) {
    if (team.size() > 64) {
        throw ResourceLimit("team has " + std::to_string(team.size()) + " rows; subteam masks support at most 64");
    }
}

}  // namespace

namespace {

// Assigns dense ids to strings in order of first appearance.
class Dictionary {
public:
    std::uint8_t id(const std::string& key) {
        auto [it, inserted] = ids_.try_emplace(key, static_cast<std::uint8_t>(ids_.size()));
        return it->second;
    }

private:
    std::map<std::string, std::uint8_t> ids_;
};

std::vector<std::uint8_t> dense(const std::vector<std::string>& keys, Dictionary& dict) {
    std::vector<std::uint8_t> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(dict.id(k));
    return out;
}

}  // namespace

AtomChecker::AtomChecker(const Team& team, const Formula& leaf) : kind_(leaf.kind()) {
    require_maskable(team);
    switch (kind_) {
        case NodeKind::Top:
        case NodeKind::Bot:
            break;
        case NodeKind::Lit: {
            auto i = team.require_index(leaf.var());
            std::uint8_t want = leaf.positive() ? 1 : 0;
            for (std::size_t r = 0; r < team.size(); ++r) {
                if (team.rows()[r][i] == want) allowed_ |= std::uint64_t{1} << r;
            }
            break;
        }
        case NodeKind::Dep: {
            Dictionary dx, dy;
            x_ = dense(project_all(team, leaf.x()), dx);
            y_ = dense(project_all(team, leaf.y()), dy);
            break;
        }
        case NodeKind::Inc: {
            if (leaf.x().size() != leaf.y().size()) throw FormulaError("inclusion atom tuples differ in length");
            Dictionary shared;
            x_ = dense(project_all(team, leaf.x()), shared);
            y_ = dense(project_all(team, leaf.y()), shared);
            break;
        }
        case NodeKind::Indep: {
            Dictionary dy, dz, dxz;
            auto xs = project_all(team, leaf.x());
            auto zs = project_all(team, leaf.z());
            y_ = dense(project_all(team, leaf.y()), dy);
            z_ = dense(zs, dz);
            std::vector<std::string> joint;
            for (std::size_t r = 0; r < team.size(); ++r) joint.push_back(xs[r] + '|' + zs[r]);
            xz_ = dense(joint, dxz);
            break;
        }
        case NodeKind::And:
        case NodeKind::Or:
            throw FormulaError("AtomChecker needs a leaf formula");
    }
}

bool AtomChecker::holds(std::uint64_t mask) const {
    switch (kind_) {
        case NodeKind::Top:
            return true;
        case NodeKind::Bot:
            return mask == 0;
        case NodeKind::Lit:
            return (mask & ~allowed_) == 0;
        case NodeKind::Dep: {
            std::array<int, 64> seen_y;
            seen_y.fill(-1);
            for (auto m = mask; m; m &= m - 1) {
                auto r = static_cast<std::size_t>(std::countr_zero(m));
                int& y = seen_y[x_[r]];
                if (y < 0) {
                    y = y_[r];
                } else if (y != y_[r]) {
                    return false;
                }
            }
            return true;
        }
        case NodeKind::Inc: {
            std::bitset<128> ys;
            for (auto m = mask; m; m &= m - 1) ys.set(y_[static_cast<std::size_t>(std::countr_zero(m))]);
            for (auto m = mask; m; m &= m - 1) {
                if (!ys.test(x_[static_cast<std::size_t>(std::countr_zero(m))])) return false;
            }
            return true;
        }
        case NodeKind::Indep: {
            // present[xz] holds the y-values seen together with that (x, z) value.
            std::array<std::uint64_t, 64> present{};
            for (auto m = mask; m; m &= m - 1) {
                auto r = static_cast<std::size_t>(std::countr_zero(m));
                present[xz_[r]] |= std::uint64_t{1} << y_[r];
            }
            for (auto m = mask; m; m &= m - 1) {
                auto t = static_cast<std::size_t>(std::countr_zero(m));
                for (auto k = mask; k; k &= k - 1) {
                    auto u = static_cast<std::size_t>(std::countr_zero(k));
                    if (z_[t] == z_[u] && !(present[xz_[t]] >> y_[u] & 1U)) return false;
                }
            }
            return true;
        }
        default:
            return false;
    }
}

bool eval_literal(const Team& team, const Var& v, bool positive) {
    auto i = team.require_index(v);
    std::uint8_t want = positive ? 1 : 0;
    for (const auto& row : team.rows()) {
        if (row[i] != want) return false;
    }
    return true;
}

bool eval_dep(const Team& team, const VarTuple& x, const VarTuple& y) {
    auto xs = project_all(team, x);
    auto ys = project_all(team, y);
    for (std::size_t a = 0; a < team.size(); ++a) {
        for (std::size_t b = a + 1; b < team.size(); ++b) {
            if (xs[a] == xs[b] && ys[a] != ys[b]) return false;
        }
    }
    return true;
}

bool eval_inc(const Team& team, const VarTuple& x, const VarTuple& y) {
    if (x.size() != y.size()) throw FormulaError("inclusion atom tuples differ in length");
    auto xs = project_all(team, x);
    auto ys = project_all(team, y);
    std::set<std::string> values(ys.begin(), ys.end());
    for (const auto& v : xs) {
        if (!values.count(v)) return false;
    }
    return true;
}

bool eval_indep(const Team& team, const VarTuple& x, const VarTuple& y, const VarTuple& z) {
    auto xs = project_all(team, x);
    auto ys = project_all(team, y);
    auto zs = project_all(team, z);
    std::set<std::string> combined;
    for (std::size_t w = 0; w < team.size(); ++w) combined.insert(xs[w] + '|' + zs[w] + '|' + ys[w]);
    for (std::size_t t = 0; t < team.size(); ++t) {
        for (std::size_t u = 0; u < team.size(); ++u) {
            if (zs[t] != zs[u]) continue;
            if (!combined.count(xs[t] + '|' + zs[t] + '|' + ys[u])) return false;
        }
    }
    return true;
}

namespace {

class Evaluator {
public:
    Evaluator(const Team& team, const Formula& f, SemanticsMode mode)
        : tree_(index_formula(f, false)), mode_(mode) {
        checkers_.resize(tree_.size());
        for (std::size_t i = 0; i < tree_.size(); ++i) {
            if (tree_.nodes[i].is_leaf()) checkers_[i].emplace(team, tree_.nodes[i]);
        }
    }

    bool eval(int node, std::uint64_t mask) const {
        const auto& f = tree_.nodes[static_cast<std::size_t>(node)];
        int l = tree_.left[static_cast<std::size_t>(node)];
        int r = tree_.right[static_cast<std::size_t>(node)];
        switch (f.kind()) {
            case NodeKind::And:
                return eval(l, mask) && eval(r, mask);
            case NodeKind::Or:
                return mode_ == SemanticsMode::Strict ? split_strict(l, r, mask) : split_lax(l, r, mask);
            default:
                return checkers_[static_cast<std::size_t>(node)]->holds(mask);
        }
    }

private:
    // Enumerates every submask a of mask, including 0 and mask itself.
    template <typename Fn>
    static bool any_submask(std::uint64_t mask, Fn&& fn) {
        std::uint64_t a = mask;
        for (;;) {
            if (fn(a)) return true;
            if (a == 0) return false;
            a = (a - 1) & mask;
        }
    }

    bool split_strict(int l, int r, std::uint64_t mask) const {
        return any_submask(mask, [&](std::uint64_t a) { return eval(l, a) && eval(r, mask ^ a); });
    }

    bool split_lax(int l, int r, std::uint64_t mask) const {
        return any_submask(mask, [&](std::uint64_t a) {
            if (!eval(l, a)) return false;
            // Right part: the rows a leaves uncovered, plus any overlap with a.
            return any_submask(a, [&](std::uint64_t overlap) { return eval(r, (mask ^ a) | overlap); });
        });
    }

    IndexedFormula tree_;
    SemanticsMode mode_;
    std::vector<std::optional<AtomChecker>> checkers_;
};

}  // namespace

namespace {

bool eval_leaf(const Team& team, const Formula& f) {
    switch (f.kind()) {
        case NodeKind::Top:
            return true;
        case NodeKind::Bot:
            return team.empty();
        case NodeKind::Lit:
            return eval_literal(team, f.var(), f.positive());
        case NodeKind::Dep:
            return eval_dep(team, f.x(), f.y());
        case NodeKind::Inc:
            return eval_inc(team, f.x(), f.y());
        case NodeKind::Indep:
            return eval_indep(team, f.x(), f.y(), f.z());
        default:
            throw FormulaError("eval_leaf needs a leaf formula");
    }
}

}  // namespace

bool evaluate(const Team& team, const Formula& f, SemanticsMode mode, std::size_t max_team_size) {
    if (count_splits(f) == 0) {
        // Without splits every leaf sees the whole team; nothing to enumerate.
        for (const auto& node : index_formula(f, false).nodes) {
            if (node.is_leaf() && !eval_leaf(team, node)) return false;
        }
        return true;
    }
    if (team.size() > max_team_size) {
        throw ResourceLimit("team of " + std::to_string(team.size()) + " rows exceeds the enumeration cap of " +
                            std::to_string(max_team_size));
    }
    require_maskable(team);
    Evaluator ev(team, f, mode);
    return ev.eval(0, full_mask(team.size()));
}

}  // namespace teamlog
