#include "teamlog/reductions.hpp"

#include "teamlog/errors.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

namespace teamlog {

void SetSplittingInstance::validate() const {
    for (const auto& set : sets) {
        for (auto e : set) {
            if (e >= elements.size()) throw Error("set refers to element index " + std::to_string(e) + " out of range");
        }
    }
}

SetSplittingInstance parse_setsplit_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("elements") || !doc.contains("sets")) {
        throw ParseError(ParseError::Kind::Syntax, 1, 1, "set-splitting input needs \"elements\" and \"sets\"");
    }
    SetSplittingInstance inst;
    std::map<std::string, std::size_t> index;
    for (const auto& e : doc.at("elements")) {
        if (!e.is_string()) throw ParseError(ParseError::Kind::Syntax, 1, 1, "element names must be strings");
        auto name = e.get<std::string>();
        if (!index.emplace(name, inst.elements.size()).second) {
            throw ParseError(ParseError::Kind::Syntax, 1, 1, "duplicate element '" + name + "'");
        }
        inst.elements.push_back(name);
    }
    for (const auto& s : doc.at("sets")) {
        if (!s.is_array()) throw ParseError(ParseError::Kind::Syntax, 1, 1, "each set must be an array");
        std::set<std::size_t> members;
        for (const auto& e : s) {
            if (!e.is_string()) throw ParseError(ParseError::Kind::Syntax, 1, 1, "element names must be strings");
            auto it = index.find(e.get<std::string>());
            if (it == index.end()) throw Error("set mentions unknown element '" + e.get<std::string>() + "'");
            members.insert(it->second);
        }
        inst.sets.emplace_back(members.begin(), members.end());
    }
    return inst;
}

nlohmann::json setsplit_to_json(const SetSplittingInstance& inst) {
    nlohmann::json sets = nlohmann::json::array();
    for (const auto& s : inst.sets) {
        nlohmann::json names = nlohmann::json::array();
        for (auto e : s) names.push_back(inst.elements.at(e));
        sets.push_back(names);
    }
    return {{"elements", inst.elements}, {"sets", sets}};
}

std::optional<Split> setsplit_brute(const SetSplittingInstance& inst) {
    inst.validate();
    const std::size_t k = inst.elements.size();
    if (k > 20) throw ResourceLimit("set splitting search supports at most 20 elements");
    std::vector<std::uint32_t> set_masks;
    for (const auto& s : inst.sets) {
        std::uint32_t m = 0;
        for (auto e : s) m |= std::uint32_t{1} << e;
        set_masks.push_back(m);
    }
    const std::uint32_t all = (std::uint32_t{1} << k) - 1;
    for (std::uint32_t first = 0; first <= all; ++first) {
        const bool ok = std::all_of(set_masks.begin(), set_masks.end(), [&](std::uint32_t m) {
            return (m & first) != 0 && (m & ~first & all) != 0;
        });
        if (!ok) continue;
        Split out;
        for (std::size_t e = 0; e < k; ++e) (first >> e & 1U ? out.first : out.second).push_back(e);
        return out;
    }
    return std::nullopt;
}

ReducedInstance setsplit_to_pinc_mc(const SetSplittingInstance& inst) {
    inst.validate();
    const std::size_t k = inst.elements.size();
    const std::size_t n = inst.sets.size();
    std::vector<Var> domain;
    for (std::size_t i = 1; i <= k; ++i) domain.emplace_back("p" + std::to_string(i));
    for (std::size_t j = 1; j <= n; ++j) domain.emplace_back("q" + std::to_string(j));
    const Var p_top("p_top"), p_c("p_c"), p_d("p_d");
    domain.push_back(p_top);
    domain.push_back(p_c);
    domain.push_back(p_d);
    const std::size_t top_i = k + n, c_i = k + n + 1, d_i = k + n + 2;

    std::vector<Assignment> rows;
    for (std::size_t i = 0; i < k; ++i) {
        Assignment s(domain.size(), 0);
        s[i] = 1;
        s[top_i] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            if (std::find(inst.sets[j].begin(), inst.sets[j].end(), i) != inst.sets[j].end()) s[k + j] = 1;
        }
        rows.push_back(std::move(s));
    }
    Assignment sc(domain.size(), 0), sd(domain.size(), 0);
    sc[top_i] = sc[c_i] = 1;
    sd[top_i] = sd[d_i] = 1;
    rows.push_back(std::move(sc));
    rows.push_back(std::move(sd));

    auto side = [&](const Var& excluded) {
        Formula f = Formula::lit(excluded, false);
        for (std::size_t j = 0; j < n; ++j) f = Formula::conj(f, Formula::inc({p_top}, {domain[k + j]}));
        return f;
    };
    return {Team(domain, std::move(rows)), Formula::disj(side(p_c), side(p_d))};
}

Formula dep_to_indep(const Formula& f) {
    switch (f.kind()) {
        case NodeKind::Dep:
            return Formula::indep(f.y(), f.y(), f.x());
        case NodeKind::Inc:
        case NodeKind::Indep:
            throw FormulaError("dep_to_indep expects a PL or PDL formula");
        case NodeKind::And:
            return Formula::conj(dep_to_indep(f.left()), dep_to_indep(f.right()));
        case NodeKind::Or:
            return Formula::disj(dep_to_indep(f.left()), dep_to_indep(f.right()));
        default:
            return f;
    }
}

namespace {

class FormulaGenerator {
public:
    explicit FormulaGenerator(const RandomFormulaConfig& cfg)
        : cfg_(cfg), rng_(cfg.seed), splits_left_(cfg.max_splits) {
        for (std::size_t i = 1; i <= std::max<std::size_t>(cfg.max_vars, 1); ++i) vars_.emplace_back("x" + std::to_string(i));
    }

    Formula generate() {
        // Mostly use the full budget; small formulas still come up often.
        const std::size_t cap = std::max<std::size_t>(cfg_.max_nodes, 1);
        const std::size_t budget = chance(0.7) ? cap : uniform(1, cap);
        Formula f = node(budget);
        if (cfg_.logic != LogicKind::PL && !has_atom_) {
            // Swap one leaf for an atom so the requested kind is present.
            auto leaves = count_leaves(f);
            f = replace_leaf(f, uniform(0, leaves - 1));
        }
        return f;
    }

private:
    std::size_t uniform(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

    bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

    const Var& var() { return vars_[uniform(0, vars_.size() - 1)]; }

    VarTuple tuple(std::size_t len) {
        VarTuple t;
        for (std::size_t i = 0; i < len; ++i) t.push_back(var());
        return t;
    }

    Formula node(std::size_t budget) {
        if (budget >= 3 && chance(0.9)) {
            const bool split = splits_left_ > 0 && chance(0.5);
            const std::size_t lsize = uniform(1, budget - 2);
            if (split) --splits_left_;
            Formula l = node(lsize);
            Formula r = node(uniform(1, budget - 1 - lsize));
            return split ? Formula::disj(std::move(l), std::move(r)) : Formula::conj(std::move(l), std::move(r));
        }
        return leaf(budget);
    }

    Formula leaf(std::size_t budget) {
        if (cfg_.logic != LogicKind::PL && chance(0.3)) return atom();
        if (chance(0.1)) return chance(0.6) ? Formula::top() : Formula::bot();
        return Formula::lit(var(), budget < 2 || chance(0.5));
    }

    Formula atom() {
        has_atom_ = true;
        const std::size_t arity = std::max<std::size_t>(cfg_.max_arity, 1);
        switch (cfg_.logic) {
            case LogicKind::PDL:
                return Formula::dep(tuple(uniform(0, cfg_.max_arity)), tuple(uniform(1, arity)));
            case LogicKind::PINC: {
                const std::size_t len = uniform(1, arity);
                return Formula::inc(tuple(len), tuple(len));
            }
            case LogicKind::PIND: {
                // Draw from a small pool so the count of distinct variables
                // stays within max_arity.
                std::vector<Var> pool;
                const std::size_t want = uniform(1, std::min(arity, vars_.size()));
                while (pool.size() < want) {
                    const Var& v = var();
                    if (std::find(pool.begin(), pool.end(), v) == pool.end()) pool.push_back(v);
                }
                auto from_pool = [&](std::size_t len) {
                    VarTuple t;
                    for (std::size_t i = 0; i < len; ++i) t.push_back(pool[uniform(0, pool.size() - 1)]);
                    return t;
                };
                VarTuple x = from_pool(uniform(1, 2));
                VarTuple y = from_pool(uniform(1, 2));
                return Formula::indep(std::move(x), std::move(y), from_pool(uniform(0, 1)));
            }
            case LogicKind::PL:
                break;
        }
        return Formula::top();
    }

    static std::size_t count_leaves(const Formula& f) {
        if (f.kind() == NodeKind::And || f.kind() == NodeKind::Or) return count_leaves(f.left()) + count_leaves(f.right());
        return 1;
    }

    Formula replace_leaf(const Formula& f, std::size_t target) {
        std::size_t seen = 0;
        return replace(f, target, seen);
    }

    Formula replace(const Formula& f, std::size_t target, std::size_t& seen) {
        if (f.kind() == NodeKind::And || f.kind() == NodeKind::Or) {
            Formula l = replace(f.left(), target, seen);
            Formula r = replace(f.right(), target, seen);
            return f.kind() == NodeKind::And ? Formula::conj(std::move(l), std::move(r))
                                             : Formula::disj(std::move(l), std::move(r));
        }
        return seen++ == target ? atom() : f;
    }

    const RandomFormulaConfig& cfg_;
    std::mt19937_64 rng_;
    std::size_t splits_left_;
    std::vector<Var> vars_;
    bool has_atom_ = false;
};

}  // namespace

Formula random_formula(const RandomFormulaConfig& cfg) {
    FormulaGenerator gen(cfg);
    return gen.generate();
}

Team random_team(const std::vector<Var>& domain, std::size_t max_rows, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t possible = domain.size() >= 63 ? SIZE_MAX : std::size_t{1} << domain.size();
    const std::size_t want = std::uniform_int_distribution<std::size_t>(0, std::min(max_rows, possible))(rng);
    std::set<Assignment> rows;
    std::bernoulli_distribution coin(0.5);
    while (rows.size() < want) {
        Assignment row(domain.size());
        for (auto& b : row) b = coin(rng) ? 1 : 0;
        rows.insert(std::move(row));
    }
    return Team(domain, rows);
}

}  // namespace teamlog
