// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "oracles.hpp"

#include "teamlog/modelcheck.hpp"
#include "teamlog/reductions.hpp"
#include "teamlog/sat.hpp"
#include "teamlog/semantics.hpp"
#include "teamlog/structure.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace teamlog;

namespace {

using Clock = std::chrono::steady_clock;

constexpr SemanticsMode kModes[] = {SemanticsMode::Strict, SemanticsMode::Lax};
constexpr LogicKind kLogics[] = {LogicKind::PL, LogicKind::PDL, LogicKind::PINC, LogicKind::PIND};

struct Outcome {
    bool pass = true;
    std::string detail;
    std::string first_failure;

    void fail(const std::string& what) {
        if (pass) first_failure = what;
        pass = false;
    }
};

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Formula gen(LogicKind logic, std::size_t vars, std::size_t nodes, std::uint64_t seed, std::size_t splits = SIZE_MAX) {
    RandomFormulaConfig cfg;
    cfg.logic = logic;
    cfg.max_vars = vars;
    cfg.max_nodes = nodes;
    cfg.max_splits = splits;
    cfg.seed = seed;
    return random_formula(cfg);
}

std::string show(const Formula& f) { return render_formula(f); }

std::string show(const Formula& f, const Team& t) {
    std::string rows;
    for (const auto& r : t.rows()) {
        if (!rows.empty()) rows += ",";
        for (auto b : r) rows += static_cast<char>('0' + b);
    }
    return render_formula(f) + " on {" + rows + "}";
}

std::vector<Team> subteams(const Team& t) {
    std::vector<Team> out;
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << t.size()); ++m) out.push_back(t.subteam(m));
    return out;
}

Team team_union(const Team& a, const Team& b) {
    std::vector<Assignment> rows = a.rows();
    for (const auto& r : b.rows())
        if (!a.contains(r)) rows.push_back(r);
    return Team(a.domain(), rows);
}

// 1. bottom-up model checking agrees with recursive evaluation and the oracle.
Outcome mc_equivalence() {
    Outcome o;
    const auto start = Clock::now();
    std::size_t checks = 0;
    auto check = [&](const Formula& f, const Team& t) {
        for (auto m : kModes) {
            const bool a = mc_bottom_up(t, f, m);
            const bool b = evaluate(t, f, m);
            const bool c = oracle::holds(f, t, m == SemanticsMode::Strict);
            if (a != b || b != c) o.fail(show(f, t) + " " + std::string(to_string(m)));
            ++checks;
        }
    };
    for (auto logic : kLogics) {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto f = gen(logic, 4, 9, seed);
            for (std::uint64_t k = 0; k < 8; ++k) check(f, random_team(variables(f), 4, seed * 101 + k));
        }
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const auto f = gen(logic, 2, 9, 10'000 + seed);
            for (const auto& t : oracle::all_teams(variables(f))) check(f, t);
        }
    }
    const double secs = seconds_since(start);
    if (secs >= 60) o.fail("took " + std::to_string(secs) + " s");
    o.detail = std::to_string(checks) + " checks, " + std::to_string(secs) + " s";
    return o;
}

// 2. split-free labelling agrees with brute force; witnesses verify.
Outcome split_free() {
    Outcome o;
    const auto start = Clock::now();
    std::size_t sat = 0;
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        const auto f = gen(LogicKind::PINC, 4, 11, seed, 0);
        const auto r = sat_split_free(f);
        const auto b = sat_brute(f, SemanticsMode::Strict);
        if (r.satisfiable() != b.satisfiable()) o.fail(show(f));
        if (r.satisfiable()) {
            ++sat;
            if (!r.witness || r.witness->empty() || !evaluate(*r.witness, f, SemanticsMode::Strict, 64))
                o.fail("witness for " + show(f));
        }
    }
    const double secs = seconds_since(start);
    if (secs >= 60) o.fail("took " + std::to_string(secs) + " s");
    o.detail = "500 formulas, " + std::to_string(sat) + " satisfiable, " + std::to_string(secs) + " s";
    return o;
}

// 3. fixpoint search agrees with brute force; witnesses verify; repairs at most double.
Outcome fixpoint() {
    Outcome o;
    std::size_t repairs = 0, sat = 0, runs = 0;
    for (std::uint64_t seed = 0; seed < 250; ++seed) {
        const auto f = gen(LogicKind::PINC, 3, 13, seed, 2);
        for (auto m : kModes) {
            FixpointOptions opts;
            opts.on_repair = [&](std::size_t before, std::size_t after) {
                ++repairs;
                if (after > 2 * before) o.fail("repair " + std::to_string(before) + " -> " + std::to_string(after));
            };
            const auto r = sat_fixpoint(f, m, opts);
            const auto b = sat_brute(f, m);
            ++runs;
            if (r.status == SatStatus::ResourceExhausted || r.satisfiable() != b.satisfiable())
                o.fail(show(f) + " " + std::string(to_string(m)));
            if (r.satisfiable()) {
                ++sat;
                if (!r.witness || r.witness->empty() || !oracle::holds(f, *r.witness, m == SemanticsMode::Strict))
                    o.fail("witness for " + show(f));
            }
        }
    }
    o.detail = std::to_string(runs) + " runs, " + std::to_string(sat) + " satisfiable, " + std::to_string(repairs) +
               " repairs";
    return o;
}

// 4. singleton search agrees with brute force on PDL and PIND.
Outcome singleton() {
    Outcome o;
    std::size_t sat = 0;
    for (auto logic : {LogicKind::PDL, LogicKind::PIND}) {
        for (std::uint64_t seed = 0; seed < 200; ++seed) {
            const auto f = gen(logic, 3, 11, seed);
            const auto r = sat_singleton(f);
            sat += r.satisfiable();
            for (auto m : kModes)
                if (r.satisfiable() != sat_brute(f, m).satisfiable()) o.fail(show(f));
            if (r.satisfiable() && (!r.witness || r.witness->size() != 1 || !evaluate(*r.witness, f, SemanticsMode::Strict)))
                o.fail("witness for " + show(f));
        }
    }
    o.detail = "400 formulas, " + std::to_string(sat) + " satisfiable";
    return o;
}

SetSplittingInstance instance(std::size_t n, std::vector<std::vector<std::size_t>> sets) {
    SetSplittingInstance inst;
    for (std::size_t i = 0; i < n; ++i) inst.elements.push_back("a" + std::to_string(i + 1));
    inst.sets = std::move(sets);
    return inst;
}

std::vector<std::size_t> members(std::uint32_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < 32; ++i)
        if (mask >> i & 1U) out.push_back(i);
    return out;
}

// Every family of at most 3 distinct non-empty subsets of an n-element set.
std::vector<SetSplittingInstance> all_families(std::size_t n) {
    std::vector<SetSplittingInstance> out;
    const std::uint32_t top = 1U << n;
    out.push_back(instance(n, {}));
    for (std::uint32_t a = 1; a < top; ++a) {
        out.push_back(instance(n, {members(a)}));
        for (std::uint32_t b = a + 1; b < top; ++b) {
            out.push_back(instance(n, {members(a), members(b)}));
            for (std::uint32_t c = b + 1; c < top; ++c) out.push_back(instance(n, {members(a), members(b), members(c)}));
        }
    }
    return out;
}

// 5. reduction: splittable iff the reduced team satisfies the formula strictly.
Outcome reduction() {
    Outcome o;
    std::vector<SetSplittingInstance> cases;
    for (std::size_t n = 1; n <= 4; ++n) {
        auto fam = all_families(n);
        cases.insert(cases.end(), fam.begin(), fam.end());
    }
    const std::size_t exhaustive = cases.size();
    std::mt19937_64 rng(2024);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + rng() % 4;
        const std::size_t k = rng() % 4;
        std::vector<std::vector<std::size_t>> sets;
        for (std::size_t j = 0; j < k; ++j) sets.push_back(members(1 + static_cast<std::uint32_t>(rng() % ((1U << n) - 1))));
        cases.push_back(instance(n, sets));
    }
    std::size_t splittable = 0;
    for (const auto& inst : cases) {
        const auto red = setsplit_to_pinc_mc(inst);
        const bool s = setsplit_brute(inst).has_value();
        splittable += s;
        if (s != mc_bottom_up(red.team, red.formula, SemanticsMode::Strict))
            o.fail(setsplit_to_json(inst).dump());
        if (count_splits(red.formula) != 1) o.fail("splits in " + show(red.formula));
        for (const auto& node : subformulas(red.formula))
            if (node.kind() == NodeKind::Inc && node.x().size() != 1) o.fail("arity in " + show(red.formula));
    }
    o.detail = std::to_string(exhaustive) + " exhaustive + 200 random instances, " + std::to_string(splittable) +
               " splittable";
    return o;
}

// 6. treewidth of the two-split example and of reduced formulas.
Outcome treewidth() {
    Outcome o;
    const auto g = build_gaifman(parse_formula("(x3 | !x1) & (=(x3; x4) | (x1 & x2))"));
    const auto ex = treewidth_exact(g);
    if (ex.width != 2) o.fail("example width " + std::to_string(ex.width));
    std::size_t decomps = 0;
    auto validate = [&](const GaifmanGraph& graph, const TreewidthResult& r, const std::string& what) {
        ++decomps;
        const auto c = validate_decomposition(graph, r.decomposition);
        if (!c.valid || c.width != r.width) o.fail(what + ": " + c.violation);
    };
    validate(g, ex, "example exact");
    validate(g, treewidth_upper(g, TreewidthMethod::MinFill), "example min_fill");
    validate(g, treewidth_upper(g, TreewidthMethod::MinDegree), "example min_degree");

    std::size_t worst = 0, largest = 0, graphs = 0;
    for (std::size_t n = 1; n <= 3; ++n) {
        for (const auto& inst : all_families(n)) {
            const auto red = setsplit_to_pinc_mc(inst);
            const auto rg = build_gaifman(red.formula);
            const auto r = treewidth_exact(rg, 32);
            ++graphs;
            worst = std::max(worst, r.width);
            largest = std::max(largest, rg.num_vertices());
            if (r.width > 4) o.fail("width " + std::to_string(r.width) + " for " + setsplit_to_json(inst).dump());
            validate(rg, r, "reduced exact");
            validate(rg, treewidth_upper(rg), "reduced min_fill");
        }
    }
    o.detail = "example 2; reduced max " + std::to_string(worst) + " over " + std::to_string(graphs) +
               " graphs (up to " + std::to_string(largest) + " vertices); " + std::to_string(decomps) +
               " decompositions valid";
    return o;
}

// 7. parameter inequalities.
Outcome parameter_bounds() {
    Outcome o;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto f = gen(kLogics[seed % 4], 1 + seed % 5, 3 + seed % 20, seed);
        const auto vars = variables(f);
        const auto t = random_team(vars, std::size_t{1} << vars.size(), seed);
        const auto r = parameters(f, &t);
        if (!check_parameter_bounds(r).ok()) o.fail(show(f, t));
    }
    o.detail = "1000 instances";
    return o;
}

// 8. the team-variable bipartite part bounds treewidth from below.
Outcome bipartite_bound() {
    Outcome o;
    std::size_t done = 0, tight = 0;
    for (std::uint64_t seed = 0; done < 50 && seed < 100'000; ++seed) {
        const auto f = gen(kLogics[seed % 4], 2 + seed % 3, 1 + seed % 5, seed);
        const auto vars = variables(f);
        const auto t = random_team(vars, 1 + seed % 5, seed);
        const auto g = build_gaifman(f, &t);
        if (g.num_vertices() > 12) continue;
        ++done;
        const auto w = treewidth_exact(g).width;
        const auto bound = std::min(t.size(), vars.size());
        tight += w == bound;
        if (w < bound) o.fail(show(f, t));
    }
    if (done < 50) o.fail("only " + std::to_string(done) + " instances");
    o.detail = std::to_string(done) + " instances, " + std::to_string(tight) + " tight";
    return o;
}

// Formulas for the law checks: exhaustive teams at 2 variables, random at 3-4.
struct LawCase {
    Formula f;
    std::vector<Team> teams;
};

std::vector<LawCase> law_cases(LogicKind logic, std::size_t splits, std::uint64_t salt) {
    std::vector<LawCase> out;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto f = gen(logic, 2, 9, salt + seed, splits);
        out.push_back({f, oracle::all_teams(variables(f))});
    }
    for (std::uint64_t seed = 0; seed < 150; ++seed) {
        const auto f = gen(logic, 3 + seed % 2, 11, salt + 1000 + seed, splits);
        std::vector<Team> teams;
        for (std::uint64_t k = 0; k < 4; ++k) teams.push_back(random_team(variables(f), 5, salt + seed * 13 + k));
        out.push_back({f, teams});
    }
    return out;
}

// 9. semantic laws.
Outcome laws() {
    Outcome o;
    std::size_t cases = 0;
    std::ostringstream counts;
    auto law = [&](const char* name, LogicKind logic, std::size_t splits,
                   const std::function<bool(const Formula&, const Team&)>& holds) {
        std::size_t n = 0;
        for (const auto& c : law_cases(logic, splits, std::hash<std::string>{}(name) % 100'000)) {
            for (const auto& t : c.teams) {
                ++n;
                if (!holds(c.f, t)) o.fail(std::string(name) + ": " + show(c.f, t));
            }
        }
        if (n < 200) o.fail(std::string(name) + ": only " + std::to_string(n) + " cases");
        cases += n;
        counts << (counts.tellp() > 0 ? ", " : "") << name << " " << n;
    };

    law("flatness", LogicKind::PL, SIZE_MAX, [](const Formula& f, const Team& t) {
        for (auto m : kModes) {
            bool all = true;
            for (std::size_t i = 0; i < t.size(); ++i) all = all && evaluate(t.subteam(std::uint64_t{1} << i), f, m);
            if (evaluate(t, f, m) != all) return false;
        }
        return true;
    });
    law("downward closure", LogicKind::PDL, SIZE_MAX, [](const Formula& f, const Team& t) {
        for (auto m : kModes) {
            if (!evaluate(t, f, m)) continue;
            for (const auto& s : subteams(t))
                if (!evaluate(s, f, m)) return false;
        }
        return true;
    });
    law("union closure", LogicKind::PINC, SIZE_MAX, [](const Formula& f, const Team& t) {
        // Every pair of satisfying subteams has a satisfying union.
        std::vector<Team> good;
        for (const auto& s : subteams(t))
            if (evaluate(s, f, SemanticsMode::Lax)) good.push_back(s);
        for (std::size_t i = 0; i < good.size(); ++i)
            for (std::size_t j = i + 1; j < good.size(); ++j)
                if (!evaluate(team_union(good[i], good[j]), f, SemanticsMode::Lax)) return false;
        return true;
    });
    law("2-coherence", LogicKind::PDL, 0, [](const Formula& f, const Team& t) {
        bool pairs = true;
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = i; j < t.size(); ++j)
                pairs = pairs && evaluate(t.subteam((std::uint64_t{1} << i) | (std::uint64_t{1} << j)), f,
                                          SemanticsMode::Strict);
        return evaluate(t, f, SemanticsMode::Strict) == pairs;
    });
    law("strict implies lax", LogicKind::PINC, SIZE_MAX, [](const Formula& f, const Team& t) {
        return !evaluate(t, f, SemanticsMode::Strict) || evaluate(t, f, SemanticsMode::Lax);
    });
    law("strict equals lax", LogicKind::PDL, SIZE_MAX, [](const Formula& f, const Team& t) {
        return evaluate(t, f, SemanticsMode::Strict) == evaluate(t, f, SemanticsMode::Lax);
    });
    for (auto logic : kLogics) {
        const std::string name = "empty team " + std::string(to_string(logic));
        law(name.c_str(), logic, SIZE_MAX, [](const Formula& f, const Team& t) {
            const Team empty(t.domain());
            return evaluate(empty, f, SemanticsMode::Strict) && evaluate(empty, f, SemanticsMode::Lax);
        });
    }
    o.detail = std::to_string(cases) + " cases (" + counts.str() + ")";
    return o;
}

// A formula of exactly n nodes over x1..x4, built from random pieces.
Formula sized_formula(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    Formula f = gen(LogicKind::PINC, 4, 9, rng());
    std::size_t joins = 0;
    // Each join adds the piece plus one connective node; never leave exactly one node over.
    while (n - f.size() > 3) {
        const std::size_t room = n - f.size() - 1;
        Formula piece = gen(LogicKind::PINC, 4, std::min<std::size_t>(9, room), rng());
        if (room - piece.size() == 1) continue;
        f = (++joins % 3 == 0) ? Formula::disj(f, piece) : Formula::conj(f, piece);
    }
    if (n - f.size() == 2) f = Formula::conj(f, Formula::top());
    if (n - f.size() == 3) f = Formula::conj(f, Formula::lit(Var("x1"), false));
    return f;
}

// 10. bottom-up model checking is linear in the formula for a fixed team.
Outcome scaling() {
    Outcome o;
    const auto start = Clock::now();
    const std::size_t sizes[] = {250, 500, 1000, 2000};
    std::vector<double> times;
    std::ostringstream detail;
    for (auto n : sizes) {
        const auto f = sized_formula(n, n);
        if (f.size() != n) o.fail("built " + std::to_string(f.size()) + " nodes for " + std::to_string(n));
        const auto vars = variables(f);
        std::vector<Assignment> rows;
        for (std::uint8_t i = 0; i < 3; ++i) {
            Assignment a(vars.size(), 0);
            for (std::size_t v = 0; v < vars.size(); ++v) a[v] = static_cast<std::uint8_t>((i + v) % 3 == 0);
            rows.push_back(a);
        }
        const Team t(vars, rows);
        // Median of seven batches of twenty runs.
        std::vector<double> batches;
        for (int b = 0; b < 7; ++b) {
            const auto s = Clock::now();
            for (int r = 0; r < 20; ++r) {
                volatile bool ok = mc_bottom_up(t, f, SemanticsMode::Strict);
                (void)ok;
            }
            batches.push_back(seconds_since(s) / 20);
        }
        std::sort(batches.begin(), batches.end());
        times.push_back(batches[3]);
        detail << (times.size() > 1 ? ", " : "") << n << ": " << batches[3] * 1e3 << " ms";
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double ratio = times[i] / times[i - 1];
        detail << (i == 1 ? "; ratios " : " ") << ratio;
        if (ratio > 4.0) o.fail("ratio " + std::to_string(ratio) + " at " + std::to_string(sizes[i]));
    }
    const double secs = seconds_since(start);
    if (secs >= 30) o.fail("took " + std::to_string(secs) + " s");
    o.detail = detail.str() + "; total " + std::to_string(secs) + " s";
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, Outcome (*)()> criteria[] = {
        {"model checking agrees with evaluation", mc_equivalence},
        {"split-free satisfiability agrees with brute force", split_free},
        {"fixpoint satisfiability agrees with brute force", fixpoint},
        {"singleton satisfiability agrees with brute force", singleton},
        {"set-splitting reduction", reduction},
        {"treewidth facts", treewidth},
        {"parameter inequalities", parameter_bounds},
        {"bipartite treewidth lower bound", bipartite_bound},
        {"semantic laws", laws},
        {"scaling in formula size", scaling},
    };
    int failed = 0;
    int index = 0;
    for (const auto& [name, fn] : criteria) {
        ++index;
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::printf("%s %d %s: %s%s%s\n", o.pass ? "PASS" : "FAIL", index, name, o.detail.c_str(),
                    o.pass ? "" : "; first failure: ", o.pass ? "" : o.first_failure.c_str());
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed == 0 ? 0 : 1;
}
