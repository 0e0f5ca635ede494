#include "doctest.h"

#include "oracles.hpp"

#include "teamlog/errors.hpp"
#include "teamlog/modelcheck.hpp"
#include "teamlog/reductions.hpp"

using namespace teamlog;

namespace {

constexpr SemanticsMode kModes[] = {SemanticsMode::Strict, SemanticsMode::Lax};

}  // namespace

TEST_CASE("bottom-up check of the two-split example") {
    auto t = parse_team("x1 x2 x3 x4\n0011\n1110\n");
    auto f = parse_formula("(x3 | !x1) & (=(x3; x4) | (x1 & x2))");
    CHECK(mc_bottom_up(t, f, SemanticsMode::Strict));
    CHECK(mc(t, f, SemanticsMode::Strict, McAlgorithm::Recursive));
    CHECK(mc(t, f, SemanticsMode::Strict, McAlgorithm::BottomUp));
}

TEST_CASE("empty team") {
    auto t = parse_team("x y\n");
    for (auto m : kModes) {
        CHECK(mc_bottom_up(t, parse_formula("B"), m));
        CHECK(mc_bottom_up(t, parse_formula("inc(x; y) | (x & !x)"), m));
    }
}

TEST_CASE("unsplittable set-splitting instance") {
    SetSplittingInstance inst{{"a1"}, {{0}}};
    auto red = setsplit_to_pinc_mc(inst);
    CHECK_FALSE(mc_bottom_up(red.team, red.formula, SemanticsMode::Strict));
}

TEST_CASE("table entries match the oracle at every node") {
    auto t = parse_team("x y z\n000\n011\n101\n110\n");
    auto f = parse_formula("(inc(x; y) | (z & inc(y; x))) & (inc(z; x) | !y)");
    for (auto m : kModes) {
        auto table = build_sat_sets(t, f, m);
        REQUIRE(table.sets.size() == table.tree.size());
        for (std::size_t i = 0; i < table.tree.size(); ++i) {
            for (std::uint64_t mask = 0; mask < 16; ++mask) {
                CHECK(table.sets[i].contains(mask) ==
                      oracle::holds(table.tree.nodes[i], t.subteam(mask), m == SemanticsMode::Strict));
            }
        }
    }
}

TEST_CASE("conjunction sets are contained in each conjunct's set") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        RandomFormulaConfig cfg;
        cfg.logic = static_cast<LogicKind>(seed % 4);
        cfg.max_vars = 3;
        cfg.max_nodes = 11;
        cfg.seed = seed;
        auto f = random_formula(cfg);
        auto t = random_team(variables(f), 5, seed);
        auto table = build_sat_sets(t, f, SemanticsMode::Lax);
        for (std::size_t i = 0; i < table.tree.size(); ++i) {
            if (table.tree.nodes[i].kind() != NodeKind::And) continue;
            CHECK(table.sets[i].subset_of(table.sets[static_cast<std::size_t>(table.tree.left[i])]));
            CHECK(table.sets[i].subset_of(table.sets[static_cast<std::size_t>(table.tree.right[i])]));
        }
    }
}

TEST_CASE("bottom-up agrees with recursive evaluation") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        RandomFormulaConfig cfg;
        cfg.logic = static_cast<LogicKind>(seed % 4);
        cfg.max_vars = 4;
        cfg.max_nodes = 9;
        cfg.seed = seed;
        auto f = random_formula(cfg);
        auto t = random_team(variables(f), 4, seed + 7);
        for (auto m : kModes) {
            INFO(render_formula(f));
            CHECK(mc_bottom_up(t, f, m) == evaluate(t, f, m));
        }
    }
}

TEST_CASE("team size cap") {
    std::vector<Var> dom{Var("a"), Var("b"), Var("c"), Var("d"), Var("e")};
    auto t = Team(dom, oracle::all_assignments(5));
    CHECK_THROWS_AS((void)mc_bottom_up(t, parse_formula("a | b"), SemanticsMode::Lax), ResourceLimit);
    CHECK_THROWS_AS((void)mc_bottom_up(t, parse_formula("a"), SemanticsMode::Lax, 64), ResourceLimit);
}
