#include "doctest.h"

#include "teamlog/errors.hpp"
#include "teamlog/formula.hpp"
#include "teamlog/reductions.hpp"

using namespace teamlog;

namespace {

const char* kExample = "(x3 | !x1) & (=(x3; x4) | (x1 & x2))";

ParseError::Kind parse_error_kind(const char* text) {
    try {
        (void)parse_formula(text);
    } catch (const ParseError& e) {
        return e.kind();
    }
    FAIL("expected a parse error for " << text);
    return ParseError::Kind::Syntax;
}

}  // namespace

TEST_CASE("parse the two-split example formula") {
    auto f = parse_formula(kExample);
    CHECK(f.kind() == NodeKind::And);
    CHECK(f.logic() == LogicKind::PDL);
    CHECK(count_splits(f) == 2);
    CHECK(f.size() == 10);
    CHECK(f.depth() == 3);
    CHECK(variables(f).size() == 4);
    CHECK(f.right().left().kind() == NodeKind::Dep);
    CHECK(render_formula(f) == "((x3 | !x1) & (=(x3; x4) | (x1 & x2)))");
}

TEST_CASE("single literal") {
    auto f = parse_formula("x");
    CHECK(f.kind() == NodeKind::Lit);
    CHECK(f.positive());
    CHECK(f.var().name() == "x");
    CHECK(f.logic() == LogicKind::PL);
    CHECK(f.size() == 1);
    CHECK(f.depth() == 0);
}

TEST_CASE("negative literal counts two nodes") {
    auto f = parse_formula("!x");
    CHECK(f.size() == 2);
    CHECK(f.depth() == 1);
    auto subs = subformulas(f);
    REQUIRE(subs.size() == 2);
    CHECK(subs[1].kind() == NodeKind::Lit);
    CHECK(subs[1].positive());
}

TEST_CASE("parse errors") {
    CHECK(parse_error_kind("!(x & y)") == ParseError::Kind::NonAtomicNegation);
    CHECK(parse_error_kind("!T") == ParseError::Kind::NonAtomicNegation);
    CHECK(parse_error_kind("!inc(x; y)") == ParseError::Kind::NonAtomicNegation);
    CHECK(parse_error_kind("inc(x, y; z)") == ParseError::Kind::ArityMismatch);
    CHECK(parse_error_kind("=(x; y) & inc(x; y)") == ParseError::Kind::MixedAtomKinds);
    CHECK(parse_error_kind("x &") == ParseError::Kind::Syntax);
    CHECK(parse_error_kind("(x | y") == ParseError::Kind::Syntax);
    CHECK(parse_error_kind("x y") == ParseError::Kind::Syntax);
    CHECK(parse_error_kind("=(x; T)") == ParseError::Kind::Syntax);
    CHECK(parse_error_kind("") == ParseError::Kind::Syntax);
}

TEST_CASE("parse error positions") {
    try {
        (void)parse_formula("x &\n  & y");
        FAIL("no error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
        CHECK(e.column() == 3);
    }
}

TEST_CASE("connective chains fold to the left") {
    auto f = parse_formula("a & b & c");
    REQUIRE(f.kind() == NodeKind::And);
    CHECK(f.left().kind() == NodeKind::And);
    CHECK(f.right().var().name() == "c");
    auto g = parse_formula("a | b & c");
    CHECK(g.kind() == NodeKind::Or);
    CHECK(g.right().kind() == NodeKind::And);
}

TEST_CASE("atom rendering") {
    CHECK(render_formula(Formula::dep({}, {Var("y")})) == "=(; y)");
    CHECK(render_formula(Formula::indep({Var("x")}, {Var("y")}, {})) == "ind(x; y |)");
    CHECK(render_formula(parse_formula("ind(a, b; c | d, e)")) == "ind(a, b; c | d, e)");
    CHECK(render_formula(parse_formula("inc(a, a; b, c)")) == "inc(a, a; b, c)");
    CHECK(render_formula(parse_formula("T & B")) == "(T & B)");
}

TEST_CASE("empty tuples and duplicates") {
    auto f = parse_formula("=(; y)");
    CHECK(f.x().empty());
    CHECK(f.y().size() == 1);
    auto g = parse_formula("ind(x, x; y |)");
    CHECK(g.x().size() == 2);
    CHECK(g.z().empty());
}

TEST_CASE("constants are not identifiers") {
    CHECK_FALSE(is_identifier("T"));
    CHECK_FALSE(is_identifier("B"));
    CHECK(is_identifier("Tx"));
    CHECK(is_identifier("_a1"));
    CHECK_FALSE(is_identifier("1a"));
    CHECK_THROWS_AS(Var("B"), FormulaError);
}

TEST_CASE("construction invariants") {
    CHECK_THROWS_AS(Formula::inc({Var("x")}, {}), FormulaError);
    CHECK_THROWS_AS(Formula::conj(Formula::dep({}, {Var("x")}), Formula::inc({Var("x")}, {Var("y")})), FormulaError);
    CHECK(Formula::conj(Formula::lit(Var("x")), Formula::inc({Var("x")}, {Var("y")})).logic() == LogicKind::PINC);
}

TEST_CASE("subformula listing") {
    CHECK(subformulas(parse_formula(kExample)).size() == 10);
    CHECK(subformulas(parse_formula("x")).size() == 1);
    CHECK(subformulas(parse_formula("x & y")).size() == 3);
}

TEST_CASE("subformula count is one plus the children's counts") {
    for (std::uint64_t seed = 0; seed < 300; ++seed) {
        RandomFormulaConfig cfg;
        cfg.logic = static_cast<LogicKind>(seed % 4);
        cfg.max_vars = 4;
        cfg.max_nodes = 12;
        cfg.seed = seed;
        auto f = random_formula(cfg);
        std::size_t sum = 1;
        for (const auto& c : children(f)) sum += subformulas(c).size();
        CHECK(subformulas(f).size() == sum);
        CHECK(subformulas(f).size() == f.size());
    }
}

TEST_CASE("render and parse round trip") {
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        RandomFormulaConfig cfg;
        cfg.logic = static_cast<LogicKind>(seed % 4);
        cfg.max_vars = 5;
        cfg.max_nodes = 15;
        cfg.max_arity = 3;
        cfg.seed = seed;
        auto f = random_formula(cfg);
        auto text = render_formula(f);
        INFO(text);
        CHECK(parse_formula(text) == f);
    }
}

TEST_CASE("index_formula orders children after parents") {
    auto f = parse_formula(kExample);
    for (bool expand : {false, true}) {
        auto idx = index_formula(f, expand);
        CHECK(idx.size() == (expand ? 10 : 9));
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (int c : {idx.left[i], idx.right[i]}) {
                if (c >= 0) {
                    CHECK(static_cast<std::size_t>(c) > i);
                    CHECK(idx.parent[static_cast<std::size_t>(c)] == static_cast<int>(i));
                }
            }
        }
    }
}
