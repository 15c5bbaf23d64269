#include <doctest.h>

#include <random>

#include "ltlguard/lasso.hpp"
#include "ltlguard/syntax.hpp"
#include "test_support.hpp"

using namespace ltlguard;

TEST_CASE("render uses minimal parentheses") {
    Formula a = Formula::Atom("a"), b = Formula::Atom("b"), c = Formula::Atom("c");
    CHECK(render(Formula::And(a, Formula::Or(b, c))) == "a & (b | c)");
    CHECK(render(Formula::Or(Formula::And(a, b), c)) == "a & b | c");
    CHECK(render(Formula::Globally(Formula::Implies(a, Formula::Eventually(b)))) ==
          "G(a -> F b)");
    CHECK(render(Formula::Until(a, Formula::And(b, c))) == "a U b & c");
    CHECK(render(Formula::And(Formula::Until(a, b), c)) == "(a U b) & c");
}

TEST_CASE("atom names are validated") {
    CHECK(is_valid_atom_name("straight_200m"));
    CHECK(is_valid_atom_name("_x"));
    CHECK(!is_valid_atom_name("2fast"));
    CHECK(!is_valid_atom_name(""));
    CHECK(!is_valid_atom_name("has space"));
    CHECK_THROWS_AS(Formula::Atom("not an atom"), std::invalid_argument);
}

TEST_CASE("round trip: parse(render(f)) is structurally identical") {
    std::mt19937 rng(7);
    std::vector<std::string> atoms = {"a", "b", "c", "straight_200m"};
    for (int i = 0; i < 1000; ++i) {
        Formula f = ltlguard::test::random_formula(rng, 5, atoms);
        Formula back = parse_or_throw(render(f));
        REQUIRE(back == f);
    }
}

TEST_CASE("atomic_propositions is deduplicated and lexicographic") {
    Formula base_rule = parse_or_throw(
        "G((straight_500m | right_turn) -> (right_turn -> straight_500m -> left_turn)) -> "
        "G(straight_1km & arrive_destination)");
    CHECK(atomic_propositions(base_rule) ==
          std::vector<std::string>{"arrive_destination", "left_turn", "right_turn",
                                   "straight_1km", "straight_500m"});
    CHECK(atomic_propositions(Formula::True()).empty());
    CHECK(atomic_propositions(parse_or_throw("a & a & !a")) == std::vector<std::string>{"a"});
}

TEST_CASE("rewrite_aps renames atoms and nothing else") {
    SUBCASE("six-step output aligns to the running-example formula") {
        Formula step6 = parse_or_throw(
            "F(go_straight_200m) & X(G(right_turn_Maple_St -> F(go_straight_500m & "
            "X(left_turn_Oak_St & F(go_straight_300m)))))");
        Formula aligned = rewrite_aps(step6, {{"go_straight_200m", "straight_200m"},
                                              {"go_straight_500m", "straight_500m"},
                                              {"go_straight_300m", "straight_300m"}});
        CHECK(aligned == parse_or_throw(
                             "F(straight_200m) & X(G(right_turn_Maple_St -> F(straight_500m & "
                             "X(left_turn_Oak_St & F(straight_300m)))))"));
    }
    SUBCASE("empty map is the identity") {
        Formula f = parse_or_throw("G(a -> F b)");
        CHECK(rewrite_aps(f, {}) == f);
    }
    SUBCASE("all occurrences are renamed") {
        CHECK(rewrite_aps(parse_or_throw("a U a"), {{"a", "b"}}) == parse_or_throw("b U b"));
    }
    SUBCASE("unknown keys are ignored") {
        Formula f = parse_or_throw("a & b");
        CHECK(rewrite_aps(f, {{"zz", "yy"}}) == f);
    }
}

TEST_CASE("to_nnf pushes negation onto atoms") {
    Formula a = Formula::Atom("a"), b = Formula::Atom("b");
    CHECK(to_nnf(Formula::Not(Formula::Globally(a))) == Formula::Eventually(Formula::Not(a)));
    CHECK(to_nnf(Formula::Not(Formula::Until(a, b))) ==
          Formula::Release(Formula::Not(a), Formula::Not(b)));
    CHECK(to_nnf(Formula::Implies(a, b)) == Formula::Or(Formula::Not(a), b));

    std::mt19937 rng(11);
    std::vector<std::string> atoms = {"a", "b"};
    for (int i = 0; i < 400; ++i) {
        Formula f = ltlguard::test::random_formula(rng, 4, atoms);
        Formula nnf = to_nnf(f);
        // negation only directly above atoms, no implications left
        std::vector<Formula> stack{nnf};
        while (!stack.empty()) {
            Formula g = stack.back();
            stack.pop_back();
            CHECK(g.op() != Op::Implies);
            CHECK(g.op() != Op::Iff);
            if (g.op() == Op::Not) {
                CHECK(g.left().op() == Op::Atom);
                continue;
            }
            if (g.op() == Op::Atom || g.op() == Op::True || g.op() == Op::False) continue;
            stack.push_back(g.left());
            if (is_binary(g.op())) stack.push_back(g.right());
        }
    }
}

TEST_CASE("NNF and core rewrites preserve satisfaction on sampled lassos") {
    std::mt19937 rng(13);
    std::vector<std::string> atoms = {"a", "b"};
    auto lassos = ltlguard::test::enumerate_lassos(atoms, 2, 2);
    for (int i = 0; i < 120; ++i) {
        Formula f = ltlguard::test::random_formula(rng, 4, atoms);
        Formula nnf = to_nnf(f);
        Formula core = to_core(f);
        for (std::size_t j = 0; j < lassos.size(); j += 7) {  // sample
            bool expected = eval_lasso(f, lassos[j]);
            CHECK(eval_lasso(nnf, lassos[j]) == expected);
            CHECK(eval_lasso(core, lassos[j]) == expected);
        }
    }
}

TEST_CASE("to_core only uses the core connectives") {
    std::mt19937 rng(17);
    std::vector<std::string> atoms = {"a", "b"};
    for (int i = 0; i < 200; ++i) {
        Formula core = to_core(ltlguard::test::random_formula(rng, 4, atoms));
        std::vector<Formula> stack{core};
        while (!stack.empty()) {
            Formula g = stack.back();
            stack.pop_back();
            switch (g.op()) {
                case Op::True:
                case Op::Atom:
                    break;
                case Op::Not:
                case Op::Next:
                    stack.push_back(g.left());
                    break;
                case Op::And:
                case Op::Until:
                    stack.push_back(g.left());
                    stack.push_back(g.right());
                    break;
                default:
                    FAIL("non-core connective survived to_core");
            }
        }
    }
}

TEST_CASE("release renders as its core equivalent and stays internal") {
    Formula r = Formula::Release(Formula::Atom("a"), Formula::Atom("b"));
    std::string text = render(r);
    CHECK(text == "!(!a U !b)");
    Formula back = parse_or_throw(text);
    // parses to the equivalent core form, not to a Release node
    CHECK(back.op() == Op::Not);
    auto lassos = ltlguard::test::enumerate_lassos({"a", "b"}, 2, 2);
    for (const auto& w : lassos) {
        CHECK(eval_lasso(r, w) == eval_lasso(back, w));
    }
}
