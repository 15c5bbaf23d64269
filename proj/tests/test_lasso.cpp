#include <doctest.h>

#include <random>

#include "ltlguard/lasso.hpp"
#include "ltlguard/syntax.hpp"
#include "test_support.hpp"

using namespace ltlguard;

namespace {

Symbol sym(std::initializer_list<const char*> aps) {
    Symbol s;
    for (const char* ap : aps) s.true_set.insert(ap);
    return s;
}

}  // namespace

TEST_CASE("eval_lasso matches the defining clauses on hand examples") {
    SUBCASE("G a on a-loop") {
        LassoWord w{{}, {sym({"a"})}};
        CHECK(eval_lasso(parse_or_throw("G a"), w));
    }
    SUBCASE("F a vs G a") {
        LassoWord w{{sym({})}, {sym({"a"})}};
        CHECK(eval_lasso(parse_or_throw("F a"), w));
        CHECK(!eval_lasso(parse_or_throw("G a"), w));
    }
    SUBCASE("until clause") {
        LassoWord w{{sym({"a"}), sym({"a"}), sym({"b"})}, {sym({})}};
        CHECK(eval_lasso(parse_or_throw("a U b"), w));
        CHECK(!eval_lasso(parse_or_throw("b U a"), w));
    }
    SUBCASE("next shifts by one") {
        LassoWord w{{sym({}), sym({"a"})}, {sym({})}};
        CHECK(eval_lasso(parse_or_throw("X a"), w));
        CHECK(!eval_lasso(parse_or_throw("a"), w));
        CHECK(!eval_lasso(parse_or_throw("X X a"), w));
    }
    SUBCASE("infinitely often vs eventually always") {
        LassoWord alternating{{}, {sym({"a"}), sym({})}};
        CHECK(eval_lasso(parse_or_throw("G F a"), alternating));
        CHECK(!eval_lasso(parse_or_throw("F G a"), alternating));
    }
    SUBCASE("until needs its promise inside the loop too") {
        LassoWord w{{}, {sym({"a"})}};
        CHECK(!eval_lasso(parse_or_throw("a U b"), w));
        CHECK(eval_lasso(parse_or_throw("a U b | G a"), w));
    }
}

TEST_CASE("duality: eval(!f) == !eval(f)") {
    std::mt19937 rng(23);
    std::vector<std::string> atoms = {"a", "b"};
    for (int i = 0; i < 300; ++i) {
        Formula f = ltlguard::test::random_formula(rng, 4, atoms);
        LassoWord w = ltlguard::test::random_lasso(rng, atoms, 3, 3);
        CHECK(eval_lasso(Formula::Not(f), w) == !eval_lasso(f, w));
    }
}

TEST_CASE("loop rotation: unrolling one loop iteration never changes satisfaction") {
    std::mt19937 rng(29);
    std::vector<std::string> atoms = {"a", "b"};
    for (int i = 0; i < 300; ++i) {
        Formula f = ltlguard::test::random_formula(rng, 4, atoms);
        LassoWord w = ltlguard::test::random_lasso(rng, atoms, 2, 3);
        CHECK(eval_lasso(f, w) == eval_lasso(f, w.unrolled_once()));
    }
}

TEST_CASE("injective renaming commutes with evaluation") {
    std::mt19937 rng(31);
    std::vector<std::string> atoms = {"a", "b"};
    std::map<std::string, std::string> renaming = {{"a", "x"}, {"b", "y"}};
    for (int i = 0; i < 300; ++i) {
        Formula f = ltlguard::test::random_formula(rng, 4, atoms);
        LassoWord w = ltlguard::test::random_lasso(rng, atoms, 2, 2);
        CHECK(eval_lasso(rewrite_aps(f, renaming), rename_word(w, renaming)) ==
              eval_lasso(f, w));
    }
}

TEST_CASE("symbols carry only the true-set; absent propositions are false") {
    LassoWord w{{}, {sym({"b"})}};
    CHECK(!eval_lasso(parse_or_throw("a"), w));
    CHECK(eval_lasso(parse_or_throw("!a & b"), w));
}

TEST_CASE("eval_lasso rejects an empty loop") {
    LassoWord w{{sym({"a"})}, {}};
    CHECK_THROWS_AS(eval_lasso(parse_or_throw("a"), w), std::invalid_argument);
}
