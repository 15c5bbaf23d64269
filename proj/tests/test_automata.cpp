#include <doctest.h>

#include <random>

#include "ltlguard/automaton.hpp"
#include "ltlguard/syntax.hpp"
#include "ltlguard/translate.hpp"
#include "test_support.hpp"

using namespace ltlguard;

namespace {

Symbol sym(std::initializer_list<const char*> aps) {
    Symbol s;
    for (const char* ap : aps) s.true_set.insert(ap);
    return s;
}

// The twelve-pattern corpus exercised against the ground-truth evaluator.
const std::vector<std::string>& pattern_corpus() {
    static const std::vector<std::string> corpus = {
        "a",
        "!a",
        "a & b",
        "a | b",
        "a -> b",
        "a <-> b",
        "X a",
        "F a",
        "G a",
        "a U b",
        "G(a -> F b)",
        "F(a & X(b U a))",
    };
    return corpus;
}

}  // namespace

TEST_CASE("translate: G a accepts exactly the always-a lassos") {
    BuchiAutomaton a = translate(parse_or_throw("G a"));
    CHECK(accepts_lasso(a, {{}, {sym({"a"})}}));
    CHECK(!accepts_lasso(a, {{}, {sym({})}}));
    CHECK(!accepts_lasso(a, {{sym({"a"})}, {sym({})}}));
}

TEST_CASE("translate: F a") {
    BuchiAutomaton a = translate(parse_or_throw("F a"));
    CHECK(accepts_lasso(a, {{sym({})}, {sym({"a"})}}));
    CHECK(accepts_lasso(a, {{sym({})}, {sym({}), sym({"a"})}}));
    CHECK(!accepts_lasso(a, {{}, {sym({})}}));
}

TEST_CASE("translate: alphabet comes from the formula") {
    BuchiAutomaton a = translate(parse_or_throw("G(a -> F b)"));
    CHECK(a.alphabet == std::vector<std::string>{"a", "b"});
    CHECK(!a.initial.empty());
}

TEST_CASE("translate is deterministic") {
    for (const auto& text : pattern_corpus()) {
        BuchiAutomaton first = translate(parse_or_throw(text));
        BuchiAutomaton second = translate(parse_or_throw(text));
        CHECK(first.state_count == second.state_count);
        CHECK(first.initial == second.initial);
        CHECK(first.accepting == second.accepting);
        CHECK(first.transitions == second.transitions);
    }
}

TEST_CASE("translation agrees with the evaluator on all bounded lassos") {
    for (const auto& text : pattern_corpus()) {
        Formula f = parse_or_throw(text);
        BuchiAutomaton a = translate(f);
        auto aps = atomic_propositions(f);
        if (aps.size() > 2) aps.resize(2);
        for (const auto& w : ltlguard::test::enumerate_lassos(aps, 2, 2)) {
            CAPTURE(text);
            REQUIRE(accepts_lasso(a, w) == eval_lasso(f, w));
        }
    }
}

TEST_CASE("negation agreement: the complement automaton flips acceptance") {
    for (const auto& text : pattern_corpus()) {
        Formula f = parse_or_throw(text);
        BuchiAutomaton pos = translate(f);
        BuchiAutomaton neg = translate(Formula::Not(f));
        auto aps = atomic_propositions(f);
        if (aps.size() > 2) aps.resize(2);
        for (const auto& w : ltlguard::test::enumerate_lassos(aps, 2, 2)) {
            CAPTURE(text);
            REQUIRE(accepts_lasso(neg, w) == !accepts_lasso(pos, w));
        }
    }
}

TEST_CASE("running-example formula translates soundly") {
    Formula task = parse_or_throw(
        "F(straight_200m) & X(G(right_turn_Maple_St -> F(straight_500m & "
        "X(left_turn_Oak_St & F(straight_300m)))))");
    BuchiAutomaton a = translate(task);
    LassoWord w{{sym({"straight_200m"}), sym({"right_turn_Maple_St"}), sym({"straight_500m"}),
                 sym({"left_turn_Oak_St"}), sym({"straight_300m"})},
                {sym({})}};
    CHECK(accepts_lasso(a, w) == eval_lasso(task, w));
    // and a word that clearly satisfies the formula
    LassoWord ok{{sym({"straight_200m"})}, {sym({})}};
    CHECK(accepts_lasso(a, ok));
    CHECK(eval_lasso(task, ok));
}

TEST_CASE("accepts_lasso: an automaton without accepting states rejects everything") {
    BuchiAutomaton a = translate(parse_or_throw("false"));
    CHECK(a.state_count == 1);
    CHECK(a.accepting.empty());
    CHECK(!accepts_lasso(a, {{}, {sym({})}}));
    CHECK(!accepts_lasso(a, {{sym({"a"})}, {sym({"a"})}}));
}

TEST_CASE("accepts_lasso ignores extra propositions in symbols") {
    BuchiAutomaton a = translate(parse_or_throw("G a"));
    Symbol extra;
    extra.true_set = {"a", "unrelated"};
    CHECK(accepts_lasso(a, {{}, {extra}}));
}

TEST_CASE("product intersects languages") {
    SUBCASE("contradiction is empty") {
        BuchiAutomaton p = product(translate(parse_or_throw("G a")),
                                   translate(parse_or_throw("G !a")));
        CHECK(!find_accepting_lasso(p).has_value());
    }
    SUBCASE("product with true is language-equivalent on bounded lassos") {
        Formula f = parse_or_throw("G(a -> F b)");
        BuchiAutomaton a = translate(f);
        BuchiAutomaton p = product(a, translate(parse_or_throw("true")));
        for (const auto& w : ltlguard::test::enumerate_lassos({"a", "b"}, 2, 2)) {
            REQUIRE(accepts_lasso(p, w) == accepts_lasso(a, w));
        }
    }
    SUBCASE("F a and F b accept the joint witness") {
        BuchiAutomaton p = product(translate(parse_or_throw("F a")),
                                   translate(parse_or_throw("F b")));
        CHECK(accepts_lasso(p, {{}, {sym({"a", "b"})}}));
        CHECK(!accepts_lasso(p, {{}, {sym({"a"})}}));
    }
}

TEST_CASE("product correctness on random pairs over bounded lassos") {
    std::mt19937 rng(41);
    auto lassos = ltlguard::test::enumerate_lassos({"a", "b"}, 2, 2);
    for (int i = 0; i < 25; ++i) {
        BuchiAutomaton a = ltlguard::test::random_automaton(rng, 4, {"a", "b"});
        BuchiAutomaton b = ltlguard::test::random_automaton(rng, 4, {"a", "b"});
        BuchiAutomaton p = product(a, b);
        for (std::size_t j = 0; j < lassos.size(); j += 3) {
            REQUIRE(accepts_lasso(p, lassos[j]) ==
                    (accepts_lasso(a, lassos[j]) && accepts_lasso(b, lassos[j])));
        }
    }
}

TEST_CASE("find_accepting_lasso returns an accepted witness or nothing") {
    SUBCASE("false has the empty language") {
        CHECK(!find_accepting_lasso(translate(parse_or_throw("false"))).has_value());
    }
    SUBCASE("G a yields an always-a witness") {
        BuchiAutomaton a = translate(parse_or_throw("G a"));
        auto w = find_accepting_lasso(a);
        REQUIRE(w.has_value());
        CHECK(accepts_lasso(a, *w));
        for (const auto& s : w->prefix) CHECK(s.holds("a"));
        for (const auto& s : w->loop) CHECK(s.holds("a"));
    }
    SUBCASE("emptiness witness property on random automata") {
        std::mt19937 rng(43);
        for (int i = 0; i < 200; ++i) {
            BuchiAutomaton a = ltlguard::test::random_automaton(rng, 6, {"a", "b"});
            auto w = find_accepting_lasso(a);
            if (w.has_value()) {
                REQUIRE(!w->loop.empty());
                REQUIRE(accepts_lasso(a, *w));
            }
        }
    }
    SUBCASE("deterministic witness") {
        BuchiAutomaton a = translate(parse_or_throw("F a & F b"));
        auto w1 = find_accepting_lasso(a);
        auto w2 = find_accepting_lasso(a);
        REQUIRE(w1.has_value());
        CHECK(*w1 == *w2);
    }
}

TEST_CASE("the raw product witness for the running example starts without straight_200m") {
    Formula task = parse_or_throw(
        "F(straight_200m) & X(G(right_turn_Maple_St -> F(straight_500m & "
        "X(left_turn_Oak_St & F(straight_300m)))))");
    Formula rule = parse_or_throw(
        "G((straight_500m | right_turn) -> (right_turn -> straight_500m -> left_turn)) -> "
        "G(straight_1km & arrive_destination)");
    BuchiAutomaton p = product(translate(task), translate(to_nnf(Formula::Not(rule))));
    auto w = find_accepting_lasso(p);
    REQUIRE(w.has_value());
    const Symbol& first = w->prefix.empty() ? w->loop.front() : w->prefix.front();
    CHECK(!first.holds("straight_200m"));
    CHECK(accepts_lasso(translate(task), *w));
    CHECK(!accepts_lasso(translate(rule), *w));
}

TEST_CASE("to_dot renders well-formed DOT with the expected conventions") {
    SUBCASE("single state self loop") {
        BuchiAutomaton a = translate(parse_or_throw("G a"));
        std::string dot = to_dot(a);
        CHECK(ltlguard::test::dot_is_well_formed(dot));
        CHECK(dot.find("doublecircle") != std::string::npos);
        CHECK(dot.find("->") != std::string::npos);
    }
    SUBCASE("unconditional edges print as t") {
        BuchiAutomaton a = translate(parse_or_throw("F a"));
        std::string dot = to_dot(a);
        CHECK(dot.find("label=\"t\"") != std::string::npos);
    }
    SUBCASE("random automata render well-formed") {
        std::mt19937 rng(47);
        for (int i = 0; i < 50; ++i) {
            BuchiAutomaton a = ltlguard::test::random_automaton(rng, 6, {"a", "b"});
            CHECK(ltlguard::test::dot_is_well_formed(to_dot(a)));
        }
    }
}

TEST_CASE("text format round-trips") {
    std::mt19937 rng(53);
    for (int i = 0; i < 100; ++i) {
        BuchiAutomaton a = ltlguard::test::random_automaton(rng, 6, {"a", "b"});
        BuchiAutomaton b = from_text(to_text(a));
        CHECK(a.alphabet == b.alphabet);
        CHECK(a.state_count == b.state_count);
        CHECK(a.initial == b.initial);
        CHECK(a.accepting == b.accepting);
        CHECK(a.transitions == b.transitions);
    }
}

TEST_CASE("text format matches the documented layout") {
    BuchiAutomaton a;
    a.alphabet = {"a", "b"};
    a.state_count = 2;
    a.initial = {0};
    a.accepting = {1};
    a.transitions = {{0, {{"a"}, {"b"}}, 1}, {1, {{}, {}}, 1}};
    std::string text = to_text(a);
    CHECK(text == "aps: a b\nstates: 2\ninitial: 0\naccepting: 1\n0 \"a & !b\" 1\n1 \"t\" 1\n");
    BuchiAutomaton back = from_text(text);
    CHECK(back.transitions == a.transitions);
}

TEST_CASE("unify_alphabets takes the union and keeps constraints") {
    BuchiAutomaton a = translate(parse_or_throw("G a"));
    BuchiAutomaton b = translate(parse_or_throw("F b"));
    auto [ua, ub] = unify_alphabets(a, b);
    CHECK(ua.alphabet == std::vector<std::string>{"a", "b"});
    CHECK(ub.alphabet == ua.alphabet);
    CHECK(ua.transitions == a.transitions);
}
