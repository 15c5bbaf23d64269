#include <doctest.h>

#include <random>

#include "ltlguard/syntax.hpp"
#include "test_support.hpp"

using namespace ltlguard;

TEST_CASE("tokenize basic streams") {
    auto r = tokenize("G a");
    REQUIRE(r.ok());
    REQUIRE(r.tokens.size() == 2);
    CHECK(r.tokens[0].kind == TokenKind::Operator);
    CHECK(r.tokens[0].lexeme == "G");
    CHECK(r.tokens[0].position == 0);
    CHECK(r.tokens[1].kind == TokenKind::AtomName);
    CHECK(r.tokens[1].lexeme == "a");
    CHECK(r.tokens[1].position == 2);

    r = tokenize("a U b");
    REQUIRE(r.ok());
    REQUIRE(r.tokens.size() == 3);
    CHECK(r.tokens[0].position == 0);
    CHECK(r.tokens[1].lexeme == "U");
    CHECK(r.tokens[1].position == 2);
    CHECK(r.tokens[2].position == 4);
}

TEST_CASE("tokenize rejects unknown characters") {
    auto r = tokenize("a $ b");
    REQUIRE(!r.ok());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].kind == DiagnosticKind::UnknownToken);
    CHECK(r.diagnostics[0].position == 2);
}

TEST_CASE("tokenize flags empty input") {
    for (const char* text : {"", "   ", "\t\n"}) {
        auto r = tokenize(text);
        REQUIRE(r.diagnostics.size() == 1);
        CHECK(r.diagnostics[0].kind == DiagnosticKind::EmptyFormula);
        CHECK(r.diagnostics[0].position == 0);
    }
}

TEST_CASE("tokenize positions are strictly increasing and lexemes non-empty") {
    auto r = tokenize("G((a -> F b) & true) U !c <-> 0");
    REQUIRE(r.ok());
    for (std::size_t i = 0; i < r.tokens.size(); ++i) {
        CHECK(!r.tokens[i].lexeme.empty());
        if (i > 0) CHECK(r.tokens[i - 1].position < r.tokens[i].position);
    }
}

TEST_CASE("check_operators reports one unmatched paren") {
    auto tokens = tokenize("G (a -> F b").tokens;
    auto diags = check_operators(tokens);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].kind == DiagnosticKind::UnbalancedParen);
    CHECK(diags[0].position == 2);
}

TEST_CASE("check_operators reports a binary operator without left operand") {
    auto tokens = tokenize("a U U b").tokens;
    auto diags = check_operators(tokens);
    REQUIRE(diags.size() == 1);
    CHECK(diags[0].kind == DiagnosticKind::MissingOperand);
    CHECK(diags[0].position == 4);
}

TEST_CASE("check_operators accepts the running-example task formula") {
    auto tokens = tokenize("F(straight_200m) & X(G(right_turn_Maple_St -> F(straight_500m & "
                           "X(left_turn_Oak_St & F(straight_300m)))))")
                      .tokens;
    CHECK(check_operators(tokens).empty());
}

TEST_CASE("check_operators reports all independent errors left to right") {
    auto tokens = tokenize("G (a -> F b & & c").tokens;
    auto diags = check_operators(tokens);
    REQUIRE(diags.size() == 2);
    CHECK(diags[0].kind == DiagnosticKind::UnbalancedParen);
    CHECK(diags[0].position == 2);
    CHECK(diags[1].kind == DiagnosticKind::MissingOperand);
    CHECK(diags[1].position == 14);
}

TEST_CASE("check_operators edge cases") {
    SUBCASE("dangling binary operator at the end") {
        auto diags = check_operators(tokenize("a U").tokens);
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].kind == DiagnosticKind::DanglingOperator);
        CHECK(diags[0].position == 2);
    }
    SUBCASE("dangling unary operator") {
        auto diags = check_operators(tokenize("F").tokens);
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].kind == DiagnosticKind::DanglingOperator);
    }
    SUBCASE("missing operator between operands") {
        auto diags = check_operators(tokenize("a b").tokens);
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].kind == DiagnosticKind::MissingOperand);
        CHECK(diags[0].position == 2);
    }
    SUBCASE("empty group") {
        auto diags = check_operators(tokenize("()").tokens);
        REQUIRE(!diags.empty());
        CHECK(diags[0].kind == DiagnosticKind::MissingOperand);
    }
    SUBCASE("orphan close paren") {
        auto diags = check_operators(tokenize("a)").tokens);
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].kind == DiagnosticKind::UnbalancedParen);
        CHECK(diags[0].position == 1);
    }
    SUBCASE("operator dangling before close paren") {
        auto diags = check_operators(tokenize("(a &)").tokens);
        REQUIRE(diags.size() == 1);
        CHECK(diags[0].kind == DiagnosticKind::DanglingOperator);
        CHECK(diags[0].position == 3);
    }
}

TEST_CASE("parse follows the declared precedence") {
    SUBCASE("conjunction binds tighter than until") {
        Formula f = parse_or_throw("a U b & c");
        REQUIRE(f.op() == Op::Until);
        CHECK(f.left() == Formula::Atom("a"));
        CHECK(f.right() == Formula::And(Formula::Atom("b"), Formula::Atom("c")));
    }
    SUBCASE("negation") {
        CHECK(parse_or_throw("!a") == Formula::Not(Formula::Atom("a")));
    }
    SUBCASE("base rule has a top-level implication with right-associative chain") {
        Formula f = parse_or_throw(
            "G((straight_500m | right_turn) -> (right_turn -> straight_500m -> left_turn)) -> "
            "G(straight_1km & arrive_destination)");
        REQUIRE(f.op() == Op::Implies);
        REQUIRE(f.left().op() == Op::Globally);
        Formula inner = f.left().left();
        REQUIRE(inner.op() == Op::Implies);
        // right-associative: right_turn -> (straight_500m -> left_turn)
        Formula chain = inner.right();
        REQUIRE(chain.op() == Op::Implies);
        CHECK(chain.left() == Formula::Atom("right_turn"));
        REQUIRE(chain.right().op() == Op::Implies);
    }
    SUBCASE("until is right-associative") {
        Formula f = parse_or_throw("a U b U c");
        REQUIRE(f.op() == Op::Until);
        CHECK(f.left() == Formula::Atom("a"));
        CHECK(f.right().op() == Op::Until);
    }
    SUBCASE("disjunction binds tighter than until, implication looser") {
        Formula f = parse_or_throw("a | b U c -> d");
        REQUIRE(f.op() == Op::Implies);
        REQUIRE(f.left().op() == Op::Until);
        CHECK(f.left().left() == Formula::Or(Formula::Atom("a"), Formula::Atom("b")));
    }
    SUBCASE("constants") {
        CHECK(parse_or_throw("true") == Formula::True());
        CHECK(parse_or_throw("1") == Formula::True());
        CHECK(parse_or_throw("false") == Formula::False());
        CHECK(parse_or_throw("0") == Formula::False());
    }
}

TEST_CASE("parse failure returns exactly the operator-check diagnostics") {
    const char* inputs[] = {"G (a -> F b", "a U U b", "a b", "(a &)", ")", "F"};
    for (const char* text : inputs) {
        auto parsed = parse(text);
        REQUIRE(!parsed.ok());
        auto expected = check_operators(tokenize(text).tokens);
        CHECK(parsed.diagnostics == expected);
    }
}

TEST_CASE("check_operators empty iff parse succeeds, on random mutations") {
    std::mt19937 rng(20240817);
    std::vector<std::string> atoms = {"a", "b", "c"};
    int checked = 0;
    for (int i = 0; i < 300; ++i) {
        Formula f = ltlguard::test::random_formula(rng, 4, atoms);
        std::string text = render(f);
        // random single-character mutation: delete, duplicate or keep
        std::uniform_int_distribution<int> mode(0, 2);
        std::uniform_int_distribution<std::size_t> at(0, text.size() - 1);
        std::string mutated = text;
        switch (mode(rng)) {
            case 0: mutated.erase(at(rng), 1); break;
            case 1: {
                auto pos = at(rng);
                mutated.insert(pos, 1, mutated[pos]);
                break;
            }
            default: break;
        }
        auto lexed = tokenize(mutated);
        if (!lexed.ok()) continue;  // lexical failure: not check_operators' turf
        auto diags = check_operators(lexed.tokens);
        auto parsed = parse(mutated);
        CHECK(diags.empty() == parsed.ok());
        ++checked;
    }
    CHECK(checked > 100);
}
