#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ltlguard/formula.hpp"

namespace ltlguard {

enum class TokenKind : std::uint8_t {
    AtomName,
    Operator,
    LeftParen,
    RightParen,
    Constant,
};

struct Token {
    TokenKind kind;
    std::string lexeme;
    std::size_t position;  // zero-based character offset
};

enum class DiagnosticKind : std::uint8_t {
    UnbalancedParen,
    MissingOperand,
    DanglingOperator,
    UnknownToken,
    EmptyFormula,
};

std::string_view to_string(DiagnosticKind kind);

struct SyntaxDiagnostic {
    DiagnosticKind kind;
    std::size_t position;
    std::string message;

    bool operator==(const SyntaxDiagnostic& other) const {
        return kind == other.kind && position == other.position;
    }
};

/// One line per diagnostic, "<kind> at position <p>: <message>"; this is the
/// text bound into the syntax-correction prompt.
std::string render_diagnostics(const std::vector<SyntaxDiagnostic>& diagnostics);

struct TokenizeResult {
    std::vector<Token> tokens;
    std::vector<SyntaxDiagnostic> diagnostics;

    bool ok() const { return diagnostics.empty(); }
};

/// Splits the input into tokens of the LTL surface grammar.  Characters
/// outside the grammar yield unknown-token diagnostics (and no token list);
/// all-whitespace input yields empty-formula.
TokenizeResult tokenize(std::string_view text);

/// Structural check of a token stream: operator arities and parenthesis
/// balance.  Returns every independent error found in one left-to-right
/// scan; empty exactly when the stream parses.
std::vector<SyntaxDiagnostic> check_operators(const std::vector<Token>& tokens);

struct ParseResult {
    std::optional<Formula> formula;
    std::vector<SyntaxDiagnostic> diagnostics;

    bool ok() const { return formula.has_value(); }
};

/// Parses LTL text under the declared precedence (tightest to loosest):
/// unary ! X F G, then &, then |, then U, then ->, then <->; U, -> and <->
/// associate to the right, & and | to the left.
ParseResult parse(std::string_view text);

/// Convenience for trusted inputs (tests, fixtures): parses or throws.
Formula parse_or_throw(std::string_view text);

}  // namespace ltlguard
