#include "ltlguard/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>
#include <stdexcept>

namespace ltlguard {

std::string_view to_string(DiagnosticKind kind) {
    switch (kind) {
        case DiagnosticKind::UnbalancedParen: return "unbalanced-paren";
        case DiagnosticKind::MissingOperand: return "missing-operand";
        case DiagnosticKind::DanglingOperator: return "dangling-operator";
        case DiagnosticKind::UnknownToken: return "unknown-token";
        case DiagnosticKind::EmptyFormula: return "empty-formula";
    }
    return "unknown";
}

std::string render_diagnostics(const std::vector<SyntaxDiagnostic>& diagnostics) {
    std::ostringstream out;
    for (const auto& d : diagnostics) {
        out << to_string(d.kind) << " at position " << d.position << ": " << d.message << "\n";
    }
    return out.str();
}

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

bool is_unary_lexeme(const std::string& s) {
    return s == "!" || s == "X" || s == "F" || s == "G";
}

}  // namespace

TokenizeResult tokenize(std::string_view text) {
    TokenizeResult result;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
            continue;
        }
        std::size_t start = i;
        if (is_ident_start(c)) {
            while (i < text.size() && is_ident_char(text[i])) ++i;
            std::string word(text.substr(start, i - start));
            if (word == "X" || word == "F" || word == "G" || word == "U") {
                result.tokens.push_back({TokenKind::Operator, word, start});
            } else if (word == "true" || word == "false") {
                result.tokens.push_back({TokenKind::Constant, word, start});
            } else {
                result.tokens.push_back({TokenKind::AtomName, word, start});
            }
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
            std::string digits(text.substr(start, i - start));
            if (digits == "1" || digits == "0") {
                result.tokens.push_back({TokenKind::Constant, digits, start});
            } else {
                result.diagnostics.push_back({DiagnosticKind::UnknownToken, start,
                                              "number '" + digits + "' is not a formula"});
            }
            continue;
        }
        switch (c) {
            case '(':
                result.tokens.push_back({TokenKind::LeftParen, "(", start});
                ++i;
                continue;
            case ')':
                result.tokens.push_back({TokenKind::RightParen, ")", start});
                ++i;
                continue;
            case '!':
            case '&':
            case '|':
                result.tokens.push_back({TokenKind::Operator, std::string(1, c), start});
                ++i;
                continue;
            case '-':
                if (i + 1 < text.size() && text[i + 1] == '>') {
                    result.tokens.push_back({TokenKind::Operator, "->", start});
                    i += 2;
                    continue;
                }
                break;
            case '<':
                if (i + 2 < text.size() && text[i + 1] == '-' && text[i + 2] == '>') {
                    result.tokens.push_back({TokenKind::Operator, "<->", start});
                    i += 3;
                    continue;
                }
                break;
            default:
                break;
        }
        result.diagnostics.push_back({DiagnosticKind::UnknownToken, start,
                                      std::string("character '") + c + "' is not part of the grammar"});
        ++i;
    }
    if (result.tokens.empty() && result.diagnostics.empty()) {
        result.diagnostics.push_back({DiagnosticKind::EmptyFormula, 0, "input contains no formula"});
    }
    if (!result.diagnostics.empty()) {
        result.tokens.clear();
    }
    return result;
}

std::vector<SyntaxDiagnostic> check_operators(const std::vector<Token>& tokens) {
    std::vector<SyntaxDiagnostic> diags;
    if (tokens.empty()) {
        diags.push_back({DiagnosticKind::EmptyFormula, 0, "input contains no formula"});
        return diags;
    }

    // Expectation automaton: alternate between "need an operand" and "have a
    // complete term".  Recovery rules keep scanning so that every independent
    // error in the stream is reported.
    bool expect_operand = true;
    std::vector<std::size_t> open_parens;
    const Token* prev = nullptr;

    for (const Token& t : tokens) {
        switch (t.kind) {
            case TokenKind::AtomName:
            case TokenKind::Constant:
                if (!expect_operand) {
                    diags.push_back({DiagnosticKind::MissingOperand, t.position,
                                     "missing operator before '" + t.lexeme + "'"});
                }
                expect_operand = false;
                break;
            case TokenKind::Operator:
                if (is_unary_lexeme(t.lexeme)) {
                    if (!expect_operand) {
                        diags.push_back({DiagnosticKind::MissingOperand, t.position,
                                         "missing binary operator before unary '" + t.lexeme + "'"});
                    }
                    expect_operand = true;
                } else {
                    if (expect_operand) {
                        diags.push_back({DiagnosticKind::MissingOperand, t.position,
                                         "binary operator '" + t.lexeme + "' lacks a left operand"});
                        // keep waiting for the operand; the operator is dropped
                    } else {
                        expect_operand = true;
                    }
                }
                break;
            case TokenKind::LeftParen:
                if (!expect_operand) {
                    diags.push_back({DiagnosticKind::MissingOperand, t.position,
                                     "missing operator before '('"});
                }
                open_parens.push_back(t.position);
                expect_operand = true;
                break;
            case TokenKind::RightParen:
                if (expect_operand) {
                    if (prev != nullptr && prev->kind == TokenKind::Operator) {
                        diags.push_back({DiagnosticKind::DanglingOperator, prev->position,
                                         "operator '" + prev->lexeme + "' has no operand before ')'"});
                    } else {
                        diags.push_back({DiagnosticKind::MissingOperand, t.position,
                                         "empty group before ')'"});
                    }
                }
                if (open_parens.empty()) {
                    diags.push_back({DiagnosticKind::UnbalancedParen, t.position,
                                     "')' has no matching '('"});
                } else {
                    open_parens.pop_back();
                }
                expect_operand = false;
                break;
        }
        prev = &t;
    }

    if (expect_operand) {
        if (prev != nullptr && prev->kind == TokenKind::Operator) {
            diags.push_back({DiagnosticKind::DanglingOperator, prev->position,
                             "operator '" + prev->lexeme + "' has no operand"});
        } else if (prev != nullptr && prev->kind == TokenKind::LeftParen) {
            // the unmatched '(' diagnostic below already covers this
        }
    }
    for (std::size_t pos : open_parens) {
        diags.push_back({DiagnosticKind::UnbalancedParen, pos, "'(' has no matching ')'"});
    }

    std::stable_sort(diags.begin(), diags.end(),
                     [](const SyntaxDiagnostic& a, const SyntaxDiagnostic& b) {
                         return a.position < b.position;
                     });
    return diags;
}

namespace {

// Pratt parser over a checked token stream.  Binding powers mirror the
// precedence table in formula.cpp.
class Parser {
  public:
    explicit Parser(const std::vector<Token>& tokens) : tokens_(tokens) {}

    Formula parse_formula() {
        Formula f = parse_binary(0);
        assert(pos_ == tokens_.size());
        return f;
    }

  private:
    static int binding_power(const std::string& lexeme) {
        if (lexeme == "<->") return 1;
        if (lexeme == "->") return 2;
        if (lexeme == "U") return 3;
        if (lexeme == "|") return 4;
        if (lexeme == "&") return 5;
        return 0;
    }

    static bool right_assoc(const std::string& lexeme) {
        return lexeme == "<->" || lexeme == "->" || lexeme == "U";
    }

    const Token* peek() const { return pos_ < tokens_.size() ? &tokens_[pos_] : nullptr; }

    Formula parse_binary(int min_bp) {
        Formula lhs = parse_unary();
        while (const Token* t = peek()) {
            if (t->kind != TokenKind::Operator || is_unary_lexeme(t->lexeme)) break;
            int bp = binding_power(t->lexeme);
            if (bp < min_bp) break;
            std::string op = t->lexeme;
            ++pos_;
            Formula rhs = parse_binary(right_assoc(op) ? bp : bp + 1);
            if (op == "&") lhs = Formula::And(lhs, rhs);
            else if (op == "|") lhs = Formula::Or(lhs, rhs);
            else if (op == "->") lhs = Formula::Implies(lhs, rhs);
            else if (op == "<->") lhs = Formula::Iff(lhs, rhs);
            else lhs = Formula::Until(lhs, rhs);
        }
        return lhs;
    }

    Formula parse_unary() {
        const Token* t = peek();
        assert(t != nullptr);
        switch (t->kind) {
            case TokenKind::Operator: {
                assert(is_unary_lexeme(t->lexeme));
                std::string op = t->lexeme;
                ++pos_;
                Formula child = parse_unary();
                if (op == "!") return Formula::Not(child);
                if (op == "X") return Formula::Next(child);
                if (op == "F") return Formula::Eventually(child);
                return Formula::Globally(child);
            }
            case TokenKind::LeftParen: {
                ++pos_;
                Formula inner = parse_binary(0);
                assert(peek() && peek()->kind == TokenKind::RightParen);
                ++pos_;
                return inner;
            }
            case TokenKind::Constant: {
                bool value = t->lexeme == "true" || t->lexeme == "1";
                ++pos_;
                return value ? Formula::True() : Formula::False();
            }
            case TokenKind::AtomName: {
                Formula atom = Formula::Atom(t->lexeme);
                ++pos_;
                return atom;
            }
            case TokenKind::RightParen:
                break;
        }
        throw std::logic_error("parser invoked on an unchecked token stream");
    }

    const std::vector<Token>& tokens_;
    std::size_t pos_ = 0;
};

}  // namespace

ParseResult parse(std::string_view text) {
    ParseResult result;
    TokenizeResult lexed = tokenize(text);
    if (!lexed.ok()) {
        result.diagnostics = std::move(lexed.diagnostics);
        return result;
    }
    result.diagnostics = check_operators(lexed.tokens);
    if (!result.diagnostics.empty()) {
        return result;
    }
    result.formula = Parser(lexed.tokens).parse_formula();
    return result;
}

Formula parse_or_throw(std::string_view text) {
    ParseResult r = parse(text);
    if (!r.ok()) {
        throw std::invalid_argument("parse failed for '" + std::string(text) +
                                    "':\n" + render_diagnostics(r.diagnostics));
    }
    return *r.formula;
}

}  // namespace ltlguard
