#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace ltlguard {

/// Node kinds of the LTL abstract syntax tree.
///
/// The surface grammar offers the derived operators (Or, Implies, Iff,
/// Eventually, Globally, FalseConst) next to the core connectives
/// {true, atom, !, &, X, U}.  Release is internal only: to_nnf may introduce
/// it, the parser never produces it and render prints its core equivalent.
enum class Op : std::uint8_t {
    True,
    False,
    Atom,
    Not,
    And,
    Or,
    Implies,
    Iff,
    Next,
    Until,
    Release,
    Eventually,
    Globally,
};

bool is_unary(Op op);
bool is_binary(Op op);

/// Immutable LTL formula tree with structural value semantics.
///
/// Formulas are cheap to copy (shared immutable nodes) and safe to use from
/// any number of threads.  Equality and ordering are structural.
class Formula {
  public:
    Formula() = default;  // empty handle; only produced by default construction

    static Formula True();
    static Formula False();
    static Formula Atom(std::string name);
    static Formula Not(Formula f);
    static Formula And(Formula l, Formula r);
    static Formula Or(Formula l, Formula r);
    static Formula Implies(Formula l, Formula r);
    static Formula Iff(Formula l, Formula r);
    static Formula Next(Formula f);
    static Formula Until(Formula l, Formula r);
    static Formula Release(Formula l, Formula r);
    static Formula Eventually(Formula f);
    static Formula Globally(Formula f);

    bool valid() const { return node_ != nullptr; }
    Op op() const;
    const std::string& name() const;  // Atom only
    Formula left() const;             // first child (also the unary child)
    Formula right() const;            // second child of binary nodes

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

    /// Total structural order; used to keep containers of formulas
    /// deterministic.
    static int compare(const Formula& a, const Formula& b);
    bool operator<(const Formula& other) const { return compare(*this, other) < 0; }

    std::size_t hash() const;

  private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

/// True when `name` matches the atom identifier pattern: first character
/// alphabetic or underscore, the rest alphanumeric or underscore.
bool is_valid_atom_name(std::string_view name);

/// Renders with minimal parentheses under the declared precedence; the output
/// re-parses to a structurally identical formula.  Release nodes print as
/// their core equivalent !((!l) U (!r)).
std::string render(const Formula& f);

/// Atom names occurring in the formula, deduplicated, lexicographic.
std::vector<std::string> atomic_propositions(const Formula& f);

/// Renames every atom that appears as a key; structure and operators are
/// untouched, unknown keys are ignored.
Formula rewrite_aps(const Formula& f, const std::map<std::string, std::string>& substitution);

/// Negation normal form: Not appears only directly above atoms, Implies and
/// Iff are eliminated; Or and the internal Release may appear.
Formula to_nnf(const Formula& f);

/// Rewrites derived operators into the core set {true, atom, !, &, X, U}.
Formula to_core(const Formula& f);

}  // namespace ltlguard
