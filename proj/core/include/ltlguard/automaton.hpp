#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ltlguard/lasso.hpp"

namespace ltlguard {

/// Symbolic edge label: the set of concrete symbols s with
/// must_true subset of s and must_false disjoint from s.  The empty label
/// matches every symbol and prints as "t".
struct SymbolicLabel {
    std::set<std::string> must_true;
    std::set<std::string> must_false;

    bool matches(const Symbol& s) const;
    bool operator==(const SymbolicLabel& other) const {
        return must_true == other.must_true && must_false == other.must_false;
    }
    bool operator<(const SymbolicLabel& other) const {
        if (must_true != other.must_true) return must_true < other.must_true;
        return must_false < other.must_false;
    }
};

/// Conjunction of two labels; empty when jointly unsatisfiable.
std::optional<SymbolicLabel> conjoin(const SymbolicLabel& a, const SymbolicLabel& b);

/// Renders as a conjunction of literals, or "t" for the unconditional label.
std::string label_text(const SymbolicLabel& label);

struct Transition {
    int source;
    SymbolicLabel label;
    int target;

    bool operator==(const Transition& other) const {
        return source == other.source && target == other.target && label == other.label;
    }
    bool operator<(const Transition& other) const {
        if (source != other.source) return source < other.source;
        if (target != other.target) return target < other.target;
        return label < other.label;
    }
};

/// Nondeterministic Buchi automaton over symbolic labels.
struct BuchiAutomaton {
    std::vector<std::string> alphabet;  // sorted AP names
    int state_count = 0;
    std::set<int> initial;
    std::set<int> accepting;
    std::vector<Transition> transitions;  // sorted, duplicate-free

    std::size_t transition_count() const { return transitions.size(); }

    /// Validates the structural invariants (ids in range, labels over the
    /// alphabet, transitions sorted and duplicate-free); throws on violation.
    void check_invariants() const;
};

/// True iff some run over prefix . loop^w visits an accepting state
/// infinitely often.  Symbols may mention propositions outside the alphabet
/// (ignored); missing propositions read as false.
bool accepts_lasso(const BuchiAutomaton& a, const LassoWord& w);

/// Rebuilds both automata over the union of their alphabets.  Labels keep
/// their constraints; newly added propositions are unconstrained.
std::pair<BuchiAutomaton, BuchiAutomaton> unify_alphabets(const BuchiAutomaton& a,
                                                          const BuchiAutomaton& b);

/// Standard two-track intersection: L(result) = L(a) n L(b).
BuchiAutomaton product(const BuchiAutomaton& a, const BuchiAutomaton& b);

/// Emptiness check with witness extraction.  Returns a word accepted by the
/// automaton, or nothing when the language is empty.  Deterministic: the
/// witness is located by BFS over a fixed edge order and every symbolic label
/// concretizes to exactly its must-true set.
std::optional<LassoWord> find_accepting_lasso(const BuchiAutomaton& a);

/// GraphViz rendering: accepting states double-circled, initial states marked
/// with an entry arrow, labels printed as literal conjunctions ("t" when
/// unconditional).
std::string to_dot(const BuchiAutomaton& a);

/// Plain-text fixture format:
///   aps: a b c
///   states: 3
///   initial: 0
///   accepting: 2
///   0 "a & !b" 1
std::string to_text(const BuchiAutomaton& a);
BuchiAutomaton from_text(const std::string& text);

/// All concrete symbols over `aps`, in mask order: bit i of the mask is the
/// i-th proposition.  The all-false symbol comes first.
std::vector<Symbol> enumerate_symbols(const std::vector<std::string>& aps);

}  // namespace ltlguard
