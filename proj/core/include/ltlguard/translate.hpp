#pragma once

#include "ltlguard/automaton.hpp"
#include "ltlguard/formula.hpp"

namespace ltlguard {

/// Translates an LTL formula into a Buchi automaton with
/// L(result) = Words(f).
///
/// Expand-node tableau over the negation normal form to a generalized
/// automaton with one acceptance set per Until subformula, degeneralized with
/// a modulo counter.  The result is canonical: states are renumbered in BFS
/// order from the initial state with edges visited in label order, so equal
/// formulas translate to identical automata.
BuchiAutomaton translate(const Formula& f);

}  // namespace ltlguard
