#pragma once

#include <utility>
#include <vector>

#include "ltlguard/automaton.hpp"

namespace ltlguard {

enum class SimulationKind : std::uint8_t { Forward, Backward };

/// A simulation relation over one automaton's states, as the greatest
/// fixpoint of the defining clauses.  Pairs are sorted.
struct SimulationRelation {
    SimulationKind kind;
    std::vector<std::pair<int, int>> pairs;

    bool contains(int p, int r) const;
};

/// Greatest forward simulation: for every pair (p, r), acceptance of p forces
/// acceptance of r, and every move of p on a concrete symbol is matched by a
/// move of r on the same symbol into a related pair.
SimulationRelation forward_simulation(const BuchiAutomaton& a);

/// Greatest backward simulation: acceptance and initiality of p' force the
/// same of r', and every transition into p' is matched by one into r' from a
/// related source.
SimulationRelation backward_simulation(const BuchiAutomaton& a);

/// Quotients states that are equivalent under mutual forward simulation.
/// Language-preserving; the state count never grows.
BuchiAutomaton prune_with_simulation(const BuchiAutomaton& a);

}  // namespace ltlguard
