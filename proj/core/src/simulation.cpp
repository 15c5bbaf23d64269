#include "ltlguard/simulation.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <set>

namespace ltlguard {

bool SimulationRelation::contains(int p, int r) const {
    return std::binary_search(pairs.begin(), pairs.end(), std::make_pair(p, r));
}

namespace {

// post[q][symbol index] over the concrete symbols of the alphabet.  The
// defining clauses quantify over symbols, not labels; matching at label
// granularity would miss simulations between differently factored edges.
std::vector<std::vector<std::vector<int>>> concrete_post(const BuchiAutomaton& a,
                                                         const std::vector<Symbol>& symbols) {
    std::vector<std::vector<std::vector<int>>> post(
        static_cast<std::size_t>(a.state_count),
        std::vector<std::vector<int>>(symbols.size()));
    for (const Transition& t : a.transitions) {
        for (std::size_t s = 0; s < symbols.size(); ++s) {
            if (t.label.matches(symbols[s])) {
                post[static_cast<std::size_t>(t.source)][s].push_back(t.target);
            }
        }
    }
    return post;
}

std::vector<std::vector<std::vector<int>>> concrete_pre(const BuchiAutomaton& a,
                                                        const std::vector<Symbol>& symbols) {
    std::vector<std::vector<std::vector<int>>> pre(
        static_cast<std::size_t>(a.state_count),
        std::vector<std::vector<int>>(symbols.size()));
    for (const Transition& t : a.transitions) {
        for (std::size_t s = 0; s < symbols.size(); ++s) {
            if (t.label.matches(symbols[s])) {
                pre[static_cast<std::size_t>(t.target)][s].push_back(t.source);
            }
        }
    }
    return pre;
}

// Greatest fixpoint by repeated deletion of pairs violating the transition
// clause, starting from all pairs that satisfy the local clauses.
SimulationRelation greatest_simulation(
    const BuchiAutomaton& a, SimulationKind kind,
    const std::vector<std::vector<std::vector<int>>>& moves,
    const std::vector<char>& locally_admissible) {
    const int n = a.state_count;
    std::vector<char> rel(static_cast<std::size_t>(n) * n, 0);
    auto at = [n](int p, int r) { return static_cast<std::size_t>(p) * n + r; };
    for (int p = 0; p < n; ++p) {
        for (int r = 0; r < n; ++r) {
            rel[at(p, r)] = locally_admissible[at(p, r)];
        }
    }

    bool changed = true;
    while (changed) {
        changed = false;
        for (int p = 0; p < n; ++p) {
            for (int r = 0; r < n; ++r) {
                if (!rel[at(p, r)]) continue;
                bool ok = true;
                for (std::size_t s = 0; ok && s < moves[0].size(); ++s) {
                    for (int p_next : moves[static_cast<std::size_t>(p)][s]) {
                        bool matched = false;
                        for (int r_next : moves[static_cast<std::size_t>(r)][s]) {
                            if (rel[at(p_next, r_next)]) {
                                matched = true;
                                break;
                            }
                        }
                        if (!matched) {
                            ok = false;
                            break;
                        }
                    }
                }
                if (!ok) {
                    rel[at(p, r)] = 0;
                    changed = true;
                }
            }
        }
    }

    SimulationRelation result{kind, {}};
    for (int p = 0; p < n; ++p) {
        for (int r = 0; r < n; ++r) {
            if (rel[at(p, r)]) result.pairs.emplace_back(p, r);
        }
    }
    return result;
}

}  // namespace

SimulationRelation forward_simulation(const BuchiAutomaton& a) {
    const int n = a.state_count;
    auto symbols = enumerate_symbols(a.alphabet);
    auto post = concrete_post(a, symbols);
    if (n == 0) return {SimulationKind::Forward, {}};
    std::vector<char> admissible(static_cast<std::size_t>(n) * n, 0);
    for (int p = 0; p < n; ++p) {
        for (int r = 0; r < n; ++r) {
            bool acc_ok = !a.accepting.count(p) || a.accepting.count(r) != 0;
            admissible[static_cast<std::size_t>(p) * n + r] = acc_ok;
        }
    }
    return greatest_simulation(a, SimulationKind::Forward, post, admissible);
}

SimulationRelation backward_simulation(const BuchiAutomaton& a) {
    const int n = a.state_count;
    auto symbols = enumerate_symbols(a.alphabet);
    auto pre = concrete_pre(a, symbols);
    if (n == 0) return {SimulationKind::Backward, {}};
    std::vector<char> admissible(static_cast<std::size_t>(n) * n, 0);
    for (int p = 0; p < n; ++p) {
        for (int r = 0; r < n; ++r) {
            bool acc_ok = !a.accepting.count(p) || a.accepting.count(r) != 0;
            bool init_ok = !a.initial.count(p) || a.initial.count(r) != 0;
            admissible[static_cast<std::size_t>(p) * n + r] = acc_ok && init_ok;
        }
    }
    return greatest_simulation(a, SimulationKind::Backward, pre, admissible);
}

BuchiAutomaton prune_with_simulation(const BuchiAutomaton& a) {
    if (a.state_count == 0) return a;
    SimulationRelation fwd = forward_simulation(a);

    // Equivalence classes under mutual simulation; the representative is the
    // smallest member.
    std::vector<int> repr(static_cast<std::size_t>(a.state_count));
    std::iota(repr.begin(), repr.end(), 0);
    for (auto [p, r] : fwd.pairs) {
        if (p < r && fwd.contains(r, p)) {
            // merge classes of p and r
            int rp = repr[static_cast<std::size_t>(p)];
            int rr = repr[static_cast<std::size_t>(r)];
            if (rp != rr) {
                int keep = std::min(rp, rr);
                int drop = std::max(rp, rr);
                for (auto& x : repr) {
                    if (x == drop) x = keep;
                }
            }
        }
    }

    std::map<int, int> dense;
    for (int q = 0; q < a.state_count; ++q) {
        dense.try_emplace(repr[static_cast<std::size_t>(q)], static_cast<int>(dense.size()));
    }

    BuchiAutomaton out;
    out.alphabet = a.alphabet;
    out.state_count = static_cast<int>(dense.size());
    for (int q : a.initial) out.initial.insert(dense.at(repr[static_cast<std::size_t>(q)]));
    for (int q : a.accepting) out.accepting.insert(dense.at(repr[static_cast<std::size_t>(q)]));
    std::set<Transition> transitions;
    for (const Transition& t : a.transitions) {
        transitions.insert({dense.at(repr[static_cast<std::size_t>(t.source)]), t.label,
                            dense.at(repr[static_cast<std::size_t>(t.target)])});
    }
    out.transitions.assign(transitions.begin(), transitions.end());
    return out;
}

}  // namespace ltlguard
