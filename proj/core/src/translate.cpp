#include "ltlguard/translate.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <set>
#include <stdexcept>

namespace ltlguard {

namespace {

// The tableau works on formulas drawn from the closure of the input, indexed
// by small integers so that obligation sets are cheap ordered int-sets.
class FormulaArena {
  public:
    int intern(const Formula& f) {
        auto [it, inserted] = ids_.try_emplace(f, static_cast<int>(formulas_.size()));
        if (inserted) formulas_.push_back(f);
        return it->second;
    }

    int find(const Formula& f) const {
        auto it = ids_.find(f);
        return it == ids_.end() ? -1 : it->second;
    }

    const Formula& at(int id) const { return formulas_[static_cast<std::size_t>(id)]; }
    int size() const { return static_cast<int>(formulas_.size()); }

  private:
    std::map<Formula, int> ids_;
    std::vector<Formula> formulas_;
};

using IdSet = std::set<int>;

// Rewrites NNF Eventually/Globally into Until/Release so the expansion only
// deals with {true, false, literal, and, or, X, U, R}.
Formula strip_sugar(const Formula& f) {
    switch (f.op()) {
        case Op::True:
        case Op::False:
        case Op::Atom:
            return f;
        case Op::Not:
            return Formula::Not(strip_sugar(f.left()));
        case Op::And:
            return Formula::And(strip_sugar(f.left()), strip_sugar(f.right()));
        case Op::Or:
            return Formula::Or(strip_sugar(f.left()), strip_sugar(f.right()));
        case Op::Next:
            return Formula::Next(strip_sugar(f.left()));
        case Op::Until:
            return Formula::Until(strip_sugar(f.left()), strip_sugar(f.right()));
        case Op::Release:
            return Formula::Release(strip_sugar(f.left()), strip_sugar(f.right()));
        case Op::Eventually:
            return Formula::Until(Formula::True(), strip_sugar(f.left()));
        case Op::Globally:
            return Formula::Release(Formula::False(), strip_sugar(f.left()));
        default:
            throw std::logic_error("strip_sugar: input not in negation normal form");
    }
}

struct TableauNode {
    int id;
    IdSet incoming;  // node ids; kInitMark stands for the artificial entry
    IdSet todo;      // "New" in the classic formulation
    IdSet done;      // "Old"
    IdSet next;
};

constexpr int kInitMark = -1;

class TableauBuilder {
  public:
    explicit TableauBuilder(const Formula& nnf) {
        root_ = arena_.intern(nnf);
        collect_untils(nnf);
    }

    // Runs the expansion and returns the finished node list.
    const std::vector<TableauNode>& build() {
        TableauNode seed;
        seed.id = next_id_++;
        seed.incoming.insert(kInitMark);
        seed.todo.insert(root_);
        expand(std::move(seed));
        return nodes_;
    }

    const FormulaArena& arena() const { return arena_; }
    const std::vector<int>& until_ids() const { return until_ids_; }

  private:
    void collect_untils(const Formula& f) {
        if (f.op() == Op::Until) {
            int id = arena_.intern(f);
            if (std::find(until_ids_.begin(), until_ids_.end(), id) == until_ids_.end()) {
                until_ids_.push_back(id);
            }
        }
        switch (f.op()) {
            case Op::True:
            case Op::False:
            case Op::Atom:
                return;
            default:
                collect_untils(f.left());
                if (is_binary(f.op())) collect_untils(f.right());
        }
    }

    bool contradicts(const IdSet& done, const Formula& literal) {
        Formula dual = literal.op() == Op::Not ? literal.left() : Formula::Not(literal);
        int dual_id = arena_.intern(dual);
        return done.count(dual_id) != 0;
    }

    void expand(TableauNode node) {
        if (node.todo.empty()) {
            finish(std::move(node));
            return;
        }
        int id = *node.todo.begin();
        node.todo.erase(node.todo.begin());
        if (node.done.count(id)) {
            expand(std::move(node));
            return;
        }
        const Formula& f = arena_.at(id);
        switch (f.op()) {
            case Op::False:
                return;  // contradictory branch dies
            case Op::True:
                node.done.insert(id);
                expand(std::move(node));
                return;
            case Op::Atom:
            case Op::Not:
                if (contradicts(node.done, f)) return;
                node.done.insert(id);
                expand(std::move(node));
                return;
            case Op::And: {
                node.done.insert(id);
                node.todo.insert(arena_.intern(f.left()));
                node.todo.insert(arena_.intern(f.right()));
                expand(std::move(node));
                return;
            }
            case Op::Or: {
                node.done.insert(id);
                TableauNode right = node;
                node.todo.insert(arena_.intern(f.left()));
                expand(std::move(node));
                right.todo.insert(arena_.intern(f.right()));
                expand(std::move(right));
                return;
            }
            case Op::Next: {
                node.done.insert(id);
                node.next.insert(arena_.intern(f.left()));
                expand(std::move(node));
                return;
            }
            case Op::Until: {
                node.done.insert(id);
                TableauNode discharge = node;
                // postpone: left now, the obligation carries to the next step
                node.todo.insert(arena_.intern(f.left()));
                node.next.insert(id);
                expand(std::move(node));
                // discharge: right now
                discharge.todo.insert(arena_.intern(f.right()));
                expand(std::move(discharge));
                return;
            }
            case Op::Release: {
                node.done.insert(id);
                TableauNode both = node;
                // hold: right now, the obligation carries on
                node.todo.insert(arena_.intern(f.right()));
                node.next.insert(id);
                expand(std::move(node));
                // release: both now
                both.todo.insert(arena_.intern(f.left()));
                both.todo.insert(arena_.intern(f.right()));
                expand(std::move(both));
                return;
            }
            default:
                throw std::logic_error("tableau expansion: unexpected operator");
        }
    }

    void finish(TableauNode node) {
        auto key = std::make_pair(node.done, node.next);
        auto it = state_index_.find(key);
        if (it != state_index_.end()) {
            TableauNode& existing = nodes_[static_cast<std::size_t>(it->second)];
            existing.incoming.insert(node.incoming.begin(), node.incoming.end());
            return;
        }
        node.id = next_id_++;
        state_index_.emplace(std::move(key), static_cast<int>(nodes_.size()));
        nodes_.push_back(node);
        std::size_t self = nodes_.size() - 1;

        TableauNode successor;
        successor.incoming.insert(nodes_[self].id);
        successor.todo = nodes_[self].next;
        expand(std::move(successor));
    }

    FormulaArena arena_;
    int root_;
    int next_id_ = 0;
    std::vector<int> until_ids_;  // acceptance sets, in discovery order
    std::vector<TableauNode> nodes_;
    std::map<std::pair<IdSet, IdSet>, int> state_index_;
};

BuchiAutomaton canonicalize(const BuchiAutomaton& a) {
    // BFS renumbering from the initial states, edges in (label, target) order.
    std::vector<std::vector<const Transition*>> edges(a.state_count);
    for (const Transition& t : a.transitions) edges[t.source].push_back(&t);
    for (auto& list : edges) {
        std::sort(list.begin(), list.end(), [](const Transition* x, const Transition* y) {
            if (!(x->label == y->label)) return x->label < y->label;
            return x->target < y->target;
        });
    }
    std::vector<int> renumber(a.state_count, -1);
    std::deque<int> queue;
    int next = 0;
    for (int q : a.initial) {
        if (renumber[q] == -1) {
            renumber[q] = next++;
            queue.push_back(q);
        }
    }
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        for (const Transition* t : edges[q]) {
            if (renumber[t->target] == -1) {
                renumber[t->target] = next++;
                queue.push_back(t->target);
            }
        }
    }

    BuchiAutomaton out;
    out.alphabet = a.alphabet;
    out.state_count = next;  // unreachable states are dropped
    for (int q : a.initial) out.initial.insert(renumber[q]);
    for (int q : a.accepting) {
        if (renumber[q] != -1) out.accepting.insert(renumber[q]);
    }
    std::set<Transition> transitions;
    for (const Transition& t : a.transitions) {
        if (renumber[t.source] != -1 && renumber[t.target] != -1) {
            transitions.insert({renumber[t.source], t.label, renumber[t.target]});
        }
    }
    out.transitions.assign(transitions.begin(), transitions.end());
    return out;
}

}  // namespace

BuchiAutomaton translate(const Formula& f) {
    Formula nnf = strip_sugar(to_nnf(f));
    TableauBuilder builder(nnf);
    const auto& nodes = builder.build();
    const FormulaArena& arena = builder.arena();
    const auto& untils = builder.until_ids();

    BuchiAutomaton out;
    out.alphabet = atomic_propositions(f);

    if (nodes.empty()) {
        // Unsatisfiable input: a single non-accepting initial state.
        out.state_count = 1;
        out.initial.insert(0);
        out.check_invariants();
        return out;
    }

    // Generalized acceptance: one set per Until subformula, holding the nodes
    // where the obligation is absent or its right side holds now.
    const int k = static_cast<int>(std::max<std::size_t>(untils.size(), 1));
    std::vector<IdSet> accepting_sets(static_cast<std::size_t>(k));
    std::map<int, std::size_t> node_pos;
    for (std::size_t i = 0; i < nodes.size(); ++i) node_pos[nodes[i].id] = i;
    for (std::size_t si = 0; si < untils.size(); ++si) {
        int u = untils[si];
        int rhs = arena.find(arena.at(u).right());
        for (const TableauNode& n : nodes) {
            if (!n.done.count(u) || (rhs >= 0 && n.done.count(rhs))) {
                accepting_sets[si].insert(n.id);
            }
        }
    }
    if (untils.empty()) {
        for (const TableauNode& n : nodes) accepting_sets[0].insert(n.id);
    }

    // Degeneralization: states are (node, counter); the counter advances past
    // set i when leaving a node of accepting set i, and the automaton accepts
    // at counter 0 in a node of set 0.
    auto advance = [&](int node_id, int counter) {
        if (accepting_sets[static_cast<std::size_t>(counter)].count(node_id)) {
            return (counter + 1) % k;
        }
        return counter;
    };

    // Dense ids for (node, counter) pairs plus one artificial entry state.
    auto pair_id = [&](int node_id, int counter) {
        return 1 + static_cast<int>(node_pos.at(node_id)) * k + counter;
    };
    out.state_count = 1 + static_cast<int>(nodes.size()) * k;
    out.initial.insert(0);

    std::set<Transition> transitions;
    for (const TableauNode& n : nodes) {
        SymbolicLabel label;
        for (int id : n.done) {
            const Formula& g = arena.at(id);
            if (g.op() == Op::Atom) label.must_true.insert(g.name());
            if (g.op() == Op::Not) label.must_false.insert(g.left().name());
        }
        for (int source : n.incoming) {
            if (source == kInitMark) {
                // entry edges start the counter at 0
                transitions.insert({0, label, pair_id(n.id, 0)});
            } else {
                for (int counter = 0; counter < k; ++counter) {
                    transitions.insert(
                        {pair_id(source, counter), label, pair_id(n.id, advance(source, counter))});
                }
            }
        }
    }
    for (const TableauNode& n : nodes) {
        if (accepting_sets[0].count(n.id)) {
            out.accepting.insert(pair_id(n.id, 0));
        }
    }
    out.transitions.assign(transitions.begin(), transitions.end());

    BuchiAutomaton canonical = canonicalize(out);
    canonical.check_invariants();
    return canonical;
}

}  // namespace ltlguard
