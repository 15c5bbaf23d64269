#include "ltlguard/automaton.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <sstream>
#include <stdexcept>

namespace ltlguard {

bool SymbolicLabel::matches(const Symbol& s) const {
    for (const auto& ap : must_true) {
        if (!s.holds(ap)) return false;
    }
    for (const auto& ap : must_false) {
        if (s.holds(ap)) return false;
    }
    return true;
}

std::optional<SymbolicLabel> conjoin(const SymbolicLabel& a, const SymbolicLabel& b) {
    SymbolicLabel out = a;
    out.must_true.insert(b.must_true.begin(), b.must_true.end());
    out.must_false.insert(b.must_false.begin(), b.must_false.end());
    for (const auto& ap : out.must_true) {
        if (out.must_false.count(ap)) return std::nullopt;
    }
    return out;
}

std::string label_text(const SymbolicLabel& label) {
    if (label.must_true.empty() && label.must_false.empty()) return "t";
    std::string out;
    for (const auto& ap : label.must_true) {
        if (!out.empty()) out += " & ";
        out += ap;
    }
    for (const auto& ap : label.must_false) {
        if (!out.empty()) out += " & ";
        out += "!" + ap;
    }
    return out;
}

void BuchiAutomaton::check_invariants() const {
    auto in_range = [this](int q) { return q >= 0 && q < state_count; };
    for (int q : initial) {
        if (!in_range(q)) throw std::logic_error("initial state out of range");
    }
    for (int q : accepting) {
        if (!in_range(q)) throw std::logic_error("accepting state out of range");
    }
    std::set<std::string> aps(alphabet.begin(), alphabet.end());
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        const Transition& t = transitions[i];
        if (!in_range(t.source) || !in_range(t.target)) {
            throw std::logic_error("transition endpoint out of range");
        }
        for (const auto& ap : t.label.must_true) {
            if (!aps.count(ap)) throw std::logic_error("label references unknown AP " + ap);
        }
        for (const auto& ap : t.label.must_false) {
            if (!aps.count(ap)) throw std::logic_error("label references unknown AP " + ap);
            if (t.label.must_true.count(ap)) throw std::logic_error("contradictory label");
        }
        if (i > 0 && !(transitions[i - 1] < t)) {
            throw std::logic_error("transitions not sorted/duplicate-free");
        }
    }
}

namespace {

// Successor lists per state, edges in (label, target) order.
std::vector<std::vector<const Transition*>> outgoing_edges(const BuchiAutomaton& a) {
    std::vector<std::vector<const Transition*>> out(a.state_count);
    for (const Transition& t : a.transitions) out[t.source].push_back(&t);
    for (auto& edges : out) {
        std::sort(edges.begin(), edges.end(), [](const Transition* x, const Transition* y) {
            if (!(x->label == y->label)) return x->label < y->label;
            return x->target < y->target;
        });
    }
    return out;
}

// Iterative Tarjan over an explicit successor function.  Returns the SCC id
// of every node; ids are assignment-ordered and deterministic.
struct SccResult {
    std::vector<int> component;
    int count = 0;
};

SccResult tarjan_scc(std::size_t n, const std::vector<std::vector<std::size_t>>& succ) {
    SccResult result;
    result.component.assign(n, -1);
    std::vector<int> index(n, -1), lowlink(n, 0);
    std::vector<char> on_stack(n, 0);
    std::vector<std::size_t> stack;
    int next_index = 0;

    struct Frame {
        std::size_t node;
        std::size_t edge;
    };
    for (std::size_t root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        std::vector<Frame> frames{{root, 0}};
        index[root] = lowlink[root] = next_index++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < succ[f.node].size()) {
                std::size_t child = succ[f.node][f.edge++];
                if (index[child] == -1) {
                    index[child] = lowlink[child] = next_index++;
                    stack.push_back(child);
                    on_stack[child] = 1;
                    frames.push_back({child, 0});
                } else if (on_stack[child]) {
                    lowlink[f.node] = std::min(lowlink[f.node], index[child]);
                }
            } else {
                if (lowlink[f.node] == index[f.node]) {
                    while (true) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        result.component[w] = result.count;
                        if (w == f.node) break;
                    }
                    ++result.count;
                }
                std::size_t done = f.node;
                frames.pop_back();
                if (!frames.empty()) {
                    lowlink[frames.back().node] =
                        std::min(lowlink[frames.back().node], lowlink[done]);
                }
            }
        }
    }
    return result;
}

}  // namespace

bool accepts_lasso(const BuchiAutomaton& a, const LassoWord& w) {
    if (w.loop.empty()) throw std::invalid_argument("lasso loop must be non-empty");
    if (a.accepting.empty() || a.initial.empty()) return false;

    auto edges = outgoing_edges(a);

    // States reachable after consuming the prefix.
    std::vector<char> current(a.state_count, 0);
    for (int q : a.initial) current[q] = 1;
    for (const Symbol& s : w.prefix) {
        std::vector<char> next(a.state_count, 0);
        for (int q = 0; q < a.state_count; ++q) {
            if (!current[q]) continue;
            for (const Transition* t : edges[q]) {
                if (t->label.matches(s)) next[t->target] = 1;
            }
        }
        current = std::move(next);
    }

    // Finite graph over (state, loop position); acceptance holds iff a
    // reachable cycle contains a node whose state is accepting.
    const std::size_t loop_len = w.loop.size();
    const std::size_t n = static_cast<std::size_t>(a.state_count) * loop_len;
    auto node_id = [loop_len](int q, std::size_t i) {
        return static_cast<std::size_t>(q) * loop_len + i;
    };
    std::vector<std::vector<std::size_t>> succ(n);
    for (int q = 0; q < a.state_count; ++q) {
        for (std::size_t i = 0; i < loop_len; ++i) {
            auto& list = succ[node_id(q, i)];
            for (const Transition* t : edges[q]) {
                if (t->label.matches(w.loop[i])) {
                    list.push_back(node_id(t->target, (i + 1) % loop_len));
                }
            }
        }
    }

    std::vector<char> reachable(n, 0);
    std::deque<std::size_t> queue;
    for (int q = 0; q < a.state_count; ++q) {
        if (current[q]) {
            reachable[node_id(q, 0)] = 1;
            queue.push_back(node_id(q, 0));
        }
    }
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (std::size_t u : succ[v]) {
            if (!reachable[u]) {
                reachable[u] = 1;
                queue.push_back(u);
            }
        }
    }

    SccResult scc = tarjan_scc(n, succ);
    std::vector<int> scc_size(scc.count, 0);
    std::vector<char> scc_self_loop(scc.count, 0);
    for (std::size_t v = 0; v < n; ++v) {
        ++scc_size[scc.component[v]];
        for (std::size_t u : succ[v]) {
            if (u == v) scc_self_loop[scc.component[v]] = 1;
        }
    }
    for (std::size_t v = 0; v < n; ++v) {
        if (!reachable[v]) continue;
        int q = static_cast<int>(v / loop_len);
        if (!a.accepting.count(q)) continue;
        int c = scc.component[v];
        if (scc_size[c] > 1 || scc_self_loop[c]) return true;
    }
    return false;
}

std::pair<BuchiAutomaton, BuchiAutomaton> unify_alphabets(const BuchiAutomaton& a,
                                                          const BuchiAutomaton& b) {
    std::set<std::string> aps(a.alphabet.begin(), a.alphabet.end());
    aps.insert(b.alphabet.begin(), b.alphabet.end());
    std::vector<std::string> unified(aps.begin(), aps.end());
    BuchiAutomaton ua = a;
    BuchiAutomaton ub = b;
    ua.alphabet = unified;
    ub.alphabet = unified;
    return {std::move(ua), std::move(ub)};
}

BuchiAutomaton product(const BuchiAutomaton& a_in, const BuchiAutomaton& b_in) {
    auto [a, b] = unify_alphabets(a_in, b_in);
    auto edges_a = outgoing_edges(a);
    auto edges_b = outgoing_edges(b);

    // Two-track construction.  Track 0 waits for an accepting state of a,
    // track 1 for one of b; the track flips on leaving such a state, and the
    // product accepts at track-0 states whose first component accepts.
    struct Key {
        int p, q, track;
        bool operator<(const Key& other) const {
            if (p != other.p) return p < other.p;
            if (q != other.q) return q < other.q;
            return track < other.track;
        }
    };
    std::map<Key, int> ids;
    std::vector<Key> keys;
    std::deque<Key> work;
    auto intern = [&](const Key& k) {
        auto [it, inserted] = ids.try_emplace(k, static_cast<int>(keys.size()));
        if (inserted) {
            keys.push_back(k);
            work.push_back(k);
        }
        return it->second;
    };

    BuchiAutomaton out;
    out.alphabet = a.alphabet;
    for (int p : a.initial) {
        for (int q : b.initial) {
            int id = intern({p, q, 0});
            out.initial.insert(id);
        }
    }
    std::set<Transition> transitions;
    while (!work.empty()) {
        Key k = work.front();
        work.pop_front();
        int source = ids.at(k);
        int next_track = k.track;
        if (k.track == 0 && a.accepting.count(k.p)) next_track = 1;
        if (k.track == 1 && b.accepting.count(k.q)) next_track = 0;
        for (const Transition* ta : edges_a[k.p]) {
            for (const Transition* tb : edges_b[k.q]) {
                auto label = conjoin(ta->label, tb->label);
                if (!label) continue;
                int target = intern({ta->target, tb->target, next_track});
                transitions.insert({source, *label, target});
            }
        }
    }
    out.state_count = static_cast<int>(keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        if (keys[i].track == 0 && a.accepting.count(keys[i].p)) {
            out.accepting.insert(static_cast<int>(i));
        }
    }
    out.transitions.assign(transitions.begin(), transitions.end());
    return out;
}

namespace {

Symbol concretize(const SymbolicLabel& label) {
    return Symbol{label.must_true};
}

}  // namespace

std::optional<LassoWord> find_accepting_lasso(const BuchiAutomaton& a) {
    if (a.initial.empty() || a.accepting.empty()) return std::nullopt;
    auto edges = outgoing_edges(a);

    // Reachability with BFS parents; edge exploration order is fixed by
    // outgoing_edges, so the extracted witness is deterministic.
    std::vector<int> parent(a.state_count, -1);
    std::vector<const Transition*> parent_edge(a.state_count, nullptr);
    std::vector<char> reachable(a.state_count, 0);
    std::vector<int> bfs_order;
    std::deque<int> queue;
    for (int q : a.initial) {
        reachable[q] = 1;
        queue.push_back(q);
    }
    while (!queue.empty()) {
        int q = queue.front();
        queue.pop_front();
        bfs_order.push_back(q);
        for (const Transition* t : edges[q]) {
            if (!reachable[t->target]) {
                reachable[t->target] = 1;
                parent[t->target] = q;
                parent_edge[t->target] = t;
                queue.push_back(t->target);
            }
        }
    }

    std::vector<std::vector<std::size_t>> succ(a.state_count);
    for (const Transition& t : a.transitions) {
        succ[t.source].push_back(static_cast<std::size_t>(t.target));
    }
    SccResult scc = tarjan_scc(static_cast<std::size_t>(a.state_count), succ);
    std::vector<int> scc_size(scc.count, 0);
    for (int q = 0; q < a.state_count; ++q) ++scc_size[scc.component[q]];
    std::vector<char> has_self_loop(a.state_count, 0);
    for (const Transition& t : a.transitions) {
        if (t.source == t.target) has_self_loop[t.source] = 1;
    }

    // First accepting state in BFS order that lies on a cycle.
    int anchor = -1;
    for (int q : bfs_order) {
        if (!a.accepting.count(q)) continue;
        if (scc_size[scc.component[q]] > 1 || has_self_loop[q]) {
            anchor = q;
            break;
        }
    }
    if (anchor == -1) return std::nullopt;

    LassoWord word;
    std::vector<Symbol> rev_prefix;
    for (int q = anchor; parent[q] != -1; q = parent[q]) {
        rev_prefix.push_back(concretize(parent_edge[q]->label));
    }
    word.prefix.assign(rev_prefix.rbegin(), rev_prefix.rend());

    // Shortest cycle back to the anchor, again over the fixed edge order.
    std::vector<int> cycle_parent(a.state_count, -1);
    std::vector<const Transition*> cycle_edge(a.state_count, nullptr);
    std::vector<char> seen(a.state_count, 0);
    std::deque<int> cq;
    const Transition* closing = nullptr;
    for (const Transition* t : edges[anchor]) {
        if (t->target == anchor) {
            closing = t;
            break;
        }
        if (!seen[t->target]) {
            seen[t->target] = 1;
            cycle_parent[t->target] = -2;  // direct successor of the anchor
            cycle_edge[t->target] = t;
            cq.push_back(t->target);
        }
    }
    int cycle_tail = -1;
    while (closing == nullptr && !cq.empty()) {
        int q = cq.front();
        cq.pop_front();
        for (const Transition* t : edges[q]) {
            if (t->target == anchor) {
                closing = t;
                cycle_tail = q;
                break;
            }
            if (!seen[t->target]) {
                seen[t->target] = 1;
                cycle_parent[t->target] = q;
                cycle_edge[t->target] = t;
                cq.push_back(t->target);
            }
        }
    }
    assert(closing != nullptr && "anchor guaranteed to lie on a cycle");
    std::vector<Symbol> rev_loop{concretize(closing->label)};
    for (int q = cycle_tail; q >= 0; q = cycle_parent[q] == -2 ? -1 : cycle_parent[q]) {
        rev_loop.push_back(concretize(cycle_edge[q]->label));
    }
    word.loop.assign(rev_loop.rbegin(), rev_loop.rend());
    return word;
}

std::string to_dot(const BuchiAutomaton& a) {
    std::ostringstream out;
    out << "digraph buchi {\n";
    out << "  rankdir=LR;\n";
    out << "  node [shape=circle];\n";
    for (int q : a.initial) {
        out << "  init" << q << " [shape=point, style=invis];\n";
        out << "  init" << q << " -> s" << q << ";\n";
    }
    for (int q = 0; q < a.state_count; ++q) {
        out << "  s" << q << " [label=\"" << q << "\""
            << (a.accepting.count(q) ? ", shape=doublecircle" : "") << "];\n";
    }
    for (const Transition& t : a.transitions) {
        out << "  s" << t.source << " -> s" << t.target << " [label=\"" << label_text(t.label)
            << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_text(const BuchiAutomaton& a) {
    std::ostringstream out;
    out << "aps:";
    for (const auto& ap : a.alphabet) out << ' ' << ap;
    out << "\nstates: " << a.state_count << "\ninitial:";
    for (int q : a.initial) out << ' ' << q;
    out << "\naccepting:";
    for (int q : a.accepting) out << ' ' << q;
    out << '\n';
    for (const Transition& t : a.transitions) {
        out << t.source << " \"" << label_text(t.label) << "\" " << t.target << '\n';
    }
    return out.str();
}

namespace {

SymbolicLabel parse_label(const std::string& text, int line_no) {
    SymbolicLabel label;
    if (text == "t") return label;
    std::istringstream in(text);
    std::string piece;
    bool expect_literal = true;
    while (in >> piece) {
        if (piece == "&") {
            expect_literal = true;
            continue;
        }
        if (!expect_literal) {
            throw std::invalid_argument("automaton text line " + std::to_string(line_no) +
                                        ": expected '&' between literals");
        }
        if (!piece.empty() && piece.front() == '!') {
            label.must_false.insert(piece.substr(1));
        } else {
            label.must_true.insert(piece);
        }
        expect_literal = false;
    }
    for (const auto& ap : label.must_true) {
        if (label.must_false.count(ap)) {
            throw std::invalid_argument("automaton text line " + std::to_string(line_no) +
                                        ": contradictory label");
        }
    }
    return label;
}

}  // namespace

BuchiAutomaton from_text(const std::string& text) {
    BuchiAutomaton a;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::set<Transition> transitions;
    bool saw_states = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string trimmed = line;
        auto first = trimmed.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        trimmed = trimmed.substr(first);
        if (trimmed.front() == '#') continue;
        auto read_ints = [&](const std::string& rest) {
            std::vector<int> values;
            std::istringstream vs(rest);
            int v;
            while (vs >> v) values.push_back(v);
            return values;
        };
        if (trimmed.rfind("aps:", 0) == 0) {
            std::istringstream vs(trimmed.substr(4));
            std::string ap;
            while (vs >> ap) a.alphabet.push_back(ap);
            std::sort(a.alphabet.begin(), a.alphabet.end());
            continue;
        }
        if (trimmed.rfind("states:", 0) == 0) {
            auto values = read_ints(trimmed.substr(7));
            if (values.size() != 1 || values[0] < 0) {
                throw std::invalid_argument("automaton text line " + std::to_string(line_no) +
                                            ": bad states header");
            }
            a.state_count = values[0];
            saw_states = true;
            continue;
        }
        if (trimmed.rfind("initial:", 0) == 0) {
            for (int v : read_ints(trimmed.substr(8))) a.initial.insert(v);
            continue;
        }
        if (trimmed.rfind("accepting:", 0) == 0) {
            for (int v : read_ints(trimmed.substr(10))) a.accepting.insert(v);
            continue;
        }
        // transition line: src "<label>" dst
        std::istringstream ts(trimmed);
        int src = 0;
        if (!(ts >> src)) {
            throw std::invalid_argument("automaton text line " + std::to_string(line_no) +
                                        ": expected transition");
        }
        auto open_quote = trimmed.find('"');
        auto close_quote = trimmed.rfind('"');
        if (open_quote == std::string::npos || close_quote == open_quote) {
            throw std::invalid_argument("automaton text line " + std::to_string(line_no) +
                                        ": transition label must be quoted");
        }
        SymbolicLabel label =
            parse_label(trimmed.substr(open_quote + 1, close_quote - open_quote - 1), line_no);
        std::istringstream rest(trimmed.substr(close_quote + 1));
        int dst = 0;
        if (!(rest >> dst)) {
            throw std::invalid_argument("automaton text line " + std::to_string(line_no) +
                                        ": missing transition target");
        }
        transitions.insert({src, label, dst});
    }
    if (!saw_states) {
        throw std::invalid_argument("automaton text: missing states header");
    }
    a.transitions.assign(transitions.begin(), transitions.end());
    a.check_invariants();
    return a;
}

std::vector<Symbol> enumerate_symbols(const std::vector<std::string>& aps) {
    if (aps.size() > 16) {
        throw std::invalid_argument("symbol enumeration capped at 16 propositions");
    }
    std::vector<Symbol> symbols;
    symbols.reserve(1u << aps.size());
    for (std::uint32_t mask = 0; mask < (1u << aps.size()); ++mask) {
        Symbol s;
        for (std::size_t i = 0; i < aps.size(); ++i) {
            if (mask & (1u << i)) s.true_set.insert(aps[i]);
        }
        symbols.push_back(std::move(s));
    }
    return symbols;
}

}  // namespace ltlguard
