#pragma once

#include <random>
#include <string>
#include <vector>

#include "ltlguard/automaton.hpp"
#include "ltlguard/formula.hpp"
#include "ltlguard/lasso.hpp"

namespace ltlguard::test {

/// Random formula over the surface grammar (no Release), sized by node count.
inline Formula random_formula(std::mt19937& rng, int max_depth,
                              const std::vector<std::string>& atoms) {
    std::uniform_int_distribution<int> kind(0, max_depth <= 1 ? 3 : 12);
    switch (kind(rng)) {
        case 0:
            return Formula::True();
        case 1:
            return Formula::False();
        case 2:
        case 3: {
            std::uniform_int_distribution<std::size_t> pick(0, atoms.size() - 1);
            return Formula::Atom(atoms[pick(rng)]);
        }
        case 4:
            return Formula::Not(random_formula(rng, max_depth - 1, atoms));
        case 5:
            return Formula::Next(random_formula(rng, max_depth - 1, atoms));
        case 6:
            return Formula::Eventually(random_formula(rng, max_depth - 1, atoms));
        case 7:
            return Formula::Globally(random_formula(rng, max_depth - 1, atoms));
        case 8:
            return Formula::And(random_formula(rng, max_depth - 1, atoms),
                                random_formula(rng, max_depth - 1, atoms));
        case 9:
            return Formula::Or(random_formula(rng, max_depth - 1, atoms),
                               random_formula(rng, max_depth - 1, atoms));
        case 10:
            return Formula::Implies(random_formula(rng, max_depth - 1, atoms),
                                    random_formula(rng, max_depth - 1, atoms));
        case 11:
            return Formula::Iff(random_formula(rng, max_depth - 1, atoms),
                                random_formula(rng, max_depth - 1, atoms));
        default:
            return Formula::Until(random_formula(rng, max_depth - 1, atoms),
                                  random_formula(rng, max_depth - 1, atoms));
    }
}

/// All lasso words with |prefix| <= max_prefix and 1 <= |loop| <= max_loop
/// over the given propositions.
inline std::vector<LassoWord> enumerate_lassos(const std::vector<std::string>& aps,
                                               std::size_t max_prefix, std::size_t max_loop) {
    std::vector<Symbol> symbols = enumerate_symbols(aps);
    std::vector<LassoWord> words;
    // sequences of symbols of a given length, as indexes into `symbols`
    auto sequences = [&symbols](std::size_t length) {
        std::vector<std::vector<Symbol>> out;
        std::vector<std::size_t> idx(length, 0);
        while (true) {
            std::vector<Symbol> seq;
            seq.reserve(length);
            for (std::size_t i : idx) seq.push_back(symbols[i]);
            out.push_back(std::move(seq));
            std::size_t k = length;
            while (k > 0) {
                --k;
                if (++idx[k] < symbols.size()) break;
                idx[k] = 0;
                if (k == 0) return out;
            }
            if (length == 0) return out;
        }
    };
    for (std::size_t p = 0; p <= max_prefix; ++p) {
        auto prefixes = sequences(p);
        for (std::size_t l = 1; l <= max_loop; ++l) {
            auto loops = sequences(l);
            for (const auto& prefix : prefixes) {
                for (const auto& loop : loops) {
                    words.push_back({prefix, loop});
                }
            }
        }
    }
    return words;
}

/// Random lasso over given propositions.
inline LassoWord random_lasso(std::mt19937& rng, const std::vector<std::string>& aps,
                              std::size_t max_prefix, std::size_t max_loop) {
    std::uniform_int_distribution<std::size_t> plen(0, max_prefix);
    std::uniform_int_distribution<std::size_t> llen(1, max_loop);
    std::bernoulli_distribution bit(0.5);
    auto symbol = [&]() {
        Symbol s;
        for (const auto& ap : aps) {
            if (bit(rng)) s.true_set.insert(ap);
        }
        return s;
    };
    LassoWord w;
    std::size_t p = plen(rng);
    std::size_t l = llen(rng);
    for (std::size_t i = 0; i < p; ++i) w.prefix.push_back(symbol());
    for (std::size_t i = 0; i < l; ++i) w.loop.push_back(symbol());
    return w;
}

/// Random automaton with small state count over the given alphabet.
inline BuchiAutomaton random_automaton(std::mt19937& rng, int max_states,
                                       const std::vector<std::string>& aps,
                                       double edge_density = 0.35) {
    std::uniform_int_distribution<int> nstates(1, max_states);
    BuchiAutomaton a;
    a.alphabet = aps;
    std::sort(a.alphabet.begin(), a.alphabet.end());
    a.state_count = nstates(rng);
    std::bernoulli_distribution edge(edge_density);
    std::bernoulli_distribution flag(0.4);
    std::bernoulli_distribution constrain(0.5);
    std::set<Transition> transitions;
    for (int p = 0; p < a.state_count; ++p) {
        for (int q = 0; q < a.state_count; ++q) {
            if (!edge(rng)) continue;
            SymbolicLabel label;
            for (const auto& ap : a.alphabet) {
                if (!constrain(rng)) continue;
                if (flag(rng)) {
                    label.must_true.insert(ap);
                } else {
                    label.must_false.insert(ap);
                }
            }
            transitions.insert({p, label, q});
        }
    }
    a.transitions.assign(transitions.begin(), transitions.end());
    for (int q = 0; q < a.state_count; ++q) {
        if (flag(rng)) a.initial.insert(q);
        if (flag(rng)) a.accepting.insert(q);
    }
    if (a.initial.empty()) a.initial.insert(0);
    return a;
}

/// Minimal well-formedness validation for DOT digraph output.
inline bool dot_is_well_formed(const std::string& text) {
    std::size_t pos = text.find("digraph");
    if (pos == std::string::npos) return false;
    std::size_t open = text.find('{', pos);
    if (open == std::string::npos) return false;
    int depth = 0;
    bool in_quote = false;
    bool closed = false;
    for (std::size_t i = open; i < text.size(); ++i) {
        char c = text[i];
        if (in_quote) {
            if (c == '"') in_quote = false;
            if (c == '\n') return false;  // unterminated quoted string
            continue;
        }
        if (c == '"') in_quote = true;
        if (c == '{') ++depth;
        if (c == '}') {
            --depth;
            if (depth < 0) return false;
            if (depth == 0) closed = true;
        }
        if (closed && c == '}') {
            // everything after the final brace must be whitespace
            for (std::size_t j = i + 1; j < text.size(); ++j) {
                if (!std::isspace(static_cast<unsigned char>(text[j]))) return false;
            }
            break;
        }
    }
    if (!closed || in_quote) return false;
    // every edge statement must carry the arrow between identifiers
    std::istringstream lines(text);
    std::string line;
    while (std::getline(lines, line)) {
        auto arrow = line.find("->");
        if (arrow == std::string::npos) continue;
        auto before = line.find_last_not_of(" \t", arrow - 1);
        auto after = line.find_first_not_of(" \t", arrow + 2);
        if (before == std::string::npos || after == std::string::npos) return false;
    }
    return true;
}

}  // namespace ltlguard::test
