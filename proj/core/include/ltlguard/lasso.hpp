#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "ltlguard/formula.hpp"

namespace ltlguard {

/// One instant of an infinite word: the set of atomic propositions that hold.
/// Propositions absent from the set are false.
struct Symbol {
    std::set<std::string> true_set;

    bool holds(const std::string& ap) const { return true_set.count(ap) != 0; }
    bool operator==(const Symbol& other) const { return true_set == other.true_set; }
    bool operator<(const Symbol& other) const { return true_set < other.true_set; }
};

/// Finite representation prefix . loop^w of an ultimately periodic infinite
/// word.  The loop is never empty.  Two lasso words that unroll to the same
/// infinite word are semantically equal without being structurally equal.
struct LassoWord {
    std::vector<Symbol> prefix;
    std::vector<Symbol> loop;

    /// Symbol at position i of the unrolled infinite word.
    const Symbol& at(std::size_t i) const {
        if (i < prefix.size()) return prefix[i];
        return loop[(i - prefix.size()) % loop.size()];
    }

    /// Moves one loop iteration into the prefix; denotes the same word.
    LassoWord unrolled_once() const;

    bool operator==(const LassoWord& other) const {
        return prefix == other.prefix && loop == other.loop;
    }
};

/// Applies an atom renaming to every symbol of the word.
LassoWord rename_word(const LassoWord& w, const std::map<std::string, std::string>& substitution);

/// Exact satisfaction of f on the infinite word prefix . loop^w.
///
/// Satisfaction of every subformula is tabulated at the positions of the
/// prefix plus one loop block; Until-like obligations are solved by backward
/// induction with a two-pass fixpoint over the loop block, which is exact
/// because subformula truth at loop positions is periodic.
bool eval_lasso(const Formula& f, const LassoWord& w);

}  // namespace ltlguard
