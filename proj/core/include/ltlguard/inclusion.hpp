#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlguard/automaton.hpp"
#include "ltlguard/formula.hpp"
#include "ltlguard/translate.hpp"

namespace ltlguard {

/// Signals an internal inconsistency of the verification engine (a found
/// counterexample that fails the witness property).  Never a verdict.
class EngineError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Synchronized path over state pairs of two automata ending where the first
/// automaton can take a symbol the second cannot.
struct DivergencePath {
    struct Step {
        std::pair<int, int> pair;
        Symbol symbol;
    };
    std::vector<Step> steps;
    std::pair<int, int> terminal_pair;
    Symbol failing_symbol;
};

struct InclusionStats {
    std::size_t expanded_pairs = 0;
    std::size_t symbol_comparisons = 0;
    double elapsed_ms = 0.0;
};

struct InclusionVerdict {
    enum class Status { Included, NotIncluded };

    Status status = Status::Included;
    std::optional<LassoWord> counterexample;     // present iff not included
    std::optional<DivergencePath> divergence;    // may be absent, see note
    std::string divergence_note;                 // set when no path exists
    InclusionStats stats;

    bool included() const { return status == Status::Included; }
};

struct InclusionOptions {
    bool minimize_counterexample = true;
    std::optional<std::size_t> maxdepth;  // divergence search depth; default n1*n2
};

/// Decides L(translate(phi)) subseteq L(translate(psi)).
///
/// Since psi always originates from a formula, its complement is translated
/// from the negated formula and the check reduces to emptiness of the
/// product.  A not-included verdict always carries a counterexample word that
/// satisfies the witness property (accepted by the phi automaton, rejected by
/// the psi automaton); a violation of that property raises EngineError.
InclusionVerdict check_inclusion(const Formula& phi, const Formula& psi,
                                 const InclusionOptions& options = {});

/// Breadth-first search over state pairs of the two automata (alphabets must
/// be unified) comparing successor availability per concrete symbol; declares
/// divergence where the first automaton has a successor and the second has
/// none.  The visited set keeps every pair expanded at most once, so the
/// search is bounded by n1*n2 pair expansions and n1*n2*|Sigma| symbol
/// comparisons.
std::optional<DivergencePath> extract_divergence_path(const BuchiAutomaton& a1,
                                                      const BuchiAutomaton& a2,
                                                      std::size_t maxdepth,
                                                      InclusionStats* stats = nullptr);

/// Ground-truth check at the formula level, independent of the automata
/// pipeline: the word satisfies phi and violates psi.
bool validate_counterexample(const Formula& phi, const Formula& psi, const LassoWord& w);

/// Report fed to the critic: automaton sizes, the counterexample word as a
/// literal sequence with (...)^w loop notation, the verdict line and the
/// elapsed time.  Requires a not-included verdict.
std::string render_counterexample_report(const InclusionVerdict& verdict,
                                         const BuchiAutomaton& a1, const BuchiAutomaton& a2);

/// Renders one symbol of `alphabet` as a conjunction of literals.
std::string symbol_literals(const Symbol& s, const std::vector<std::string>& alphabet);

struct Rule {
    std::string name;
    Formula formula;
    int priority = 0;
};

/// Ordered rule collection; iteration order is by descending priority, ties
/// broken by file order.  Names are unique.
struct RuleSet {
    std::vector<Rule> rules;

    static RuleSet from_text(const std::string& text);
    static RuleSet from_file(const std::string& path);
};

struct RuleCheckResult {
    std::string rule_name;
    std::optional<InclusionVerdict> verdict;  // absent when the check errored
    std::string error;
    bool repair_target = false;  // highest-priority failing rule
};

/// One verdict per rule in priority order.  With `parallel`, rules are
/// checked concurrently; results are still reported in priority order and
/// per-rule errors never abort the other checks.
std::vector<RuleCheckResult> check_against_rules(const Formula& phi, const RuleSet& rules,
                                                 bool parallel = false,
                                                 const InclusionOptions& options = {});

}  // namespace ltlguard
