#include "ltlguard/inclusion.hpp"

#include <algorithm>
#include <cassert>
#include <chrono>
#include <deque>
#include <fstream>
#include <future>
#include <map>
#include <sstream>

#include "ltlguard/syntax.hpp"

namespace ltlguard {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

LassoWord minimize_counterexample(LassoWord w, const Formula& phi, const Formula& psi) {
    // Greedy shrink: drop prefix symbols from the front, then halve the loop,
    // keeping the word a valid counterexample throughout.
    while (!w.prefix.empty()) {
        LassoWord candidate = w;
        candidate.prefix.erase(candidate.prefix.begin());
        if (!validate_counterexample(phi, psi, candidate)) break;
        w = std::move(candidate);
    }
    while (w.loop.size() > 1) {
        LassoWord candidate = w;
        candidate.loop.resize(candidate.loop.size() / 2);
        if (!validate_counterexample(phi, psi, candidate)) break;
        w = std::move(candidate);
    }
    return w;
}

}  // namespace

bool validate_counterexample(const Formula& phi, const Formula& psi, const LassoWord& w) {
    return eval_lasso(phi, w) && !eval_lasso(psi, w);
}

std::optional<DivergencePath> extract_divergence_path(const BuchiAutomaton& a1,
                                                      const BuchiAutomaton& a2,
                                                      std::size_t maxdepth,
                                                      InclusionStats* stats) {
    const auto symbols = enumerate_symbols(a1.alphabet);
    const std::size_t n1 = static_cast<std::size_t>(a1.state_count);
    const std::size_t n2 = static_cast<std::size_t>(a2.state_count);

    // post[state][symbol] for both automata
    auto build_post = [&symbols](const BuchiAutomaton& a) {
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
    };
    auto post1 = build_post(a1);
    auto post2 = build_post(a2);

    struct QueueEntry {
        int s1, s2;
        std::size_t depth;
    };
    std::deque<QueueEntry> queue;
    std::map<std::pair<int, int>, std::pair<std::pair<int, int>, std::size_t>> parent;
    std::set<std::pair<int, int>> visited;
    for (int i1 : a1.initial) {
        for (int i2 : a2.initial) {
            queue.push_back({i1, i2, 0});
        }
    }

    InclusionStats local;
    auto finish = [&](std::optional<DivergencePath> path) {
        assert(local.expanded_pairs <= n1 * n2);
        assert(local.symbol_comparisons <= n1 * n2 * symbols.size());
        if (stats != nullptr) {
            stats->expanded_pairs = local.expanded_pairs;
            stats->symbol_comparisons = local.symbol_comparisons;
        }
        return path;
    };

    while (!queue.empty()) {
        QueueEntry entry = queue.front();
        queue.pop_front();
        auto pair = std::make_pair(entry.s1, entry.s2);
        if (visited.count(pair)) continue;
        visited.insert(pair);
        ++local.expanded_pairs;
        if (entry.depth > maxdepth) continue;

        for (std::size_t s = 0; s < symbols.size(); ++s) {
            ++local.symbol_comparisons;
            const auto& next1 = post1[static_cast<std::size_t>(entry.s1)][s];
            const auto& next2 = post2[static_cast<std::size_t>(entry.s2)][s];
            if (!next1.empty() && next2.empty()) {
                // Divergence: rebuild the synchronized path from the parents.
                DivergencePath path;
                path.terminal_pair = pair;
                path.failing_symbol = symbols[s];
                std::vector<DivergencePath::Step> rev;
                auto cursor = pair;
                while (true) {
                    auto it = parent.find(cursor);
                    if (it == parent.end()) break;
                    rev.push_back({it->second.first, symbols[it->second.second]});
                    cursor = it->second.first;
                }
                path.steps.assign(rev.rbegin(), rev.rend());
                return finish(std::move(path));
            }
            if (entry.depth < maxdepth) {
                for (int t1 : next1) {
                    for (int t2 : next2) {
                        auto next_pair = std::make_pair(t1, t2);
                        if (!visited.count(next_pair) && !parent.count(next_pair) &&
                            !(next_pair == pair)) {
                            parent.emplace(next_pair, std::make_pair(pair, s));
                        }
                        if (!visited.count(next_pair)) {
                            queue.push_back({t1, t2, entry.depth + 1});
                        }
                    }
                }
            }
        }
    }
    return finish(std::nullopt);
}

std::string symbol_literals(const Symbol& s, const std::vector<std::string>& alphabet) {
    std::string out;
    for (const auto& ap : alphabet) {
        if (!out.empty()) out += " & ";
        if (!s.holds(ap)) out += '!';
        out += ap;
    }
    if (out.empty()) out = "t";
    return out;
}

namespace {

std::string render_word(const LassoWord& w, const std::vector<std::string>& alphabet) {
    auto piece = [&alphabet](const Symbol& s) {
        std::string text = symbol_literals(s, alphabet);
        if (text.find(" & ") != std::string::npos) text = "(" + text + ")";
        return text;
    };
    std::string out;
    for (const Symbol& s : w.prefix) {
        if (!out.empty()) out += ' ';
        out += piece(s);
    }
    if (!out.empty()) out += ' ';
    out += '(';
    for (std::size_t i = 0; i < w.loop.size(); ++i) {
        if (i > 0) out += ' ';
        out += piece(w.loop[i]);
    }
    out += ")^w";
    return out;
}

}  // namespace

std::string render_counterexample_report(const InclusionVerdict& verdict,
                                         const BuchiAutomaton& a1, const BuchiAutomaton& a2) {
    if (verdict.included() || !verdict.counterexample.has_value()) {
        throw std::invalid_argument("counterexample report requires a not-included verdict");
    }
    std::set<std::string> aps(a1.alphabet.begin(), a1.alphabet.end());
    aps.insert(a2.alphabet.begin(), a2.alphabet.end());
    std::vector<std::string> alphabet(aps.begin(), aps.end());

    std::ostringstream out;
    out << "Aut A: of Trans. " << a1.transition_count() << ", of States " << a1.state_count
        << ".\n";
    out << "Aut B: of Trans. " << a2.transition_count() << ", of States " << a2.state_count
        << ".\n";
    out << "Counterexample: " << render_word(*verdict.counterexample, alphabet) << "\n";
    out << "Not included.\n";
    out << "Time used(ms): " << static_cast<long long>(verdict.stats.elapsed_ms) << ".\n";
    if (verdict.divergence.has_value()) {
        const DivergencePath& path = *verdict.divergence;
        out << "Divergence path:\n";
        for (const auto& step : path.steps) {
            out << "  (" << step.pair.first << "," << step.pair.second << ") --"
                << symbol_literals(step.symbol, alphabet) << "--> ";
        }
        out << "(" << path.terminal_pair.first << "," << path.terminal_pair.second << ")\n";
        out << "Stuck pair: (" << path.terminal_pair.first << "," << path.terminal_pair.second
            << ") on symbol " << symbol_literals(path.failing_symbol, alphabet)
            << " (enabled in Aut A, no successor in Aut B).\n";
    } else if (!verdict.divergence_note.empty()) {
        out << "Divergence path: none (" << verdict.divergence_note << ").\n";
    }
    return out.str();
}

InclusionVerdict check_inclusion(const Formula& phi, const Formula& psi,
                                 const InclusionOptions& options) {
    auto start = Clock::now();
    InclusionVerdict verdict;

    BuchiAutomaton a_phi = translate(phi);
    BuchiAutomaton a_psi = translate(psi);
    BuchiAutomaton a_neg_psi = translate(to_nnf(Formula::Not(psi)));
    BuchiAutomaton prod = product(a_phi, a_neg_psi);

    std::optional<LassoWord> witness = find_accepting_lasso(prod);
    if (!witness.has_value()) {
        verdict.status = InclusionVerdict::Status::Included;
        verdict.stats.elapsed_ms = ms_since(start);
        return verdict;
    }

    LassoWord cex = *witness;
    if (options.minimize_counterexample) {
        cex = minimize_counterexample(std::move(cex), phi, psi);
    }

    // Witness property before anything is reported: the word must separate
    // the two automata, otherwise the translation itself is broken.
    if (!accepts_lasso(a_phi, cex) || accepts_lasso(a_psi, cex)) {
        throw EngineError("inclusion engine produced an invalid counterexample for " +
                          render(phi) + " vs " + render(psi));
    }
    if (!validate_counterexample(phi, psi, cex)) {
        throw EngineError("counterexample fails formula-level validation for " + render(phi) +
                          " vs " + render(psi));
    }

    verdict.status = InclusionVerdict::Status::NotIncluded;
    verdict.counterexample = std::move(cex);

    auto [u1, u2] = unify_alphabets(a_phi, a_psi);
    std::size_t maxdepth = options.maxdepth.value_or(static_cast<std::size_t>(u1.state_count) *
                                                     static_cast<std::size_t>(u2.state_count));
    verdict.divergence = extract_divergence_path(u1, u2, maxdepth, &verdict.stats);
    if (!verdict.divergence.has_value()) {
        verdict.divergence_note = "divergence beyond product reachability";
    }
    verdict.stats.elapsed_ms = ms_since(start);
    return verdict;
}

RuleSet RuleSet::from_text(const std::string& text) {
    RuleSet set;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    std::set<std::string> names;
    while (std::getline(in, line)) {
        ++line_no;
        auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') continue;
        auto bar1 = line.find('|');
        auto bar2 = bar1 == std::string::npos ? std::string::npos : line.find('|', bar1 + 1);
        if (bar2 == std::string::npos) {
            throw std::invalid_argument("rule file line " + std::to_string(line_no) +
                                        ": expected 'name | priority | formula'");
        }
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        Rule rule;
        rule.name = trim(line.substr(0, bar1));
        std::string priority_text = trim(line.substr(bar1 + 1, bar2 - bar1 - 1));
        std::string formula_text = trim(line.substr(bar2 + 1));
        if (rule.name.empty()) {
            throw std::invalid_argument("rule file line " + std::to_string(line_no) +
                                        ": empty rule name");
        }
        if (!names.insert(rule.name).second) {
            throw std::invalid_argument("rule file line " + std::to_string(line_no) +
                                        ": duplicate rule name '" + rule.name + "'");
        }
        try {
            rule.priority = std::stoi(priority_text);
        } catch (const std::exception&) {
            throw std::invalid_argument("rule file line " + std::to_string(line_no) +
                                        ": bad priority '" + priority_text + "'");
        }
        ParseResult parsed = parse(formula_text);
        if (!parsed.ok()) {
            throw std::invalid_argument("rule file line " + std::to_string(line_no) + ": " +
                                        render_diagnostics(parsed.diagnostics));
        }
        rule.formula = *parsed.formula;
        set.rules.push_back(std::move(rule));
    }
    std::stable_sort(set.rules.begin(), set.rules.end(),
                     [](const Rule& a, const Rule& b) { return a.priority > b.priority; });
    return set;
}

RuleSet RuleSet::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open rule file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return from_text(buffer.str());
}

std::vector<RuleCheckResult> check_against_rules(const Formula& phi, const RuleSet& rules,
                                                 bool parallel, const InclusionOptions& options) {
    std::vector<RuleCheckResult> results(rules.rules.size());
    auto run_one = [&phi, &options](const Rule& rule) {
        RuleCheckResult result;
        result.rule_name = rule.name;
        try {
            result.verdict = check_inclusion(phi, rule.formula, options);
        } catch (const std::exception& e) {
            result.error = e.what();
        }
        return result;
    };

    if (parallel) {
        std::vector<std::future<RuleCheckResult>> futures;
        futures.reserve(rules.rules.size());
        for (const Rule& rule : rules.rules) {
            futures.push_back(std::async(std::launch::async, run_one, std::cref(rule)));
        }
        for (std::size_t i = 0; i < futures.size(); ++i) {
            results[i] = futures[i].get();
        }
    } else {
        for (std::size_t i = 0; i < rules.rules.size(); ++i) {
            results[i] = run_one(rules.rules[i]);
        }
    }

    for (auto& result : results) {
        if (result.verdict.has_value() && !result.verdict->included()) {
            result.repair_target = true;
            break;
        }
    }
    return results;
}

}  // namespace ltlguard
