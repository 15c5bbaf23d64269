#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ltlguard/agents.hpp"
#include "ltlguard/inclusion.hpp"

namespace ltlguard {

struct TaskEntry {
    std::string id;
    std::string desired_task;
    std::string environmental_info;
};

/// Dataset file: entries separated by a line `---`; each entry holds an
/// `id:` line and `task:` / `env:` blocks.
std::vector<TaskEntry> parse_dataset(const std::string& text);
std::vector<TaskEntry> load_dataset(const std::string& path);

struct PipelineConfig {
    int max_iterations = 25;
    int syntax_retry_bound = 3;
    bool parallel_rules = false;
    bool minimize_counterexamples = true;
    std::string backend = "scripted";
    std::uint64_t random_seed = 0;
};

struct TraceRecord {
    int iteration = 0;
    std::string phase;  // extraction | alignment | syntax-check | inclusion-check |
                        // critique | revision | error
    std::string formula;
    std::string rule_name;
    std::string verdict_summary;
    std::vector<AgentClient::CallRecord> agent_calls;
};

struct PipelineResult {
    enum class Status { Compliant, NonOutput, ExtractionFailed };

    Status status = Status::NonOutput;
    std::optional<Formula> final_formula;  // present iff compliant
    int iterations_used = 0;               // critique-revise rounds
    std::vector<TraceRecord> trace;
};

std::string to_string(PipelineResult::Status status);

/// Union of the rules' atomic propositions, lexicographic.
std::vector<std::string> build_ap_library(const RuleSet& rules);

/// The full self-supervised loop for one entry: extraction, AP alignment,
/// syntax check, per-rule inclusion checks, then critique-revise-recheck
/// rounds until every rule passes or the iteration cap is reached.  Compliant
/// is only returned after a full round of included verdicts; agent or engine
/// failures inside an iteration are recorded in the trace and the entry runs
/// to the cap.
PipelineResult run(AgentClient& client, const TaskEntry& entry, const RuleSet& rules,
                   const PipelineConfig& config);

struct EntrySummary {
    std::string id;
    std::string status;
    int iterations_used = 0;
    std::optional<std::string> final_formula;
    std::vector<std::pair<std::string, bool>> rule_results;  // rule name -> included
    std::size_t agent_calls = 0;
    bool recheck_ok = true;  // independent post-hoc verdict for emitted formulas
};

struct BenchmarkReport {
    std::vector<EntrySummary> entries;
    int output_count = 0;
    double violation_rate = 0.0;
    double average_iterations = 0.0;

    bool operator==(const BenchmarkReport& other) const;

    std::string to_json() const;
    static BenchmarkReport from_json(const std::string& text);

    /// Human-readable table.
    std::string to_table() const;
};

/// Runs every entry and recomputes the violation rate independently: each
/// emitted formula is re-checked against the rules from scratch rather than
/// trusting the loop's own verdicts.
BenchmarkReport run_benchmark(AgentClient& client, const std::vector<TaskEntry>& dataset,
                              const RuleSet& rules, const PipelineConfig& config,
                              std::vector<PipelineResult>* results = nullptr);

/// Extraction + alignment + a single inclusion round (no repair): how many
/// initial formulas are compliant out of the box.
BenchmarkReport initial_violation_survey(AgentClient& client,
                                         const std::vector<TaskEntry>& dataset,
                                         const RuleSet& rules, const PipelineConfig& config);

/// Recheck used for the violation rate; exposed so the recheck itself is
/// testable against deliberately corrupted formulas.
bool recheck_compliance(const Formula& f, const RuleSet& rules);

}  // namespace ltlguard
