#include "ltlguard/pipeline.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ltlguard/syntax.hpp"

namespace ltlguard {

std::vector<TaskEntry> parse_dataset(const std::string& text) {
    std::vector<TaskEntry> entries;
    std::istringstream in(text);
    std::string line;
    TaskEntry current;
    std::string* block = nullptr;
    bool has_content = false;
    auto trim = [](const std::string& s) {
        auto b = s.find_first_not_of(" \t\r");
        auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto flush = [&]() {
        if (!has_content) return;
        current.id = trim(current.id);
        current.desired_task = trim(current.desired_task);
        current.environmental_info = trim(current.environmental_info);
        if (current.id.empty()) {
            throw std::invalid_argument("dataset entry without id");
        }
        if (current.desired_task.empty()) {
            throw std::invalid_argument("dataset entry '" + current.id + "' has an empty task");
        }
        entries.push_back(current);
        current = {};
        block = nullptr;
        has_content = false;
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string stripped = trim(line);
        if (stripped == "---") {
            flush();
            continue;
        }
        if (stripped.rfind("id:", 0) == 0) {
            current.id = stripped.substr(3);
            block = nullptr;
            has_content = true;
            continue;
        }
        if (stripped.rfind("task:", 0) == 0) {
            current.desired_task = stripped.substr(5);
            block = &current.desired_task;
            has_content = true;
            continue;
        }
        if (stripped.rfind("env:", 0) == 0) {
            current.environmental_info = stripped.substr(4);
            block = &current.environmental_info;
            has_content = true;
            continue;
        }
        if (block != nullptr && !stripped.empty()) {
            if (!block->empty()) *block += '\n';
            *block += stripped;
            has_content = true;
        }
    }
    flush();
    std::set<std::string> ids;
    for (const auto& entry : entries) {
        if (!ids.insert(entry.id).second) {
            throw std::invalid_argument("dataset: duplicate entry id '" + entry.id + "'");
        }
    }
    return entries;
}

std::vector<TaskEntry> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open dataset file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset(buffer.str());
}

std::string to_string(PipelineResult::Status status) {
    switch (status) {
        case PipelineResult::Status::Compliant: return "compliant";
        case PipelineResult::Status::NonOutput: return "non-output";
        case PipelineResult::Status::ExtractionFailed: return "extraction-failed";
    }
    return "unknown";
}

std::vector<std::string> build_ap_library(const RuleSet& rules) {
    if (rules.rules.empty()) {
        throw std::invalid_argument("build_ap_library: rule set must be non-empty");
    }
    std::set<std::string> aps;
    for (const Rule& rule : rules.rules) {
        for (const auto& ap : atomic_propositions(rule.formula)) aps.insert(ap);
    }
    return {aps.begin(), aps.end()};
}

namespace {

std::string summarize(const std::vector<RuleCheckResult>& verdicts) {
    std::string out;
    for (const auto& v : verdicts) {
        if (!out.empty()) out += "; ";
        out += v.rule_name + ": ";
        if (v.verdict.has_value()) {
            out += v.verdict->included() ? "included" : "not-included";
        } else {
            out += "error (" + v.error + ")";
        }
    }
    return out;
}

bool all_included(const std::vector<RuleCheckResult>& verdicts) {
    return std::all_of(verdicts.begin(), verdicts.end(), [](const RuleCheckResult& v) {
        return v.verdict.has_value() && v.verdict->included();
    });
}

const RuleCheckResult* repair_target(const std::vector<RuleCheckResult>& verdicts) {
    for (const auto& v : verdicts) {
        if (v.repair_target) return &v;
    }
    return nullptr;
}

}  // namespace

PipelineResult run(AgentClient& client, const TaskEntry& entry, const RuleSet& rules,
                   const PipelineConfig& config) {
    PipelineResult result;
    client.syntax_retry_bound = config.syntax_retry_bound;
    InclusionOptions inclusion_options;
    inclusion_options.minimize_counterexample = config.minimize_counterexamples;

    auto record = [&result, &client](int iteration, std::string phase, std::string formula,
                                     std::string rule_name, std::string verdict_summary) {
        TraceRecord r;
        r.iteration = iteration;
        r.phase = std::move(phase);
        r.formula = std::move(formula);
        r.rule_name = std::move(rule_name);
        r.verdict_summary = std::move(verdict_summary);
        r.agent_calls = client.drain_calls();
        result.trace.push_back(std::move(r));
    };

    Formula phi;
    try {
        phi = extract_ltl(client, entry.desired_task, entry.environmental_info);
        record(0, "extraction", render(phi), "", "");
    } catch (const std::exception& e) {
        record(0, "error", "", "", std::string("extraction failed: ") + e.what());
        result.status = PipelineResult::Status::ExtractionFailed;
        return result;
    }

    const std::vector<std::string> library = build_ap_library(rules);
    phi = align_aps(client, phi, library);
    record(0, "alignment", render(phi), "", "");
    // the aligned formula is a parsed value, so the operator check is a
    // formality here; revisions go through the same gate below
    record(0, "syntax-check", render(phi), "", "ok");

    std::vector<RuleCheckResult> verdicts =
        check_against_rules(phi, rules, config.parallel_rules, inclusion_options);
    record(0, "inclusion-check", render(phi), "", summarize(verdicts));

    int iteration = 0;
    while (!all_included(verdicts) && iteration < config.max_iterations) {
        ++iteration;
        const RuleCheckResult* target = repair_target(verdicts);
        if (target == nullptr) {
            // only engine errors remain; nothing to critique this round
            record(iteration, "error", render(phi), "",
                   "no repairable verdict: " + summarize(verdicts));
            continue;
        }
        const Rule* rule = nullptr;
        for (const Rule& r : rules.rules) {
            if (r.name == target->rule_name) rule = &r;
        }

        try {
            BuchiAutomaton a_phi = translate(phi);
            BuchiAutomaton a_rule = translate(rule->formula);
            std::string report = render_counterexample_report(*target->verdict, a_phi, a_rule);
            CriticGuidance guidance = critique(client, phi, rule->formula, a_phi, a_rule, report);
            record(iteration, "critique", render(phi), rule->name, "");

            Formula revised = revise(client, phi, guidance, entry.environmental_info);
            record(iteration, "revision", render(revised), rule->name, "");

            revised = align_aps(client, revised, library);
            record(iteration, "alignment", render(revised), "", "");
            record(iteration, "syntax-check", render(revised), "", "ok");
            phi = revised;
        } catch (const std::exception& e) {
            record(iteration, "error", render(phi), target->rule_name, e.what());
            continue;
        }

        verdicts = check_against_rules(phi, rules, config.parallel_rules, inclusion_options);
        record(iteration, "inclusion-check", render(phi), "", summarize(verdicts));
    }

    result.iterations_used = iteration;
    if (all_included(verdicts)) {
        result.status = PipelineResult::Status::Compliant;
        result.final_formula = phi;
    } else {
        result.status = PipelineResult::Status::NonOutput;
    }
    return result;
}

bool recheck_compliance(const Formula& f, const RuleSet& rules) {
    auto verdicts = check_against_rules(f, rules, /*parallel=*/false);
    return all_included(verdicts);
}

bool BenchmarkReport::operator==(const BenchmarkReport& other) const {
    if (entries.size() != other.entries.size() || output_count != other.output_count ||
        violation_rate != other.violation_rate || average_iterations != other.average_iterations) {
        return false;
    }
    for (std::size_t i = 0; i < entries.size(); ++i) {
        const EntrySummary& a = entries[i];
        const EntrySummary& b = other.entries[i];
        if (a.id != b.id || a.status != b.status || a.iterations_used != b.iterations_used ||
            a.final_formula != b.final_formula || a.rule_results != b.rule_results ||
            a.agent_calls != b.agent_calls || a.recheck_ok != b.recheck_ok) {
            return false;
        }
    }
    return true;
}

std::string BenchmarkReport::to_json() const {
    nlohmann::ordered_json j;
    j["entries"] = nlohmann::ordered_json::array();
    for (const EntrySummary& e : entries) {
        nlohmann::ordered_json je;
        je["id"] = e.id;
        je["status"] = e.status;
        je["iterations"] = e.iterations_used;
        if (e.final_formula.has_value()) {
            je["final_formula"] = *e.final_formula;
        } else {
            je["final_formula"] = nullptr;
        }
        je["rules"] = nlohmann::ordered_json::array();
        for (const auto& [name, included] : e.rule_results) {
            je["rules"].push_back({{"rule", name}, {"included", included}});
        }
        je["agent_calls"] = e.agent_calls;
        je["recheck_ok"] = e.recheck_ok;
        j["entries"].push_back(std::move(je));
    }
    j["output_count"] = output_count;
    j["violation_rate"] = violation_rate;
    j["average_iterations"] = average_iterations;
    return j.dump(2) + "\n";
}

BenchmarkReport BenchmarkReport::from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    BenchmarkReport report;
    for (const auto& je : j.at("entries")) {
        EntrySummary e;
        e.id = je.at("id").get<std::string>();
        e.status = je.at("status").get<std::string>();
        e.iterations_used = je.at("iterations").get<int>();
        if (!je.at("final_formula").is_null()) {
            e.final_formula = je.at("final_formula").get<std::string>();
        }
        for (const auto& jr : je.at("rules")) {
            e.rule_results.emplace_back(jr.at("rule").get<std::string>(),
                                        jr.at("included").get<bool>());
        }
        e.agent_calls = je.at("agent_calls").get<std::size_t>();
        e.recheck_ok = je.at("recheck_ok").get<bool>();
        report.entries.push_back(std::move(e));
    }
    report.output_count = j.at("output_count").get<int>();
    report.violation_rate = j.at("violation_rate").get<double>();
    report.average_iterations = j.at("average_iterations").get<double>();
    return report;
}

std::string BenchmarkReport::to_table() const {
    std::ostringstream out;
    out << "entry                 status             iters  recheck  formula\n";
    out << "--------------------------------------------------------------------------\n";
    for (const EntrySummary& e : entries) {
        std::string id = e.id.size() > 20 ? e.id.substr(0, 20) : e.id;
        out << id << std::string(22 - id.size(), ' ');
        out << e.status << std::string(e.status.size() < 19 ? 19 - e.status.size() : 1, ' ');
        std::string iters = std::to_string(e.iterations_used);
        out << iters << std::string(7 - iters.size(), ' ');
        out << (e.recheck_ok ? "ok" : "VIOLATION") << "       ";
        out << (e.final_formula.has_value() ? *e.final_formula : "-") << "\n";
    }
    out << "--------------------------------------------------------------------------\n";
    out << "outputs: " << output_count << "  violation rate: " << violation_rate
        << "  average iterations: " << average_iterations << "\n";
    return out.str();
}

namespace {

EntrySummary summarize_entry(const TaskEntry& entry, const PipelineResult& result,
                             const RuleSet& rules) {
    EntrySummary summary;
    summary.id = entry.id;
    summary.status = to_string(result.status);
    summary.iterations_used = result.iterations_used;
    for (const TraceRecord& r : result.trace) summary.agent_calls += r.agent_calls.size();
    if (result.final_formula.has_value()) {
        summary.final_formula = render(*result.final_formula);
        // Independent post-hoc verdicts; never trust the loop's own state.
        auto verdicts = check_against_rules(*result.final_formula, rules);
        for (const auto& v : verdicts) {
            summary.rule_results.emplace_back(v.rule_name,
                                              v.verdict.has_value() && v.verdict->included());
        }
        summary.recheck_ok = all_included(verdicts);
    }
    return summary;
}

BenchmarkReport aggregate(std::vector<EntrySummary> summaries) {
    BenchmarkReport report;
    report.entries = std::move(summaries);
    long long iterations_total = 0;
    int violations = 0;
    for (const EntrySummary& e : report.entries) {
        if (e.status == "compliant") {
            ++report.output_count;
            iterations_total += e.iterations_used;
            if (!e.recheck_ok) ++violations;
        }
    }
    if (report.output_count > 0) {
        report.violation_rate =
            static_cast<double>(violations) / static_cast<double>(report.output_count);
        report.average_iterations =
            static_cast<double>(iterations_total) / static_cast<double>(report.output_count);
    }
    return report;
}

}  // namespace

BenchmarkReport run_benchmark(AgentClient& client, const std::vector<TaskEntry>& dataset,
                              const RuleSet& rules, const PipelineConfig& config,
                              std::vector<PipelineResult>* results) {
    if (dataset.empty()) {
        throw std::invalid_argument("run_benchmark: dataset must be non-empty");
    }
    std::vector<EntrySummary> summaries;
    summaries.reserve(dataset.size());
    for (const TaskEntry& entry : dataset) {
        PipelineResult result = run(client, entry, rules, config);
        summaries.push_back(summarize_entry(entry, result, rules));
        if (results != nullptr) results->push_back(std::move(result));
    }
    return aggregate(std::move(summaries));
}

BenchmarkReport initial_violation_survey(AgentClient& client,
                                         const std::vector<TaskEntry>& dataset,
                                         const RuleSet& rules, const PipelineConfig& config) {
    if (dataset.empty()) {
        throw std::invalid_argument("initial_violation_survey: dataset must be non-empty");
    }
    std::vector<EntrySummary> summaries;
    for (const TaskEntry& entry : dataset) {
        client.syntax_retry_bound = config.syntax_retry_bound;
        PipelineResult result;
        try {
            Formula phi = extract_ltl(client, entry.desired_task, entry.environmental_info);
            phi = align_aps(client, phi, build_ap_library(rules));
            auto verdicts = check_against_rules(phi, rules, config.parallel_rules);
            result.iterations_used = 0;
            if (all_included(verdicts)) {
                result.status = PipelineResult::Status::Compliant;
                result.final_formula = phi;
            } else {
                result.status = PipelineResult::Status::NonOutput;
            }
        } catch (const std::exception&) {
            result.status = PipelineResult::Status::ExtractionFailed;
        }
        client.drain_calls();
        summaries.push_back(summarize_entry(entry, result, rules));
    }
    return aggregate(std::move(summaries));
}

}  // namespace ltlguard
