// ltlguard command line: every pipeline stage is exposed on its own next to
// the full loop, so each piece can be driven and inspected from a shell.
//
// Exit codes: 0 success/compliant, 1 domain negative (syntax errors found,
// not included, non-output), 2 usage or I/O error, 3 engine internal error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ltlguard/agents.hpp"
#include "ltlguard/inclusion.hpp"
#include "ltlguard/pipeline.hpp"
#include "ltlguard/simulation.hpp"
#include "ltlguard/syntax.hpp"
#include "ltlguard/translate.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomainNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitEngine = 3;

std::string read_file_or_die(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw CLI::ValidationError("cannot open file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Arguments that name formulas accept either literal LTL text or a path to a
// file holding it.
std::string formula_text(const std::string& arg) {
    if (std::filesystem::exists(arg) && std::filesystem::is_regular_file(arg)) {
        return read_file_or_die(arg);
    }
    return arg;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write file: " + path);
    }
    out << content;
}

struct CommonPipelineFlags {
    std::string dataset_path;
    std::string rules_path;
    int max_iters = 25;
    std::string backend = "auto";
    std::string transcript_path;
    bool parallel = false;
    std::uint64_t seed = 0;
    std::string out_path = "results.json";
};

void add_pipeline_flags(CLI::App* cmd, CommonPipelineFlags& flags) {
    cmd->add_option("dataset", flags.dataset_path, "dataset file")->required();
    cmd->add_option("rules", flags.rules_path, "rule file")->required();
    cmd->add_option("--max-iters", flags.max_iters, "iteration cap")->check(CLI::PositiveNumber);
    cmd->add_option("--backend", flags.backend, "agent backend: auto|scripted|remote")
        ->check(CLI::IsMember({"auto", "scripted", "remote"}));
    cmd->add_option("--transcript", flags.transcript_path, "scripted transcript file");
    cmd->add_flag("--parallel", flags.parallel, "check rules concurrently");
    cmd->add_option("--seed", flags.seed, "random seed (recorded in the config)");
    cmd->add_option("--out", flags.out_path, "results JSON path");
}

ltlguard::AgentClient make_client(const CommonPipelineFlags& flags) {
    using namespace ltlguard;
    std::string backend = flags.backend;
    if (backend == "auto") {
        backend = flags.transcript_path.empty() ? "remote" : "scripted";
    }
    TemplateRegistry templates = TemplateRegistry::load();
    if (backend == "scripted") {
        if (flags.transcript_path.empty()) {
            throw CLI::ValidationError("scripted backend requires --transcript");
        }
        return AgentClient(std::move(templates),
                           ScriptedBackend::from_file(flags.transcript_path));
    }
    // configuration problems (missing credential) surface before any work
    auto config = RemoteBackend::config_from_env();
    return AgentClient(std::move(templates), std::make_shared<RemoteBackend>(config));
}

ltlguard::PipelineConfig make_config(const CommonPipelineFlags& flags) {
    ltlguard::PipelineConfig config;
    config.max_iterations = flags.max_iters;
    config.parallel_rules = flags.parallel;
    config.random_seed = flags.seed;
    config.backend = flags.backend;
    return config;
}

int cmd_parse(const std::string& input, bool check_only) {
    using namespace ltlguard;
    ParseResult result = parse(input);
    if (!result.ok()) {
        std::cout << render_diagnostics(result.diagnostics);
        return kExitDomainNegative;
    }
    if (check_only) {
        std::cout << "ok\n";
    } else {
        std::cout << render(*result.formula) << "\n";
    }
    return kExitOk;
}

int cmd_translate(const std::string& input, const std::string& out_path,
                  const std::string& dot_path, bool prune) {
    using namespace ltlguard;
    ParseResult result = parse(input);
    if (!result.ok()) {
        std::cout << render_diagnostics(result.diagnostics);
        return kExitDomainNegative;
    }
    BuchiAutomaton automaton = translate(*result.formula);
    if (prune) automaton = prune_with_simulation(automaton);
    if (!dot_path.empty()) write_file(dot_path, to_dot(automaton));
    if (!out_path.empty()) {
        write_file(out_path, to_text(automaton));
    } else {
        std::cout << to_text(automaton);
    }
    return kExitOk;
}

int cmd_include(const std::string& phi_text, const std::string& rules_path,
                const std::string& report_path, const std::string& dot_dir, bool no_minimize) {
    using namespace ltlguard;
    ParseResult parsed = parse(phi_text);
    if (!parsed.ok()) {
        std::cout << render_diagnostics(parsed.diagnostics);
        return kExitUsage;
    }
    Formula phi = *parsed.formula;
    RuleSet rules = RuleSet::from_file(rules_path);
    if (rules.rules.empty()) {
        throw CLI::ValidationError("rule file contains no rules");
    }
    InclusionOptions options;
    options.minimize_counterexample = !no_minimize;

    if (!dot_dir.empty()) {
        std::filesystem::create_directories(dot_dir);
        write_file(dot_dir + "/phi.dot", to_dot(translate(phi)));
    }

    bool all_included = true;
    std::string report_text;
    for (const Rule& rule : rules.rules) {
        InclusionVerdict verdict = check_inclusion(phi, rule.formula, options);
        std::string prefix = rules.rules.size() > 1 ? "[" + rule.name + "] " : "";
        if (verdict.included()) {
            std::cout << prefix << "Included.\n";
        } else {
            all_included = false;
            BuchiAutomaton a_phi = translate(phi);
            BuchiAutomaton a_rule = translate(rule.formula);
            std::string report = render_counterexample_report(verdict, a_phi, a_rule);
            if (!prefix.empty()) std::cout << prefix << "\n";
            std::cout << report;
            report_text += report;
        }
        if (!dot_dir.empty()) {
            write_file(dot_dir + "/" + rule.name + ".dot", to_dot(translate(rule.formula)));
            write_file(dot_dir + "/product_" + rule.name + ".dot",
                       to_dot(product(translate(phi),
                                      translate(to_nnf(Formula::Not(rule.formula))))));
        }
    }
    if (!report_path.empty()) write_file(report_path, report_text);
    return all_included ? kExitOk : kExitDomainNegative;
}

int cmd_path(const std::string& a_arg, const std::string& b_arg, std::size_t maxdepth) {
    using namespace ltlguard;
    auto load_automaton = [](const std::string& arg) {
        if (std::filesystem::exists(arg) && arg.size() > 4 &&
            arg.substr(arg.size() - 4) == ".aut") {
            return from_text(read_file_or_die(arg));
        }
        return translate(parse_or_throw(formula_text(arg)));
    };
    BuchiAutomaton a1 = load_automaton(a_arg);
    BuchiAutomaton a2 = load_automaton(b_arg);
    std::tie(a1, a2) = unify_alphabets(a1, a2);
    if (maxdepth == 0) {
        maxdepth = static_cast<std::size_t>(a1.state_count) *
                   static_cast<std::size_t>(a2.state_count);
    }
    InclusionStats stats;
    auto path = extract_divergence_path(a1, a2, maxdepth, &stats);
    if (!path.has_value()) {
        std::cout << "No divergence within depth " << maxdepth << " (" << stats.expanded_pairs
                  << " pairs expanded).\n";
        return kExitDomainNegative;
    }
    for (const auto& step : path->steps) {
        std::cout << "(" << step.pair.first << "," << step.pair.second << ") --"
                  << symbol_literals(step.symbol, a1.alphabet) << "--> ";
    }
    std::cout << "(" << path->terminal_pair.first << "," << path->terminal_pair.second << ")\n";
    std::cout << "stuck on symbol: " << symbol_literals(path->failing_symbol, a1.alphabet)
              << "\n";
    return kExitOk;
}

int cmd_run(const CommonPipelineFlags& flags, bool survey_mode, bool bench_mode) {
    using namespace ltlguard;
    auto dataset = load_dataset(flags.dataset_path);
    RuleSet rules = RuleSet::from_file(flags.rules_path);
    AgentClient client = make_client(flags);
    PipelineConfig config = make_config(flags);

    BenchmarkReport report;
    if (survey_mode) {
        report = initial_violation_survey(client, dataset, rules, config);
    } else {
        report = run_benchmark(client, dataset, rules, config);
    }
    std::cout << report.to_table();
    if (!flags.out_path.empty()) {
        write_file(flags.out_path, report.to_json());
    }
    if (bench_mode || survey_mode) return kExitOk;
    bool all_compliant = true;
    for (const auto& entry : report.entries) {
        if (entry.status != "compliant") all_compliant = false;
    }
    return all_compliant ? kExitOk : kExitDomainNegative;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"LTL safety-compliance toolkit"};
    app.require_subcommand(1);

    std::string parse_input, parse_file;
    auto* parse_cmd = app.add_subcommand("parse", "parse a formula and print it canonically");
    parse_cmd->add_option("formula", parse_input, "LTL text");
    parse_cmd->add_option("-f,--file", parse_file, "read the formula from a file");

    std::string check_input, check_file;
    auto* check_cmd = app.add_subcommand("check-syntax", "run the syntactic check only");
    check_cmd->add_option("formula", check_input, "LTL text");
    check_cmd->add_option("-f,--file", check_file, "read the formula from a file");

    std::string translate_input, translate_out, translate_dot;
    bool translate_prune = false;
    auto* translate_cmd = app.add_subcommand("translate", "translate a formula to an automaton");
    translate_cmd->add_option("formula", translate_input, "LTL text or file")->required();
    translate_cmd->add_option("--out", translate_out, "write the automaton text format here");
    translate_cmd->add_option("--dot", translate_dot, "write a DOT rendering here");
    translate_cmd->add_flag("--prune", translate_prune, "quotient by mutual simulation");

    std::string include_phi, include_rules, include_report, include_dot_dir;
    bool include_no_minimize = false;
    auto* include_cmd = app.add_subcommand("include", "check a formula against a rule file");
    include_cmd->add_option("formula", include_phi, "LTL text or file")->required();
    include_cmd->add_option("rules", include_rules, "rule file")->required();
    include_cmd->add_option("--report", include_report, "also write the report to a file");
    include_cmd->add_option("--dot-dir", include_dot_dir, "write automata and products as DOT");
    include_cmd->add_flag("--no-minimize", include_no_minimize,
                          "keep the raw counterexample word");

    std::string path_a, path_b;
    std::size_t path_maxdepth = 0;
    auto* path_cmd = app.add_subcommand("path", "extract a divergence path between two automata");
    path_cmd->add_option("first", path_a, "LTL text/file or .aut file")->required();
    path_cmd->add_option("second", path_b, "LTL text/file or .aut file")->required();
    path_cmd->add_option("--maxdepth", path_maxdepth, "search depth (default: n1*n2)");

    CommonPipelineFlags run_flags, bench_flags, survey_flags;
    auto* run_cmd = app.add_subcommand("run", "full repair loop over a dataset");
    add_pipeline_flags(run_cmd, run_flags);
    auto* bench_cmd = app.add_subcommand("bench", "benchmark run with report");
    add_pipeline_flags(bench_cmd, bench_flags);
    auto* survey_cmd = app.add_subcommand("survey", "initial-translation compliance survey");
    add_pipeline_flags(survey_cmd, survey_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (parse_cmd->parsed()) {
            std::string input = parse_file.empty() ? parse_input : read_file_or_die(parse_file);
            if (input.empty() && parse_file.empty()) {
                std::cerr << "parse: provide LTL text or --file\n";
                return kExitUsage;
            }
            return cmd_parse(input, false);
        }
        if (check_cmd->parsed()) {
            std::string input = check_file.empty() ? check_input : read_file_or_die(check_file);
            if (input.empty() && check_file.empty()) {
                std::cerr << "check-syntax: provide LTL text or --file\n";
                return kExitUsage;
            }
            return cmd_parse(input, true);
        }
        if (translate_cmd->parsed()) {
            return cmd_translate(formula_text(translate_input), translate_out, translate_dot,
                                 translate_prune);
        }
        if (include_cmd->parsed()) {
            return cmd_include(formula_text(include_phi), include_rules, include_report,
                               include_dot_dir, include_no_minimize);
        }
        if (path_cmd->parsed()) {
            return cmd_path(path_a, path_b, path_maxdepth);
        }
        if (run_cmd->parsed()) return cmd_run(run_flags, false, false);
        if (bench_cmd->parsed()) return cmd_run(bench_flags, false, true);
        if (survey_cmd->parsed()) return cmd_run(survey_flags, true, false);
    } catch (const ltlguard::EngineError& e) {
        std::cerr << "engine error: " << e.what() << "\n";
        return kExitEngine;
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
