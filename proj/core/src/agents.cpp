#include "ltlguard/agents.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <json.hpp>

#ifndef LTLGUARD_DEFAULT_PROMPT_DIR
#define LTLGUARD_DEFAULT_PROMPT_DIR ""
#endif

namespace ltlguard {

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw AgentError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::int64_t rough_token_count(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    std::int64_t count = 0;
    while (in >> word) ++count;
    return count;
}

}  // namespace

const std::vector<std::string>& TemplateRegistry::template_ids() {
    static const std::vector<std::string> ids = {
        "nl-to-ltl",   "ltl-to-nl",       "ap-matching",
        "syntax-correction", "critic-analysis", "ltl-revision",
    };
    return ids;
}

TemplateRegistry TemplateRegistry::load(const std::string& directory) {
    std::string dir = directory;
    if (dir.empty()) {
        if (const char* env = std::getenv("LTLGUARD_PROMPT_DIR"); env != nullptr && *env != '\0') {
            dir = env;
        } else {
            dir = LTLGUARD_DEFAULT_PROMPT_DIR;
        }
    }
    if (dir.empty()) {
        throw AgentError("no prompt template directory configured");
    }
    TemplateRegistry registry;
    for (const auto& id : template_ids()) {
        registry.templates_[id] = read_file(dir + "/" + id + ".txt");
    }
    return registry;
}

const std::string& TemplateRegistry::raw(const std::string& template_id) const {
    auto it = templates_.find(template_id);
    if (it == templates_.end()) {
        throw AgentError("unknown template id: " + template_id);
    }
    return it->second;
}

std::string TemplateRegistry::render(const std::string& template_id,
                                     const std::map<std::string, std::string>& bindings) const {
    const std::string& text = raw(template_id);
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '{') {
            out += text[i++];
            continue;
        }
        std::size_t close = text.find('}', i + 1);
        if (close == std::string::npos) {
            out += text[i++];
            continue;
        }
        std::string name = text.substr(i + 1, close - i - 1);
        bool identifier = !name.empty() &&
                          std::all_of(name.begin(), name.end(), [](char c) {
                              return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
                          });
        if (!identifier) {
            out += text[i++];
            continue;
        }
        auto it = bindings.find(name);
        if (it == bindings.end()) {
            throw AgentError("template '" + template_id + "': unbound placeholder {" + name + "}");
        }
        out += it->second;
        i = close + 1;
    }
    return out;
}

ScriptedBackend::ScriptedBackend(std::vector<Entry> entries) : entries_(std::move(entries)) {}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_text(const std::string& text) {
    std::vector<Entry> entries;
    std::istringstream in(text);
    std::string line;
    Entry current;
    bool open = false;
    auto flush = [&]() {
        if (!open) return;
        // trim trailing blank lines of the response block
        while (!current.response.empty() &&
               (current.response.back() == '\n' || current.response.back() == '\r')) {
            current.response.pop_back();
        }
        entries.push_back(current);
        current = {};
    };
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.rfind(">>> ", 0) == 0) {
            flush();
            current.template_id = line.substr(4);
            current.response.clear();
            open = true;
            continue;
        }
        if (open) {
            current.response += line;
            current.response += '\n';
        }
    }
    flush();
    return std::make_shared<ScriptedBackend>(std::move(entries));
}

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::string& path) {
    return from_text(read_file(path));
}

AgentResponse ScriptedBackend::complete(const AgentRequest& request, const std::string& prompt) {
    if (cursor_ >= entries_.size()) {
        throw AgentError("scripted transcript exhausted at request for template '" +
                         request.template_id + "'");
    }
    const Entry& entry = entries_[cursor_];
    if (entry.template_id != request.template_id) {
        throw AgentError("scripted transcript mismatch: expected '" + entry.template_id +
                         "', got request for '" + request.template_id + "'");
    }
    ++cursor_;
    AgentResponse response;
    response.text = entry.response;
    response.usage.input_tokens = rough_token_count(prompt);
    response.usage.output_tokens = rough_token_count(entry.response);
    response.backend_id = id();
    if (response.text.empty()) {
        throw AgentError("scripted transcript entry for '" + entry.template_id + "' is empty");
    }
    return response;
}

std::size_t ScriptedBackend::remaining() const {
    return entries_.size() - cursor_;
}

RemoteBackend::RemoteBackend(Config config) : config_(std::move(config)) {}

RemoteBackend::Config RemoteBackend::config_from_env() {
    Config config;
    auto get = [](const char* name) {
        const char* value = std::getenv(name);
        return value == nullptr ? std::string() : std::string(value);
    };
    config.endpoint = get("LTLGUARD_ENDPOINT");
    config.model = get("LTLGUARD_MODEL");
    config.token = get("LTLGUARD_TOKEN");
    std::string timeout = get("LTLGUARD_TIMEOUT_S");
    if (!timeout.empty()) config.timeout_seconds = std::stoi(timeout);
    if (config.endpoint.empty()) {
        throw AgentError("remote backend: LTLGUARD_ENDPOINT is not set");
    }
    if (config.token.empty()) {
        throw AgentError("remote backend: LTLGUARD_TOKEN is not set");
    }
    return config;
}

AgentResponse RemoteBackend::complete(const AgentRequest& request, const std::string& prompt) {
    // split endpoint into host part and path
    std::string url = config_.endpoint;
    std::string path = "/";
    auto scheme_end = url.find("://");
    std::size_t path_start =
        url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start != std::string::npos) {
        path = url.substr(path_start);
        url = url.substr(0, path_start);
    }

    nlohmann::json body = {
        {"model", config_.model},
        {"messages", nlohmann::json::array({
                         nlohmann::json{{"role", "user"}, {"content", prompt}},
                     })},
        {"temperature", request.temperature},
        {"max_tokens", request.max_output_tokens},
    };
    const std::string payload = body.dump();

    std::string last_error;
    for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
        if (attempt > 0) {
            std::this_thread::sleep_for(std::chrono::milliseconds(250 << (attempt - 1)));
        }
        httplib::Client client(url);
        client.set_connection_timeout(config_.timeout_seconds);
        client.set_read_timeout(config_.timeout_seconds);
        httplib::Headers headers = {{"Authorization", "Bearer " + config_.token}};
        auto result = client.Post(path, headers, payload, "application/json");
        if (!result) {
            last_error = "transport error: " + httplib::to_string(result.error());
            continue;
        }
        if (result->status >= 500) {
            last_error = "server error: HTTP " + std::to_string(result->status);
            continue;
        }
        if (result->status != 200) {
            throw AgentError("remote backend: HTTP " + std::to_string(result->status) + ": " +
                             result->body);
        }
        nlohmann::json reply = nlohmann::json::parse(result->body, nullptr, false);
        if (reply.is_discarded()) {
            throw AgentError("remote backend: response is not JSON");
        }
        AgentResponse response;
        // first text segment of the reply
        if (reply.contains("choices") && !reply["choices"].empty()) {
            const auto& choice = reply["choices"][0];
            if (choice.contains("message") && choice["message"].contains("content")) {
                response.text = choice["message"]["content"].get<std::string>();
            } else if (choice.contains("text")) {
                response.text = choice["text"].get<std::string>();
            }
        }
        if (response.text.empty()) {
            throw AgentError("remote backend: reply carries no text segment");
        }
        if (reply.contains("usage")) {
            response.usage.input_tokens = reply["usage"].value("prompt_tokens", 0);
            response.usage.output_tokens = reply["usage"].value("completion_tokens", 0);
        } else {
            response.usage.input_tokens = rough_token_count(prompt);
            response.usage.output_tokens = rough_token_count(response.text);
        }
        response.backend_id = id();
        return response;
    }
    throw AgentError("remote backend: giving up after " + std::to_string(config_.max_retries + 1) +
                     " attempts (" + last_error + ")");
}

AgentClient::AgentClient(TemplateRegistry templates, std::shared_ptr<AgentBackend> backend)
    : templates_(std::move(templates)), backend_(std::move(backend)) {
    if (backend_ == nullptr) throw AgentError("agent client needs a backend");
}

AgentResponse AgentClient::complete(const AgentRequest& request) {
    std::string prompt = templates_.render(request.template_id, request.bindings);
    AgentResponse response = backend_->complete(request, prompt);
    pending_calls_.push_back({request.template_id, response.text});
    ++total_calls_;
    return response;
}

std::vector<AgentClient::CallRecord> AgentClient::drain_calls() {
    std::vector<CallRecord> out;
    out.swap(pending_calls_);
    return out;
}

std::string CriticGuidance::rendered() const {
    std::string out = "Counterexample_Analysis: " + counterexample_analysis;
    out += "\nProposed_Adjustments: " + proposed_adjustments;
    out += "\nGeneral_Guidance: " + general_guidance;
    return out;
}

std::string sanitize_reply(const std::string& reply) {
    std::string text = reply;
    // strip markdown code fences
    static const std::regex fence(R"(```[a-zA-Z]*\n?)");
    text = std::regex_replace(text, fence, "");
    // collapse `name = value` chains into underscore atoms
    static const std::regex eq_chain(
        R"(([A-Za-z_][A-Za-z0-9_]*)[ \t]*=[ \t]*([A-Za-z_][A-Za-z0-9_]*))");
    while (std::regex_search(text, eq_chain)) {
        text = std::regex_replace(text, eq_chain, "$1_$2", std::regex_constants::format_first_only);
    }
    auto begin = text.find_first_not_of(" \t\r\n");
    auto end = text.find_last_not_of(" \t\r\n");
    if (begin == std::string::npos) return "";
    return text.substr(begin, end - begin + 1);
}

namespace {

AgentRequest make_request(AgentRole role, std::string template_id,
                          std::map<std::string, std::string> bindings) {
    AgentRequest request;
    request.role = role;
    request.template_id = std::move(template_id);
    request.bindings = std::move(bindings);
    return request;
}

// One generation step that is expected to come back as a parseable formula;
// broken replies go through the syntax-correction loop.
Formula parse_with_correction(AgentClient& client, const std::string& reply_text) {
    std::string text = sanitize_reply(reply_text);
    ParseResult parsed = parse(text);
    if (parsed.ok()) return *parsed.formula;
    return correct_syntax(client, text, parsed.diagnostics);
}

}  // namespace

Formula extract_ltl(AgentClient& client, const std::string& task, const std::string& env) {
    if (task.empty()) throw std::invalid_argument("extract_ltl: task must be non-empty");

    std::string input = task;
    if (!env.empty()) {
        input += "\n\nEnvironmental Information:\n" + env;
    }

    // step 1: task to LTL-1 (kept as raw text; it is only verbalized)
    auto ltl1 = client.complete(make_request(AgentRole::UserLlm, "nl-to-ltl", {{"nl", input}}));
    // step 2: LTL-1 to NL-1
    auto nl1 = client.complete(make_request(AgentRole::UserLlm, "ltl-to-nl", {{"ltl", ltl1.text}}));
    // step 3: NL-1 to LTL-2
    auto ltl2 =
        client.complete(make_request(AgentRole::UserLlm, "nl-to-ltl", {{"nl", nl1.text}}));

    // step 4: local syntax check with a bounded correction loop
    std::string ltl2_text = sanitize_reply(ltl2.text);
    {
        ParseResult parsed = parse(ltl2_text);
        if (!parsed.ok()) {
            Formula fixed = correct_syntax(client, ltl2_text, parsed.diagnostics);
            ltl2_text = render(fixed);
        }
    }

    // step 5: LTL-2 to NL-2
    auto nl2 =
        client.complete(make_request(AgentRole::UserLlm, "ltl-to-nl", {{"ltl", ltl2_text}}));
    // step 6: NL-2 to the final formula
    auto final_reply =
        client.complete(make_request(AgentRole::UserLlm, "nl-to-ltl", {{"nl", nl2.text}}));
    return parse_with_correction(client, final_reply.text);
}

namespace {

std::vector<std::string> underscore_tokens(const std::string& name) {
    std::vector<std::string> tokens;
    std::string current;
    for (char c : name) {
        if (c == '_') {
            if (!current.empty()) tokens.push_back(current);
            current.clear();
        } else {
            current += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        }
    }
    if (!current.empty()) tokens.push_back(current);
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

std::size_t levenshtein(const std::string& a, const std::string& b) {
    std::vector<std::size_t> row(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        std::size_t diagonal = row[0];
        row[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            std::size_t previous = row[j];
            std::size_t cost = a[i - 1] == b[j - 1] ? 0 : 1;
            row[j] = std::min({row[j] + 1, row[j - 1] + 1, diagonal + cost});
            diagonal = previous;
        }
    }
    return row[b.size()];
}

std::string lowercased(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

constexpr double kAlignmentThreshold = 0.6;

}  // namespace

double ap_similarity(const std::string& a, const std::string& b) {
    std::string la = lowercased(a);
    std::string lb = lowercased(b);
    double lev = 0.0;
    std::size_t longest = std::max(la.size(), lb.size());
    if (longest > 0) {
        lev = 1.0 - static_cast<double>(levenshtein(la, lb)) / static_cast<double>(longest);
    }
    auto ta = underscore_tokens(a);
    auto tb = underscore_tokens(b);
    std::vector<std::string> both;
    std::set_intersection(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(both));
    std::vector<std::string> all;
    std::set_union(ta.begin(), ta.end(), tb.begin(), tb.end(), std::back_inserter(all));
    double jaccard =
        all.empty() ? 0.0 : static_cast<double>(both.size()) / static_cast<double>(all.size());
    return std::max(lev, jaccard);
}

Formula align_aps(const Formula& f, const std::vector<std::string>& library) {
    if (library.empty()) throw std::invalid_argument("align_aps: library must be non-empty");
    std::map<std::string, std::string> substitution;
    for (const std::string& atom : atomic_propositions(f)) {
        std::string best;
        double best_score = -1.0;
        for (const std::string& candidate : library) {
            double score = ap_similarity(atom, candidate);
            if (score > best_score || (score == best_score && candidate < best)) {
                best_score = score;
                best = candidate;
            }
        }
        if (best_score >= kAlignmentThreshold && best != atom) {
            substitution[atom] = best;
        }
    }
    return rewrite_aps(f, substitution);
}

namespace {

// Checks that `g` is `f` with atoms renamed consistently into
// library + original atoms; the shape must be identical.
bool rename_only(const Formula& f, const Formula& g,
                 const std::vector<std::string>& library,
                 std::map<std::string, std::string>& mapping) {
    if (f.op() != g.op()) {
        // allowed only when both are atoms, which op() inequality rules out
        return false;
    }
    if (f.op() == Op::Atom) {
        auto it = mapping.find(f.name());
        if (it != mapping.end()) return it->second == g.name();
        mapping[f.name()] = g.name();
        return true;
    }
    switch (f.op()) {
        case Op::True:
        case Op::False:
            return true;
        default:
            break;
    }
    if (!rename_only(f.left(), g.left(), library, mapping)) return false;
    if (is_binary(f.op())) return rename_only(f.right(), g.right(), library, mapping);
    return true;
}

bool guardrail_holds(const Formula& f, const Formula& g, const std::vector<std::string>& library) {
    std::map<std::string, std::string> mapping;
    if (!rename_only(f, g, library, mapping)) return false;
    std::set<std::string> allowed(library.begin(), library.end());
    for (const std::string& atom : atomic_propositions(f)) allowed.insert(atom);
    for (const auto& [from, to] : mapping) {
        if (!allowed.count(to)) return false;
    }
    return true;
}

std::string render_library(const std::vector<std::string>& library) {
    std::string out = "[";
    for (std::size_t i = 0; i < library.size(); ++i) {
        if (i > 0) out += ", ";
        out += library[i];
    }
    out += "]";
    return out;
}

}  // namespace

Formula align_aps(AgentClient& client, const Formula& f, const std::vector<std::string>& library) {
    if (library.empty()) throw std::invalid_argument("align_aps: library must be non-empty");
    if (client.scripted_backend()) {
        return align_aps(f, library);
    }
    std::map<std::string, std::string> bindings = {
        {"LTL", render(f)},
        {"atomic_proposition_library", render_library(library)},
    };
    for (int attempt = 0; attempt < 2; ++attempt) {
        AgentResponse reply;
        try {
            reply = client.complete(make_request(AgentRole::Aligner, "ap-matching", bindings));
        } catch (const AgentError&) {
            break;  // fall back to the similarity mode
        }
        ParseResult parsed = parse(sanitize_reply(reply.text));
        if (parsed.ok() && guardrail_holds(f, *parsed.formula, library)) {
            return *parsed.formula;
        }
    }
    return align_aps(f, library);
}

Formula correct_syntax(AgentClient& client, std::string ltl_text,
                       std::vector<SyntaxDiagnostic> diagnostics) {
    if (diagnostics.empty()) {
        throw std::invalid_argument("correct_syntax: diagnostics must be non-empty");
    }
    for (int attempt = 0; attempt < client.syntax_retry_bound; ++attempt) {
        auto reply = client.complete(make_request(
            AgentRole::UserLlm, "syntax-correction",
            {{"syntactic_check_output", render_diagnostics(diagnostics)},
             {"ltl_formula", ltl_text}}));
        ltl_text = sanitize_reply(reply.text);
        ParseResult parsed = parse(ltl_text);
        if (parsed.ok()) return *parsed.formula;
        diagnostics = parsed.diagnostics;
    }
    throw AgentError("correction-failed: formula still malformed after " +
                     std::to_string(client.syntax_retry_bound) + " rounds");
}

namespace {

// Locates a section header (optionally numbered, optionally followed by a
// colon) and returns the text up to the next header.
std::optional<std::string> cut_section(const std::string& text, const std::string& header,
                                       const std::vector<std::string>& all_headers) {
    auto find_header = [&text](const std::string& name, std::size_t from) {
        return text.find(name, from);
    };
    std::size_t at = find_header(header, 0);
    if (at == std::string::npos) return std::nullopt;
    std::size_t begin = at + header.size();
    if (begin < text.size() && text[begin] == ':') ++begin;
    std::size_t end = text.size();
    for (const auto& other : all_headers) {
        if (other == header) continue;
        std::size_t pos = find_header(other, begin);
        if (pos != std::string::npos) end = std::min(end, pos);
    }
    std::string section = text.substr(begin, end - begin);
    // strip a trailing section number such as "2." left before the next header
    while (!section.empty() &&
           (std::isspace(static_cast<unsigned char>(section.back())) ||
            std::isdigit(static_cast<unsigned char>(section.back())) || section.back() == '.')) {
        section.pop_back();
    }
    auto start = section.find_first_not_of(" \t\r\n");
    if (start == std::string::npos) return std::nullopt;
    return section.substr(start);
}

std::optional<CriticGuidance> parse_guidance(const std::string& text) {
    static const std::vector<std::string> headers = {
        "Counterexample_Analysis", "Proposed_Adjustments", "General_Guidance"};
    CriticGuidance guidance;
    auto analysis = cut_section(text, headers[0], headers);
    auto adjustments = cut_section(text, headers[1], headers);
    auto general = cut_section(text, headers[2], headers);
    if (!analysis || !adjustments || !general) return std::nullopt;
    guidance.counterexample_analysis = *analysis;
    guidance.proposed_adjustments = *adjustments;
    guidance.general_guidance = *general;
    return guidance;
}

}  // namespace

CriticGuidance critique(AgentClient& client, const Formula& phi, const Formula& rule,
                        const BuchiAutomaton& a1, const BuchiAutomaton& a2,
                        const std::string& report) {
    std::map<std::string, std::string> bindings = {
        {"LTL", render(phi)},           {"input_BA", to_text(a1)},
        {"comparison_BA", to_text(a2)}, {"checking_output", report},
        {"comparison_LTL", render(rule)},
    };
    for (int attempt = 0; attempt < 2; ++attempt) {
        auto reply = client.complete(make_request(AgentRole::Critic, "critic-analysis", bindings));
        auto guidance = parse_guidance(reply.text);
        if (guidance.has_value()) return *guidance;
    }
    throw AgentError("guidance-malformed: critic reply is missing sections after re-ask");
}

Formula revise(AgentClient& client, const Formula& phi, const CriticGuidance& guidance,
               const std::string& env) {
    std::string understanding = guidance.rendered();
    if (!env.empty()) {
        understanding += "\n\nEnvironmental Information:\n" + env;
    }
    auto reply = client.complete(make_request(
        AgentRole::UserLlm, "ltl-revision",
        {{"LTL", render(phi)}, {"understanding_output", understanding}}));
    std::string text = sanitize_reply(reply.text);
    ParseResult parsed = parse(text);
    if (parsed.ok()) return *parsed.formula;
    try {
        return correct_syntax(client, text, parsed.diagnostics);
    } catch (const AgentError&) {
        throw AgentError("revision-failed: revised formula is unparseable");
    }
}

}  // namespace ltlguard
