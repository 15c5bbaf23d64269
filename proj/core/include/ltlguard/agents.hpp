#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ltlguard/automaton.hpp"
#include "ltlguard/formula.hpp"
#include "ltlguard/syntax.hpp"

namespace ltlguard {

class AgentError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class AgentRole : std::uint8_t { UserLlm, Aligner, Critic };

struct AgentRequest {
    AgentRole role = AgentRole::UserLlm;
    std::string template_id;
    std::map<std::string, std::string> bindings;
    double temperature = 0.0;
    int max_output_tokens = 2048;
};

struct AgentUsage {
    std::int64_t input_tokens = 0;
    std::int64_t output_tokens = 0;
};

struct AgentResponse {
    std::string text;
    AgentUsage usage;
    std::string backend_id;
};

/// Loads the prompt template files and renders them with named bindings.
/// Rendering fails when a {placeholder} has no binding; with full bindings it
/// never leaves a residual placeholder behind.
class TemplateRegistry {
  public:
    /// Loads the six templates from a directory; falls back to the
    /// compiled-in default directory, then to $LTLGUARD_PROMPT_DIR.
    static TemplateRegistry load(const std::string& directory = "");

    static const std::vector<std::string>& template_ids();

    const std::string& raw(const std::string& template_id) const;
    std::string render(const std::string& template_id,
                       const std::map<std::string, std::string>& bindings) const;

  private:
    std::map<std::string, std::string> templates_;
};

class AgentBackend {
  public:
    virtual ~AgentBackend() = default;
    virtual AgentResponse complete(const AgentRequest& request, const std::string& prompt) = 0;
    virtual std::string id() const = 0;
    virtual bool scripted() const { return false; }
};

/// Deterministic test backend: replays a fixed transcript.  Entries are
/// consumed strictly in order; a request whose template id does not match the
/// head entry is an error, as is running past the end.
class ScriptedBackend : public AgentBackend {
  public:
    struct Entry {
        std::string template_id;
        std::string response;
    };

    explicit ScriptedBackend(std::vector<Entry> entries);

    /// Transcript file format: lines ">>> <template-id>" start an entry, the
    /// following lines up to the next header are the response.
    static std::shared_ptr<ScriptedBackend> from_text(const std::string& text);
    static std::shared_ptr<ScriptedBackend> from_file(const std::string& path);

    AgentResponse complete(const AgentRequest& request, const std::string& prompt) override;
    std::string id() const override { return "scripted"; }
    bool scripted() const override { return true; }
    std::size_t remaining() const;

  private:
    std::vector<Entry> entries_;
    std::size_t cursor_ = 0;
};

/// Remote chat-completion backend.  Configured through environment
/// variables: LTLGUARD_ENDPOINT (e.g. http://host:port/v1/chat/completions),
/// LTLGUARD_MODEL, LTLGUARD_TOKEN and LTLGUARD_TIMEOUT_S.  Transient
/// transport failures are retried with exponential backoff.
class RemoteBackend : public AgentBackend {
  public:
    struct Config {
        std::string endpoint;
        std::string model;
        std::string token;
        int timeout_seconds = 60;
        int max_retries = 3;
    };

    explicit RemoteBackend(Config config);

    /// Reads the configuration from the environment; throws AgentError when
    /// the endpoint or credential is missing.
    static Config config_from_env();

    AgentResponse complete(const AgentRequest& request, const std::string& prompt) override;
    std::string id() const override { return "remote:" + config_.model; }

  private:
    Config config_;
};

/// One agent endpoint shared by the User LLM, the aligner and the critic:
/// renders the template, dispatches to the backend and keeps a log of every
/// call for the pipeline trace.
class AgentClient {
  public:
    struct CallRecord {
        std::string template_id;
        std::string response;
    };

    AgentClient(TemplateRegistry templates, std::shared_ptr<AgentBackend> backend);

    AgentResponse complete(const AgentRequest& request);
    bool scripted_backend() const { return backend_->scripted(); }

    /// Calls made since the last drain, in order.
    std::vector<CallRecord> drain_calls();
    std::size_t total_calls() const { return total_calls_; }

    int syntax_retry_bound = 3;

  private:
    TemplateRegistry templates_;
    std::shared_ptr<AgentBackend> backend_;
    std::vector<CallRecord> pending_calls_;
    std::size_t total_calls_ = 0;
};

/// Critic output, split into its three mandatory sections.
struct CriticGuidance {
    std::string counterexample_analysis;
    std::string proposed_adjustments;
    std::string general_guidance;

    std::string rendered() const;
};

/// Cleans an agent reply before parsing: strips code fences and surrounding
/// noise and rewrites `name = value` chains into single atoms
/// (location = start becomes location_start), since such expressions have no
/// grammar of their own.
std::string sanitize_reply(const std::string& reply);

/// Six-step extraction: task to LTL-1, LTL-1 to NL-1, NL-1 to LTL-2, local
/// syntax check with bounded correction rounds, LTL-2 to NL-2, NL-2 to the
/// final formula.  Exactly six generation calls when the syntax check passes
/// on the first try.
Formula extract_ltl(AgentClient& client, const std::string& task, const std::string& env);

/// Similarity-based AP alignment (also the scripted mock): every atom is
/// renamed to the best-matching library entry when the match is strong
/// enough, where similarity is the larger of normalized Levenshtein on the
/// lowercased names and Jaccard overlap of the underscore token sets.
Formula align_aps(const Formula& f, const std::vector<std::string>& library);

/// Remote alignment with a local guardrail: the reply must be the input
/// formula with atoms renamed into the library (structure unchanged).  A
/// violating reply is re-asked once and then discarded in favour of the
/// similarity fallback.
Formula align_aps(AgentClient& client, const Formula& f, const std::vector<std::string>& library);

/// Similarity score used by the aligner; exposed for tests.
double ap_similarity(const std::string& a, const std::string& b);

/// Asks the model to repair a syntactically broken formula, re-checking and
/// re-asking with fresh diagnostics up to the client's retry bound.
Formula correct_syntax(AgentClient& client, std::string ltl_text,
                       std::vector<SyntaxDiagnostic> diagnostics);

/// Counterexample analysis: binds the formula, both automata in their text
/// format, the checking report and the rule, and parses the three output
/// sections (order-free).  A malformed reply is re-asked once.
CriticGuidance critique(AgentClient& client, const Formula& phi, const Formula& rule,
                        const BuchiAutomaton& a1, const BuchiAutomaton& a2,
                        const std::string& report);

/// Revision: sends the current formula and the rendered guidance (with the
/// environmental information appended) and parses the reply; unparseable
/// replies are routed through correct_syntax once.
Formula revise(AgentClient& client, const Formula& phi, const CriticGuidance& guidance,
               const std::string& env);

}  // namespace ltlguard
