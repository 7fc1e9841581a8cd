#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "dolq/scientist.hpp"
#include "dolq/systems.hpp"

namespace dolq {

struct TokenUsage {
    long input = 0;
    long output = 0;
};

// Running token tally with an optional hard budget (0 = unlimited).
struct TokenMeter {
    long input = 0;
    long output = 0;
    long budget = 0;

    long total() const { return input + output; }
    void add(const TokenUsage& u) {
        input += u.input;
        output += u.output;
    }
    void check() const;  // throws BudgetExceeded
};

struct PromptBundle {
    std::string text;
    double temperature = 0.0;
    int max_tokens = 3000;
};

// ---------------------------------------------------------------------------
// Prompt construction
// ---------------------------------------------------------------------------

struct TermActionLine {
    std::string key;  // canonical skeleton key
    Action action = Action::Hold;
};

struct SamplerPromptInputs {
    const SystemSpec* spec = nullptr;
    int hypotheses = 3;
    std::string insight;  // empty on the first iteration
    std::map<int, std::vector<TermActionLine>> previous_eval;
    const BanList* ban = nullptr;
    double temperature = 0.9;
    int max_tokens = 3000;
};

PromptBundle build_sampler_prompt(const SamplerPromptInputs& in);

struct EquationView {
    std::string rendered;  // python-flavoured, 4-decimal coefficients
    double mse = 0.0;
};

struct SystemView {
    bool present = false;
    std::vector<EquationView> dims;
};

struct JustificationLine {
    int dimension = 0;
    std::string key;
    std::string text;
};

struct ScientistPromptInputs {
    const SystemSpec* spec = nullptr;
    int iteration = 1;
    int total_iterations = 100;
    std::string insight;
    SystemView global_best;
    SystemView previous_attempt;
    SystemView current_attempt;
    std::vector<JustificationLine> justifications;
    double temperature = 0.6;
    int max_tokens = 3000;
};

PromptBundle build_scientist_prompt(const ScientistPromptInputs& in);

// ---------------------------------------------------------------------------
// Structured responses
// ---------------------------------------------------------------------------

struct ParsedTerm {
    std::string source;  // text as proposed
    ExprPtr expr;
    std::string key;
    std::string justification;
};

struct Hypothesis {
    std::map<int, std::vector<ParsedTerm>> terms;  // dimension -> term list
};

struct SamplerResponse {
    std::vector<Hypothesis> hypotheses;
    std::vector<std::string> warnings;
};

// Tolerant parse of the sampler JSON ("ode_pairs" array, or one bare
// hypothesis object). Invalid terms are dropped with a warning, empty
// hypotheses are dropped, extras beyond max_hypotheses are ignored.
// Throws MalformedResponse when no JSON object can be extracted.
SamplerResponse parse_sampler_response(const std::string& text, int dimension,
                                       int max_hypotheses = 3);

struct TermEvaluation {
    std::string term_text;  // as returned by the model
    std::string key;        // canonical skeleton key (empty if unparseable)
    Grade semantic = Grade::Neutral;
    std::string reasoning;
    std::string action_hint;  // advisory only, never drives decisions
};

struct ScientistResponse {
    std::map<int, std::vector<TermEvaluation>> evaluations;
    std::string updated_insight;
    std::vector<std::string> warnings;
};

// Strict enum validation; entries with invalid grades are dropped with a
// warning. At most three "good" grades per dimension survive; extras are
// downgraded to neutral in arrival order.
ScientistResponse parse_scientist_response(const std::string& text, int dimension);

// Inverse renderers, used by scripted backends and round-trip tests.
std::string render_sampler_response(const SamplerResponse& r);
std::string render_scientist_response(const ScientistResponse& r);

// ---------------------------------------------------------------------------
// Chat backends
// ---------------------------------------------------------------------------

struct LlmConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gemini-2.5-flash-lite";
    std::string api_key_env = "DOLQ_API_KEY";
    double sampler_temperature = 0.9;
    double scientist_temperature = 0.6;
    int max_tokens = 3000;
    int max_retries = 3;
    long token_budget = 0;  // 0 = unlimited
};

class ChatBackend {
public:
    virtual ~ChatBackend() = default;
    virtual std::pair<std::string, TokenUsage> complete(const PromptBundle& bundle) = 0;
};

// Replays a fixed list of raw response texts; throws ScriptExhausted when the
// schedule runs out. Token usage per call is a configured stub.
class ScriptedBackend : public ChatBackend {
public:
    explicit ScriptedBackend(std::vector<std::string> replies, TokenUsage stub = {120, 60},
                             TokenMeter* meter = nullptr)
        : replies_(std::move(replies)), stub_(stub), meter_(meter) {}

    std::pair<std::string, TokenUsage> complete(const PromptBundle& bundle) override;

    std::size_t remaining() const { return replies_.size() - next_; }

private:
    std::vector<std::string> replies_;
    std::size_t next_ = 0;
    TokenUsage stub_;
    TokenMeter* meter_ = nullptr;
};

// Deterministic offline scientist: grades terms by skeleton key from a fixed
// table and emits a schema-valid response covering every known key, so the
// parser picks out whichever ones the current attempt actually contains.
class RuleScientistBackend : public ChatBackend {
public:
    RuleScientistBackend(std::map<int, std::vector<std::pair<std::string, Grade>>> grades,
                         std::string insight = {}, TokenUsage stub = {120, 60},
                         TokenMeter* meter = nullptr)
        : grades_(std::move(grades)), insight_(std::move(insight)), stub_(stub), meter_(meter) {}

    std::pair<std::string, TokenUsage> complete(const PromptBundle& bundle) override;

private:
    std::map<int, std::vector<std::pair<std::string, Grade>>> grades_;
    std::string insight_;
    TokenUsage stub_;
    TokenMeter* meter_ = nullptr;
};

// Single-shot chat completion over an OpenAI-compatible HTTP endpoint with
// exponential-backoff retries. The API key is read from the environment.
class HttpBackend : public ChatBackend {
public:
    HttpBackend(LlmConfig config, TokenMeter* meter = nullptr)
        : config_(std::move(config)), meter_(meter) {}

    std::pair<std::string, TokenUsage> complete(const PromptBundle& bundle) override;

private:
    LlmConfig config_;
    TokenMeter* meter_ = nullptr;
};

// Loads a scripted backend from a JSON file: {"stub_usage": {"input": n,
// "output": m}, "responses": [...]} where each response is a raw string or a
// JSON object to be replayed verbatim.
std::unique_ptr<ScriptedBackend> load_scripted_backend(const std::string& path,
                                                       TokenMeter* meter = nullptr);

}  // namespace dolq
