#include <chrono>
#include <cstdlib>
#include <fstream>
#include <thread>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dolq/agents.hpp"
#include "dolq/errors.hpp"

namespace dolq {

void TokenMeter::check() const {
    if (budget > 0 && total() >= budget)
        throw BudgetExceeded("token budget exhausted (" + std::to_string(total()) + " of " +
                             std::to_string(budget) + ")");
}

std::pair<std::string, TokenUsage> ScriptedBackend::complete(const PromptBundle&) {
    if (meter_) meter_->check();
    if (next_ >= replies_.size())
        throw ScriptExhausted("scripted backend ran out of replies after " +
                              std::to_string(next_) + " calls");
    const std::string reply = replies_[next_++];
    if (meter_) meter_->add(stub_);
    return {reply, stub_};
}

std::pair<std::string, TokenUsage> RuleScientistBackend::complete(const PromptBundle&) {
    if (meter_) meter_->check();
    ScientistResponse response;
    for (const auto& [dim, graded] : grades_) {
        for (const auto& [key, grade] : graded) {
            TermEvaluation eval;
            eval.term_text = key;
            eval.key = key;
            eval.semantic = grade;
            response.evaluations[dim].push_back(std::move(eval));
        }
    }
    response.updated_insight = insight_;
    if (meter_) meter_->add(stub_);
    return {render_scientist_response(response), stub_};
}

namespace {

struct ParsedUrl {
    std::string base;  // scheme://host[:port]
    std::string path;
};

ParsedUrl split_url(const std::string& url) {
    const std::size_t scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigError("endpoint URL must include a scheme: " + url);
    const std::size_t path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::pair<std::string, TokenUsage> HttpBackend::complete(const PromptBundle& bundle) {
    if (meter_) meter_->check();

    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || !*key)
        throw ConfigError("API key environment variable '" + config_.api_key_env +
                          "' is not set");

    nlohmann::json body;
    body["model"] = config_.model;
    body["messages"] = nlohmann::json::array({{{"role", "user"}, {"content", bundle.text}}});
    body["temperature"] = bundle.temperature;
    body["max_tokens"] = bundle.max_tokens;
    const std::string payload = body.dump();

    const ParsedUrl url = split_url(config_.endpoint);
    std::string last_error = "no attempt made";
    for (int attempt = 0; attempt < std::max(config_.max_retries, 1); ++attempt) {
        if (attempt > 0)
            std::this_thread::sleep_for(
                std::chrono::milliseconds(500 * (1 << std::min(attempt - 1, 4))));
        httplib::Client client(url.base);
        client.set_connection_timeout(30);
        client.set_read_timeout(120);
        httplib::Headers headers = {{"Authorization", std::string("Bearer ") + key}};
        auto res = client.Post(url.path, headers, payload, "application/json");
        if (!res) {
            last_error = "connection failed (" + httplib::to_string(res.error()) + ")";
            continue;
        }
        if (res->status != 200) {
            last_error = "HTTP " + std::to_string(res->status) + ": " + res->body;
            continue;
        }
        nlohmann::json reply = nlohmann::json::parse(res->body, nullptr, false);
        if (reply.is_discarded()) {
            last_error = "response body is not JSON";
            continue;
        }
        std::string text;
        try {
            text = reply.at("choices").at(0).at("message").at("content").get<std::string>();
        } catch (...) {
            last_error = "response lacks choices[0].message.content";
            continue;
        }
        TokenUsage usage;
        if (reply.contains("usage")) {
            const nlohmann::json& u = reply["usage"];
            usage.input = u.value("prompt_tokens", u.value("input_tokens", 0));
            usage.output = u.value("completion_tokens", u.value("output_tokens", 0));
        }
        if (meter_) meter_->add(usage);
        return {text, usage};
    }
    throw TransportError("chat completion failed after " + std::to_string(config_.max_retries) +
                         " attempts: " + last_error);
}

std::unique_ptr<ScriptedBackend> load_scripted_backend(const std::string& path,
                                                       TokenMeter* meter) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read script file " + path);
    nlohmann::json root = nlohmann::json::parse(in);
    TokenUsage stub{120, 60};
    if (root.contains("stub_usage")) {
        stub.input = root["stub_usage"].value("input", 120);
        stub.output = root["stub_usage"].value("output", 60);
    }
    std::vector<std::string> replies;
    for (const nlohmann::json& item : root.at("responses")) {
        if (item.is_string())
            replies.push_back(item.get<std::string>());
        else
            replies.push_back(item.dump());
    }
    return std::make_unique<ScriptedBackend>(std::move(replies), stub, meter);
}

}  // namespace dolq
