#include "famicom/http_backend.hpp"

#include <chrono>
#include <thread>

#include <httplib.h>
#include <json.hpp>

namespace famicom {

using nlohmann::json;

HttpBackend::HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {
    if (config_.base_url.empty()) throw DomainError("http backend: base_url is empty");
    if (config_.model.empty()) throw DomainError("http backend: model is empty");
    if (config_.max_attempts < 1) throw DomainError("http backend: max_attempts must be >= 1");
    while (!config_.base_url.empty() && config_.base_url.back() == '/') config_.base_url.pop_back();
    if (config_.embed_model.empty()) config_.embed_model = config_.model;
}

std::string HttpBackend::post_json(const std::string& path, const std::string& body,
                                   bool scoring_call, int* attempts_out) {
    const auto timeout_ms =
        std::chrono::milliseconds(static_cast<long long>(config_.timeout_seconds * 1000.0));

    std::string last_error;
    int attempt = 0;
    for (attempt = 1; attempt <= config_.max_attempts; ++attempt) {
        httplib::Client client(config_.base_url);
        client.set_connection_timeout(timeout_ms);
        client.set_read_timeout(timeout_ms);
        client.set_write_timeout(timeout_ms);

        auto res = client.Post(path, body, "application/json");
        if (res) {
            if (res->status >= 200 && res->status < 300) {
                if (attempts_out) *attempts_out = attempt;
                return res->body;
            }
            if (res->status < 500 && res->status != 429) {
                // Client errors will not heal on retry.
                if (attempts_out) *attempts_out = attempt;
                const std::string msg = "HTTP " + std::to_string(res->status) + " from " + path +
                                        ": " + res->body;
                if (scoring_call) throw ScoringUnsupported(msg);
                throw BackendUnavailable(msg);
            }
            last_error = "HTTP " + std::to_string(res->status);
        } else {
            last_error = httplib::to_string(res.error());
        }
        if (attempt < config_.max_attempts && config_.backoff_initial_seconds > 0.0) {
            const double delay = config_.backoff_initial_seconds * static_cast<double>(1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::duration<double>(delay));
        }
    }
    if (attempts_out) *attempts_out = config_.max_attempts;
    throw BackendUnavailable("POST " + config_.base_url + path + " failed after " +
                             std::to_string(config_.max_attempts) + " attempts: " + last_error);
}

ScoredText HttpBackend::raw_score_tokens(const std::string& text) {
    const json request = {{"model", config_.model},
                          {"prompt", text},
                          {"max_tokens", 0},
                          {"echo", true},
                          {"logprobs", 1}};
    const std::string body = post_json("/v1/completions", request.dump(), true, nullptr);

    json doc;
    try {
        doc = json::parse(body);
    } catch (const json::exception& e) {
        throw ScoringUnsupported(std::string("completions response is not JSON: ") + e.what());
    }

    ScoredText scored;
    scored.text = text;
    scored.model_id = config_.model;
    try {
        const json& choice = doc.at("choices").at(0);
        if (!choice.contains("logprobs") || choice.at("logprobs").is_null()) {
            throw ScoringUnsupported("server returned no logprobs (echo scoring unsupported)");
        }
        const json& lp = choice.at("logprobs");
        const json& tokens = lp.at("tokens");
        const json& values = lp.at("token_logprobs");
        int pos = 0;
        for (std::size_t i = 0; i < tokens.size() && i < values.size(); ++i) {
            if (values.at(i).is_null()) continue;  // unscored context token
            TokenScore t;
            t.token_text = tokens.at(i).get<std::string>();
            t.logprob = values.at(i).get<double>();
            t.position = pos++;
            scored.tokens.push_back(std::move(t));
        }
    } catch (const json::exception& e) {
        throw ScoringUnsupported(std::string("unexpected completions shape: ") + e.what());
    }
    if (scored.tokens.empty()) throw ScoringUnsupported("server scored no tokens");
    return scored;
}

Embedding HttpBackend::raw_embed_token(const std::string& token_text) {
    const json request = {{"model", config_.embed_model}, {"input", token_text}};
    const std::string body = post_json("/v1/embeddings", request.dump(), false, nullptr);
    try {
        const json doc = json::parse(body);
        return Embedding(doc.at("data").at(0).at("embedding").get<std::vector<double>>());
    } catch (const json::exception& e) {
        throw BackendUnavailable(std::string("unexpected embeddings shape: ") + e.what());
    }
}

Embedding HttpBackend::raw_embed_last_token(const std::string& text) {
    const ScoredText scored = raw_score_tokens(text);
    return raw_embed_token(scored.tokens.back().token_text);
}

std::string HttpBackend::raw_generate(const GenerationRequest& request, CallMeta& meta) {
    json body = {{"model", config_.model},
                 {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})},
                 {"temperature", request.temperature},
                 {"max_tokens", request.max_tokens}};
    if (request.seed) body["seed"] = *request.seed;

    meta = CallMeta{};
    const std::string response = post_json("/v1/chat/completions", body.dump(), false, &meta.attempts);
    try {
        const json doc = json::parse(response);
        const json& choice = doc.at("choices").at(0);
        meta.truncated = choice.value("finish_reason", std::string()) == "length";
        return choice.at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw BackendUnavailable(std::string("unexpected chat completions shape: ") + e.what());
    }
}

}  // namespace famicom
