#pragma once

#include <string>

#include "famicom/backend.hpp"

namespace famicom {

struct HttpBackendConfig {
    std::string base_url;     // e.g. "http://127.0.0.1:8080"
    std::string model;
    std::string embed_model;  // empty -> same as model
    int max_attempts = 3;
    double timeout_seconds = 30.0;
    double backoff_initial_seconds = 1.0;  // doubles after each failed attempt
};

/// Client for OpenAI-compatible inference servers.
///
/// Scoring uses POST /v1/completions in echo mode (max_tokens 0, echo true,
/// logprobs 1); servers that cannot echo logprobs raise ScoringUnsupported.
/// Tokens echoed without a logprob (typically the first one) are dropped and
/// positions reindexed. Token embeddings use POST /v1/embeddings with the
/// token string as input; the last-token embedding scores the text first and
/// embeds its final token. Generation uses POST /v1/chat/completions; a
/// "length" finish reason is surfaced as CallMeta.truncated, not a failure.
class HttpBackend : public Backend {
public:
    explicit HttpBackend(HttpBackendConfig config);

    std::string model_id() const override { return config_.model; }
    const HttpBackendConfig& config() const { return config_; }

    ScoredText raw_score_tokens(const std::string& text) override;
    Embedding raw_embed_token(const std::string& token_text) override;
    Embedding raw_embed_last_token(const std::string& text) override;
    std::string raw_generate(const GenerationRequest& request, CallMeta& meta) override;

private:
    std::string post_json(const std::string& path, const std::string& body, bool scoring_call,
                          int* attempts_out);

    HttpBackendConfig config_;
};

}  // namespace famicom
