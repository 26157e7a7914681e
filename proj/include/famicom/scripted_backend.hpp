#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "famicom/backend.hpp"

namespace famicom {

/// Backend programmed with exact outputs, for tests and offline runs.
///
/// Generation is resolved in order:
///   1. the reply queue (consumption order, for strictly sequenced tests),
///   2. the first substring rule matching the prompt — seeded rules pick
///      replies[seed % n] so results do not depend on call order,
///   3. the default reply,
///   4. mock fallback (hash-based, see mock_backend) when enabled,
/// otherwise the call fails. Scoring and embeddings are exact-text lookups
/// with the same optional mock fallback. Script consumption is serialized
/// internally; the backend is safe to share across threads.
class ScriptedBackend : public Backend {
public:
    explicit ScriptedBackend(std::string model_id = "scripted", bool mock_fallback = false)
        : model_id_(std::move(model_id)), mock_fallback_(mock_fallback) {}

    /// Loads a script from the JSON format documented in the README
    /// (keys: model_id, mock_fallback, scores, embeddings,
    /// last_token_embeddings, replies, rules, default_reply).
    static std::unique_ptr<ScriptedBackend> from_json_file(const std::string& path);
    static std::unique_ptr<ScriptedBackend> from_json_text(const std::string& text);

    void script_score_tokens(const std::string& text, std::vector<TokenScore> tokens);
    /// Token texts with logprobs; positions assigned 0..n-1.
    void script_score(const std::string& text, const std::vector<std::pair<std::string, double>>& tokens);
    void script_embedding(const std::string& token_text, std::vector<double> values);
    void script_last_token_embedding(const std::string& text, std::vector<double> values);
    void push_reply(std::string reply);
    void set_default_reply(std::string reply);
    void add_rule(std::string contains, std::vector<std::string> replies, bool seeded = true);
    void set_mock_fallback(bool on) { mock_fallback_ = on; }

    std::string model_id() const override { return model_id_; }

    ScoredText raw_score_tokens(const std::string& text) override;
    Embedding raw_embed_token(const std::string& token_text) override;
    Embedding raw_embed_last_token(const std::string& text) override;
    std::string raw_generate(const GenerationRequest& request, CallMeta& meta) override;

private:
    struct Rule {
        std::string contains;
        std::vector<std::string> replies;
        bool seeded = true;
        std::size_t next = 0;
    };

    std::string model_id_;
    bool mock_fallback_ = false;
    std::map<std::string, std::vector<TokenScore>> scores_;
    std::map<std::string, std::vector<double>> embeddings_;
    std::map<std::string, std::vector<double>> last_token_embeddings_;
    std::vector<std::string> queue_;
    std::size_t queue_head_ = 0;
    std::vector<Rule> rules_;
    std::optional<std::string> default_reply_;
    mutable std::mutex mu_;
};

}  // namespace famicom
