#pragma once

#include <string>
#include <vector>

#include "famicom/backend.hpp"

namespace famicom {

// Deterministic stand-in for a real model: every output is a pure function of
// (input, model_id, seed) via stable 64-bit hashing. No state, no I/O.
//
// Scoring: logprob(token) = -(1 + (h mod 400)/100), h = hash(token, model),
// giving a spread over [-4.99, -1.00]. Embeddings: 16 dims seeded from the
// same hash. Generation: a short reply containing an option label and a step
// count so harness runs parse end to end.

std::vector<std::string> mock_tokenize(const std::string& text);
double mock_logprob(const std::string& token_text, const std::string& model_id);
std::vector<double> mock_embedding_values(const std::string& token_text, const std::string& model_id);
std::string mock_reply(const std::string& prompt, const std::string& model_id, std::uint64_t seed);
ScoredText mock_score_tokens(const std::string& text, const std::string& model_id);

class MockBackend : public Backend {
public:
    explicit MockBackend(std::string model_id = "mock-model") : model_id_(std::move(model_id)) {}

    std::string model_id() const override { return model_id_; }

    ScoredText raw_score_tokens(const std::string& text) override;
    Embedding raw_embed_token(const std::string& token_text) override;
    Embedding raw_embed_last_token(const std::string& text) override;
    std::string raw_generate(const GenerationRequest& request, CallMeta& meta) override;

private:
    std::string model_id_;
};

}  // namespace famicom
