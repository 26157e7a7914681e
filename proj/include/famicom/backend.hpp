#pragma once

#include <memory>
#include <string>

#include "famicom/types.hpp"

namespace famicom {

/// Uniform access to a language model: token-level scoring, embedding, and
/// sampled generation. Implementations must be safe for concurrent use.
///
/// The raw_* methods return whatever the model produces; the free functions
/// below are the library-facing operations and enforce the module contract
/// (input validation, L2 normalization, position contiguity).
class Backend {
public:
    virtual ~Backend() = default;

    virtual std::string model_id() const = 0;

    virtual ScoredText raw_score_tokens(const std::string& text) = 0;
    virtual Embedding raw_embed_token(const std::string& token_text) = 0;
    virtual Embedding raw_embed_last_token(const std::string& text) = 0;
    virtual std::string raw_generate(const GenerationRequest& request, CallMeta& meta) = 0;
};

ScoredText score_tokens(const std::string& text, Backend& backend);
Embedding embed_token(const std::string& token_text, Backend& backend);
Embedding embed_last_token(const std::string& text, Backend& backend);
std::string generate(const GenerationRequest& request, Backend& backend, CallMeta* meta = nullptr);

}  // namespace famicom
