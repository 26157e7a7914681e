#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "famicom/errors.hpp"

namespace famicom {

/// One model token of a scored text. `logprob` is a natural-log probability;
/// backends flag control/special tokens so salience can skip them.
struct TokenScore {
    std::string token_text;
    int position = 0;
    double logprob = 0.0;
    bool special = false;
};

/// A text with its per-token logprobs under one model. Token boundaries are
/// the backend's; the concatenated token_texts reconstruct the scored portion
/// of `text` (whitespace conventions are the backend's, recorded as-is).
struct ScoredText {
    std::string text;
    std::vector<TokenScore> tokens;
    std::string model_id;
};

/// Fixed-length real vector. All-zero vectors are rejected at construction
/// because cosine similarity is undefined for them.
class Embedding {
public:
    explicit Embedding(std::vector<double> values) : values_(std::move(values)) {
        if (values_.empty()) throw DomainError("embedding has no components");
        bool all_zero = true;
        for (double v : values_) {
            if (v != 0.0) {
                all_zero = false;
                break;
            }
        }
        if (all_zero) throw DomainError("embedding is all-zero");
    }

    const std::vector<double>& values() const { return values_; }
    std::size_t dim() const { return values_.size(); }

private:
    std::vector<double> values_;
};

double l2_norm(const std::vector<double>& v);
Embedding normalized(const Embedding& e);
double cosine(const Embedding& a, const Embedding& b);

struct GenerationRequest {
    std::string prompt;
    double temperature = 0.8;
    int max_tokens = 256;
    std::optional<std::int64_t> seed;
};

/// Per-call observability: attempt count (HTTP retries) and whether the
/// server stopped the generation on length.
struct CallMeta {
    int attempts = 1;
    bool truncated = false;
};

}  // namespace famicom
