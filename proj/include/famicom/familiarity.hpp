#pragma once

#include <string>
#include <utility>
#include <vector>

#include "famicom/backend.hpp"

namespace famicom {

enum class FamiliarityMethod { Ppl, Sim };

std::string to_string(FamiliarityMethod m);
FamiliarityMethod familiarity_method_from_string(const std::string& s);

/// A positive familiarity estimate, oriented so that higher means the text is
/// more expected by the model. `detail` keeps the raw signal for audit:
/// the perplexity itself (ppl) or the mean pairwise cosine (sim).
struct FamiliarityValue {
    double value = 0.0;
    FamiliarityMethod method = FamiliarityMethod::Ppl;
    int k = 0;  // salient-token budget, sim only
    double detail = 0.0;
};

/// The top-k most surprising eligible tokens of a scored text, each with its
/// embedding. Ordered ascending by logprob, ties by smaller position.
struct SalientTokenSet {
    std::vector<std::pair<TokenScore, Embedding>> entries;
    int k_requested = 0;
};

/// exp(-mean token logprob). >= 1 whenever all logprobs are <= 0.
double perplexity(const ScoredText& scored);

/// 1 / perplexity, in (0, 1] for normalized models.
FamiliarityValue familiarity_ppl(const ScoredText& scored);

/// Tokens eligible for salience: not backend-flagged special and not pure
/// whitespace. k below 2 is raised to 2 (pairwise similarity needs a pair).
SalientTokenSet salient_tokens(const ScoredText& scored, int k, Backend& backend);

/// Mean pairwise cosine over the salient-token embeddings, mapped by
/// (1 + raw) / 2 so the value is positive and order-preserving.
FamiliarityValue familiarity_sim(const ScoredText& scored, int k, Backend& backend);

/// Familiarity of prompt and query pooled: the chosen method applied to the
/// scoring of prompt + "\n" + query, so salient tokens of both can mix.
FamiliarityValue combined_familiarity(const std::string& prompt, const std::string& query,
                                      FamiliarityMethod method, int k, Backend& backend);

}  // namespace famicom
