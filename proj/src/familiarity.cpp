#include "famicom/familiarity.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace famicom {

std::string to_string(FamiliarityMethod m) {
    return m == FamiliarityMethod::Ppl ? "ppl" : "sim";
}

FamiliarityMethod familiarity_method_from_string(const std::string& s) {
    if (s == "ppl") return FamiliarityMethod::Ppl;
    if (s == "sim") return FamiliarityMethod::Sim;
    throw DomainError("unknown familiarity method: " + s);
}

double perplexity(const ScoredText& scored) {
    if (scored.tokens.empty()) throw EmptyInput("perplexity: no tokens");
    double sum = 0.0;
    for (const TokenScore& t : scored.tokens) sum += t.logprob;
    return std::exp(-sum / static_cast<double>(scored.tokens.size()));
}

FamiliarityValue familiarity_ppl(const ScoredText& scored) {
    const double ppl = perplexity(scored);
    FamiliarityValue out;
    out.value = 1.0 / ppl;
    out.method = FamiliarityMethod::Ppl;
    out.detail = ppl;
    return out;
}

namespace {

bool whitespace_only(const std::string& s) {
    return std::all_of(s.begin(), s.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
}

}  // namespace

SalientTokenSet salient_tokens(const ScoredText& scored, int k, Backend& backend) {
    if (scored.tokens.empty()) throw EmptyInput("salient_tokens: no tokens");
    const int k_eff = std::max(k, 2);

    std::vector<const TokenScore*> eligible;
    for (const TokenScore& t : scored.tokens) {
        if (t.special || t.token_text.empty() || whitespace_only(t.token_text)) continue;
        eligible.push_back(&t);
    }
    if (eligible.size() < 2) {
        throw TooFewTokens("salient_tokens: need at least 2 eligible tokens, have " +
                           std::to_string(eligible.size()));
    }
    std::sort(eligible.begin(), eligible.end(), [](const TokenScore* a, const TokenScore* b) {
        if (a->logprob != b->logprob) return a->logprob < b->logprob;
        return a->position < b->position;
    });
    const std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(k_eff), eligible.size());

    SalientTokenSet out;
    out.k_requested = k_eff;
    out.entries.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.entries.emplace_back(*eligible[i], embed_token(eligible[i]->token_text, backend));
    }
    return out;
}

FamiliarityValue familiarity_sim(const ScoredText& scored, int k, Backend& backend) {
    const SalientTokenSet set = salient_tokens(scored, k, backend);
    const std::size_t m = set.entries.size();
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = i + 1; j < m; ++j) {
            sum += cosine(set.entries[i].second, set.entries[j].second);
            ++pairs;
        }
    }
    const double raw = sum / static_cast<double>(pairs);

    FamiliarityValue out;
    // Exactly antipodal pairs would map to 0; keep the value strictly positive.
    out.value = std::max((1.0 + raw) / 2.0, 1e-300);
    out.method = FamiliarityMethod::Sim;
    out.k = set.k_requested;
    out.detail = raw;
    return out;
}

FamiliarityValue combined_familiarity(const std::string& prompt, const std::string& query,
                                      FamiliarityMethod method, int k, Backend& backend) {
    if (prompt.empty()) throw EmptyInput("combined_familiarity: prompt is empty");
    if (query.empty()) throw EmptyInput("combined_familiarity: query is empty");
    const ScoredText scored = score_tokens(prompt + "\n" + query, backend);
    if (method == FamiliarityMethod::Ppl) return familiarity_ppl(scored);
    return familiarity_sim(scored, k, backend);
}

}  // namespace famicom
