#include "famicom/backend.hpp"

#include <cmath>

namespace famicom {

double l2_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Embedding normalized(const Embedding& e) {
    const double n = l2_norm(e.values());
    if (!(n > 0.0) || !std::isfinite(n)) throw DomainError("embedding norm is not positive and finite");
    std::vector<double> out(e.values());
    for (double& x : out) x /= n;
    return Embedding(std::move(out));
}

double cosine(const Embedding& a, const Embedding& b) {
    if (a.dim() != b.dim()) throw DomainError("cosine: dimension mismatch");
    double dot = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) dot += a.values()[i] * b.values()[i];
    return dot / (l2_norm(a.values()) * l2_norm(b.values()));
}

namespace {

void validate_scored(const ScoredText& scored) {
    if (!scored.text.empty() && scored.tokens.empty()) {
        throw ScoringUnsupported("backend returned no tokens for non-empty text");
    }
    for (std::size_t i = 0; i < scored.tokens.size(); ++i) {
        const TokenScore& t = scored.tokens[i];
        if (t.position != static_cast<int>(i)) {
            throw ScoringUnsupported("token positions are not contiguous from 0");
        }
        if (!std::isfinite(t.logprob)) {
            throw ScoringUnsupported("non-finite logprob at position " + std::to_string(i));
        }
    }
}

}  // namespace

ScoredText score_tokens(const std::string& text, Backend& backend) {
    if (text.empty()) throw EmptyInput("score_tokens: text is empty");
    ScoredText scored = backend.raw_score_tokens(text);
    validate_scored(scored);
    return scored;
}

Embedding embed_token(const std::string& token_text, Backend& backend) {
    if (token_text.empty()) throw EmptyInput("embed_token: token text is empty");
    return normalized(backend.raw_embed_token(token_text));
}

Embedding embed_last_token(const std::string& text, Backend& backend) {
    if (text.empty()) throw EmptyInput("embed_last_token: text is empty");
    return normalized(backend.raw_embed_last_token(text));
}

std::string generate(const GenerationRequest& request, Backend& backend, CallMeta* meta) {
    if (request.prompt.empty()) throw EmptyInput("generate: prompt is empty");
    CallMeta local;
    std::string out = backend.raw_generate(request, local);
    if (meta) *meta = local;
    return out;
}

}  // namespace famicom
