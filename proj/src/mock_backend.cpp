#include "famicom/mock_backend.hpp"

#include <cctype>

#include "famicom/hashing.hpp"

namespace famicom {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool all_space(const std::string& s) {
    for (char c : s) {
        if (!is_space(c)) return false;
    }
    return true;
}

}  // namespace

// Each token is a leading whitespace run glued to the following word, so the
// concatenation of token texts reproduces the input exactly. Trailing
// whitespace becomes its own (special-flagged) token.
std::vector<std::string> mock_tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        std::size_t start = i;
        while (i < text.size() && is_space(text[i])) ++i;
        while (i < text.size() && !is_space(text[i])) ++i;
        out.push_back(text.substr(start, i - start));
    }
    return out;
}

double mock_logprob(const std::string& token_text, const std::string& model_id) {
    const std::uint64_t h = hash_combine(fnv1a64(token_text), fnv1a64(model_id));
    return -(1.0 + static_cast<double>(h % 400) / 100.0);
}

std::vector<double> mock_embedding_values(const std::string& token_text, const std::string& model_id) {
    std::uint64_t state = hash_combine(hash_combine(fnv1a64(token_text), fnv1a64(model_id)), fnv1a64("embed"));
    std::vector<double> v(16);
    for (double& x : v) {
        state = splitmix64(state);
        x = static_cast<double>(state >> 11) * 0x1.0p-53 * 2.0 - 1.0;
    }
    return v;
}

std::string mock_reply(const std::string& prompt, const std::string& model_id, std::uint64_t seed) {
    const std::uint64_t h =
        hash_combine(hash_combine(fnv1a64(prompt), fnv1a64(model_id)), splitmix64(seed));

    // Program-writing prompts (they carry fenced exemplars) get a small
    // fenced program back so operational counting works end to end.
    if (prompt.find("```") != std::string::npos) {
        static const char* calls[] = {"indices()", "cumsum(v0)", "map(f, v1)", "sort(v2, v0)",
                                      "selector_width(select(v0, v1, eq))"};
        const int statements = 1 + static_cast<int>(splitmix64(h ^ 0x9A5FULL) % 5);
        std::string out = "```\n";
        for (int i = 0; i < statements; ++i) {
            out += "v" + std::to_string(i) + " = " + calls[i % 5];
            out += "\n";
        }
        out += "```";
        return out;
    }

    const char label = static_cast<char>('A' + (splitmix64(h) % 2));
    const int steps = 1 + static_cast<int>(splitmix64(h ^ 0x5EEDULL) % 9);
    std::string out = "(";
    out += label;
    out += ") It takes ";
    out += std::to_string(steps);
    out += " steps.";
    return out;
}

ScoredText mock_score_tokens(const std::string& text, const std::string& model_id) {
    ScoredText scored;
    scored.text = text;
    scored.model_id = model_id;
    int pos = 0;
    for (std::string& tok : mock_tokenize(text)) {
        TokenScore ts;
        ts.logprob = mock_logprob(tok, model_id);
        ts.special = all_space(tok);
        ts.position = pos++;
        ts.token_text = std::move(tok);
        scored.tokens.push_back(std::move(ts));
    }
    return scored;
}

ScoredText MockBackend::raw_score_tokens(const std::string& text) {
    return mock_score_tokens(text, model_id_);
}

Embedding MockBackend::raw_embed_token(const std::string& token_text) {
    return Embedding(mock_embedding_values(token_text, model_id_));
}

Embedding MockBackend::raw_embed_last_token(const std::string& text) {
    std::vector<std::string> toks = mock_tokenize(text);
    return Embedding(mock_embedding_values(toks.back(), model_id_));
}

std::string MockBackend::raw_generate(const GenerationRequest& request, CallMeta& meta) {
    meta = CallMeta{};
    return mock_reply(request.prompt, model_id_, request.seed ? static_cast<std::uint64_t>(*request.seed) : 0);
}

}  // namespace famicom
