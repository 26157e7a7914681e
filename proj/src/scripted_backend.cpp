#include "famicom/scripted_backend.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "famicom/mock_backend.hpp"

namespace famicom {

using nlohmann::json;

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("script file not found: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

std::unique_ptr<ScriptedBackend> ScriptedBackend::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("script is not valid JSON: ") + e.what());
    }
    auto b = std::make_unique<ScriptedBackend>(doc.value("model_id", std::string("scripted")),
                                               doc.value("mock_fallback", false));
    if (doc.contains("scores")) {
        for (auto& [text_key, arr] : doc.at("scores").items()) {
            std::vector<std::pair<std::string, double>> toks;
            for (const json& t : arr) {
                toks.emplace_back(t.at("token").get<std::string>(), t.at("logprob").get<double>());
            }
            b->script_score(text_key, toks);
        }
    }
    if (doc.contains("embeddings")) {
        for (auto& [tok, arr] : doc.at("embeddings").items()) {
            b->script_embedding(tok, arr.get<std::vector<double>>());
        }
    }
    if (doc.contains("last_token_embeddings")) {
        for (auto& [text_key, arr] : doc.at("last_token_embeddings").items()) {
            b->script_last_token_embedding(text_key, arr.get<std::vector<double>>());
        }
    }
    if (doc.contains("replies")) {
        for (const json& r : doc.at("replies")) b->push_reply(r.get<std::string>());
    }
    if (doc.contains("rules")) {
        for (const json& r : doc.at("rules")) {
            b->add_rule(r.at("contains").get<std::string>(),
                        r.at("replies").get<std::vector<std::string>>(),
                        r.value("seeded", true));
        }
    }
    if (doc.contains("default_reply")) b->set_default_reply(doc.at("default_reply").get<std::string>());
    return b;
}

void ScriptedBackend::script_score_tokens(const std::string& text, std::vector<TokenScore> tokens) {
    std::lock_guard<std::mutex> lock(mu_);
    scores_[text] = std::move(tokens);
}

void ScriptedBackend::script_score(const std::string& text,
                                   const std::vector<std::pair<std::string, double>>& tokens) {
    std::vector<TokenScore> out;
    int pos = 0;
    for (const auto& [tok, lp] : tokens) {
        out.push_back(TokenScore{tok, pos++, lp, false});
    }
    script_score_tokens(text, std::move(out));
}

void ScriptedBackend::script_embedding(const std::string& token_text, std::vector<double> values) {
    std::lock_guard<std::mutex> lock(mu_);
    embeddings_[token_text] = std::move(values);
}

void ScriptedBackend::script_last_token_embedding(const std::string& text, std::vector<double> values) {
    std::lock_guard<std::mutex> lock(mu_);
    last_token_embeddings_[text] = std::move(values);
}

void ScriptedBackend::push_reply(std::string reply) {
    std::lock_guard<std::mutex> lock(mu_);
    queue_.push_back(std::move(reply));
}

void ScriptedBackend::set_default_reply(std::string reply) {
    std::lock_guard<std::mutex> lock(mu_);
    default_reply_ = std::move(reply);
}

void ScriptedBackend::add_rule(std::string contains, std::vector<std::string> replies, bool seeded) {
    std::lock_guard<std::mutex> lock(mu_);
    rules_.push_back(Rule{std::move(contains), std::move(replies), seeded, 0});
}

ScoredText ScriptedBackend::raw_score_tokens(const std::string& text) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = scores_.find(text);
    if (it != scores_.end()) {
        ScoredText scored;
        scored.text = text;
        scored.model_id = model_id_;
        scored.tokens = it->second;
        return scored;
    }
    if (mock_fallback_) return mock_score_tokens(text, model_id_);
    throw ScoringUnsupported("no scripted scores for text: " + text);
}

Embedding ScriptedBackend::raw_embed_token(const std::string& token_text) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = embeddings_.find(token_text);
    if (it != embeddings_.end()) return Embedding(it->second);
    if (mock_fallback_) return Embedding(mock_embedding_values(token_text, model_id_));
    throw BackendUnavailable("no scripted embedding for token: " + token_text);
}

Embedding ScriptedBackend::raw_embed_last_token(const std::string& text) {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = last_token_embeddings_.find(text);
    if (it != last_token_embeddings_.end()) return Embedding(it->second);
    auto scored = scores_.find(text);
    if (scored != scores_.end() && !scored->second.empty()) {
        const std::string& last = scored->second.back().token_text;
        auto emb = embeddings_.find(last);
        if (emb != embeddings_.end()) return Embedding(emb->second);
    }
    if (mock_fallback_) {
        std::vector<std::string> toks = mock_tokenize(text);
        return Embedding(mock_embedding_values(toks.back(), model_id_));
    }
    throw BackendUnavailable("no scripted last-token embedding for text: " + text);
}

std::string ScriptedBackend::raw_generate(const GenerationRequest& request, CallMeta& meta) {
    meta = CallMeta{};
    std::lock_guard<std::mutex> lock(mu_);
    if (queue_head_ < queue_.size()) return queue_[queue_head_++];
    for (Rule& rule : rules_) {
        if (request.prompt.find(rule.contains) == std::string::npos) continue;
        if (rule.replies.empty()) continue;
        if (rule.seeded && request.seed) {
            return rule.replies[static_cast<std::uint64_t>(*request.seed) % rule.replies.size()];
        }
        return rule.replies[rule.next++ % rule.replies.size()];
    }
    if (default_reply_) return *default_reply_;
    if (mock_fallback_) {
        return mock_reply(request.prompt, model_id_,
                          request.seed ? static_cast<std::uint64_t>(*request.seed) : 0);
    }
    throw BackendUnavailable("scripted backend: reply script exhausted");
}

}  // namespace famicom
