#include "famicom/selection.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>

#include "famicom/parallel.hpp"

namespace famicom {

using nlohmann::json;

std::string to_string(SelectionMethod m) {
    switch (m) {
        case SelectionMethod::Famicom: return "famicom";
        case SelectionMethod::Spell: return "spell";
        case SelectionMethod::Knn: return "knn";
    }
    return "famicom";
}

std::string demonstration_text(const DemonstrationExample& d) {
    return d.question + "\n" + d.cot_answer;
}

namespace {

void sort_entries(std::vector<std::pair<std::string, double>>& entries) {
    std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
}

struct ScoredCandidate {
    std::optional<std::pair<std::string, double>> entry;
    std::string diagnostic;
};

/// Scores item i via fn, in input order, dropping failures with a diagnostic.
template <class F>
std::vector<std::pair<std::string, double>> score_all(std::size_t n, F fn, int max_inflight,
                                                      std::vector<std::string>* diagnostics,
                                                      const char* op_name) {
    std::vector<ScoredCandidate> outcomes = parallel_map<ScoredCandidate>(n, fn, max_inflight);
    std::vector<std::pair<std::string, double>> entries;
    for (ScoredCandidate& o : outcomes) {
        if (!o.diagnostic.empty() && diagnostics) diagnostics->push_back(o.diagnostic);
        if (o.entry) entries.push_back(std::move(*o.entry));
    }
    if (entries.empty()) throw Error(std::string(op_name) + ": every candidate failed to score");
    return entries;
}

json parse_jsonl_line(const std::string& line, const std::string& path, int lineno) {
    try {
        return json::parse(line);
    } catch (const json::exception& e) {
        throw SchemaError(path + ":" + std::to_string(lineno) + ": invalid JSON: " + e.what());
    }
}

template <class Fn>
void for_each_jsonl(const std::string& path, Fn fn) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("file not found: " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        fn(parse_jsonl_line(line, path, lineno), lineno);
    }
}

}  // namespace

std::vector<CandidatePrompt> load_candidates(const std::string& path) {
    std::vector<CandidatePrompt> out;
    std::set<std::string> seen;
    for_each_jsonl(path, [&](const json& doc, int lineno) {
        CandidatePrompt c;
        try {
            c.id = doc.at("id").get<std::string>();
            c.text = doc.at("text").get<std::string>();
            c.source = doc.value("source", std::string("original"));
            c.task_id = doc.value("task_id", std::string());
        } catch (const json::exception& e) {
            throw SchemaError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (c.text.empty()) throw SchemaError(path + ":" + std::to_string(lineno) + ": empty text");
        if (c.source != "original" && c.source != "generated") {
            throw SchemaError(path + ":" + std::to_string(lineno) + ": source must be original|generated");
        }
        if (!seen.insert(c.id).second) {
            throw SchemaError(path + ":" + std::to_string(lineno) + ": duplicate id " + c.id);
        }
        out.push_back(std::move(c));
    });
    return out;
}

std::vector<DemonstrationExample> load_demo_pool(const std::string& path) {
    std::vector<DemonstrationExample> out;
    std::set<std::string> seen;
    for_each_jsonl(path, [&](const json& doc, int lineno) {
        DemonstrationExample d;
        try {
            d.id = doc.at("id").get<std::string>();
            d.task_id = doc.at("task_id").get<std::string>();
            d.question = doc.at("question").get<std::string>();
            d.cot_answer = doc.at("cot_answer").get<std::string>();
        } catch (const json::exception& e) {
            throw SchemaError(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
        if (d.question.empty() || d.cot_answer.empty()) {
            throw SchemaError(path + ":" + std::to_string(lineno) + ": empty question or cot_answer");
        }
        if (!seen.insert(d.id).second) {
            throw SchemaError(path + ":" + std::to_string(lineno) + ": duplicate id " + d.id);
        }
        out.push_back(std::move(d));
    });
    return out;
}

RankedSelection select_prompt_famicom(const std::vector<CandidatePrompt>& candidates,
                                      const std::string& query, const FamiComConfig& config,
                                      Backend& backend, const ComplexityPromptTemplate* tpl,
                                      const ComplexityOptions& options,
                                      std::vector<std::string>* diagnostics, int max_inflight) {
    if (candidates.empty()) throw EmptyInput("select_prompt_famicom: no candidates");
    RankedSelection out;
    out.method = SelectionMethod::Famicom;
    out.entries = score_all(
        candidates.size(),
        [&](std::size_t i) {
            const CandidatePrompt& c = candidates[i];
            ScoredCandidate scored;
            try {
                MeasureBreakdown m = score_pair(c.text, query, config, backend, tpl, options);
                scored.entry = {c.id, m.score};
            } catch (const Error& e) {
                scored.diagnostic = "candidate " + c.id + " dropped: " + e.what();
            }
            return scored;
        },
        max_inflight, diagnostics, "select_prompt_famicom");
    sort_entries(out.entries);
    return out;
}

RankedSelection select_prompt_spell(const std::vector<CandidatePrompt>& candidates, Backend& backend,
                                    std::vector<std::string>* diagnostics, int max_inflight) {
    if (candidates.empty()) throw EmptyInput("select_prompt_spell: no candidates");
    RankedSelection out;
    out.method = SelectionMethod::Spell;
    out.entries = score_all(
        candidates.size(),
        [&](std::size_t i) {
            const CandidatePrompt& c = candidates[i];
            ScoredCandidate scored;
            try {
                const double ppl = perplexity(score_tokens(c.text, backend));
                scored.entry = {c.id, 1.0 / ppl};
            } catch (const Error& e) {
                scored.diagnostic = "candidate " + c.id + " dropped: " + e.what();
            }
            return scored;
        },
        max_inflight, diagnostics, "select_prompt_spell");
    sort_entries(out.entries);
    return out;
}

RankedSelection rank_demonstrations_famicom(const std::vector<DemonstrationExample>& pool,
                                            const std::string& query, int top_k,
                                            const FamiComConfig& config, Backend& backend,
                                            const ComplexityPromptTemplate* tpl,
                                            const ComplexityOptions& options,
                                            std::vector<std::string>* diagnostics, int max_inflight) {
    if (top_k < 1) throw DomainError("rank_demonstrations_famicom: K must be >= 1");
    if (static_cast<int>(pool.size()) < top_k) {
        throw PoolTooSmall("pool has " + std::to_string(pool.size()) + " examples, need " +
                           std::to_string(top_k));
    }
    config.validate();
    const ComplexityPromptTemplate& use_tpl = tpl ? *tpl : builtin_template(config.complexity_method);
    const ComplexityReport complexity = estimate(query, use_tpl, config.k_complexity, backend, options);

    RankedSelection out;
    out.method = SelectionMethod::Famicom;
    out.entries = score_all(
        pool.size(),
        [&](std::size_t i) {
            const DemonstrationExample& d = pool[i];
            ScoredCandidate scored;
            try {
                MeasureBreakdown m =
                    score_pair_with_complexity(demonstration_text(d), query, complexity, config, backend);
                scored.entry = {d.id, m.score};
            } catch (const Error& e) {
                scored.diagnostic = "example " + d.id + " dropped: " + e.what();
            }
            return scored;
        },
        max_inflight, diagnostics, "rank_demonstrations_famicom");
    sort_entries(out.entries);
    if (static_cast<int>(out.entries.size()) > top_k) out.entries.resize(top_k);
    return out;
}

RankedSelection rank_demonstrations_knn(const std::vector<DemonstrationExample>& pool,
                                        const std::string& query, int top_k, Backend& backend,
                                        std::vector<std::string>* diagnostics, int max_inflight) {
    if (top_k < 1) throw DomainError("rank_demonstrations_knn: K must be >= 1");
    if (static_cast<int>(pool.size()) < top_k) {
        throw PoolTooSmall("pool has " + std::to_string(pool.size()) + " examples, need " +
                           std::to_string(top_k));
    }
    const Embedding query_emb = embed_last_token(query, backend);

    RankedSelection out;
    out.method = SelectionMethod::Knn;
    out.entries = score_all(
        pool.size(),
        [&](std::size_t i) {
            const DemonstrationExample& d = pool[i];
            ScoredCandidate scored;
            try {
                const Embedding e = embed_last_token(demonstration_text(d), backend);
                scored.entry = {d.id, cosine(e, query_emb)};
            } catch (const Error& e) {
                scored.diagnostic = "example " + d.id + " dropped: " + e.what();
            }
            return scored;
        },
        max_inflight, diagnostics, "rank_demonstrations_knn");
    sort_entries(out.entries);
    if (static_cast<int>(out.entries.size()) > top_k) out.entries.resize(top_k);
    return out;
}

void to_json(json& j, const RankedSelection& r) {
    j = json::array();
    for (const auto& [id, score] : r.entries) {
        j.push_back(json{{"id", id}, {"score", score}, {"method", to_string(r.method)}});
    }
}

}  // namespace famicom
