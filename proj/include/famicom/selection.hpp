#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "famicom/famicom.hpp"

namespace famicom {

struct CandidatePrompt {
    std::string id;
    std::string text;
    std::string source;  // "original" or "generated"
    std::string task_id;
};

/// A question with its chain-of-thought answer, usable as an in-context
/// demonstration for any task.
struct DemonstrationExample {
    std::string id;
    std::string task_id;
    std::string question;
    std::string cot_answer;
};

enum class SelectionMethod { Famicom, Spell, Knn };

std::string to_string(SelectionMethod m);

/// Candidates ordered by non-increasing score; ties broken by id.
struct RankedSelection {
    std::vector<std::pair<std::string, double>> entries;
    SelectionMethod method = SelectionMethod::Famicom;
};

/// Scoring/embedding text of a demonstration: question + "\n" + cot_answer.
std::string demonstration_text(const DemonstrationExample& d);

std::vector<CandidatePrompt> load_candidates(const std::string& path);
std::vector<DemonstrationExample> load_demo_pool(const std::string& path);

/// Ranks candidate prompts by the combined measure of (candidate, query).
/// A candidate whose scoring fails is dropped with a diagnostic; if every
/// candidate fails the selection itself fails. Scoring fans out with at most
/// max_inflight concurrent backend calls; results aggregate in input order,
/// so the ranking is identical at any setting (order-dependent reply scripts
/// need max_inflight 1).
RankedSelection select_prompt_famicom(const std::vector<CandidatePrompt>& candidates,
                                      const std::string& query, const FamiComConfig& config,
                                      Backend& backend, const ComplexityPromptTemplate* tpl = nullptr,
                                      const ComplexityOptions& options = {},
                                      std::vector<std::string>* diagnostics = nullptr,
                                      int max_inflight = 1);

/// Baseline: lowest perplexity of the candidate text wins (the query is not
/// used). Entry scores are 1/perplexity so they are non-increasing.
RankedSelection select_prompt_spell(const std::vector<CandidatePrompt>& candidates, Backend& backend,
                                    std::vector<std::string>* diagnostics = nullptr,
                                    int max_inflight = 1);

/// Top-K pool examples by combined measure against the query. The query's
/// complexity is estimated once and shared by every pair.
RankedSelection rank_demonstrations_famicom(const std::vector<DemonstrationExample>& pool,
                                            const std::string& query, int top_k,
                                            const FamiComConfig& config, Backend& backend,
                                            const ComplexityPromptTemplate* tpl = nullptr,
                                            const ComplexityOptions& options = {},
                                            std::vector<std::string>* diagnostics = nullptr,
                                            int max_inflight = 1);

/// Baseline: top-K by cosine similarity of last-token embeddings.
RankedSelection rank_demonstrations_knn(const std::vector<DemonstrationExample>& pool,
                                        const std::string& query, int top_k, Backend& backend,
                                        std::vector<std::string>* diagnostics = nullptr,
                                        int max_inflight = 1);

void to_json(nlohmann::json& j, const RankedSelection& r);

}  // namespace famicom
