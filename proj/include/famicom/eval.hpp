#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "famicom/dataset.hpp"
#include "famicom/famicom.hpp"

namespace famicom {

/// One evaluated question: its context, the per-run responses, the voted
/// prediction, and the measures attached to the (context, question) pair.
struct EvalRecord {
    std::string instance_id;
    std::vector<std::string> context_ids;
    std::vector<std::string> responses;
    std::optional<std::string> prediction;
    bool correct = false;
    MeasureBreakdown measures;
};

/// "(X)" with X among labels, first occurrence; else the first standalone
/// letter token among labels; else absent.
std::optional<std::string> extract_answer(const std::string& response,
                                          const std::set<std::string>& labels);

struct VoteResult {
    std::optional<std::string> label;
    bool tie = false;
};

/// Most frequent non-absent label; ties resolved alphabetically and flagged.
VoteResult majority_vote_detailed(const std::vector<std::optional<std::string>>& predictions);
std::optional<std::string> majority_vote(const std::vector<std::optional<std::string>>& predictions);

/// "[question] Options: (A) ... (B) ..." exactly as the model sees it.
std::string render_instance(const McqInstance& instance);

/// Demonstrations separated by blank lines, then the rendered question and
/// the "Answer:" cue.
std::string build_prompt(const std::vector<DemonstrationExample>& demos, const McqInstance& instance);

struct EvalOptions {
    int runs = 5;
    double temperature = 0.8;
    int max_tokens = 256;
    std::uint64_t seed = 0;
    int max_inflight = 1;
    FamiComConfig famicom;
    const ComplexityPromptTemplate* complexity_template = nullptr;  // null -> builtin
};

/// Self-consistency evaluation of each pairing: `runs` sampled generations,
/// majority vote, correctness against gold, measures attached. Items that
/// fail are skipped with a diagnostic; the run fails only if all items do.
/// Records come back sorted by instance id (stable within an id).
std::vector<EvalRecord> evaluate(const std::vector<Pairing>& items, Backend& backend,
                                 const EvalOptions& options,
                                 std::vector<std::string>* diagnostics = nullptr);

/// count(correct) / count(records).
double accuracy(const std::vector<EvalRecord>& records);

}  // namespace famicom
