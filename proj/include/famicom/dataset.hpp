#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "famicom/selection.hpp"

namespace famicom {

/// One multiple-choice question. Labels are consecutive uppercase letters
/// starting at "A" and the gold label is always among them.
struct McqInstance {
    std::string id;
    std::string task_id;
    std::string question;
    std::vector<std::pair<std::string, std::string>> options;  // (label, text)
    std::string gold_label;

    const std::string& gold_text() const;
};

/// JSONL ingestion: {"id", "task", "question", "options": [{"label","text"}],
/// "answer"}. Any malformed line fails the load with its line number.
std::vector<McqInstance> load_dataset(const std::string& path);

/// Keeps the gold option plus one uniformly drawn distractor, shuffles their
/// order, and relabels to (A)/(B). Deterministic per (seed, instance.id).
McqInstance reduce_to_binary(const McqInstance& instance, std::uint64_t seed);

/// A question paired with its cross-task demonstrations.
struct Pairing {
    McqInstance instance;
    std::vector<DemonstrationExample> demos;
};

/// For every instance, `repeats` draws of demos_per_question demonstrations,
/// without replacement, from pool entries of *other* tasks only.
std::vector<Pairing> generate_cross_task_pairings(const std::vector<McqInstance>& instances,
                                                  const std::vector<DemonstrationExample>& pool,
                                                  int demos_per_question, int repeats,
                                                  std::uint64_t seed);

}  // namespace famicom
