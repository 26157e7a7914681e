#include "famicom/eval.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "famicom/hashing.hpp"
#include "famicom/parallel.hpp"

namespace famicom {

std::optional<std::string> extract_answer(const std::string& response,
                                          const std::set<std::string>& labels) {
    if (labels.empty()) throw DomainError("extract_answer: empty label set");

    for (std::size_t i = 0; i + 2 < response.size(); ++i) {
        if (response[i] == '(' && response[i + 2] == ')') {
            const std::string candidate(1, response[i + 1]);
            if (labels.count(candidate)) return candidate;
        }
    }

    auto is_alnum = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; };
    for (std::size_t i = 0; i < response.size(); ++i) {
        const bool left_ok = i == 0 || !is_alnum(response[i - 1]);
        const bool right_ok = i + 1 >= response.size() || !is_alnum(response[i + 1]);
        if (left_ok && right_ok) {
            const std::string candidate(1, response[i]);
            if (labels.count(candidate)) return candidate;
        }
    }
    return std::nullopt;
}

VoteResult majority_vote_detailed(const std::vector<std::optional<std::string>>& predictions) {
    if (predictions.empty()) throw EmptyInput("majority_vote: no predictions");
    std::map<std::string, int> counts;
    for (const auto& p : predictions) {
        if (p) ++counts[*p];
    }
    VoteResult out;
    if (counts.empty()) return out;

    int best = 0;
    for (const auto& [label, count] : counts) best = std::max(best, count);
    std::vector<std::string> winners;
    for (const auto& [label, count] : counts) {
        if (count == best) winners.push_back(label);
    }
    out.tie = winners.size() > 1;
    out.label = *std::min_element(winners.begin(), winners.end());
    return out;
}

std::optional<std::string> majority_vote(const std::vector<std::optional<std::string>>& predictions) {
    return majority_vote_detailed(predictions).label;
}

std::string render_instance(const McqInstance& instance) {
    std::string out = instance.question + " Options:";
    for (const auto& [label, text] : instance.options) {
        out += " (" + label + ") " + text;
    }
    return out;
}

std::string build_prompt(const std::vector<DemonstrationExample>& demos, const McqInstance& instance) {
    std::string out;
    for (const DemonstrationExample& d : demos) {
        out += demonstration_text(d);
        out += "\n\n";
    }
    out += render_instance(instance);
    out += "\nAnswer:";
    return out;
}

namespace {

struct ItemOutcome {
    std::optional<EvalRecord> record;
    std::string diagnostic;
};

}  // namespace

std::vector<EvalRecord> evaluate(const std::vector<Pairing>& items, Backend& backend,
                                 const EvalOptions& options, std::vector<std::string>* diagnostics) {
    if (options.runs < 1) throw DomainError("evaluate: runs must be >= 1");
    options.famicom.validate();
    const ComplexityPromptTemplate& tpl = options.complexity_template
                                              ? *options.complexity_template
                                              : builtin_template(options.famicom.complexity_method);

    std::vector<ItemOutcome> outcomes = parallel_map<ItemOutcome>(
        items.size(),
        [&](std::size_t i) {
            const Pairing& item = items[i];
            ItemOutcome outcome;
            try {
                EvalRecord rec;
                rec.instance_id = item.instance.id;
                for (const DemonstrationExample& d : item.demos) rec.context_ids.push_back(d.id);

                std::string context_text;
                for (const DemonstrationExample& d : item.demos) {
                    if (!context_text.empty()) context_text += "\n\n";
                    context_text += demonstration_text(d);
                }
                const std::string query_text = render_instance(item.instance);

                ComplexityOptions copt;
                copt.temperature = options.temperature;
                copt.max_tokens = options.max_tokens;
                copt.seed = derive_seed(options.seed, "complexity", i);
                copt.question_id = item.instance.id;
                rec.measures = score_pair(context_text, query_text, options.famicom, backend, &tpl, copt);
                for (const std::string& id : rec.context_ids) {
                    if (!rec.measures.prompt_id.empty()) rec.measures.prompt_id += "+";
                    rec.measures.prompt_id += id;
                }
                rec.measures.query_id = item.instance.id;

                std::set<std::string> labels;
                for (const auto& [label, text] : item.instance.options) labels.insert(label);

                const std::string prompt = build_prompt(item.demos, item.instance);
                std::vector<std::optional<std::string>> votes;
                for (int run = 0; run < options.runs; ++run) {
                    GenerationRequest req;
                    req.prompt = prompt;
                    req.temperature = options.temperature;
                    req.max_tokens = options.max_tokens;
                    req.seed = static_cast<std::int64_t>(
                        derive_seed(options.seed, "run", hash_combine(i, static_cast<std::uint64_t>(run))));
                    rec.responses.push_back(generate(req, backend));
                    votes.push_back(extract_answer(rec.responses.back(), labels));
                }
                const VoteResult vote = majority_vote_detailed(votes);
                if (vote.tie) {
                    outcome.diagnostic = "item " + rec.instance_id + ": vote tie broken alphabetically";
                }
                rec.prediction = vote.label;
                rec.correct = vote.label && *vote.label == item.instance.gold_label;
                outcome.record = std::move(rec);
            } catch (const Error& e) {
                outcome.diagnostic = "item " + item.instance.id + " skipped: " + e.what();
            }
            return outcome;
        },
        options.max_inflight);

    std::vector<EvalRecord> records;
    for (ItemOutcome& o : outcomes) {
        if (!o.diagnostic.empty() && diagnostics) diagnostics->push_back(o.diagnostic);
        if (o.record) records.push_back(std::move(*o.record));
    }
    if (records.empty() && !items.empty()) throw Error("evaluate: every item failed");

    std::stable_sort(records.begin(), records.end(),
                     [](const EvalRecord& a, const EvalRecord& b) { return a.instance_id < b.instance_id; });
    return records;
}

double accuracy(const std::vector<EvalRecord>& records) {
    if (records.empty()) throw DegenerateInput("accuracy: no records");
    std::size_t correct = 0;
    for (const EvalRecord& r : records) {
        if (r.correct) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(records.size());
}

}  // namespace famicom
