#include "famicom/dataset.hpp"

#include <fstream>
#include <map>
#include <set>

#include <json.hpp>

#include "famicom/hashing.hpp"

namespace famicom {

using nlohmann::json;

const std::string& McqInstance::gold_text() const {
    for (const auto& [label, text] : options) {
        if (label == gold_label) return text;
    }
    throw SchemaError("instance " + id + ": gold label " + gold_label + " not among options");
}

namespace {

void validate_instance(const McqInstance& inst, const std::string& where) {
    if (inst.id.empty()) throw SchemaError(where + ": empty id");
    if (inst.question.empty()) throw SchemaError(where + ": empty question");
    if (inst.options.empty()) throw SchemaError(where + ": no options");
    std::set<std::string> labels;
    for (std::size_t i = 0; i < inst.options.size(); ++i) {
        const std::string expected(1, static_cast<char>('A' + i));
        if (inst.options[i].first != expected) {
            throw SchemaError(where + ": option " + std::to_string(i) + " must be labeled " + expected);
        }
        if (!labels.insert(inst.options[i].first).second) {
            throw SchemaError(where + ": duplicate label " + inst.options[i].first);
        }
    }
    if (!labels.count(inst.gold_label)) {
        throw SchemaError(where + ": answer " + inst.gold_label + " not among labels");
    }
}

}  // namespace

std::vector<McqInstance> load_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("dataset not found: " + path);

    std::vector<McqInstance> out;
    std::set<std::string> seen_ids;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = path + ":" + std::to_string(lineno);

        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::exception& e) {
            throw SchemaError(where + ": invalid JSON: " + e.what());
        }

        McqInstance inst;
        try {
            inst.id = doc.at("id").get<std::string>();
            inst.task_id = doc.at("task").get<std::string>();
            inst.question = doc.at("question").get<std::string>();
            for (const json& opt : doc.at("options")) {
                inst.options.emplace_back(opt.at("label").get<std::string>(),
                                          opt.at("text").get<std::string>());
            }
            inst.gold_label = doc.at("answer").get<std::string>();
        } catch (const json::exception& e) {
            throw SchemaError(where + ": " + e.what());
        }
        validate_instance(inst, where);
        if (!seen_ids.insert(inst.id).second) throw SchemaError(where + ": duplicate id " + inst.id);
        out.push_back(std::move(inst));
    }
    return out;
}

McqInstance reduce_to_binary(const McqInstance& instance, std::uint64_t seed) {
    if (instance.options.size() < 2) {
        throw TooFewOptions("instance " + instance.id + " has fewer than 2 options");
    }

    Rng rng(hash_combine(derive_seed(seed, "binary-reduction"), fnv1a64(instance.id)));

    std::vector<std::size_t> distractors;
    for (std::size_t i = 0; i < instance.options.size(); ++i) {
        if (instance.options[i].first != instance.gold_label) distractors.push_back(i);
    }
    const std::string& gold = instance.gold_text();
    const std::string& foil = instance.options[distractors[rng.below(distractors.size())]].second;
    const bool gold_first = rng.below(2) == 0;

    McqInstance out;
    out.id = instance.id;
    out.task_id = instance.task_id;
    out.question = instance.question;
    if (gold_first) {
        out.options = {{"A", gold}, {"B", foil}};
        out.gold_label = "A";
    } else {
        out.options = {{"A", foil}, {"B", gold}};
        out.gold_label = "B";
    }
    return out;
}

std::vector<Pairing> generate_cross_task_pairings(const std::vector<McqInstance>& instances,
                                                  const std::vector<DemonstrationExample>& pool,
                                                  int demos_per_question, int repeats,
                                                  std::uint64_t seed) {
    if (demos_per_question < 1) throw DomainError("demos_per_question must be >= 1");
    if (repeats < 0) throw DomainError("repeats must be >= 0");

    // Index eligible demos once per distinct task.
    std::map<std::string, std::vector<std::size_t>> eligible_by_task;
    for (const McqInstance& inst : instances) {
        if (eligible_by_task.count(inst.task_id)) continue;
        std::vector<std::size_t> eligible;
        for (std::size_t i = 0; i < pool.size(); ++i) {
            if (pool[i].task_id != inst.task_id) eligible.push_back(i);
        }
        if (eligible.size() < static_cast<std::size_t>(demos_per_question)) {
            throw InsufficientPool("task " + inst.task_id + " has only " +
                                   std::to_string(eligible.size()) +
                                   " cross-task demonstrations, need " +
                                   std::to_string(demos_per_question));
        }
        eligible_by_task.emplace(inst.task_id, std::move(eligible));
    }

    std::vector<Pairing> out;
    out.reserve(instances.size() * static_cast<std::size_t>(repeats));
    for (const McqInstance& inst : instances) {
        const std::vector<std::size_t>& eligible = eligible_by_task.at(inst.task_id);
        Rng rng(hash_combine(derive_seed(seed, "pairings"), fnv1a64(inst.id)));
        for (int r = 0; r < repeats; ++r) {
            Pairing p;
            p.instance = inst;
            for (std::size_t pick :
                 rng.sample_indices(eligible.size(), static_cast<std::size_t>(demos_per_question))) {
                p.demos.push_back(pool[eligible[pick]]);
            }
            out.push_back(std::move(p));
        }
    }
    return out;
}

}  // namespace famicom
