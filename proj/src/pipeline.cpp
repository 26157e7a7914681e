#include "famicom/pipeline.hpp"

#include <algorithm>

#include "famicom/hashing.hpp"

namespace famicom {

DemoSelection demo_selection_from_string(const std::string& s) {
    if (s == "random") return DemoSelection::Random;
    if (s == "famicom") return DemoSelection::Famicom;
    if (s == "knn") return DemoSelection::Knn;
    throw DomainError("unknown demo selection: " + s);
}

std::string to_string(DemoSelection s) {
    switch (s) {
        case DemoSelection::Random: return "random";
        case DemoSelection::Famicom: return "famicom";
        case DemoSelection::Knn: return "knn";
    }
    return "random";
}

namespace {

/// Ranked selection pairings: the top-K demos for each instance, placed in
/// ascending score order so the strongest demonstration sits next to the
/// question.
std::vector<Pairing> selection_pairings(const std::vector<McqInstance>& instances,
                                        const std::vector<DemonstrationExample>& pool,
                                        const ValidationConfig& config, Backend& backend,
                                        std::vector<std::string>* diagnostics) {
    std::map<std::string, const DemonstrationExample*> by_id;
    for (const DemonstrationExample& d : pool) by_id[d.id] = &d;

    std::vector<Pairing> out;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const McqInstance& inst = instances[i];
        const std::string query = render_instance(inst);
        RankedSelection ranked;
        if (config.demo_selection == DemoSelection::Famicom) {
            ComplexityOptions copt;
            copt.temperature = config.temperature;
            copt.max_tokens = config.max_tokens;
            copt.seed = derive_seed(config.seed, "selection-complexity", i);
            copt.question_id = inst.id;
            ranked = rank_demonstrations_famicom(pool, query, config.demos_per_question, config.famicom,
                                                 backend, config.complexity_template, copt, diagnostics,
                                                 config.max_inflight);
        } else {
            ranked = rank_demonstrations_knn(pool, query, config.demos_per_question, backend, diagnostics,
                                             config.max_inflight);
        }
        Pairing p;
        p.instance = inst;
        for (auto it = ranked.entries.rbegin(); it != ranked.entries.rend(); ++it) {
            p.demos.push_back(*by_id.at(it->first));
        }
        out.push_back(std::move(p));
    }
    return out;
}

}  // namespace

ValidationResult run_validation(const std::vector<McqInstance>& instances,
                                const std::vector<DemonstrationExample>& pool,
                                const ValidationConfig& config, Backend& backend) {
    config.famicom.validate();
    if (instances.empty()) throw EmptyInput("run_validation: no instances");

    ValidationResult result;

    std::vector<McqInstance> reduced;
    reduced.reserve(instances.size());
    for (const McqInstance& inst : instances) reduced.push_back(reduce_to_binary(inst, config.seed));

    std::vector<Pairing> pairings;
    if (config.demo_selection == DemoSelection::Random) {
        pairings = generate_cross_task_pairings(reduced, pool, config.demos_per_question,
                                                config.repeats, config.seed);
    } else {
        pairings = selection_pairings(reduced, pool, config, backend, &result.diagnostics);
    }

    EvalOptions eopt;
    eopt.runs = config.runs;
    eopt.temperature = config.temperature;
    eopt.max_tokens = config.max_tokens;
    eopt.seed = config.seed;
    eopt.max_inflight = config.max_inflight;
    eopt.famicom = config.famicom;
    eopt.complexity_template = config.complexity_template;
    result.records = evaluate(pairings, backend, eopt, &result.diagnostics);

    std::vector<RecordRow> rows;
    rows.reserve(result.records.size());
    for (const EvalRecord& r : result.records) rows.push_back(to_row(r));
    result.correlations = correlate_rows(rows, config.n_bins, &result.diagnostics);
    return result;
}

std::map<std::string, CorrelationReport> correlate_rows(const std::vector<RecordRow>& rows, int n_bins,
                                                        std::vector<std::string>* diagnostics) {
    std::map<std::string, CorrelationReport> out;
    const std::vector<std::pair<std::string, double RecordRow::*>> measures = {
        {"famicom", &RecordRow::score},
        {"familiarity", &RecordRow::familiarity},
    };
    auto correlate = [&](const std::string& name, auto selector) {
        std::vector<std::pair<double, bool>> points;
        points.reserve(rows.size());
        for (const RecordRow& r : rows) points.emplace_back(selector(r), r.correct);
        try {
            out.emplace(name, bin_and_correlate(points, n_bins));
        } catch (const DegenerateInput& e) {
            if (diagnostics) diagnostics->push_back("measure " + name + " not correlated: " + e.what());
        }
    };
    for (const auto& [name, member] : measures) {
        correlate(name, [member](const RecordRow& r) { return r.*member; });
    }
    // Inverse, so that a positive rho means the expected direction.
    correlate("complexity", [](const RecordRow& r) { return 1.0 / r.complexity; });
    return out;
}

}  // namespace famicom
