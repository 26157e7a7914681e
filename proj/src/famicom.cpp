#include "famicom/famicom.hpp"

#include <cmath>

namespace famicom {

void FamiComConfig::validate() const {
    if (!(a > 0.0)) throw DomainError("config: a must be positive");
    if (!(b > 0.0)) throw DomainError("config: b must be positive");
    if (k_salient < 2) throw DomainError("config: k_salient must be >= 2");
    if (k_complexity < 1) throw DomainError("config: k_complexity must be >= 1");
}

double famicom_score(double f, double c, double a, double b) {
    if (!(f > 0.0)) throw DomainError("famicom_score: familiarity must be positive");
    if (!(c >= 1.0)) throw DomainError("famicom_score: complexity must be >= 1");
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("famicom_score: a and b must be positive");
    return std::pow(f, a) * std::pow(c, -b);
}

MeasureBreakdown score_pair(const std::string& prompt, const std::string& query,
                            const FamiComConfig& config, Backend& backend,
                            const ComplexityPromptTemplate* tpl, const ComplexityOptions& options) {
    if (prompt.empty()) throw EmptyInput("score_pair: prompt is empty");
    if (query.empty()) throw EmptyInput("score_pair: query is empty");
    config.validate();

    const ComplexityPromptTemplate& use_tpl = tpl ? *tpl : builtin_template(config.complexity_method);
    const ComplexityReport complexity = estimate(query, use_tpl, config.k_complexity, backend, options);
    return score_pair_with_complexity(prompt, query, complexity, config, backend);
}

MeasureBreakdown score_pair_with_complexity(const std::string& prompt, const std::string& query,
                                            const ComplexityReport& complexity,
                                            const FamiComConfig& config, Backend& backend) {
    if (prompt.empty()) throw EmptyInput("score_pair: prompt is empty");
    if (query.empty()) throw EmptyInput("score_pair: query is empty");
    config.validate();

    MeasureBreakdown out;
    out.familiarity =
        combined_familiarity(prompt, query, config.familiarity_method, config.k_salient, backend);
    out.complexity = complexity;
    out.score = famicom_score(out.familiarity.value, out.complexity.mean, config.a, config.b);
    out.config = config;
    return out;
}

void to_json(nlohmann::json& j, const FamiComConfig& c) {
    j = nlohmann::json{{"a", c.a},
                       {"b", c.b},
                       {"familiarity_method", to_string(c.familiarity_method)},
                       {"k_salient", c.k_salient},
                       {"complexity_method", to_string(c.complexity_method)},
                       {"k_complexity", c.k_complexity}};
}

void to_json(nlohmann::json& j, const FamiliarityValue& v) {
    j = nlohmann::json{{"value", v.value}, {"method", to_string(v.method)}, {"detail", v.detail}};
    if (v.method == FamiliarityMethod::Sim) j["k"] = v.k;
}

void to_json(nlohmann::json& j, const ComplexityReport& r) {
    j = nlohmann::json{{"method", to_string(r.method)},
                       {"samples", r.samples},
                       {"mean", r.mean},
                       {"question_id", r.question_id}};
}

void to_json(nlohmann::json& j, const MeasureBreakdown& m) {
    j = nlohmann::json{{"familiarity", m.familiarity},
                       {"complexity", m.complexity},
                       {"score", m.score},
                       {"a", m.config.a},
                       {"b", m.config.b},
                       {"config", m.config},
                       {"prompt_id", m.prompt_id},
                       {"query_id", m.query_id}};
}

}  // namespace famicom
