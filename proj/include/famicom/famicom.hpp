#pragma once

#include <string>

#include <json.hpp>

#include "famicom/complexity.hpp"
#include "famicom/familiarity.hpp"

namespace famicom {

/// Hyper-parameters and method choices for the combined measure
/// f^a * c^(-b). a and b must be positive.
struct FamiComConfig {
    double a = 1.0;
    double b = 1.0;
    FamiliarityMethod familiarity_method = FamiliarityMethod::Sim;
    int k_salient = 20;
    ComplexityMethod complexity_method = ComplexityMethod::Guided;
    int k_complexity = 5;

    void validate() const;
};

/// Everything that went into one (prompt, query) score, recomputable:
/// score == familiarity.value^a * complexity.mean^(-b) bit for bit.
struct MeasureBreakdown {
    FamiliarityValue familiarity;
    ComplexityReport complexity;
    double score = 0.0;
    FamiComConfig config;
    std::string prompt_id;
    std::string query_id;
};

double famicom_score(double f, double c, double a, double b);

/// Familiarity of the pooled prompt+query, complexity of the query alone,
/// combined per the config. Uses the built-in template for the configured
/// complexity method unless one is supplied.
MeasureBreakdown score_pair(const std::string& prompt, const std::string& query,
                            const FamiComConfig& config, Backend& backend,
                            const ComplexityPromptTemplate* tpl = nullptr,
                            const ComplexityOptions& options = {});

/// Same, with the query's complexity already known (demonstration ranking
/// computes it once per query).
MeasureBreakdown score_pair_with_complexity(const std::string& prompt, const std::string& query,
                                            const ComplexityReport& complexity,
                                            const FamiComConfig& config, Backend& backend);

void to_json(nlohmann::json& j, const FamiComConfig& c);
void to_json(nlohmann::json& j, const FamiliarityValue& v);
void to_json(nlohmann::json& j, const ComplexityReport& r);
void to_json(nlohmann::json& j, const MeasureBreakdown& m);

}  // namespace famicom
