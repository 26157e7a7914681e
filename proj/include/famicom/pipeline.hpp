#pragma once

#include <map>
#include <string>
#include <vector>

#include "famicom/eval.hpp"
#include "famicom/report.hpp"
#include "famicom/stats.hpp"

namespace famicom {

enum class DemoSelection { Random, Famicom, Knn };

DemoSelection demo_selection_from_string(const std::string& s);
std::string to_string(DemoSelection s);

struct ValidationConfig {
    FamiComConfig famicom;
    const ComplexityPromptTemplate* complexity_template = nullptr;
    DemoSelection demo_selection = DemoSelection::Random;
    int demos_per_question = 3;
    int repeats = 1;
    int runs = 5;
    double temperature = 0.8;
    int max_tokens = 256;
    int n_bins = 50;
    std::uint64_t seed = 0;
    int max_inflight = 1;
};

struct ValidationResult {
    std::vector<EvalRecord> records;
    /// Keyed "famicom" / "familiarity" / "complexity". The complexity
    /// measure is correlated as 1/mean so a positive rho means easier
    /// questions are answered more accurately. Measures that degenerate
    /// (for example, constant complexity under a scripted backend) are
    /// omitted with a diagnostic.
    std::map<std::string, CorrelationReport> correlations;
    std::vector<std::string> diagnostics;
};

/// The cross-task protocol end to end: binary reduction of every instance,
/// demonstration pairing (random cross-task draws, or ranked selection from
/// the pool), self-consistency evaluation, and binned correlations.
ValidationResult run_validation(const std::vector<McqInstance>& instances,
                                const std::vector<DemonstrationExample>& pool,
                                const ValidationConfig& config, Backend& backend);

/// Correlations for prebuilt rows (the `grid` and `report` paths).
std::map<std::string, CorrelationReport> correlate_rows(const std::vector<RecordRow>& rows, int n_bins,
                                                        std::vector<std::string>* diagnostics = nullptr);

}  // namespace famicom
