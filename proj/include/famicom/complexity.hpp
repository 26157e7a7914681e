#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "famicom/backend.hpp"

namespace famicom {

enum class ComplexityMethod { Direct, Guided, Operational };

std::string to_string(ComplexityMethod m);
ComplexityMethod complexity_method_from_string(const std::string& s);

/// Worked exemplar for few-shot complexity prompting: a question, the worked
/// steps (or a program, for the operational method), and the step count.
struct ComplexityExemplar {
    std::string question;
    std::string worked;
    int count = 0;
};

struct ComplexityPromptTemplate {
    ComplexityMethod kind = ComplexityMethod::Direct;
    std::string preamble;
    std::vector<ComplexityExemplar> exemplars;

    void validate() const;

    static ComplexityPromptTemplate from_json_file(const std::string& path);
    static ComplexityPromptTemplate from_json_text(const std::string& text);
};

/// Templates shipped with the library (assets/templates mirrors them).
const ComplexityPromptTemplate& builtin_template(ComplexityMethod kind);

/// Estimated step count for one question: k sampled counts and their mean.
struct ComplexityReport {
    ComplexityMethod method = ComplexityMethod::Direct;
    std::vector<int> samples;
    double mean = 0.0;
    std::string question_id;
};

struct ComplexityOptions {
    double temperature = 0.8;
    int max_tokens = 256;
    std::uint64_t seed = 0;
    int retry_limit = 2;  // resamples allowed per failed parse
    std::string question_id;
};

/// Last base-10 integer in [1, 100] found in the response.
int parse_step_count(const std::string& response);

/// Renders the complexity prompt for `question` under `tpl`.
std::string render_complexity_prompt(const ComplexityPromptTemplate& tpl, const std::string& question);

/// Queries the model k times with the direct/guided template and averages the
/// parsed counts. Each failed parse is resampled up to retry_limit times.
ComplexityReport estimate_complexity(const std::string& question, const ComplexityPromptTemplate& tpl,
                                     int k, Backend& backend, const ComplexityOptions& options = {});

/// Operational variant: each sample generates a program, extracts the fenced
/// block, and counts primitive call sites. Zero-op programs count as 1.
ComplexityReport estimate_operational_complexity(const std::string& question,
                                                 const ComplexityPromptTemplate& tpl, int k,
                                                 Backend& backend,
                                                 const ComplexityOptions& options = {});

/// Dispatches on tpl.kind.
ComplexityReport estimate(const std::string& question, const ComplexityPromptTemplate& tpl, int k,
                          Backend& backend, const ComplexityOptions& options = {});

}  // namespace famicom
