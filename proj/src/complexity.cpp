#include "famicom/complexity.hpp"

#include <cctype>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "famicom/hashing.hpp"
#include "famicom/rasp.hpp"

namespace famicom {

using nlohmann::json;

std::string to_string(ComplexityMethod m) {
    switch (m) {
        case ComplexityMethod::Direct: return "direct";
        case ComplexityMethod::Guided: return "guided";
        case ComplexityMethod::Operational: return "operational";
    }
    return "direct";
}

ComplexityMethod complexity_method_from_string(const std::string& s) {
    if (s == "direct") return ComplexityMethod::Direct;
    if (s == "guided") return ComplexityMethod::Guided;
    if (s == "operational") return ComplexityMethod::Operational;
    throw DomainError("unknown complexity method: " + s);
}

void ComplexityPromptTemplate::validate() const {
    if (kind == ComplexityMethod::Direct && !exemplars.empty()) {
        throw SchemaError("direct template must have no exemplars");
    }
    if (kind != ComplexityMethod::Direct && exemplars.empty()) {
        throw SchemaError("guided/operational template needs at least one exemplar");
    }
    for (const ComplexityExemplar& e : exemplars) {
        if (e.count < 1) throw SchemaError("exemplar count must be >= 1");
    }
}

ComplexityPromptTemplate ComplexityPromptTemplate::from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound("template file not found: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str());
}

ComplexityPromptTemplate ComplexityPromptTemplate::from_json_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("template is not valid JSON: ") + e.what());
    }
    ComplexityPromptTemplate tpl;
    try {
        tpl.kind = complexity_method_from_string(doc.at("kind").get<std::string>());
        tpl.preamble = doc.at("preamble").get<std::string>();
        for (const json& e : doc.value("exemplars", json::array())) {
            tpl.exemplars.push_back(ComplexityExemplar{e.at("question").get<std::string>(),
                                                       e.at("worked").get<std::string>(),
                                                       e.at("count").get<int>()});
        }
    } catch (const json::exception& e) {
        throw SchemaError(std::string("template field error: ") + e.what());
    }
    tpl.validate();
    return tpl;
}

int parse_step_count(const std::string& response) {
    int found = -1;
    std::size_t i = 0;
    while (i < response.size()) {
        if (std::isdigit(static_cast<unsigned char>(response[i]))) {
            long value = 0;
            bool out_of_range = false;
            while (i < response.size() && std::isdigit(static_cast<unsigned char>(response[i]))) {
                if (!out_of_range) {
                    value = value * 10 + (response[i] - '0');
                    if (value > 100) out_of_range = true;
                }
                ++i;
            }
            if (!out_of_range && value >= 1) found = static_cast<int>(value);
        } else {
            ++i;
        }
    }
    if (found < 0) throw NoCountFound("no integer in [1, 100] in response");
    return found;
}

std::string render_complexity_prompt(const ComplexityPromptTemplate& tpl, const std::string& question) {
    std::string out = tpl.preamble;
    for (const ComplexityExemplar& e : tpl.exemplars) {
        out += "\n\nQuestion: " + e.question + "\n";
        if (tpl.kind == ComplexityMethod::Operational) {
            out += "```\n" + e.worked;
            if (!e.worked.empty() && e.worked.back() != '\n') out += "\n";
            out += "```\nOperations: " + std::to_string(e.count);
        } else {
            out += e.worked + "\nAnswer: " + std::to_string(e.count);
        }
    }
    out += "\n\nQuestion: " + question + "\nAnswer:";
    return out;
}

namespace {

ComplexityReport run_samples(const std::string& question, const ComplexityPromptTemplate& tpl, int k,
                             Backend& backend, const ComplexityOptions& options,
                             int (*parse_sample)(const std::string&)) {
    if (question.empty()) throw EmptyInput("complexity: question is empty");
    if (k < 1) throw DomainError("complexity: k must be >= 1");
    tpl.validate();

    const std::string prompt = render_complexity_prompt(tpl, question);
    ComplexityReport report;
    report.method = tpl.kind;
    report.question_id = options.question_id;

    std::string last_failure;
    for (int sample = 0; sample < k; ++sample) {
        bool got = false;
        for (int attempt = 0; attempt <= options.retry_limit && !got; ++attempt) {
            GenerationRequest req;
            req.prompt = prompt;
            req.temperature = options.temperature;
            req.max_tokens = options.max_tokens;
            req.seed = static_cast<std::int64_t>(derive_seed(
                options.seed, "complexity-sample",
                hash_combine(static_cast<std::uint64_t>(sample), static_cast<std::uint64_t>(attempt))));
            const std::string response = generate(req, backend);
            try {
                report.samples.push_back(parse_sample(response));
                got = true;
            } catch (const Error& e) {
                last_failure = e.what();
            }
        }
        if (!got) {
            throw ComplexityUnparseable("sample " + std::to_string(sample + 1) + " of " +
                                        std::to_string(k) + " failed after " +
                                        std::to_string(options.retry_limit + 1) +
                                        " attempts: " + last_failure);
        }
    }
    report.mean = std::accumulate(report.samples.begin(), report.samples.end(), 0.0) /
                  static_cast<double>(report.samples.size());
    return report;
}

int parse_count_sample(const std::string& response) { return parse_step_count(response); }

int parse_program_sample(const std::string& response) {
    const int ops = rasp::count_ops(rasp::extract_fenced_block(response));
    return ops < 1 ? 1 : ops;
}

}  // namespace

ComplexityReport estimate_complexity(const std::string& question, const ComplexityPromptTemplate& tpl,
                                     int k, Backend& backend, const ComplexityOptions& options) {
    if (tpl.kind == ComplexityMethod::Operational) {
        throw DomainError("estimate_complexity: use estimate_operational_complexity for operational templates");
    }
    return run_samples(question, tpl, k, backend, options, parse_count_sample);
}

ComplexityReport estimate_operational_complexity(const std::string& question,
                                                 const ComplexityPromptTemplate& tpl, int k,
                                                 Backend& backend, const ComplexityOptions& options) {
    if (tpl.kind != ComplexityMethod::Operational) {
        throw DomainError("estimate_operational_complexity: template kind must be operational");
    }
    return run_samples(question, tpl, k, backend, options, parse_program_sample);
}

ComplexityReport estimate(const std::string& question, const ComplexityPromptTemplate& tpl, int k,
                          Backend& backend, const ComplexityOptions& options) {
    if (tpl.kind == ComplexityMethod::Operational) {
        return estimate_operational_complexity(question, tpl, k, backend, options);
    }
    return estimate_complexity(question, tpl, k, backend, options);
}

}  // namespace famicom
