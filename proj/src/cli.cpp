#include "famicom/cli.hpp"

#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "famicom/csv.hpp"
#include "famicom/hashing.hpp"
#include "famicom/http_backend.hpp"
#include "famicom/mock_backend.hpp"
#include "famicom/pipeline.hpp"
#include "famicom/scripted_backend.hpp"

namespace famicom {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CliOptions {
    std::string backend_url;
    bool mock = false;
    std::string scripted;
    std::string model;
    std::string embed_model;

    double a = 1.0;
    double b = 1.0;
    std::string fam_method = "sim";
    int k_salient = 20;
    std::string complexity_method = "guided";
    int k_complexity = 5;

    int runs = 5;
    double temperature = 0.8;
    int bins = 50;
    std::uint64_t seed = 0;
    int max_inflight = 8;
    int max_tokens = 256;
    std::string out_dir = "out";
    std::string template_path;
    std::string config_path;

    std::string prompt, prompt_file;
    std::string query, query_file;
    std::string text, text_file;
    std::string question, question_file;
    std::string dataset, pool, candidates, records;
    std::string method;
    std::string demo_selection = "random";
    int top_k = 3;
    int demos_per_question = 3;
    int repeats = 1;
    std::string a_values, b_values;
};

/// Applies config-file values to options the command line left untouched
/// (precedence: flags > config file > defaults).
class ConfigBinder {
public:
    void bind(CLI::Option* opt, std::string key, std::function<void(const json&)> apply) {
        bindings_.push_back(Binding{opt, std::move(key), std::move(apply)});
    }

    void apply(const json& cfg) const {
        // A key counts as set on the command line if any option bound to it
        // was passed (the same key can back one flag on several subcommands).
        std::set<std::string> from_flags;
        for (const Binding& b : bindings_) {
            if (b.opt->count() > 0) from_flags.insert(b.key);
        }
        std::set<std::string> applied;
        for (const Binding& b : bindings_) {
            if (from_flags.count(b.key) || applied.count(b.key)) continue;
            if (!cfg.contains(b.key)) continue;
            try {
                b.apply(cfg.at(b.key));
            } catch (const json::exception& e) {
                throw UsageError("config key '" + b.key + "': " + e.what());
            }
            applied.insert(b.key);
        }
    }

private:
    struct Binding {
        CLI::Option* opt;
        std::string key;
        std::function<void(const json&)> apply;
    };
    std::vector<Binding> bindings_;
};

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileNotFound("file not found: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    if (!text.empty() && text.back() == '\n') text.pop_back();
    if (!text.empty() && text.back() == '\r') text.pop_back();
    return text;
}

std::string required_input(const std::string& inline_value, const std::string& file_value,
                           const std::string& what) {
    if (!inline_value.empty() && !file_value.empty()) {
        throw UsageError("give --" + what + " or --" + what + "-file, not both");
    }
    if (!inline_value.empty()) return inline_value;
    if (!file_value.empty()) return read_text_file(file_value);
    throw UsageError("missing --" + what + " or --" + what + "-file");
}

std::unique_ptr<Backend> make_backend(const CliOptions& o) {
    const int selectors = (o.backend_url.empty() ? 0 : 1) + (o.mock ? 1 : 0) + (o.scripted.empty() ? 0 : 1);
    if (selectors != 1) {
        throw UsageError("choose exactly one backend: --backend-url, --mock, or --scripted <path>");
    }
    if (o.mock) {
        return std::make_unique<MockBackend>(o.model.empty() ? "mock-model" : o.model);
    }
    if (!o.scripted.empty()) {
        return ScriptedBackend::from_json_file(o.scripted);
    }
    HttpBackendConfig cfg;
    cfg.base_url = o.backend_url;
    cfg.model = o.model;
    cfg.embed_model = o.embed_model;
    if (cfg.model.empty()) throw UsageError("--model is required with --backend-url");
    return std::make_unique<HttpBackend>(cfg);
}

FamiComConfig famicom_config(const CliOptions& o) {
    FamiComConfig cfg;
    cfg.a = o.a;
    cfg.b = o.b;
    cfg.k_salient = o.k_salient;
    cfg.k_complexity = o.k_complexity;
    try {
        cfg.familiarity_method = familiarity_method_from_string(o.fam_method);
        cfg.complexity_method = complexity_method_from_string(o.complexity_method);
        cfg.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

const ComplexityPromptTemplate* resolve_template(const CliOptions& o, ComplexityPromptTemplate& storage) {
    if (o.template_path.empty()) return nullptr;
    storage = ComplexityPromptTemplate::from_json_file(o.template_path);
    return &storage;
}

ComplexityOptions complexity_options(const CliOptions& o, const std::string& question_id) {
    ComplexityOptions copt;
    copt.temperature = o.temperature;
    copt.max_tokens = o.max_tokens;
    copt.seed = o.seed;
    copt.question_id = question_id;
    return copt;
}

json config_echo(const CliOptions& o, const std::string& subcommand) {
    json j{{"subcommand", subcommand},
           {"model", o.model},
           {"embed_model", o.embed_model},
           {"a", o.a},
           {"b", o.b},
           {"fam_method", o.fam_method},
           {"k_salient", o.k_salient},
           {"complexity_method", o.complexity_method},
           {"k_complexity", o.k_complexity},
           {"runs", o.runs},
           {"temperature", o.temperature},
           {"bins", o.bins},
           {"seed", o.seed},
           {"max_inflight", o.max_inflight},
           {"max_tokens", o.max_tokens}};
    if (o.mock) j["backend"] = "mock";
    else if (!o.scripted.empty()) j["backend"] = json{{"scripted", o.scripted}};
    else j["backend"] = json{{"url", o.backend_url}};
    if (!o.template_path.empty()) j["template"] = o.template_path;
    if (!o.dataset.empty()) j["dataset"] = o.dataset;
    if (!o.pool.empty()) j["pool"] = o.pool;
    if (!o.candidates.empty()) j["candidates"] = o.candidates;
    if (!o.records.empty()) j["records"] = o.records;
    if (!o.method.empty()) j["method"] = o.method;
    if (subcommand == "validate") {
        j["demo_selection"] = o.demo_selection;
        j["demos_per_question"] = o.demos_per_question;
        j["repeats"] = o.repeats;
    }
    if (subcommand == "select-demos") j["top_k"] = o.top_k;
    if (subcommand == "validate" || subcommand == "grid" || subcommand == "report") {
        j["out_dir"] = o.out_dir;
    }
    return j;
}

void print_result(const json& config, const json& result, const std::vector<std::string>& diagnostics) {
    for (const std::string& d : diagnostics) std::cerr << "note: " << d << "\n";
    json out{{"config", config}, {"result", result}};
    std::cout << out.dump(2) << "\n";
}

std::vector<double> parse_value_list(const std::string& csv, const std::string& flag) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw UsageError(flag + ": '" + item + "' is not a number");
        }
    }
    if (out.empty()) throw UsageError(flag + ": empty list");
    return out;
}

int cmd_score(const CliOptions& o) {
    auto backend = make_backend(o);
    const std::string prompt = required_input(o.prompt, o.prompt_file, "prompt");
    const std::string query = required_input(o.query, o.query_file, "query");
    ComplexityPromptTemplate storage;
    const ComplexityPromptTemplate* tpl = resolve_template(o, storage);

    MeasureBreakdown breakdown =
        score_pair(prompt, query, famicom_config(o), *backend, tpl, complexity_options(o, "query"));
    print_result(config_echo(o, "score"), breakdown, {});
    return 0;
}

int cmd_familiarity(const CliOptions& o) {
    auto backend = make_backend(o);
    const FamiComConfig cfg = famicom_config(o);

    FamiliarityValue value;
    if (!o.text.empty() || !o.text_file.empty()) {
        const std::string text = required_input(o.text, o.text_file, "text");
        const ScoredText scored = score_tokens(text, *backend);
        value = cfg.familiarity_method == FamiliarityMethod::Ppl
                    ? familiarity_ppl(scored)
                    : familiarity_sim(scored, cfg.k_salient, *backend);
    } else {
        const std::string prompt = required_input(o.prompt, o.prompt_file, "prompt");
        const std::string query = required_input(o.query, o.query_file, "query");
        value = combined_familiarity(prompt, query, cfg.familiarity_method, cfg.k_salient, *backend);
    }
    print_result(config_echo(o, "familiarity"), value, {});
    return 0;
}

int cmd_complexity(const CliOptions& o) {
    auto backend = make_backend(o);
    const FamiComConfig cfg = famicom_config(o);
    const std::string question = required_input(o.question, o.question_file, "question");
    ComplexityPromptTemplate storage;
    const ComplexityPromptTemplate* tpl = resolve_template(o, storage);
    const ComplexityPromptTemplate& use_tpl = tpl ? *tpl : builtin_template(cfg.complexity_method);

    ComplexityReport report =
        estimate(question, use_tpl, cfg.k_complexity, *backend, complexity_options(o, "question"));
    print_result(config_echo(o, "complexity"), report, {});
    return 0;
}

int cmd_select_prompt(const CliOptions& o) {
    if (o.method != "famicom" && o.method != "spell") {
        throw UsageError("select-prompt: --method must be famicom or spell");
    }
    auto backend = make_backend(o);
    const std::vector<CandidatePrompt> candidates = load_candidates(o.candidates);
    std::vector<std::string> diagnostics;

    RankedSelection ranked;
    if (o.method == "spell") {
        ranked = select_prompt_spell(candidates, *backend, &diagnostics, o.max_inflight);
    } else {
        const std::string query = required_input(o.query, o.query_file, "query");
        ComplexityPromptTemplate storage;
        const ComplexityPromptTemplate* tpl = resolve_template(o, storage);
        ranked = select_prompt_famicom(candidates, query, famicom_config(o), *backend, tpl,
                                       complexity_options(o, "query"), &diagnostics, o.max_inflight);
    }
    print_result(config_echo(o, "select-prompt"), ranked, diagnostics);
    return 0;
}

int cmd_select_demos(const CliOptions& o) {
    if (o.method != "famicom" && o.method != "knn") {
        throw UsageError("select-demos: --method must be famicom or knn");
    }
    auto backend = make_backend(o);
    const std::vector<DemonstrationExample> pool = load_demo_pool(o.pool);
    const std::string query = required_input(o.query, o.query_file, "query");
    std::vector<std::string> diagnostics;

    RankedSelection ranked;
    if (o.method == "knn") {
        ranked = rank_demonstrations_knn(pool, query, o.top_k, *backend, &diagnostics, o.max_inflight);
    } else {
        ComplexityPromptTemplate storage;
        const ComplexityPromptTemplate* tpl = resolve_template(o, storage);
        ranked = rank_demonstrations_famicom(pool, query, o.top_k, famicom_config(o), *backend, tpl,
                                             complexity_options(o, "query"), &diagnostics,
                                             o.max_inflight);
    }
    print_result(config_echo(o, "select-demos"), ranked, diagnostics);
    return 0;
}

int cmd_validate(const CliOptions& o) {
    auto backend = make_backend(o);
    const std::vector<McqInstance> instances = load_dataset(o.dataset);
    const std::vector<DemonstrationExample> pool = load_demo_pool(o.pool);
    ComplexityPromptTemplate storage;

    ValidationConfig vc;
    vc.famicom = famicom_config(o);
    vc.complexity_template = resolve_template(o, storage);
    vc.demo_selection = demo_selection_from_string(o.demo_selection);
    vc.demos_per_question = o.demos_per_question;
    vc.repeats = o.repeats;
    vc.runs = o.runs;
    vc.temperature = o.temperature;
    vc.max_tokens = o.max_tokens;
    vc.n_bins = o.bins;
    vc.seed = o.seed;
    vc.max_inflight = o.max_inflight;

    std::cerr << "validate: " << instances.size() << " instances, pool of " << pool.size()
              << ", selection " << o.demo_selection << ", seed " << o.seed << "\n";
    const ValidationResult result = run_validation(instances, pool, vc, *backend);
    std::cerr << "validate: " << result.records.size() << " records evaluated, writing reports to "
              << o.out_dir << "\n";
    const json echo = config_echo(o, "validate");
    emit_report(result.records, result.correlations, o.out_dir, echo);

    json measures = json::object();
    for (const auto& [name, report] : result.correlations) {
        measures[name] = json{{"rho", report.rho}, {"p_value", report.p_value}};
    }
    json summary{{"n_records", result.records.size()},
                 {"accuracy", result.records.empty() ? 0.0 : accuracy(result.records)},
                 {"measures", measures},
                 {"out_dir", o.out_dir}};
    print_result(echo, summary, result.diagnostics);
    return 0;
}

int cmd_grid(const CliOptions& o) {
    if (o.records.empty()) throw UsageError("grid: --records <records.csv> is required");
    const std::vector<RecordRow> rows = read_records_csv(o.records);
    const std::vector<double> a_values =
        o.a_values.empty() ? std::vector<double>{0.5, 1.0, 2.0} : parse_value_list(o.a_values, "--a-values");
    const std::vector<double> b_values =
        o.b_values.empty() ? std::vector<double>{0.5, 1.0, 2.0} : parse_value_list(o.b_values, "--b-values");

    for (const RecordRow& r : rows) {
        if (!(r.familiarity > 0.0) || !(r.complexity >= 1.0)) {
            throw SchemaError("grid: record " + r.instance_id + " has out-of-domain measures");
        }
    }

    std::vector<std::string> diagnostics;
    std::string csv = "a,b,rho,p_value\n";
    json best;
    for (double a : a_values) {
        for (double b : b_values) {
            if (!(a > 0.0) || !(b > 0.0)) throw UsageError("grid: a and b must be positive");
            std::vector<std::pair<double, bool>> points;
            points.reserve(rows.size());
            for (const RecordRow& r : rows) {
                points.emplace_back(famicom_score(r.familiarity, r.complexity, a, b), r.correct);
            }
            try {
                const CorrelationReport report = bin_and_correlate(points, o.bins);
                csv += format_double(a) + "," + format_double(b) + "," + format_double(report.rho) +
                       "," + format_double(report.p_value) + "\n";
                if (best.empty() || report.rho > best["rho"].get<double>()) {
                    best = json{{"a", a}, {"b", b}, {"rho", report.rho}, {"p_value", report.p_value}};
                }
            } catch (const DegenerateInput& e) {
                diagnostics.push_back("a=" + format_double(a) + " b=" + format_double(b) +
                                      " skipped: " + e.what());
            }
        }
    }

    std::filesystem::create_directories(o.out_dir);
    const std::filesystem::path grid_path = std::filesystem::path(o.out_dir) / "grid.csv";
    {
        std::ofstream out(grid_path, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + grid_path.string());
        out << csv;
    }
    print_result(config_echo(o, "grid"),
                 json{{"grid_csv", grid_path.string()}, {"best", best}, {"n_records", rows.size()}},
                 diagnostics);
    return 0;
}

int cmd_report(const CliOptions& o) {
    if (o.records.empty()) throw UsageError("report: --records <records.csv> is required");
    const std::vector<RecordRow> rows = read_records_csv(o.records);
    std::vector<std::string> diagnostics;
    const auto correlations = correlate_rows(rows, o.bins, &diagnostics);
    const json echo = config_echo(o, "report");
    emit_report(rows, correlations, o.out_dir, echo);

    json measures = json::object();
    for (const auto& [name, report] : correlations) {
        measures[name] = json{{"rho", report.rho}, {"p_value", report.p_value}};
    }
    print_result(echo, json{{"n_records", rows.size()}, {"measures", measures}, {"out_dir", o.out_dir}},
                 diagnostics);
    return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CliOptions o;
    CLI::App app{"Prompt performance estimation from model familiarity and question complexity"};
    app.require_subcommand(1);
    app.fallthrough();

    ConfigBinder binder;
    auto bind_str = [&](CLI::Option* opt, const std::string& key, std::string& target) {
        binder.bind(opt, key, [&target](const json& v) { target = v.get<std::string>(); });
    };
    auto bind_num = [&](CLI::Option* opt, const std::string& key, auto& target) {
        binder.bind(opt, key, [&target](const json& v) { target = v.get<std::decay_t<decltype(target)>>(); });
    };

    bind_str(app.add_option("--backend-url", o.backend_url, "OpenAI-compatible server base URL")
                 ->envname("FAMICOM_BACKEND_URL"),
             "backend_url", o.backend_url);
    binder.bind(app.add_flag("--mock", o.mock, "use the deterministic mock backend"), "mock",
                [&o](const json& v) { o.mock = v.get<bool>(); });
    bind_str(app.add_option("--scripted", o.scripted, "path to a scripted-backend JSON file"), "scripted",
             o.scripted);
    bind_str(app.add_option("--model", o.model, "model id")->envname("FAMICOM_MODEL"), "model", o.model);
    bind_str(app.add_option("--embed-model", o.embed_model, "embedding model id (defaults to --model)"),
             "embed_model", o.embed_model);

    bind_num(app.add_option("--a", o.a, "familiarity exponent"), "a", o.a);
    bind_num(app.add_option("--b", o.b, "complexity exponent"), "b", o.b);
    bind_str(app.add_option("--fam-method", o.fam_method, "familiarity method: ppl|sim"), "fam_method",
             o.fam_method);
    bind_num(app.add_option("--k-salient", o.k_salient, "salient tokens for the sim method"), "k_salient",
             o.k_salient);
    bind_str(app.add_option("--complexity-method", o.complexity_method,
                            "complexity method: direct|guided|operational"),
             "complexity_method", o.complexity_method);
    bind_num(app.add_option("--k-complexity", o.k_complexity, "complexity samples per question"),
             "k_complexity", o.k_complexity);

    bind_num(app.add_option("--runs", o.runs, "generations per question (self-consistency)"), "runs",
             o.runs);
    bind_num(app.add_option("--temperature", o.temperature, "sampling temperature"), "temperature",
             o.temperature);
    bind_num(app.add_option("--bins", o.bins, "equal-frequency bins for correlation"), "bins", o.bins);
    bind_num(app.add_option("--seed", o.seed, "root seed for all harness randomness"), "seed", o.seed);
    bind_num(app.add_option("--max-inflight", o.max_inflight, "bounded parallel backend requests"),
             "max_inflight", o.max_inflight);
    bind_num(app.add_option("--max-tokens", o.max_tokens, "max new tokens per generation"), "max_tokens",
             o.max_tokens);
    bind_str(app.add_option("--out-dir", o.out_dir, "output directory for reports"), "out_dir", o.out_dir);
    bind_str(app.add_option("--template", o.template_path, "complexity prompt template JSON"), "template",
             o.template_path);
    app.add_option("--config", o.config_path, "JSON config file (flags win over config values)");

    CLI::App* score = app.add_subcommand("score", "combined measure for one (prompt, query) pair");
    bind_str(score->add_option("--prompt", o.prompt, "prompt text"), "prompt", o.prompt);
    bind_str(score->add_option("--prompt-file", o.prompt_file, "prompt file"), "prompt_file", o.prompt_file);
    bind_str(score->add_option("--query", o.query, "query text"), "query", o.query);
    bind_str(score->add_option("--query-file", o.query_file, "query file"), "query_file", o.query_file);

    CLI::App* fam = app.add_subcommand("familiarity", "familiarity of a text (or prompt+query pooled)");
    bind_str(fam->add_option("--text", o.text, "text to score"), "text", o.text);
    bind_str(fam->add_option("--text-file", o.text_file, "text file"), "text_file", o.text_file);
    bind_str(fam->add_option("--prompt", o.prompt, "prompt text"), "prompt", o.prompt);
    bind_str(fam->add_option("--prompt-file", o.prompt_file, "prompt file"), "prompt_file", o.prompt_file);
    bind_str(fam->add_option("--query", o.query, "query text"), "query", o.query);
    bind_str(fam->add_option("--query-file", o.query_file, "query file"), "query_file", o.query_file);

    CLI::App* cx = app.add_subcommand("complexity", "estimated step count for a question");
    bind_str(cx->add_option("--question", o.question, "question text"), "question", o.question);
    bind_str(cx->add_option("--question-file", o.question_file, "question file"), "question_file",
             o.question_file);

    CLI::App* sp = app.add_subcommand("select-prompt", "rank candidate prompts for a query");
    bind_str(sp->add_option("--method", o.method, "famicom|spell")->required(), "method", o.method);
    bind_str(sp->add_option("--candidates", o.candidates, "candidate prompts JSONL")->required(),
             "candidates", o.candidates);
    bind_str(sp->add_option("--query", o.query, "query text"), "query", o.query);
    bind_str(sp->add_option("--query-file", o.query_file, "query file"), "query_file", o.query_file);

    CLI::App* sd = app.add_subcommand("select-demos", "rank pool demonstrations for a query");
    bind_str(sd->add_option("--method", o.method, "famicom|knn")->required(), "method", o.method);
    bind_str(sd->add_option("--pool", o.pool, "demonstration pool JSONL")->required(), "pool", o.pool);
    bind_str(sd->add_option("--query", o.query, "query text"), "query", o.query);
    bind_str(sd->add_option("--query-file", o.query_file, "query file"), "query_file", o.query_file);
    bind_num(sd->add_option("--top-k", o.top_k, "demonstrations to keep"), "top_k", o.top_k);

    CLI::App* val = app.add_subcommand("validate", "cross-task protocol and measure correlations");
    bind_str(val->add_option("--dataset", o.dataset, "dataset JSONL")->required(), "dataset", o.dataset);
    bind_str(val->add_option("--pool", o.pool, "demonstration pool JSONL")->required(), "pool", o.pool);
    bind_str(val->add_option("--demo-selection", o.demo_selection, "random|famicom|knn"), "demo_selection",
             o.demo_selection);
    bind_num(val->add_option("--demos-per-question", o.demos_per_question, "demonstrations per question"),
             "demos_per_question", o.demos_per_question);
    bind_num(val->add_option("--repeats", o.repeats, "random pairings per question"), "repeats", o.repeats);

    CLI::App* grid = app.add_subcommand("grid", "sweep (a, b) over an existing records.csv");
    bind_str(grid->add_option("--records", o.records, "records.csv from validate"), "records", o.records);
    bind_str(grid->add_option("--a-values", o.a_values, "comma-separated a values"), "a_values", o.a_values);
    bind_str(grid->add_option("--b-values", o.b_values, "comma-separated b values"), "b_values", o.b_values);

    CLI::App* rep = app.add_subcommand("report", "recompute bins and summary from records.csv");
    bind_str(rep->add_option("--records", o.records, "records.csv from validate"), "records", o.records);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (!o.config_path.empty()) {
            std::ifstream in(o.config_path);
            if (!in) throw UsageError("config file not found: " + o.config_path);
            json cfg;
            try {
                in >> cfg;
            } catch (const json::exception& e) {
                throw UsageError("config file is not valid JSON: " + std::string(e.what()));
            }
            binder.apply(cfg);
        }

        if (score->parsed()) return cmd_score(o);
        if (fam->parsed()) return cmd_familiarity(o);
        if (cx->parsed()) return cmd_complexity(o);
        if (sp->parsed()) return cmd_select_prompt(o);
        if (sd->parsed()) return cmd_select_demos(o);
        if (val->parsed()) return cmd_validate(o);
        if (grid->parsed()) return cmd_grid(o);
        if (rep->parsed()) return cmd_report(o);
        throw UsageError("no subcommand given");
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace famicom
