#include "famicom/report.hpp"

#include <fstream>

#include "famicom/csv.hpp"

namespace famicom {

using nlohmann::json;

RecordRow to_row(const EvalRecord& record) {
    RecordRow row;
    row.instance_id = record.instance_id;
    row.score = record.measures.score;
    row.familiarity = record.measures.familiarity.value;
    row.complexity = record.measures.complexity.mean;
    row.prediction = record.prediction.value_or("");
    row.correct = record.correct;
    return row;
}

std::vector<RecordRow> read_records_csv(const std::string& path) {
    const auto rows = read_csv(path);
    if (rows.empty()) throw SchemaError(path + ": missing header");
    const std::vector<std::string> expected = {"instance_id", "score",      "familiarity",
                                               "complexity",  "prediction", "correct"};
    if (rows.front() != expected) throw SchemaError(path + ": unexpected header");

    std::vector<RecordRow> out;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != expected.size()) {
            throw SchemaError(path + ":" + std::to_string(i + 1) + ": wrong field count");
        }
        RecordRow row;
        row.instance_id = r[0];
        try {
            row.score = std::stod(r[1]);
            row.familiarity = std::stod(r[2]);
            row.complexity = std::stod(r[3]);
        } catch (const std::exception&) {
            throw SchemaError(path + ":" + std::to_string(i + 1) + ": non-numeric measure");
        }
        row.prediction = r[4];
        if (r[5] != "true" && r[5] != "false") {
            throw SchemaError(path + ":" + std::to_string(i + 1) + ": correct must be true|false");
        }
        row.correct = r[5] == "true";
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

void write_atomically(const std::filesystem::path& path, const std::string& content) {
    const std::filesystem::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string());
        out << content;
        if (!out) throw IoError("short write to " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("rename to " + path.string() + " failed: " + ec.message());
}

std::string records_csv_text(const std::vector<RecordRow>& rows) {
    std::string out = "instance_id,score,familiarity,complexity,prediction,correct\n";
    for (const RecordRow& r : rows) {
        out += csv_escape(r.instance_id);
        out += ',';
        out += format_double(r.score);
        out += ',';
        out += format_double(r.familiarity);
        out += ',';
        out += format_double(r.complexity);
        out += ',';
        out += csv_escape(r.prediction);
        out += ',';
        out += r.correct ? "true" : "false";
        out += '\n';
    }
    return out;
}

std::string bins_csv_text(const CorrelationReport* report) {
    std::string out = "measure,accuracy,count\n";
    if (report) {
        for (const MeasureBin& b : report->bins) {
            out += format_double(b.midpoint);
            out += ',';
            out += format_double(b.accuracy);
            out += ',';
            out += std::to_string(b.count);
            out += '\n';
        }
    }
    return out;
}

json correlation_json(const CorrelationReport& r) {
    return json{{"rho", r.rho},
                {"p_value", r.p_value},
                {"significant", r.p_value < kSignificanceAlpha},
                {"n_bins", r.n_bins},
                {"n_records", r.n_records}};
}

}  // namespace

void emit_report(const std::vector<RecordRow>& rows,
                 const std::map<std::string, CorrelationReport>& correlations,
                 const std::filesystem::path& out_dir, const json& config_echo) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create " + out_dir.string() + ": " + ec.message());

    const CorrelationReport* primary = nullptr;
    if (auto it = correlations.find("famicom"); it != correlations.end()) {
        primary = &it->second;
    } else if (!correlations.empty()) {
        primary = &correlations.begin()->second;
    }

    json summary;
    summary["n_records"] = rows.size();
    summary["alpha"] = kSignificanceAlpha;
    summary["config"] = config_echo;
    json measures = json::object();
    for (const auto& [name, report] : correlations) measures[name] = correlation_json(report);
    summary["measures"] = measures;
    if (primary) {
        summary["rho"] = primary->rho;
        summary["p_value"] = primary->p_value;
        summary["significant"] = primary->p_value < kSignificanceAlpha;
    }
    // Reported for the live-reproduction path: does the combined measure
    // correlate at least as positively as familiarity alone?
    if (correlations.count("famicom") && correlations.count("familiarity")) {
        const double fc = correlations.at("famicom").rho;
        const double fam = correlations.at("familiarity").rho;
        summary["sign_check"] = json{{"famicom_rho", fc},
                                     {"familiarity_rho", fam},
                                     {"famicom_sign_ge_familiarity", (fc > 0) - (fc < 0) >= (fam > 0) - (fam < 0)}};
    }

    write_atomically(out_dir / "records.csv", records_csv_text(rows));
    write_atomically(out_dir / "bins.csv", bins_csv_text(primary));
    write_atomically(out_dir / "summary.json", summary.dump(2) + "\n");
}

void emit_report(const std::vector<EvalRecord>& records,
                 const std::map<std::string, CorrelationReport>& correlations,
                 const std::filesystem::path& out_dir, const json& config_echo) {
    std::vector<RecordRow> rows;
    rows.reserve(records.size());
    for (const EvalRecord& r : records) rows.push_back(to_row(r));
    emit_report(rows, correlations, out_dir, config_echo);
}

}  // namespace famicom
