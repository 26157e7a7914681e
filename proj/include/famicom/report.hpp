#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "famicom/eval.hpp"
#include "famicom/stats.hpp"

namespace famicom {

/// Significance threshold applied in summaries (Bonferroni-corrected).
inline constexpr double kSignificanceAlpha = 0.00625;

/// Flat row of records.csv; mirrors EvalRecord's reportable fields.
struct RecordRow {
    std::string instance_id;
    double score = 0.0;
    double familiarity = 0.0;
    double complexity = 1.0;
    std::string prediction;  // empty when the vote produced no label
    bool correct = false;
};

RecordRow to_row(const EvalRecord& record);
std::vector<RecordRow> read_records_csv(const std::string& path);

/// Writes records.csv, bins.csv ("famicom" bins when present, else the first
/// correlation), and summary.json into out_dir. Each file is written to a
/// temp name and renamed, so rerunning overwrites atomically.
void emit_report(const std::vector<RecordRow>& rows,
                 const std::map<std::string, CorrelationReport>& correlations,
                 const std::filesystem::path& out_dir, const nlohmann::json& config_echo);

void emit_report(const std::vector<EvalRecord>& records,
                 const std::map<std::string, CorrelationReport>& correlations,
                 const std::filesystem::path& out_dir, const nlohmann::json& config_echo);

}  // namespace famicom
