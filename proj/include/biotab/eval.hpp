#pragma once

#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "biotab/generator.hpp"
#include "biotab/splits.hpp"

namespace biotab {

/// Case-fold, trim, collapse whitespace runs, drop . , ; : ! ?
std::string normalize_answer(std::string_view text);

int exact_match(std::string_view prediction, std::string_view gold);

struct Prediction {
    std::string instance_id;
    std::string prediction;
};

struct PredictionFile {
    std::vector<Prediction> entries;
};

/// Throws DuplicatePrediction on a repeated instance id.
PredictionFile read_predictions(std::istream& in);
PredictionFile load_predictions(const std::filesystem::path& path);
void write_predictions(std::ostream& out, const PredictionFile& preds);

enum class Averaging { Macro, Micro };

struct TaskScore {
    std::size_t n = 0;
    std::size_t correct = 0;
    double em = 0.0;

    bool operator==(const TaskScore&) const = default;
};

struct EvalReport {
    std::map<int, TaskScore> per_task;
    std::optional<double> avg_train_tasks;
    std::optional<double> avg_cross_tasks;
    double overall = 0.0;
    Averaging averaging = Averaging::Macro;
    std::size_t n_missing = 0;  // gold instances without a prediction (scored 0)

    bool operator==(const EvalReport&) const = default;
};

/// Per-task EM; split averages over train_tasks / cross_tasks present in the
/// dataset. Macro averaging takes unweighted task means, micro weights by
/// instance. Throws UnknownInstanceId / DuplicatePrediction.
EvalReport score_predictions(const PredictionFile& predictions, const Dataset& dataset,
                             const SplitSpec* split = nullptr,
                             Averaging averaging = Averaging::Macro);

nlohmann::ordered_json to_json(const EvalReport& report);
EvalReport eval_report_from_json(const nlohmann::json& j);

/// Human-readable layout: one row per task, then "Avg." / "Avg. cross" rows.
std::string render_report_table(const EvalReport& report);

/// One record per task plus one per average row.
std::string render_report_records(const EvalReport& report);

}  // namespace biotab
