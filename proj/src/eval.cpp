#include "biotab/eval.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "biotab/error.hpp"
#include "biotab/text.hpp"

namespace biotab {

using nlohmann::json;
using nlohmann::ordered_json;

std::string normalize_answer(std::string_view s) {
    std::string stripped;
    stripped.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '.': case ',': case ';': case ':': case '!': case '?': break;
            default: stripped.push_back(c);
        }
    }
    return text::normalize_phrase(stripped);
}

int exact_match(std::string_view prediction, std::string_view gold) {
    return normalize_answer(prediction) == normalize_answer(gold) ? 1 : 0;
}

PredictionFile read_predictions(std::istream& in) {
    PredictionFile file;
    std::unordered_set<std::string> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        Prediction p;
        try {
            auto j = json::parse(line);
            p.instance_id = j.at("instance_id").get<std::string>();
            const auto& pred = j.at("prediction");
            p.prediction = pred.is_null() ? std::string{} : pred.get<std::string>();
        } catch (const std::exception& e) {
            throw MalformedRecord(lineno, e.what());
        }
        if (!seen.insert(p.instance_id).second) throw DuplicatePrediction(p.instance_id);
        file.entries.push_back(std::move(p));
    }
    return file;
}

PredictionFile load_predictions(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path.string());
    return read_predictions(in);
}

void write_predictions(std::ostream& out, const PredictionFile& preds) {
    for (const auto& p : preds.entries) {
        ordered_json j;
        j["instance_id"] = p.instance_id;
        j["prediction"] = p.prediction;
        out << j.dump() << '\n';
    }
}

namespace {

std::optional<double> average_over(const std::map<int, TaskScore>& per_task,
                                   const std::set<int>& tasks, Averaging averaging) {
    double sum = 0.0;
    std::size_t count = 0, correct = 0, n = 0;
    for (int t : tasks) {
        auto it = per_task.find(t);
        if (it == per_task.end() || it->second.n == 0) continue;
        sum += it->second.em;
        ++count;
        correct += it->second.correct;
        n += it->second.n;
    }
    if (count == 0) return std::nullopt;
    if (averaging == Averaging::Micro) return static_cast<double>(correct) / static_cast<double>(n);
    return sum / static_cast<double>(count);
}

}  // namespace

EvalReport score_predictions(const PredictionFile& predictions, const Dataset& dataset,
                             const SplitSpec* split, Averaging averaging) {
    std::unordered_map<std::string, const QAInstance*> gold;
    for (const auto& inst : dataset.instances) gold.emplace(inst.instance_id, &inst);

    std::unordered_map<std::string, const std::string*> by_id;
    for (const auto& p : predictions.entries) {
        if (!gold.count(p.instance_id)) throw UnknownInstanceId(p.instance_id);
        if (!by_id.emplace(p.instance_id, &p.prediction).second)
            throw DuplicatePrediction(p.instance_id);
    }

    EvalReport report;
    report.averaging = averaging;
    for (const auto& inst : dataset.instances) {
        auto& score = report.per_task[inst.task_id];
        ++score.n;
        auto it = by_id.find(inst.instance_id);
        if (it == by_id.end()) {
            ++report.n_missing;
            continue;
        }
        score.correct += static_cast<std::size_t>(exact_match(*it->second, inst.answer));
    }
    std::set<int> all_tasks;
    for (auto& [task, score] : report.per_task) {
        score.em = static_cast<double>(score.correct) / static_cast<double>(score.n);
        all_tasks.insert(task);
    }
    if (split) {
        report.avg_train_tasks = average_over(report.per_task, split->train_tasks, averaging);
        report.avg_cross_tasks = average_over(report.per_task, split->cross_tasks, averaging);
    }
    report.overall = average_over(report.per_task, all_tasks, averaging).value_or(0.0);
    return report;
}

ordered_json to_json(const EvalReport& report) {
    ordered_json j;
    ordered_json rows = ordered_json::array();
    for (const auto& [task, s] : report.per_task) {
        ordered_json r;
        r["task_id"] = task;
        r["n"] = s.n;
        r["correct"] = s.correct;
        r["em"] = s.em;
        rows.push_back(std::move(r));
    }
    j["per_task"] = std::move(rows);
    j["averaging"] = report.averaging == Averaging::Macro ? "macro" : "micro";
    j["avg_train_tasks"] = report.avg_train_tasks ? ordered_json(*report.avg_train_tasks) : ordered_json();
    j["avg_cross_tasks"] = report.avg_cross_tasks ? ordered_json(*report.avg_cross_tasks) : ordered_json();
    j["overall"] = report.overall;
    j["n_missing"] = report.n_missing;
    return j;
}

EvalReport eval_report_from_json(const json& j) {
    EvalReport r;
    for (const auto& row : j.at("per_task")) {
        TaskScore s{row.at("n").get<std::size_t>(), row.at("correct").get<std::size_t>(),
                    row.at("em").get<double>()};
        r.per_task[row.at("task_id").get<int>()] = s;
    }
    r.averaging = j.at("averaging").get<std::string>() == "micro" ? Averaging::Micro : Averaging::Macro;
    if (!j.at("avg_train_tasks").is_null()) r.avg_train_tasks = j.at("avg_train_tasks").get<double>();
    if (!j.at("avg_cross_tasks").is_null()) r.avg_cross_tasks = j.at("avg_cross_tasks").get<double>();
    r.overall = j.at("overall").get<double>();
    r.n_missing = j.at("n_missing").get<std::size_t>();
    return r;
}

namespace {

std::string fmt3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.append(width - s.size(), ' ');
    return s;
}

}  // namespace

std::string render_report_table(const EvalReport& report) {
    std::ostringstream out;
    out << pad("Task ID", 12) << pad("# Eval", 10) << "EM\n";
    for (const auto& [task, s] : report.per_task)
        out << pad(std::to_string(task), 12) << pad(std::to_string(s.n), 10) << fmt3(s.em) << '\n';
    const char* mode = report.averaging == Averaging::Macro ? "" : " (micro)";
    if (report.avg_train_tasks)
        out << pad(std::string("Avg.") + mode, 22) << fmt3(*report.avg_train_tasks) << '\n';
    if (report.avg_cross_tasks)
        out << pad(std::string("Avg. cross") + mode, 22) << fmt3(*report.avg_cross_tasks) << '\n';
    out << pad(std::string("Overall") + mode, 22) << fmt3(report.overall) << '\n';
    if (report.n_missing > 0)
        out << "warning: " << report.n_missing << " instance(s) had no prediction and scored 0\n";
    return out.str();
}

std::string render_report_records(const EvalReport& report) {
    std::ostringstream out;
    for (const auto& [task, s] : report.per_task) {
        ordered_json r;
        r["row"] = "task";
        r["task_id"] = task;
        r["n"] = s.n;
        r["em"] = s.em;
        out << r.dump() << '\n';
    }
    auto avg_row = [&](const char* name, double v) {
        ordered_json r;
        r["row"] = name;
        r["averaging"] = report.averaging == Averaging::Macro ? "macro" : "micro";
        r["em"] = v;
        out << r.dump() << '\n';
    };
    if (report.avg_train_tasks) avg_row("avg", *report.avg_train_tasks);
    if (report.avg_cross_tasks) avg_row("avg_cross", *report.avg_cross_tasks);
    avg_row("overall", report.overall);
    ordered_json cov;
    cov["row"] = "coverage";
    cov["n_missing"] = report.n_missing;
    out << cov.dump() << '\n';
    return out.str();
}

}  // namespace biotab
