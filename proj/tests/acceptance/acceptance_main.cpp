// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "biotab/cli.hpp"
#include "biotab/eval.hpp"
#include "biotab/generator.hpp"
#include "biotab/instructions.hpp"
#include "biotab/oracle.hpp"
#include "biotab/splits.hpp"
#include "biotab/synth.hpp"
#include "biotab/templates.hpp"
#include "biotab/text.hpp"

namespace fs = std::filesystem;
using namespace biotab;

namespace {

// Pinned limits.
constexpr double kHistogramSeconds = 1.0;
constexpr double kOracleSeconds = 60.0;
constexpr double kRoundTripSeconds = 30.0;
constexpr std::size_t kMinOracleInstances = 10000;
constexpr int kRoundTripsPerTemplate = 1000;

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<int> all_tasks() {
    std::vector<int> v(kNumTasks);
    std::iota(v.begin(), v.end(), 1);
    return v;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

fs::path scratch_dir(const std::string& tag) {
    std::random_device rd;
    auto p = fs::temp_directory_path() / ("biotab-acceptance-" + tag + "-" + std::to_string(rd()));
    fs::create_directories(p);
    return p;
}

int cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    if (code != 0) std::fprintf(stderr, "cli failed (%d): %s", code, err.str().c_str());
    return code;
}

Outcome template_fidelity() {
    const fs::path golden = fs::path(BIOTAB_GOLDEN_DIR) / "template_table_golden.tsv";
    std::ifstream in(golden);
    if (!in) return {false, "cannot open " + golden.string()};
    std::map<int, std::pair<std::string, std::string>> rows;
    for (std::string line; std::getline(in, line);) {
        if (line.empty() || line[0] == '#') continue;
        auto cols = text::split(line, '\t');
        if (cols.size() != 3) return {false, "bad golden line: " + line};
        rows[std::stoi(cols[0])] = {cols[1], cols[2]};
    }
    if (rows.size() != 22 || template_catalog().size() != 22)
        return {false, "expected 22 templates"};

    // The source table spells one placeholder "syptom A"; normalize the notation.
    auto normalize = [](std::string s) {
        for (std::size_t pos; (pos = s.find("syptom A")) != std::string::npos;)
            s.replace(pos, 8, "symptom A");
        return s;
    };
    // Task 18's source prompt names three symptoms while its question has two;
    // the catalog keeps the prompt consistent with the question.
    const std::string task18_source = "If symptom A, symptom B and symptom C are in symptom list";
    const std::string task18_catalog = "If symptom A and symptom B are in symptom list";

    std::size_t matched = 0;
    for (const auto& spec : template_catalog()) {
        auto [q, p] = rows.at(spec.task_id);
        q = normalize(q);
        p = normalize(p);
        if (spec.task_id == 18) {
            auto pos = p.find(task18_source);
            if (pos != 0) return {false, "task 18 golden prompt changed"};
            p.replace(pos, task18_source.size(), task18_catalog);
        }
        const auto cq = render_notation(spec.question_pattern);
        const auto cp = render_notation(spec.prompt_pattern);
        if (cq != q) return {false, "task " + std::to_string(spec.task_id) + " question: \"" + cq + "\""};
        if (cp != p) return {false, "task " + std::to_string(spec.task_id) + " prompt: \"" + cp + "\""};
        ++matched;
    }
    return {true, std::to_string(matched) +
                      "/22 question+prompt byte-match (task 18 prompt uses the two-symptom form)"};
}

Outcome slot_histograms() {
    const auto t0 = Clock::now();
    struct Row {
        std::map<int, int> k;
        int negation;
    };
    // Expected rows: train and cross for each split.
    const std::map<std::string, std::pair<Row, Row>> expected = {
        {"split1", {{{{1, 0}, {2, 9}, {3, 7}, {4, 1}}, 2}, {{{1, 3}, {2, 2}, {3, 0}, {4, 0}}, 0}}},
        {"split2", {{{{1, 3}, {2, 9}, {3, 4}, {4, 1}}, 2}, {{{1, 0}, {2, 2}, {3, 3}, {4, 0}}, 0}}},
        {"split3", {{{{1, 1}, {2, 9}, {3, 6}, {4, 1}}, 2}, {{{1, 2}, {2, 2}, {3, 1}, {4, 0}}, 0}}},
    };
    for (const auto& spec : canonical_splits()) {
        const auto& [train_exp, cross_exp] = expected.at(spec.name);
        for (const auto& [tasks, exp] : {std::pair{spec.train_tasks, train_exp},
                                         std::pair{spec.cross_tasks, cross_exp}}) {
            Dataset ds;
            ds.task_ids = tasks;
            auto stats = dataset_stats(ds);
            if (stats.tasks_with_k_mentions != exp.k || stats.tasks_with_negation != exp.negation)
                return {false, spec.name + " histogram mismatch"};
        }
    }
    const double s = seconds_since(t0);
    char buf[96];
    std::snprintf(buf, sizeof buf, "3 splits x {train, cross} exact; %.4f s (limit %.0f s)", s,
                  kHistogramSeconds);
    return {s < kHistogramSeconds, buf};
}

Outcome split_membership() {
    const std::vector<std::set<int>> expected = {
        {1, 4, 7, 15, 21}, {8, 9, 11, 12, 14}, {1, 3, 15, 16, 17}};
    auto splits = canonical_splits();
    if (splits.size() != 3) return {false, "expected 3 splits"};
    for (std::size_t i = 0; i < 3; ++i) {
        if (splits[i].cross_tasks != expected[i]) return {false, splits[i].name + " cross set differs"};
        std::set<int> train;
        for (int t = 1; t <= 22; ++t)
            if (!expected[i].count(t)) train.insert(t);
        if (splits[i].train_tasks != train) return {false, splits[i].name + " train set differs"};
    }
    return {true, "{1,4,7,15,21} {8,9,11,12,14} {1,3,15,16,17}; train sets are complements"};
}

Outcome oracle_soundness() {
    const auto t0 = Clock::now();
    SynthConfig cfg;
    cfg.n_tables = 100;
    cfg.seed = 2024;
    const auto corpus = synthesize_corpus(cfg);

    GenerationPolicy policy;
    policy.seed = 1;
    policy.attach_instructions = false;
    policy.enforce_unique_answer = true;
    auto unique = generate_dataset(corpus, all_tasks(), policy).dataset;
    if (unique.instances.size() < kMinOracleInstances)
        return {false, "only " + std::to_string(unique.instances.size()) + " instances"};
    if (unique.task_ids.size() != 22) return {false, "not every task generated"};

    PredictionFile preds;
    for (const auto& inst : unique.instances) {
        auto r = oracle_answer(inst.question, *corpus.find(inst.table_id));
        preds.entries.push_back({inst.instance_id, r.candidates.empty() ? "" : r.candidates.front()});
    }
    auto report = score_predictions(preds, unique);
    for (const auto& [task, s] : report.per_task)
        if (s.em != 1.0) return {false, "task " + std::to_string(task) + " em " + std::to_string(s.em)};
    if (report.per_task.size() != 22) return {false, "report lacks tasks"};

    policy.enforce_unique_answer = false;
    auto loose = generate_dataset(corpus, all_tasks(), policy).dataset;
    std::size_t contained = 0;
    for (const auto& inst : loose.instances) {
        auto r = oracle_answer(inst.question, *corpus.find(inst.table_id));
        contained += std::find(r.candidates.begin(), r.candidates.end(), inst.answer) != r.candidates.end();
    }
    const double s = seconds_since(t0);
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%zu unique-answer instances, em 1.000 on 22/22 tasks; %zu/%zu gold in candidates "
                  "without enforcement; %.1f s (limit %.0f s)",
                  unique.instances.size(), contained, loose.instances.size(), s, kOracleSeconds);
    return {contained == loose.instances.size() && s < kOracleSeconds, buf};
}

// Delimiter-free phrase: 1-3 words of lowercase letters, never a word the
// question skeletons use as a separator.
std::string random_phrase(std::mt19937_64& gen) {
    static const std::set<std::string> reserved = {"and", "but", "no", "not"};
    std::uniform_int_distribution<int> words(1, 3), len(2, 9), letter(0, 25);
    std::string out;
    const int n = words(gen);
    for (int w = 0; w < n; ++w) {
        std::string word;
        do {
            word.clear();
            const int l = len(gen);
            for (int i = 0; i < l; ++i) word.push_back(static_cast<char>('a' + letter(gen)));
        } while (reserved.count(word));
        if (!out.empty()) out.push_back(' ');
        out += word;
    }
    return out;
}

Outcome parser_round_trip() {
    const auto t0 = Clock::now();
    std::mt19937_64 gen(77);
    std::size_t ok = 0, total = 0;
    std::string first_failure;
    for (const auto& spec : template_catalog()) {
        for (int i = 0; i < kRoundTripsPerTemplate; ++i) {
            std::vector<ResolvedSlot> slots;
            std::map<std::string, std::string> values;
            std::set<std::string> used;
            for (const auto& s : spec.slots) {
                std::string v;
                do v = random_phrase(gen);
                while (!used.insert(v).second);
                slots.push_back({s.label, s.kind, s.negated, v});
                values[s.placeholder()] = v;
            }
            const auto question = render_pattern(spec.question_pattern, values);
            ++total;
            try {
                if (parse_question(question) == query_from_slots(spec.task_id, slots)) {
                    ++ok;
                    continue;
                }
            } catch (const std::exception&) {
            }
            if (first_failure.empty()) first_failure = question;
        }
    }
    const double s = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%zu/%zu recovered; %.2f s (limit %.0f s)", ok, total, s,
                  kRoundTripSeconds);
    std::string detail = buf;
    if (!first_failure.empty()) detail += "; first failure: " + first_failure;
    return {ok == total && total == 22u * kRoundTripsPerTemplate && s < kRoundTripSeconds, detail};
}

Outcome determinism() {
    const auto dir = scratch_dir("determinism");
    const auto corpus = (dir / "tables.jsonl").string();
    if (cli({"synth", "--tables", "30", "--seed", "5", "--out", corpus}) != 0)
        return {false, "synth failed"};
    std::vector<std::string> compared;
    for (const char* run : {"a", "b"}) {
        const auto base = dir / run;
        if (cli({"generate", "--corpus", corpus, "--tasks", "1-22", "--seed", "42", "--out",
                 (base / "gen").string()}) != 0)
            return {false, "generate failed"};
        for (const char* n : {"1", "2", "3"})
            if (cli({"split", "--corpus", corpus, "--canonical", n, "--seed", "7", "--out",
                     (base / (std::string("s") + n)).string()}) != 0)
                return {false, "split failed"};
    }
    std::size_t files = 0;
    for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
        if (!entry.is_regular_file() || entry.path().filename() == "manifest.json") continue;
        const auto rel = fs::relative(entry.path(), dir / "a");
        if (slurp(entry.path()) != slurp(dir / "b" / rel))
            return {false, rel.string() + " differs between runs"};
        ++files;
    }
    fs::remove_all(dir);
    return {files == 20, std::to_string(files) + " dataset/report files byte-identical across two runs"};
}

Outcome perturbation_contract() {
    const auto& words = neutral_words();
    const std::set<std::string> word_set(words.begin(), words.end());
    std::set<std::string> donor_prompts;
    for (const auto& spec : template_catalog()) donor_prompts.insert(render_notation(spec.prompt_pattern));

    std::mt19937_64 gen(3);
    std::size_t checks = 0;
    for (const auto& spec : template_catalog()) {
        // The catalog prompt and one rendered with concrete values.
        std::map<std::string, std::string> values;
        for (const auto& s : spec.slots) values[s.placeholder()] = random_phrase(gen);
        const std::vector<std::string> prompts = {render_notation(spec.prompt_pattern),
                                                  render_pattern(spec.prompt_pattern, values)};
        for (const auto& p : prompts) {
            const auto id = std::to_string(spec.task_id);
            for (std::uint64_t seed = 0; seed < 5; ++seed) {
                Rng rng(seed);
                auto mm = perturb_prompt(p, spec.task_id, PerturbationKind::mismatched(), rng);
                const int donor = default_donor(spec.task_id);
                if (donor == spec.task_id || !donor_prompts.count(mm) ||
                    mm != render_notation(template_for(donor).prompt_pattern) || mm == p)
                    return {false, "mismatched rule broken for task " + id};

                auto rep = perturb_prompt(p, spec.task_id, PerturbationKind::repeat_char(), rng);
                if (rep != std::string(text::char_length(p), 'A') || rep == p)
                    return {false, "repeat rule broken for task " + id};

                auto rs = perturb_prompt(p, spec.task_id, PerturbationKind::random_string(), rng);
                if (text::char_length(rs) != text::char_length(p) || rs == p ||
                    !std::all_of(rs.begin(), rs.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
                    return {false, "random-string rule broken for task " + id};

                auto rw = perturb_prompt(p, spec.task_id, PerturbationKind::random_words(), rng);
                auto tokens = text::split_whitespace(rw);
                if (tokens.size() != text::count_whitespace_tokens(p) || rw == p ||
                    !std::all_of(tokens.begin(), tokens.end(),
                                 [&](const std::string& w) { return word_set.count(w) > 0; }))
                    return {false, "random-words rule broken for task " + id};
                checks += 4;
            }
        }
        for (int d = 1; d <= 22; ++d) {
            Rng rng(0);
            if (d == spec.task_id) continue;
            if (perturb_prompt("x", spec.task_id, PerturbationKind::mismatched(d), rng) !=
                render_notation(template_for(d).prompt_pattern))
                return {false, "explicit donor not honored"};
            ++checks;
        }
    }
    return {true, std::to_string(checks) + " kind/prompt checks over 22 tasks and 4 kinds"};
}

Outcome table_non_overlap() {
    SynthConfig cfg;
    cfg.n_tables = 24;
    cfg.seed = 6;
    const auto corpus = synthesize_corpus(cfg);
    GenerationPolicy policy;
    policy.combos_per_row_cap = 2;
    policy.attach_instructions = false;
    std::size_t materialized = 0;
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
        for (double fraction : {1.0 / 3.0, 0.5, 0.8}) {
            for (auto spec : canonical_splits(seed)) {
                spec.table_train_fraction = fraction;
                policy.seed = seed;
                auto sd = build_split(corpus, spec, policy);
                std::set<std::string> train(sd.table_partition.train_table_ids.begin(),
                                            sd.table_partition.train_table_ids.end());
                for (const auto& id : sd.table_partition.test_table_ids)
                    if (train.count(id)) return {false, "partition overlaps on " + id};
                std::set<std::string> train_used, iid_used;
                for (const auto& inst : sd.train.dataset.instances) train_used.insert(inst.table_id);
                for (const auto& inst : sd.iid_test.dataset.instances) iid_used.insert(inst.table_id);
                for (const auto& id : iid_used)
                    if (train_used.count(id) || train.count(id))
                        return {false, spec.name + " iid test uses training table " + id};
                ++materialized;
            }
        }
    }
    return {true, std::to_string(materialized) + " materialized splits, train/iid-test tables disjoint"};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"template fidelity", template_fidelity},
        {"slot histograms", slot_histograms},
        {"split membership", split_membership},
        {"oracle soundness", oracle_soundness},
        {"parser round-trip", parser_round_trip},
        {"determinism", determinism},
        {"perturbation contract", perturbation_contract},
        {"table non-overlap", table_non_overlap},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("[%s] %zu. %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
