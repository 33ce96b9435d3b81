#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <sstream>

#include "biotab/error.hpp"
#include "biotab/eval.hpp"
#include "biotab/synth.hpp"
#include "support.hpp"

using namespace biotab;

namespace {

QAInstance gold(const std::string& id, int task, const std::string& answer) {
    QAInstance inst;
    inst.instance_id = id;
    inst.task_id = task;
    inst.answer = answer;
    return inst;
}

}  // namespace

TEST_CASE("normalize_answer and exact_match") {
    CHECK(normalize_answer("Migraine ") == "migraine");
    CHECK(normalize_answer("tension  headache.") == "tension headache");
    CHECK(normalize_answer("") == "");
    CHECK(normalize_answer(" A;b:c!d?e,f ") == "abcdef");
    CHECK(exact_match("migraine", "Migraine") == 1);
    CHECK(exact_match("Tension headache", "Migraine") == 0);
    CHECK(exact_match("Migraine.", "Migraine") == 1);
}

TEST_CASE("score_predictions") {
    Dataset ds;
    ds.instances = {gold("a", 1, "Migraine"), gold("b", 1, "Flu"), gold("c", 1, "Cold")};
    PredictionFile preds{{{"a", "migraine"}, {"b", "Flu"}, {"c", "Migraine"}}};
    auto r = score_predictions(preds, ds);
    CHECK(r.per_task.at(1).n == 3);
    CHECK(r.per_task.at(1).correct == 2);
    CHECK(r.per_task.at(1).em == doctest::Approx(2.0 / 3.0));
    CHECK(render_report_table(r).find("0.667") != std::string::npos);

    PredictionFile unknown{{{"zz", "x"}}};
    CHECK_THROWS_AS(score_predictions(unknown, ds), UnknownInstanceId);
    PredictionFile dup{{{"a", "x"}, {"a", "y"}}};
    CHECK_THROWS_AS(score_predictions(dup, ds), DuplicatePrediction);

    PredictionFile partial{{{"a", "Migraine"}}};
    auto p = score_predictions(partial, ds);
    CHECK(p.n_missing == 2);
    CHECK(p.per_task.at(1).correct == 1);
    CHECK(render_report_table(p).find("warning") != std::string::npos);

    auto reversed = preds;
    std::reverse(reversed.entries.begin(), reversed.entries.end());
    CHECK(score_predictions(reversed, ds) == r);
}

TEST_CASE("split averages: macro and micro") {
    Dataset ds;
    // task 2 (train in split 1): 1/1 correct; task 3: 0/3; task 1 (cross): 1/2.
    ds.instances = {gold("a", 2, "x"), gold("b", 3, "x"), gold("c", 3, "x"), gold("d", 3, "x"),
                    gold("e", 1, "x"), gold("f", 1, "x")};
    PredictionFile preds{{{"a", "x"}, {"b", "n"}, {"c", "n"}, {"d", "n"}, {"e", "x"}, {"f", "n"}}};
    const auto split = canonical_splits()[0];
    auto macro = score_predictions(preds, ds, &split);
    REQUIRE(macro.avg_train_tasks);
    REQUIRE(macro.avg_cross_tasks);
    CHECK(*macro.avg_train_tasks == doctest::Approx((1.0 + 0.0) / 2));
    CHECK(*macro.avg_cross_tasks == doctest::Approx(0.5));
    CHECK(macro.overall == doctest::Approx((1.0 + 0.0 + 0.5) / 3));

    auto micro = score_predictions(preds, ds, &split, Averaging::Micro);
    CHECK(*micro.avg_train_tasks == doctest::Approx(1.0 / 4));
    CHECK(micro.overall == doctest::Approx(2.0 / 6));
    CHECK(render_report_table(micro).find("(micro)") != std::string::npos);

    auto records = render_report_records(macro);
    CHECK(records.find("\"row\":\"avg_cross\"") != std::string::npos);

    auto back = eval_report_from_json(nlohmann::json::parse(to_json(macro).dump()));
    CHECK(back == macro);
    auto back_micro = eval_report_from_json(nlohmann::json::parse(to_json(micro).dump()));
    CHECK(back_micro == micro);
}

TEST_CASE("gold and oracle predictions score 1.0") {
    SynthConfig cfg;
    cfg.n_tables = 5;
    cfg.seed = 8;
    auto corpus = synthesize_corpus(cfg);
    GenerationPolicy policy;
    policy.combos_per_row_cap = 5;
    policy.attach_instructions = false;
    std::vector<int> tasks(22);
    std::iota(tasks.begin(), tasks.end(), 1);
    auto ds = generate_dataset(corpus, tasks, policy).dataset;

    PredictionFile golden, oracle;
    for (const auto& inst : ds.instances) {
        golden.entries.push_back({inst.instance_id, inst.answer});
        auto res = oracle_answer(inst.question, *corpus.find(inst.table_id));
        oracle.entries.push_back({inst.instance_id, res.candidates.at(0)});
    }
    for (const auto* preds : {&golden, &oracle}) {
        auto r = score_predictions(*preds, ds);
        for (const auto& [task, s] : r.per_task) CHECK(s.em == 1.0);
        CHECK(r.overall == 1.0);
    }
}

TEST_CASE("prediction files") {
    std::istringstream in(
        "{\"instance_id\":\"a\",\"prediction\":\"Flu\"}\n\n{\"instance_id\":\"b\",\"prediction\":null}\n");
    auto p = read_predictions(in);
    REQUIRE(p.entries.size() == 2);
    CHECK(p.entries[1].prediction == "");
    std::ostringstream out;
    write_predictions(out, p);
    std::istringstream again(out.str());
    CHECK(read_predictions(again).entries.size() == 2);

    std::istringstream dup("{\"instance_id\":\"a\",\"prediction\":\"x\"}\n{\"instance_id\":\"a\",\"prediction\":\"y\"}\n");
    CHECK_THROWS_AS(read_predictions(dup), DuplicatePrediction);
}
