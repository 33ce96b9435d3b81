#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "biotab/error.hpp"
#include "biotab/splits.hpp"
#include "biotab/synth.hpp"

using namespace biotab;

namespace {

// Independent of slot_summary: counts placeholders in the question text.
std::map<int, int> mention_histogram(const std::set<int>& tasks) {
    std::map<int, int> h;
    for (int t : tasks) {
        const auto& q = template_for(t).question_pattern;
        h[static_cast<int>(std::count(q.begin(), q.end(), '{'))]++;
    }
    return h;
}

Corpus synthetic(std::size_t n, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.n_tables = n;
    cfg.seed = seed;
    return synthesize_corpus(cfg);
}

}  // namespace

TEST_CASE("canonical splits") {
    auto s = canonical_splits();
    REQUIRE(s.size() == 3);
    CHECK(s[0].cross_tasks == std::set<int>{1, 4, 7, 15, 21});
    CHECK(s[1].cross_tasks == std::set<int>{8, 9, 11, 12, 14});
    CHECK(s[2].cross_tasks == std::set<int>{1, 3, 15, 16, 17});
    CHECK(s[1].train_tasks.count(22) == 1);
    CHECK(s[1].train_tasks.count(9) == 0);
    for (const auto& spec : s) {
        CHECK(spec.train_tasks.size() == 17);
        CHECK_NOTHROW(validate_split_spec(spec));
        for (int t : spec.cross_tasks) CHECK(spec.train_tasks.count(t) == 0);
    }
    CHECK(mention_histogram(s[0].cross_tasks) == std::map<int, int>{{1, 3}, {2, 2}});
    CHECK(mention_histogram(s[1].cross_tasks) == std::map<int, int>{{2, 2}, {3, 3}});
    CHECK(mention_histogram(s[2].cross_tasks) == std::map<int, int>{{1, 2}, {2, 2}, {3, 1}});
    CHECK(mention_histogram(s[0].train_tasks) == std::map<int, int>{{2, 9}, {3, 7}, {4, 1}});
}

TEST_CASE("validate_split_spec") {
    auto spec = canonical_splits()[0];
    auto bad = spec;
    bad.cross_tasks.insert(2);
    CHECK_THROWS_AS(validate_split_spec(bad), PreconditionError);
    bad = spec;
    bad.table_train_fraction = 1.0;
    CHECK_THROWS_AS(validate_split_spec(bad), PreconditionError);
    bad = spec;
    bad.train_tasks.erase(2);
    bad.cross_tasks.insert(2);
    CHECK_THROWS_AS(validate_split_spec(bad), PreconditionError);
}

TEST_CASE("partition_tables") {
    auto corpus = synthetic(10, 1);
    auto p = partition_tables(corpus, 0.3, 5);
    CHECK(p.train_table_ids.size() == 3);
    CHECK(p.test_table_ids.size() == 7);
    auto q = partition_tables(corpus, 0.3, 5);
    CHECK(p.train_table_ids == q.train_table_ids);
    CHECK(std::is_sorted(p.train_table_ids.begin(), p.train_table_ids.end()));
    std::set<std::string> all(p.train_table_ids.begin(), p.train_table_ids.end());
    all.insert(p.test_table_ids.begin(), p.test_table_ids.end());
    CHECK(all.size() == 10);

    CHECK_THROWS_AS(partition_tables(synthetic(1, 1), 0.5, 0), DegeneratePartition);
    CHECK_THROWS_AS(partition_tables(synthetic(10, 1), 0.01, 0), DegeneratePartition);

    bool differs = false;
    for (std::uint64_t seed = 0; seed < 10 && !differs; ++seed)
        differs = partition_tables(corpus, 0.3, seed).train_table_ids != p.train_table_ids;
    CHECK(differs);
}

TEST_CASE("build_split invariants") {
    auto corpus = synthetic(12, 3);
    GenerationPolicy policy;
    policy.seed = 7;
    policy.combos_per_row_cap = 3;
    for (const auto& spec : canonical_splits(7)) {
        auto sd = build_split(corpus, spec, policy);
        const std::set<std::string> train_tables(sd.table_partition.train_table_ids.begin(),
                                                 sd.table_partition.train_table_ids.end());
        const std::set<std::string> test_tables(sd.table_partition.test_table_ids.begin(),
                                                sd.table_partition.test_table_ids.end());
        std::set<std::string> ids;
        std::size_t total = 0;
        for (const auto& inst : sd.train.dataset.instances) {
            CHECK(spec.train_tasks.count(inst.task_id) == 1);
            CHECK(train_tables.count(inst.table_id) == 1);
        }
        for (const auto& inst : sd.iid_test.dataset.instances) {
            CHECK(spec.train_tasks.count(inst.task_id) == 1);
            CHECK(test_tables.count(inst.table_id) == 1);
        }
        for (const auto& inst : sd.cross_test.dataset.instances) {
            CHECK(spec.cross_tasks.count(inst.task_id) == 1);
            CHECK(test_tables.count(inst.table_id) == 1);
        }
        for (const auto* part : {&sd.train, &sd.iid_test, &sd.cross_test})
            for (const auto& inst : part->dataset.instances) {
                ids.insert(inst.instance_id);
                ++total;
            }
        CHECK(ids.size() == total);
        for (const auto& t : train_tables) CHECK(test_tables.count(t) == 0);
        if (spec.name == "split1") {
            CHECK(sd.train_stats.tasks_with_negation == 2);
            CHECK(sd.train_stats.tasks_with_k_mentions.at(4) == 1);
        }
    }
}

TEST_CASE("cross table source") {
    auto corpus = synthetic(9, 2);
    GenerationPolicy policy;
    policy.combos_per_row_cap = 1;
    policy.attach_instructions = false;
    auto spec = canonical_splits()[0];
    spec.cross_table_source = CrossTableSource::AllTables;
    auto sd = build_split(corpus, spec, policy);
    std::set<std::string> tables;
    for (const auto& inst : sd.cross_test.dataset.instances) tables.insert(inst.table_id);
    CHECK(tables.size() == 9);
    CHECK(cross_table_source_from_string("train-tables") == CrossTableSource::TrainTables);
    CHECK(std::string(to_string(CrossTableSource::TestTables)) == "test-tables");
}
