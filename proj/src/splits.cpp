#include "biotab/splits.hpp"

#include <algorithm>
#include <cmath>

#include "biotab/error.hpp"

namespace biotab {

const char* to_string(CrossTableSource source) {
    switch (source) {
        case CrossTableSource::TrainTables: return "train-tables";
        case CrossTableSource::TestTables: return "test-tables";
        case CrossTableSource::AllTables: return "all-tables";
    }
    return "unknown";
}

CrossTableSource cross_table_source_from_string(std::string_view s) {
    if (s == "train-tables") return CrossTableSource::TrainTables;
    if (s == "test-tables") return CrossTableSource::TestTables;
    if (s == "all-tables") return CrossTableSource::AllTables;
    throw PreconditionError("unknown cross table source: " + std::string(s));
}

void validate_split_spec(const SplitSpec& spec) {
    if (spec.train_tasks.size() != 17 || spec.cross_tasks.size() != 5)
        throw PreconditionError("split " + spec.name + " must have 17 train and 5 cross tasks");
    std::set<int> all = spec.train_tasks;
    all.insert(spec.cross_tasks.begin(), spec.cross_tasks.end());
    if (all.size() != kNumTasks || *all.begin() != 1 || *all.rbegin() != kNumTasks)
        throw PreconditionError("split " + spec.name + " tasks must partition 1..22");
    if (!(spec.table_train_fraction > 0.0 && spec.table_train_fraction < 1.0))
        throw PreconditionError("table train fraction must lie in (0, 1)");
}

std::vector<SplitSpec> canonical_splits(std::uint64_t partition_seed) {
    auto make = [&](std::string name, std::set<int> cross) {
        SplitSpec s;
        s.name = std::move(name);
        s.cross_tasks = std::move(cross);
        for (int t = 1; t <= kNumTasks; ++t)
            if (!s.cross_tasks.count(t)) s.train_tasks.insert(t);
        s.partition_seed = partition_seed;
        return s;
    };
    return {
        make("split1", {1, 4, 7, 15, 21}),
        make("split2", {8, 9, 11, 12, 14}),
        make("split3", {1, 3, 15, 16, 17}),
    };
}

TablePartition partition_tables(const Corpus& corpus, double fraction, std::uint64_t seed) {
    if (corpus.tables.empty()) throw PreconditionError("cannot partition an empty corpus");
    if (!(fraction > 0.0 && fraction < 1.0))
        throw PreconditionError("table train fraction must lie in (0, 1)");
    std::vector<std::string> ids;
    for (const auto& t : corpus.tables) ids.push_back(t.table_id);
    std::sort(ids.begin(), ids.end());
    Rng rng(derive_seed(seed, "partition"));
    rng.shuffle(ids);

    const auto n_train = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(ids.size())));
    if (n_train == 0 || n_train >= ids.size())
        throw DegeneratePartition("partition of " + std::to_string(ids.size()) +
                                  " tables at fraction " + std::to_string(fraction) +
                                  " leaves one side empty");
    TablePartition p;
    p.train_table_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_train));
    p.test_table_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_train), ids.end());
    std::sort(p.train_table_ids.begin(), p.train_table_ids.end());
    std::sort(p.test_table_ids.begin(), p.test_table_ids.end());
    return p;
}

namespace {

Corpus subset(const Corpus& corpus, const std::vector<std::string>& ids) {
    Corpus out;
    out.source_label = corpus.source_label;
    for (const auto& id : ids) out.tables.push_back(*corpus.find(id));
    return out;
}

}  // namespace

SplitDatasets build_split(const Corpus& corpus, const SplitSpec& spec,
                          const GenerationPolicy& policy, unsigned jobs) {
    validate_split_spec(spec);
    SplitDatasets out;
    out.table_partition = partition_tables(corpus, spec.table_train_fraction, spec.partition_seed);
    const Corpus train_tables = subset(corpus, out.table_partition.train_table_ids);
    const Corpus test_tables = subset(corpus, out.table_partition.test_table_ids);
    const std::vector<int> train_tasks(spec.train_tasks.begin(), spec.train_tasks.end());
    const std::vector<int> cross_tasks(spec.cross_tasks.begin(), spec.cross_tasks.end());

    out.train = generate_dataset(train_tables, train_tasks, policy, jobs, &corpus);
    out.iid_test = generate_dataset(test_tables, train_tasks, policy, jobs, &corpus);
    const Corpus* cross_source = &test_tables;
    if (spec.cross_table_source == CrossTableSource::TrainTables) cross_source = &train_tables;
    if (spec.cross_table_source == CrossTableSource::AllTables) cross_source = &corpus;
    out.cross_test = generate_dataset(*cross_source, cross_tasks, policy, jobs, &corpus);

    out.train_stats = dataset_stats(out.train.dataset);
    out.iid_test_stats = dataset_stats(out.iid_test.dataset);
    out.cross_test_stats = dataset_stats(out.cross_test.dataset);
    return out;
}

nlohmann::ordered_json to_json(const SplitSpec& spec) {
    nlohmann::ordered_json j;
    j["name"] = spec.name;
    j["train_tasks"] = std::vector<int>(spec.train_tasks.begin(), spec.train_tasks.end());
    j["cross_tasks"] = std::vector<int>(spec.cross_tasks.begin(), spec.cross_tasks.end());
    j["table_train_fraction"] = spec.table_train_fraction;
    j["partition_seed"] = spec.partition_seed;
    j["cross_table_source"] = to_string(spec.cross_table_source);
    return j;
}

}  // namespace biotab
