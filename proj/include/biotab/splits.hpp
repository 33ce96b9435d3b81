#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "biotab/generator.hpp"

namespace biotab {

enum class CrossTableSource { TrainTables, TestTables, AllTables };

const char* to_string(CrossTableSource source);
CrossTableSource cross_table_source_from_string(std::string_view s);

struct SplitSpec {
    std::string name;
    std::set<int> train_tasks;
    std::set<int> cross_tasks;
    double table_train_fraction = 1.0 / 3.0;
    std::uint64_t partition_seed = 0;
    CrossTableSource cross_table_source = CrossTableSource::TestTables;
};

/// Throws PreconditionError unless the tasks form a 17/5 partition of 1..22
/// and the fraction lies in (0, 1).
void validate_split_spec(const SplitSpec& spec);

/// The three published 17/5 task splits.
std::vector<SplitSpec> canonical_splits(std::uint64_t partition_seed = 0);

struct TablePartition {
    std::vector<std::string> train_table_ids;  // sorted
    std::vector<std::string> test_table_ids;   // sorted
};

/// |train| = round(fraction * N). Throws DegeneratePartition if either side is empty.
TablePartition partition_tables(const Corpus& corpus, double fraction, std::uint64_t seed);

struct SplitDatasets {
    GenerationResult train;
    GenerationResult iid_test;
    GenerationResult cross_test;
    TablePartition table_partition;
    StatsReport train_stats;
    StatsReport iid_test_stats;
    StatsReport cross_test_stats;
};

SplitDatasets build_split(const Corpus& corpus, const SplitSpec& spec,
                          const GenerationPolicy& policy, unsigned jobs = 1);

nlohmann::ordered_json to_json(const SplitSpec& spec);

}  // namespace biotab
