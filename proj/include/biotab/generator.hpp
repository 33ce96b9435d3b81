#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "biotab/oracle.hpp"
#include "biotab/rng.hpp"
#include "biotab/table.hpp"
#include "biotab/templates.hpp"

namespace biotab {

enum class SkipReason { InsufficientSymptoms, InsufficientSigns, EmptyNegativePool, AmbiguousAnswer };

const char* to_string(SkipReason reason);

enum class NegativePool { SameTable, CorpusWide };

/// In-context example attached to an instance's instruction.
struct ExemplarRef {
    std::string table_id;
    int row_index = 0;
    std::string question;
    std::string answer;
    std::string prompt;  // task prompt rendered with the exemplar's slot values
};

struct PerturbationTag {
    std::string kind;
    std::optional<int> donor_task_id;
    std::uint64_t seed = 0;
    std::string scope;
};

struct QAInstance {
    std::string instance_id;
    int task_id = 0;
    std::string table_id;
    int row_index = 0;
    std::string question;
    std::string answer;
    std::vector<ResolvedSlot> slots;
    std::string prompt;
    std::string linearized_context;
    std::optional<ExemplarRef> exemplar;
    std::optional<std::string> instruction;
    std::optional<PerturbationTag> perturbation;
};

enum class ExemplarMode { Fixed, PerInstance };

struct GenerationPolicy {
    std::uint64_t seed = 0;
    std::optional<std::uint64_t> combos_per_row_cap;  // nullopt = unlimited
    bool enforce_unique_answer = true;
    NegativePool negative_pool = NegativePool::SameTable;
    bool attach_instructions = true;
    ExemplarMode exemplar_mode = ExemplarMode::Fixed;
    int token_budget = 512;
};

nlohmann::ordered_json to_json(const GenerationPolicy& policy);

struct Dataset {
    std::vector<QAInstance> instances;
    GenerationPolicy policy;
    std::set<int> task_ids;
};

struct SkipRecord {
    std::string table_id;
    int task_id = 0;
    int row_index = 0;
    SkipReason reason;
};

struct GenerationReport {
    std::vector<SkipRecord> skips;
    std::map<int, std::size_t> counts_per_task;
    std::map<int, std::size_t> ambiguous_dropped_per_task;
    std::vector<std::string> over_budget;  // instance ids whose model input exceeds the budget
};

nlohmann::ordered_json to_json(const GenerationReport& report);

/// Sampling context for negated slots: the candidate negatives for one row.
std::vector<std::string> negative_pool_for(const DiagnosisTable& table, int row_index,
                                           NegativePool pool, const Corpus* corpus = nullptr);

/// Size of the slot-combination space for (template, row): unordered positive
/// symptom subsets x positive sign subsets x negative choices. 0 means the row
/// cannot host the template.
std::uint64_t combination_count(const TemplateSpec& spec, const DiagnosisRow& row,
                                std::size_t negative_pool_size);

/// Decodes a combination index in [0, combination_count) to resolved slots.
std::vector<ResolvedSlot> combination_at(const TemplateSpec& spec, const DiagnosisRow& row,
                                         const std::vector<std::string>& negatives,
                                         std::uint64_t index);

std::variant<std::vector<ResolvedSlot>, SkipReason> sample_slots(
    const TemplateSpec& spec, const DiagnosisTable& table, int row_index, Rng& rng,
    const std::vector<std::string>& negatives);

/// Convenience overload using the same-table negative pool.
std::variant<std::vector<ResolvedSlot>, SkipReason> sample_slots(const TemplateSpec& spec,
                                                                 const DiagnosisTable& table,
                                                                 int row_index, Rng& rng);

/// Renders an instance from already-chosen slots; applies the uniqueness policy.
std::variant<QAInstance, SkipReason> instantiate_with_slots(const TemplateSpec& spec,
                                                            const DiagnosisTable& table,
                                                            int row_index,
                                                            std::vector<ResolvedSlot> slots,
                                                            const GenerationPolicy& policy,
                                                            std::uint64_t combination_index = 0);

/// "{table_id}:{task_id}:{row_index}:{combination_index}"
std::string make_instance_id(const std::string& table_id, int task_id, int row_index,
                             std::uint64_t combination_index);

std::variant<QAInstance, SkipReason> instantiate_template(const TemplateSpec& spec,
                                                          const DiagnosisTable& table,
                                                          int row_index, Rng& rng,
                                                          const GenerationPolicy& policy,
                                                          const Corpus* corpus = nullptr);

struct GenerationResult {
    Dataset dataset;
    GenerationReport report;
};

/// Enumerates (table, task, row, combination) in canonical order: tables by
/// table_id, then task id, row index, combination index. Each (table, task)
/// pair draws from its own seed-derived stream, so `jobs` never changes the
/// output. `exemplar_corpus` supplies instruction exemplars (defaults to
/// `corpus`). Throws EmptyResult when nothing could be generated.
GenerationResult generate_dataset(const Corpus& corpus, const std::vector<int>& task_ids,
                                  const GenerationPolicy& policy, unsigned jobs = 1,
                                  const Corpus* exemplar_corpus = nullptr);

struct StatsReport {
    std::size_t n_instances = 0;
    long mean_question_tokens = 0;
    long mean_prompt_tokens = 0;
    long mean_table_tokens = 0;
    std::map<int, int> tasks_with_k_mentions;  // k = 1..4
    int tasks_with_negation = 0;
};

StatsReport dataset_stats(const Dataset& dataset);
nlohmann::ordered_json to_json(const StatsReport& stats);

nlohmann::ordered_json to_json(const QAInstance& inst);
QAInstance instance_from_json(const nlohmann::json& j);

void write_dataset(std::ostream& out, const Dataset& dataset);
/// Reads instance records; task_ids becomes the set of tasks present.
Dataset read_dataset(std::istream& in);
Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const std::filesystem::path& path, const Dataset& dataset);

}  // namespace biotab
