#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "biotab/generator.hpp"

namespace biotab {

struct Exemplar {
    int task_id = 0;
    std::string table_id;
    int row_index = 0;
    std::string question;
    std::string answer;
    std::vector<ResolvedSlot> slots;
};

struct Instruction {
    int task_id = 0;
    std::string prompt;              // p
    std::string exemplar_question;   // q
    std::string exemplar_answer;     // a
    std::string rendered;            // "Prompt: p. Question: q. Answer: a"
};

/// Picks the first instantiable (row, combination) of the lexicographically
/// smallest eligible table, never from `exclude_table_id`. With a seed given,
/// picks uniformly among eligible tables instead (per-instance resampling).
/// Throws NoExemplarAvailable.
Exemplar select_exemplar(int task_id, const Corpus& corpus, std::string_view exclude_table_id,
                         const GenerationPolicy& policy = {},
                         std::optional<std::uint64_t> resample_seed = std::nullopt);

ExemplarRef to_ref(const Exemplar& exemplar);

/// "Prompt: {p}. Question: {q}. Answer: {a}". A sentence that already ends in
/// terminal punctuation is not given a second period.
std::string render_instruction(std::string_view prompt, std::string_view question,
                               std::string_view answer);

Instruction build_instruction(int task_id, const Exemplar& exemplar);

/// Recovers the exemplar slots by parsing the question.
Instruction build_instruction(int task_id, std::string_view exemplar_question,
                              std::string_view exemplar_answer);

/// "Question: Q, Context: C, Instruction: I"; the instruction part is omitted when empty.
std::string assemble_model_input(std::string_view question, std::string_view linearized_context,
                                 std::string_view instruction = {});

struct PerturbationKind {
    enum class Type { Mismatched, RepeatChar, RandomString, RandomWords };
    Type type = Type::RepeatChar;
    std::optional<int> donor_task_id;  // Mismatched only; default donor when empty

    static PerturbationKind mismatched(std::optional<int> donor = std::nullopt) {
        return {Type::Mismatched, donor};
    }
    static PerturbationKind repeat_char() { return {Type::RepeatChar, std::nullopt}; }
    static PerturbationKind random_string() { return {Type::RandomString, std::nullopt}; }
    static PerturbationKind random_words() { return {Type::RandomWords, std::nullopt}; }
};

const char* to_string(PerturbationKind::Type type);
PerturbationKind::Type perturbation_type_from_string(std::string_view s);

/// The next task in cyclic order after `task_id` whose prompt pattern differs.
int default_donor(int task_id);

/// Fixed list of 64 neutral filler words used by RandomWords.
const std::vector<std::string>& neutral_words();

/// Applies the kind's rule to a single prompt sentence.
std::string perturb_prompt(std::string_view prompt, int task_id, const PerturbationKind& kind,
                           Rng& rng);

/// Replaces p and re-renders; q and a are untouched.
Instruction perturb_instruction(const Instruction& instruction, const PerturbationKind& kind,
                                std::uint64_t seed);

using TokenCounter = std::function<std::size_t(std::string_view)>;

struct BudgetCheck {
    std::size_t tokens = 0;
    bool fits = true;
};

BudgetCheck budget_check(std::string_view model_input, int budget = 512,
                         const TokenCounter& counter = {});

}  // namespace biotab
