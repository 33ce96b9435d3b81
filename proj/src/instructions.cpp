#include "biotab/instructions.hpp"

#include <algorithm>

#include "biotab/error.hpp"
#include "biotab/text.hpp"

namespace biotab {

namespace {

std::optional<Exemplar> first_in_table(const TemplateSpec& spec, const DiagnosisTable& table,
                                       const Corpus& corpus, const GenerationPolicy& policy) {
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const int row_index = static_cast<int>(r);
        const auto& row = table.rows[r];
        auto negatives = negative_pool_for(table, row_index, policy.negative_pool, &corpus);
        const auto space = combination_count(spec, row, negatives.size());
        for (std::uint64_t i = 0; i < space; ++i) {
            auto res = instantiate_with_slots(spec, table, row_index,
                                              combination_at(spec, row, negatives, i), policy, i);
            if (auto* inst = std::get_if<QAInstance>(&res))
                return Exemplar{spec.task_id, table.table_id, row_index, inst->question,
                                inst->answer, inst->slots};
        }
    }
    return std::nullopt;
}

}  // namespace

Exemplar select_exemplar(int task_id, const Corpus& corpus, std::string_view exclude_table_id,
                         const GenerationPolicy& policy, std::optional<std::uint64_t> resample_seed) {
    const auto& spec = template_for(task_id);
    std::vector<const DiagnosisTable*> eligible;
    for (const auto& t : corpus.tables)
        if (t.table_id != exclude_table_id) eligible.push_back(&t);
    std::sort(eligible.begin(), eligible.end(), [](const DiagnosisTable* a, const DiagnosisTable* b) {
        return a->table_id < b->table_id;
    });
    if (resample_seed) {
        Rng rng(*resample_seed);
        rng.shuffle(eligible);
    }
    for (const auto* table : eligible)
        if (auto ex = first_in_table(spec, *table, corpus, policy)) return *ex;
    throw NoExemplarAvailable(task_id);
}

ExemplarRef to_ref(const Exemplar& exemplar) {
    std::map<std::string, std::string> values;
    for (const auto& s : exemplar.slots)
        values[SlotSpec{s.label, s.kind, s.negated}.placeholder()] = s.value;
    return {exemplar.table_id, exemplar.row_index, exemplar.question, exemplar.answer,
            render_pattern(template_for(exemplar.task_id).prompt_pattern, values)};
}

std::string render_instruction(std::string_view prompt, std::string_view question,
                               std::string_view answer) {
    return "Prompt: " + text::terminate_sentence(prompt) + " Question: " +
           text::terminate_sentence(question) + " Answer: " + std::string(answer);
}

Instruction build_instruction(int task_id, const Exemplar& exemplar) {
    if (exemplar.task_id != task_id)
        throw PreconditionError("exemplar of task " + std::to_string(exemplar.task_id) +
                                " used for task " + std::to_string(task_id));
    Instruction ins;
    ins.task_id = task_id;
    ins.prompt = to_ref(exemplar).prompt;
    ins.exemplar_question = exemplar.question;
    ins.exemplar_answer = exemplar.answer;
    ins.rendered = render_instruction(ins.prompt, ins.exemplar_question, ins.exemplar_answer);
    return ins;
}

Instruction build_instruction(int task_id, std::string_view exemplar_question,
                              std::string_view exemplar_answer) {
    auto query = parse_question(exemplar_question);
    Exemplar ex;
    ex.task_id = query.task_id;
    ex.question = std::string(exemplar_question);
    ex.answer = std::string(exemplar_answer);
    // Rebuild labelled slots from the query lists, which are in label order.
    const auto& spec = template_for(query.task_id);
    std::size_t si = 0, gi = 0, ni = 0;
    for (const auto& s : spec.slots) {
        std::string value = s.negated                    ? query.negated_symptoms[ni++]
                            : s.kind == SlotKind::Symptom ? query.positive_symptoms[si++]
                                                          : query.positive_signs[gi++];
        ex.slots.push_back({s.label, s.kind, s.negated, std::move(value)});
    }
    return build_instruction(task_id, ex);
}

std::string assemble_model_input(std::string_view question, std::string_view linearized_context,
                                 std::string_view instruction) {
    std::string out = "Question: " + std::string(question) + ", Context: " +
                      std::string(linearized_context);
    if (!instruction.empty()) out += ", Instruction: " + std::string(instruction);
    return out;
}

const char* to_string(PerturbationKind::Type type) {
    switch (type) {
        case PerturbationKind::Type::Mismatched: return "mismatched";
        case PerturbationKind::Type::RepeatChar: return "repeat";
        case PerturbationKind::Type::RandomString: return "random-string";
        case PerturbationKind::Type::RandomWords: return "random-words";
    }
    return "unknown";
}

PerturbationKind::Type perturbation_type_from_string(std::string_view s) {
    if (s == "mismatched") return PerturbationKind::Type::Mismatched;
    if (s == "repeat") return PerturbationKind::Type::RepeatChar;
    if (s == "random-string") return PerturbationKind::Type::RandomString;
    if (s == "random-words") return PerturbationKind::Type::RandomWords;
    throw PreconditionError("unknown perturbation kind: " + std::string(s));
}

int default_donor(int task_id) {
    const auto& own = template_for(task_id).prompt_pattern;
    for (int step = 1; step < kNumTasks; ++step) {
        int candidate = ((task_id - 1 + step) % kNumTasks) + 1;
        if (template_for(candidate).prompt_pattern != own) return candidate;
    }
    throw InvalidDonor(task_id, task_id);
}

const std::vector<std::string>& neutral_words() {
    static const std::vector<std::string> words = {
        "hello",  "bye",    "you",    "east",   "west",   "north",  "south",  "table",
        "chair",  "window", "river",  "stone",  "cloud",  "green",  "yellow", "purple",
        "orange", "seven",  "eleven", "twenty", "spoon",  "pencil", "garden", "bridge",
        "candle", "mirror", "basket", "ladder", "pillow", "button", "rocket", "planet",
        "forest", "desert", "island", "valley", "harbor", "castle", "tunnel", "market",
        "violin", "guitar", "trumpet", "piano", "winter", "summer", "autumn", "spring",
        "monday", "friday", "morning", "evening", "kettle", "blanket", "saddle", "marble",
        "copper", "silver", "velvet", "cotton", "meadow", "lantern", "compass", "anchor",
    };
    return words;
}

std::string perturb_prompt(std::string_view prompt, int task_id, const PerturbationKind& kind,
                           Rng& rng) {
    using Type = PerturbationKind::Type;
    switch (kind.type) {
        case Type::Mismatched: {
            template_for(task_id);
            const int donor = kind.donor_task_id.value_or(default_donor(task_id));
            if (donor < 1 || donor > kNumTasks || donor == task_id) throw InvalidDonor(task_id, donor);
            return render_notation(template_for(donor).prompt_pattern);
        }
        case Type::RepeatChar:
            return std::string(text::char_length(prompt), 'A');
        case Type::RandomString: {
            std::string out(text::char_length(prompt), 'a');
            for (char& c : out) c = static_cast<char>('a' + rng.uniform_index(26));
            return out;
        }
        case Type::RandomWords: {
            const auto& words = neutral_words();
            std::vector<std::string> picked;
            const auto n = text::count_whitespace_tokens(prompt);
            for (std::size_t i = 0; i < n; ++i) picked.push_back(words[rng.uniform_index(words.size())]);
            return text::join(picked, " ");
        }
    }
    throw PreconditionError("unknown perturbation kind");
}

Instruction perturb_instruction(const Instruction& instruction, const PerturbationKind& kind,
                                std::uint64_t seed) {
    Rng rng(seed);
    Instruction out = instruction;
    out.prompt = perturb_prompt(instruction.prompt, instruction.task_id, kind, rng);
    out.rendered = render_instruction(out.prompt, out.exemplar_question, out.exemplar_answer);
    return out;
}

BudgetCheck budget_check(std::string_view model_input, int budget, const TokenCounter& counter) {
    if (budget < 1) throw PreconditionError("token budget must be at least 1");
    BudgetCheck check;
    check.tokens = counter ? counter(model_input) : text::count_whitespace_tokens(model_input);
    check.fits = check.tokens <= static_cast<std::size_t>(budget);
    return check;
}

}  // namespace biotab
