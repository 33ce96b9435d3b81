#include "biotab/generator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <thread>
#include <unordered_set>

#include "biotab/error.hpp"
#include "biotab/instructions.hpp"
#include "biotab/text.hpp"

namespace biotab {

using nlohmann::json;
using nlohmann::ordered_json;

const char* to_string(SkipReason reason) {
    switch (reason) {
        case SkipReason::InsufficientSymptoms: return "InsufficientSymptoms";
        case SkipReason::InsufficientSigns: return "InsufficientSigns";
        case SkipReason::EmptyNegativePool: return "EmptyNegativePool";
        case SkipReason::AmbiguousAnswer: return "AmbiguousAnswer";
    }
    return "Unknown";
}

namespace {

struct SlotCounts {
    std::size_t symptoms = 0;  // positive only
    std::size_t signs = 0;
    std::size_t negated = 0;
};

SlotCounts count_slots(const TemplateSpec& spec) {
    SlotCounts c;
    for (const auto& s : spec.slots) {
        if (s.negated) ++c.negated;
        else if (s.kind == SlotKind::Symptom) ++c.symptoms;
        else ++c.signs;
    }
    return c;
}

constexpr std::uint64_t kMaxSpace = std::uint64_t{1} << 62;

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    if (a != 0 && b > kMaxSpace / a) throw DataError("slot combination space too large");
    return a * b;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // r * (n - k + i) is divisible by i at every step.
        r = checked_mul(r, n - k + i) / i;
    }
    return r;
}

// k-subset of [0, n) with lexicographic rank `rank`.
std::vector<std::size_t> unrank_combination(std::size_t n, std::size_t k, std::uint64_t rank) {
    std::vector<std::size_t> out;
    std::size_t next = 0;
    for (std::size_t slot = 0; slot < k; ++slot) {
        for (std::size_t v = next; v < n; ++v) {
            std::uint64_t with_v = binomial(n - v - 1, k - slot - 1);
            if (rank < with_v) {
                out.push_back(v);
                next = v + 1;
                break;
            }
            rank -= with_v;
        }
    }
    return out;
}

std::vector<std::string> pool_minus_row(const std::vector<std::string>& candidates,
                                        const DiagnosisRow& row) {
    std::unordered_set<std::string> own;
    for (const auto& s : row.symptoms) own.insert(text::normalize_phrase(s));
    std::unordered_set<std::string> seen;
    std::vector<std::string> out;
    for (const auto& c : candidates) {
        auto key = text::normalize_phrase(c);
        if (own.count(key) || !seen.insert(key).second) continue;
        out.push_back(c);
    }
    return out;
}

std::vector<std::string> corpus_symptoms(const Corpus& corpus) {
    std::vector<std::string> all;
    std::unordered_set<std::string> seen;
    for (const auto& t : corpus.tables)
        for (const auto& r : t.rows)
            for (const auto& s : r.symptoms)
                if (seen.insert(text::normalize_phrase(s)).second) all.push_back(s);
    return all;
}

std::vector<std::string> same_table_candidates(const DiagnosisTable& table, int row_index) {
    std::vector<std::string> all;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        if (static_cast<int>(i) == row_index) continue;
        for (const auto& s : table.rows[i].symptoms) all.push_back(s);
    }
    return all;
}

std::optional<SkipReason> capacity_skip(const TemplateSpec& spec, const DiagnosisRow& row,
                                        std::size_t negative_pool_size) {
    auto c = count_slots(spec);
    if (row.symptoms.size() < c.symptoms) return SkipReason::InsufficientSymptoms;
    if (row.signs.size() < c.signs) return SkipReason::InsufficientSigns;
    if (c.negated > 0 && negative_pool_size < c.negated) return SkipReason::EmptyNegativePool;
    return std::nullopt;
}

void check_row(const DiagnosisTable& table, int row_index) {
    if (row_index < 0 || static_cast<std::size_t>(row_index) >= table.rows.size())
        throw PreconditionError("row index out of range: " + std::to_string(row_index));
}

}  // namespace

std::string make_instance_id(const std::string& table_id, int task_id, int row_index,
                             std::uint64_t combination_index) {
    return table_id + ":" + std::to_string(task_id) + ":" + std::to_string(row_index) + ":" +
           std::to_string(combination_index);
}

std::vector<std::string> negative_pool_for(const DiagnosisTable& table, int row_index,
                                           NegativePool pool, const Corpus* corpus) {
    check_row(table, row_index);
    const auto& row = table.rows[static_cast<std::size_t>(row_index)];
    if (pool == NegativePool::CorpusWide) {
        if (!corpus) throw PreconditionError("corpus-wide negative pool needs a corpus");
        return pool_minus_row(corpus_symptoms(*corpus), row);
    }
    return pool_minus_row(same_table_candidates(table, row_index), row);
}

std::uint64_t combination_count(const TemplateSpec& spec, const DiagnosisRow& row,
                                std::size_t negative_pool_size) {
    auto c = count_slots(spec);
    std::uint64_t n = binomial(row.symptoms.size(), c.symptoms);
    n = checked_mul(n, binomial(row.signs.size(), c.signs));
    // Negated slots are single draws from the pool (at most one per template).
    for (std::size_t i = 0; i < c.negated; ++i) n = checked_mul(n, negative_pool_size);
    return n;
}

std::vector<ResolvedSlot> combination_at(const TemplateSpec& spec, const DiagnosisRow& row,
                                         const std::vector<std::string>& negatives,
                                         std::uint64_t index) {
    auto c = count_slots(spec);
    std::vector<std::size_t> neg_choice;
    for (std::size_t i = 0; i < c.negated; ++i) {
        neg_choice.push_back(static_cast<std::size_t>(index % negatives.size()));
        index /= negatives.size();
    }
    const std::uint64_t sign_space = binomial(row.signs.size(), c.signs);
    auto sign_pick = unrank_combination(row.signs.size(), c.signs, index % sign_space);
    auto sym_pick = unrank_combination(row.symptoms.size(), c.symptoms, index / sign_space);

    std::vector<ResolvedSlot> out;
    std::size_t si = 0, gi = 0, ni = 0;
    for (const auto& s : spec.slots) {
        ResolvedSlot r{s.label, s.kind, s.negated, {}};
        if (s.negated) r.value = negatives[neg_choice[ni++]];
        else if (s.kind == SlotKind::Symptom) r.value = row.symptoms[sym_pick[si++]];
        else r.value = row.signs[sign_pick[gi++]];
        out.push_back(std::move(r));
    }
    return out;
}

std::variant<std::vector<ResolvedSlot>, SkipReason> sample_slots(
    const TemplateSpec& spec, const DiagnosisTable& table, int row_index, Rng& rng,
    const std::vector<std::string>& negatives) {
    check_row(table, row_index);
    const auto& row = table.rows[static_cast<std::size_t>(row_index)];
    if (auto skip = capacity_skip(spec, row, negatives.size())) return *skip;
    const auto n = combination_count(spec, row, negatives.size());
    return combination_at(spec, row, negatives, rng.uniform_index(n));
}

std::variant<std::vector<ResolvedSlot>, SkipReason> sample_slots(const TemplateSpec& spec,
                                                                 const DiagnosisTable& table,
                                                                 int row_index, Rng& rng) {
    return sample_slots(spec, table, row_index, rng,
                        negative_pool_for(table, row_index, NegativePool::SameTable));
}

namespace {

std::map<std::string, std::string> slot_values(const std::vector<ResolvedSlot>& slots) {
    std::map<std::string, std::string> values;
    for (const auto& s : slots)
        values[SlotSpec{s.label, s.kind, s.negated}.placeholder()] = s.value;
    return values;
}

std::variant<QAInstance, SkipReason> instantiate_impl(const TemplateSpec& spec,
                                                      const DiagnosisTable& table, int row_index,
                                                      std::vector<ResolvedSlot> slots,
                                                      const GenerationPolicy& policy,
                                                      std::uint64_t combination_index,
                                                      const std::string& context) {
    const auto& row = table.rows[static_cast<std::size_t>(row_index)];
    if (policy.enforce_unique_answer) {
        auto result = execute_query(query_from_slots(spec.task_id, slots), table);
        if (result.candidates.size() > 1) return SkipReason::AmbiguousAnswer;
    }
    QAInstance inst;
    inst.instance_id = make_instance_id(table.table_id, spec.task_id, row_index, combination_index);
    inst.task_id = spec.task_id;
    inst.table_id = table.table_id;
    inst.row_index = row_index;
    auto values = slot_values(slots);
    inst.question = render_pattern(spec.question_pattern, values);
    inst.prompt = render_pattern(spec.prompt_pattern, values);
    inst.answer = row.diagnosis;
    inst.slots = std::move(slots);
    inst.linearized_context = context;
    return inst;
}

}  // namespace

std::variant<QAInstance, SkipReason> instantiate_with_slots(const TemplateSpec& spec,
                                                            const DiagnosisTable& table,
                                                            int row_index,
                                                            std::vector<ResolvedSlot> slots,
                                                            const GenerationPolicy& policy,
                                                            std::uint64_t combination_index) {
    check_row(table, row_index);
    return instantiate_impl(spec, table, row_index, std::move(slots), policy, combination_index,
                            linearize_table(table));
}

std::variant<QAInstance, SkipReason> instantiate_template(const TemplateSpec& spec,
                                                          const DiagnosisTable& table,
                                                          int row_index, Rng& rng,
                                                          const GenerationPolicy& policy,
                                                          const Corpus* corpus) {
    auto negatives = negative_pool_for(table, row_index, policy.negative_pool, corpus);
    const auto& row = table.rows[static_cast<std::size_t>(row_index)];
    if (auto skip = capacity_skip(spec, row, negatives.size())) return *skip;
    const auto index = rng.uniform_index(combination_count(spec, row, negatives.size()));
    return instantiate_with_slots(spec, table, row_index,
                                  combination_at(spec, row, negatives, index), policy, index);
}

namespace {

struct TablePart {
    std::vector<QAInstance> instances;
    std::vector<SkipRecord> skips;
    std::map<int, std::size_t> ambiguous;
};

TablePart generate_for_table(const DiagnosisTable& table, const std::vector<int>& task_ids,
                             const GenerationPolicy& policy,
                             const std::vector<std::string>* corpus_pool) {
    TablePart part;
    const std::string context = linearize_table(table);
    std::vector<std::vector<std::string>> negatives(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        negatives[r] = corpus_pool
                           ? pool_minus_row(*corpus_pool, table.rows[r])
                           : pool_minus_row(same_table_candidates(table, static_cast<int>(r)),
                                            table.rows[r]);
    }

    for (int task : task_ids) {
        const auto& spec = template_for(task);
        Rng rng(derive_seed(policy.seed, table.table_id + "#" + std::to_string(task)));
        for (std::size_t r = 0; r < table.rows.size(); ++r) {
            const int row_index = static_cast<int>(r);
            const auto& row = table.rows[r];
            if (auto skip = capacity_skip(spec, row, negatives[r].size())) {
                part.skips.push_back({table.table_id, task, row_index, *skip});
                continue;
            }
            const auto space = combination_count(spec, row, negatives[r].size());
            std::vector<std::uint64_t> indices;
            if (policy.combos_per_row_cap && *policy.combos_per_row_cap < space) {
                indices = rng.sample_without_replacement(space, *policy.combos_per_row_cap);
            } else {
                indices.resize(space);
                for (std::uint64_t i = 0; i < space; ++i) indices[i] = i;
            }
            std::size_t produced = 0;
            for (auto idx : indices) {
                auto res = instantiate_impl(spec, table, row_index,
                                            combination_at(spec, row, negatives[r], idx), policy,
                                            idx, context);
                if (auto* inst = std::get_if<QAInstance>(&res)) {
                    part.instances.push_back(std::move(*inst));
                    ++produced;
                } else {
                    ++part.ambiguous[task];
                }
            }
            if (produced == 0)
                part.skips.push_back({table.table_id, task, row_index, SkipReason::AmbiguousAnswer});
        }
    }
    return part;
}

}  // namespace

GenerationResult generate_dataset(const Corpus& corpus, const std::vector<int>& task_ids,
                                  const GenerationPolicy& policy, unsigned jobs,
                                  const Corpus* exemplar_corpus) {
    for (int t : task_ids) template_for(t);
    if (policy.combos_per_row_cap && *policy.combos_per_row_cap < 1)
        throw PreconditionError("combination cap must be at least 1");

    std::vector<const DiagnosisTable*> order;
    for (const auto& t : corpus.tables) order.push_back(&t);
    std::sort(order.begin(), order.end(), [](const DiagnosisTable* a, const DiagnosisTable* b) {
        return a->table_id < b->table_id;
    });

    std::optional<std::vector<std::string>> corpus_pool;
    if (policy.negative_pool == NegativePool::CorpusWide) corpus_pool = corpus_symptoms(corpus);

    std::vector<TablePart> parts(order.size());
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(order.size())));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < order.size();)
            parts[i] = generate_for_table(*order[i], task_ids, policy,
                                          corpus_pool ? &*corpus_pool : nullptr);
    };
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::jthread> threads;
        for (unsigned j = 0; j < jobs; ++j) threads.emplace_back(worker);
    }

    GenerationResult out;
    out.dataset.policy = policy;
    out.dataset.task_ids = {task_ids.begin(), task_ids.end()};
    for (int t : task_ids) out.report.counts_per_task[t] = 0;
    for (auto& part : parts) {
        for (auto& inst : part.instances) {
            ++out.report.counts_per_task[inst.task_id];
            out.dataset.instances.push_back(std::move(inst));
        }
        for (auto& s : part.skips) out.report.skips.push_back(std::move(s));
        for (auto [task, n] : part.ambiguous) out.report.ambiguous_dropped_per_task[task] += n;
    }
    if (out.dataset.instances.empty())
        throw EmptyResult("no row hosts any requested template");

    if (policy.attach_instructions) {
        const Corpus& source = exemplar_corpus ? *exemplar_corpus : corpus;
        std::map<std::pair<int, std::string>, std::optional<Exemplar>> cache;
        for (auto& inst : out.dataset.instances) {
            std::optional<Exemplar> ex;
            if (policy.exemplar_mode == ExemplarMode::Fixed) {
                auto key = std::make_pair(inst.task_id, inst.table_id);
                auto it = cache.find(key);
                if (it == cache.end()) {
                    std::optional<Exemplar> found;
                    try {
                        found = select_exemplar(inst.task_id, source, inst.table_id, policy);
                    } catch (const NoExemplarAvailable&) {
                    }
                    it = cache.emplace(key, std::move(found)).first;
                }
                ex = it->second;
            } else {
                try {
                    ex = select_exemplar(inst.task_id, source, inst.table_id, policy,
                                         derive_seed(policy.seed, "exemplar:" + inst.instance_id));
                } catch (const NoExemplarAvailable&) {
                }
            }
            if (!ex) continue;
            inst.exemplar = to_ref(*ex);
            inst.instruction = build_instruction(inst.task_id, *ex).rendered;
        }
    }

    for (const auto& inst : out.dataset.instances) {
        auto input = assemble_model_input(inst.question, inst.linearized_context,
                                          inst.instruction.value_or(""));
        if (!budget_check(input, policy.token_budget).fits)
            out.report.over_budget.push_back(inst.instance_id);
    }
    return out;
}

StatsReport dataset_stats(const Dataset& dataset) {
    StatsReport s;
    s.n_instances = dataset.instances.size();
    double q = 0, p = 0, t = 0;
    for (const auto& inst : dataset.instances) {
        q += static_cast<double>(text::count_whitespace_tokens(inst.question));
        p += static_cast<double>(text::count_whitespace_tokens(inst.prompt));
        t += static_cast<double>(text::count_whitespace_tokens(inst.linearized_context));
    }
    if (s.n_instances > 0) {
        const auto n = static_cast<double>(s.n_instances);
        s.mean_question_tokens = std::lround(q / n);
        s.mean_prompt_tokens = std::lround(p / n);
        s.mean_table_tokens = std::lround(t / n);
    }
    for (int k = 1; k <= 4; ++k) s.tasks_with_k_mentions[k] = 0;
    for (int task : dataset.task_ids) {
        auto summary = slot_summary(template_for(task));
        ++s.tasks_with_k_mentions[summary.total_mentions];
        if (summary.n_negated > 0) ++s.tasks_with_negation;
    }
    return s;
}

ordered_json to_json(const StatsReport& stats) {
    ordered_json j;
    j["n_instances"] = stats.n_instances;
    j["mean_question_length"] = stats.mean_question_tokens;
    j["mean_prompt_length"] = stats.mean_prompt_tokens;
    j["mean_table_length"] = stats.mean_table_tokens;
    for (auto [k, n] : stats.tasks_with_k_mentions)
        j["tasks_with_" + std::to_string(k) + "_symsign"] = n;
    j["tasks_with_negation"] = stats.tasks_with_negation;
    return j;
}

ordered_json to_json(const GenerationPolicy& policy) {
    ordered_json j;
    j["seed"] = policy.seed;
    if (policy.combos_per_row_cap) j["combos_per_row_cap"] = *policy.combos_per_row_cap;
    else j["combos_per_row_cap"] = "unlimited";
    j["enforce_unique_answer"] = policy.enforce_unique_answer;
    j["negative_pool"] = policy.negative_pool == NegativePool::SameTable ? "same-table" : "corpus-wide";
    j["attach_instructions"] = policy.attach_instructions;
    j["exemplar_mode"] = policy.exemplar_mode == ExemplarMode::Fixed ? "fixed" : "per-instance";
    j["token_budget"] = policy.token_budget;
    return j;
}

ordered_json to_json(const GenerationReport& report) {
    ordered_json j;
    ordered_json skips = ordered_json::array();
    for (const auto& s : report.skips) {
        ordered_json js;
        js["table_id"] = s.table_id;
        js["task_id"] = s.task_id;
        js["row_index"] = s.row_index;
        js["reason"] = to_string(s.reason);
        skips.push_back(std::move(js));
    }
    j["skips"] = std::move(skips);
    ordered_json counts = ordered_json::object();
    for (auto [t, n] : report.counts_per_task) counts[std::to_string(t)] = n;
    j["counts"] = std::move(counts);
    ordered_json amb = ordered_json::object();
    for (auto [t, n] : report.ambiguous_dropped_per_task) amb[std::to_string(t)] = n;
    j["ambiguous_dropped"] = std::move(amb);
    j["over_budget"] = report.over_budget;
    return j;
}

ordered_json to_json(const QAInstance& inst) {
    ordered_json j;
    j["instance_id"] = inst.instance_id;
    j["task_id"] = inst.task_id;
    j["table_id"] = inst.table_id;
    j["row_index"] = inst.row_index;
    j["question"] = inst.question;
    j["answer"] = inst.answer;
    j["prompt"] = inst.prompt;
    ordered_json slots = ordered_json::array();
    for (const auto& s : inst.slots) {
        ordered_json js;
        js["label"] = std::string(1, s.label);
        js["kind"] = to_string(s.kind);
        js["negated"] = s.negated;
        js["value"] = s.value;
        slots.push_back(std::move(js));
    }
    j["slots"] = std::move(slots);
    j["linearized_context"] = inst.linearized_context;
    if (inst.exemplar) {
        ordered_json e;
        e["table_id"] = inst.exemplar->table_id;
        e["row_index"] = inst.exemplar->row_index;
        e["question"] = inst.exemplar->question;
        e["answer"] = inst.exemplar->answer;
        e["prompt"] = inst.exemplar->prompt;
        j["exemplar"] = std::move(e);
    }
    if (inst.instruction) j["instruction"] = *inst.instruction;
    if (inst.perturbation) {
        ordered_json p;
        p["kind"] = inst.perturbation->kind;
        if (inst.perturbation->donor_task_id) p["donor_task_id"] = *inst.perturbation->donor_task_id;
        p["seed"] = inst.perturbation->seed;
        p["scope"] = inst.perturbation->scope;
        j["perturbation"] = std::move(p);
    }
    return j;
}

QAInstance instance_from_json(const json& j) {
    QAInstance inst;
    inst.instance_id = j.at("instance_id").get<std::string>();
    inst.task_id = j.at("task_id").get<int>();
    inst.table_id = j.at("table_id").get<std::string>();
    inst.row_index = j.at("row_index").get<int>();
    inst.question = j.at("question").get<std::string>();
    inst.answer = j.at("answer").get<std::string>();
    inst.prompt = j.value("prompt", std::string{});
    if (j.contains("slots")) {
        for (const auto& js : j.at("slots")) {
            auto label = js.at("label").get<std::string>();
            if (label.size() != 1) throw DataError("slot label must be a single letter");
            inst.slots.push_back({label[0], slot_kind_from_string(js.at("kind").get<std::string>()),
                                  js.value("negated", false), js.at("value").get<std::string>()});
        }
    }
    inst.linearized_context = j.value("linearized_context", std::string{});
    if (j.contains("exemplar")) {
        const auto& e = j.at("exemplar");
        inst.exemplar = ExemplarRef{e.at("table_id").get<std::string>(), e.at("row_index").get<int>(),
                                    e.at("question").get<std::string>(),
                                    e.at("answer").get<std::string>(),
                                    e.value("prompt", std::string{})};
    }
    if (j.contains("instruction")) inst.instruction = j.at("instruction").get<std::string>();
    if (j.contains("perturbation")) {
        const auto& p = j.at("perturbation");
        PerturbationTag tag;
        tag.kind = p.at("kind").get<std::string>();
        if (p.contains("donor_task_id")) tag.donor_task_id = p.at("donor_task_id").get<int>();
        tag.seed = p.value("seed", std::uint64_t{0});
        tag.scope = p.value("scope", std::string{"prompt"});
        inst.perturbation = std::move(tag);
    }
    return inst;
}

void write_dataset(std::ostream& out, const Dataset& dataset) {
    for (const auto& inst : dataset.instances) out << to_json(inst).dump() << '\n';
}

Dataset read_dataset(std::istream& in) {
    Dataset ds;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        QAInstance inst;
        try {
            inst = instance_from_json(json::parse(line));
        } catch (const DataError&) {
            throw;
        } catch (const std::exception& e) {
            throw MalformedRecord(lineno, e.what());
        }
        if (inst.task_id < 1 || inst.task_id > kNumTasks)
            throw MalformedRecord(lineno, "task_id out of range");
        if (!ids.insert(inst.instance_id).second)
            throw MalformedRecord(lineno, "duplicate instance_id " + inst.instance_id);
        ds.task_ids.insert(inst.task_id);
        ds.instances.push_back(std::move(inst));
    }
    return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path.string());
    return read_dataset(in);
}

void save_dataset(const std::filesystem::path& path, const Dataset& dataset) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    write_dataset(out, dataset);
}

}  // namespace biotab
