#include "biotab/synth.hpp"

#include <algorithm>
#include <cstdio>

#include "biotab/error.hpp"
#include "biotab/rng.hpp"

namespace biotab {

namespace {

std::vector<std::string> cross(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    std::vector<std::string> out;
    for (const auto& x : a)
        for (const auto& y : b) out.push_back(x.empty() ? y : x + " " + y);
    return out;
}

const std::vector<std::string>& symptom_vocab() {
    static const std::vector<std::string> v = cross(
        {"", "intermittent", "persistent", "sudden", "mild", "severe", "nocturnal", "episodic"},
        {"headache", "nausea", "fever", "fatigue", "cough", "chest pain", "abdominal pain",
         "back pain", "joint pain", "dizziness", "vomiting", "diarrhea", "constipation",
         "palpitations", "shortness of breath", "weight loss", "night sweats", "rash", "itching",
         "sore throat", "ear pain", "blurred vision", "photophobia", "muscle weakness", "numbness",
         "insomnia", "anxiety", "hoarseness", "wheezing", "dysuria", "hematuria", "jaundice",
         "bloating", "heartburn", "tinnitus", "chills", "cramps", "swelling", "stiffness",
         "confusion"});
    return v;
}

const std::vector<std::string>& sign_vocab() {
    static const std::vector<std::string> v = [] {
        auto out = cross({"tenderness", "erythema", "edema", "rigidity", "pallor", "crackles",
                          "dullness", "bruising"},
                         {"of the abdomen", "of the chest", "of the neck", "of the knee",
                          "of the lower back", "of the scalp", "of the left flank",
                          "of the right flank", "of the calf", "of the wrist"});
        for (const char* s : {"tachycardia", "bradycardia", "hypotension", "hepatomegaly",
                              "splenomegaly", "lymphadenopathy", "papilledema", "cyanosis",
                              "clubbing", "nystagmus"})
            out.emplace_back(s);
        return out;
    }();
    return v;
}

const std::vector<std::string>& diagnosis_vocab() {
    static const std::vector<std::string> v = cross(
        cross({"Acute", "Chronic", "Viral", "Bacterial", "Allergic", "Idiopathic", "Reactive",
               "Hereditary", "Autoimmune", "Toxic"},
              {"renal", "hepatic", "gastric", "cardiac", "pulmonary", "vestibular", "cutaneous",
               "thyroid", "biliary", "spinal"}),
        {"syndrome", "disorder", "inflammation", "insufficiency", "infection", "dysfunction"});
    return v;
}

std::vector<std::string> pick(const std::vector<std::string>& pool, std::size_t k, Rng& rng) {
    auto idx = rng.sample_without_replacement(pool.size(), std::min(k, pool.size()));
    std::vector<std::string> out;
    for (auto i : idx) out.push_back(pool[i]);
    rng.shuffle(out);
    return out;
}

std::size_t between(std::size_t lo, std::size_t hi, Rng& rng) {
    return lo + static_cast<std::size_t>(rng.uniform_index(hi - lo + 1));
}

}  // namespace

Corpus synthesize_corpus(const SynthConfig& c) {
    if (c.rows_min < 1 || c.rows_min > c.rows_max || c.symptoms_min > c.symptoms_max ||
        c.signs_min > c.signs_max)
        throw PreconditionError("inconsistent synthetic corpus size ranges");
    if (c.rows_max > diagnosis_vocab().size())
        throw PreconditionError("too many rows per table for the diagnosis vocabulary");

    Rng rng(derive_seed(c.seed, "synth"));
    Corpus corpus;
    corpus.source_label = "synthetic(seed=" + std::to_string(c.seed) + ")";
    for (std::size_t t = 0; t < c.n_tables; ++t) {
        char id[32];
        std::snprintf(id, sizeof id, "tbl-%04zu", t + 1);
        DiagnosisTable table{id, {}};
        const std::size_t n_rows = between(c.rows_min, c.rows_max, rng);
        auto symptom_pool = pick(symptom_vocab(), n_rows * 2 + c.symptoms_max, rng);
        auto sign_pool = pick(sign_vocab(), n_rows + c.signs_max, rng);
        auto diagnoses = pick(diagnosis_vocab(), n_rows, rng);
        for (std::size_t r = 0; r < n_rows; ++r) {
            DiagnosisRow row;
            row.diagnosis = diagnoses[r];
            row.symptoms = pick(symptom_pool, between(c.symptoms_min, c.symptoms_max, rng), rng);
            row.signs = pick(sign_pool, between(c.signs_min, c.signs_max, rng), rng);
            table.rows.push_back(std::move(row));
        }
        corpus.tables.push_back(std::move(table));
    }
    return corpus;
}

}  // namespace biotab
