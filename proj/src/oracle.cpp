#include "biotab/oracle.hpp"

#include <algorithm>
#include <optional>
#include <unordered_set>

#include "biotab/error.hpp"
#include "biotab/text.hpp"

namespace biotab {

namespace {

// A template question pattern split into literal text with slot holes between.
// literals.size() == holes.size() + 1.
struct Skeleton {
    int task_id = 0;
    std::vector<std::string> literals;
    std::vector<SlotSpec> holes;
    std::size_t literal_length = 0;
};

Skeleton compile(const TemplateSpec& spec) {
    Skeleton sk;
    sk.task_id = spec.task_id;
    std::string_view p = spec.question_pattern;
    std::size_t pos = 0;
    while (true) {
        auto open = p.find('{', pos);
        if (open == std::string_view::npos) break;
        auto close = p.find('}', open);
        sk.literals.emplace_back(p.substr(pos, open - pos));
        std::string ph(p.substr(open, close - open + 1));
        auto it = std::find_if(spec.slots.begin(), spec.slots.end(),
                               [&](const SlotSpec& s) { return s.placeholder() == ph; });
        sk.holes.push_back(*it);
        pos = close + 1;
    }
    sk.literals.emplace_back(p.substr(pos));
    for (const auto& l : sk.literals) sk.literal_length += l.size();
    return sk;
}

const std::vector<Skeleton>& skeletons() {
    static const std::vector<Skeleton> compiled = [] {
        std::vector<Skeleton> out;
        for (const auto& t : template_catalog()) out.push_back(compile(t));
        std::stable_sort(out.begin(), out.end(), [](const Skeleton& a, const Skeleton& b) {
            return a.literal_length > b.literal_length;
        });
        return out;
    }();
    return compiled;
}

bool literal_at(std::string_view s, std::size_t pos, std::string_view lit) {
    return pos + lit.size() <= s.size() && text::iequals(s.substr(pos, lit.size()), lit);
}

// Backtracking match: hole i starts at `pos`; captures are extended one
// character at a time so the first success is the leftmost-shortest one.
bool match_from(const Skeleton& sk, std::string_view s, std::size_t hole, std::size_t pos,
                std::vector<std::string>& captures) {
    if (hole == sk.holes.size()) return pos == s.size();
    const std::string& next = sk.literals[hole + 1];
    const bool last = hole + 1 == sk.holes.size();
    for (std::size_t end = pos + 1; end <= s.size(); ++end) {
        if (last && end + next.size() != s.size()) continue;
        if (!literal_at(s, end, next)) continue;
        std::string value = text::trim(s.substr(pos, end - pos));
        if (value.empty()) continue;
        captures[hole] = std::move(value);
        if (match_from(sk, s, hole + 1, end + next.size(), captures)) return true;
    }
    return false;
}

std::optional<std::vector<std::string>> match(const Skeleton& sk, std::string_view s) {
    if (!literal_at(s, 0, sk.literals.front())) return std::nullopt;
    std::vector<std::string> captures(sk.holes.size());
    if (!match_from(sk, s, 0, sk.literals.front().size(), captures)) return std::nullopt;
    return captures;
}

std::vector<ResolvedSlot> sorted_by_label(std::vector<ResolvedSlot> slots) {
    std::stable_sort(slots.begin(), slots.end(),
                     [](const ResolvedSlot& a, const ResolvedSlot& b) { return a.label < b.label; });
    return slots;
}

}  // namespace

StructuredQuery query_from_slots(int task_id, const std::vector<ResolvedSlot>& slots) {
    StructuredQuery q;
    q.task_id = task_id;
    for (const auto& s : sorted_by_label(slots)) {
        if (s.negated) q.negated_symptoms.push_back(s.value);
        else if (s.kind == SlotKind::Symptom) q.positive_symptoms.push_back(s.value);
        else q.positive_signs.push_back(s.value);
    }
    return q;
}

StructuredQuery parse_question(std::string_view question) {
    const std::string q = text::trim(question);
    for (const auto& sk : skeletons()) {
        auto captures = match(sk, q);
        if (!captures) continue;
        std::vector<ResolvedSlot> slots;
        for (std::size_t i = 0; i < sk.holes.size(); ++i)
            slots.push_back({sk.holes[i].label, sk.holes[i].kind, sk.holes[i].negated,
                             std::move((*captures)[i])});
        return query_from_slots(sk.task_id, slots);
    }
    throw NoTemplateMatch(std::string(question));
}

OracleResult execute_query(const StructuredQuery& query, const DiagnosisTable& table) {
    auto normalized = [](const std::vector<std::string>& v) {
        std::vector<std::string> out;
        out.reserve(v.size());
        for (const auto& s : v) out.push_back(text::normalize_phrase(s));
        return out;
    };
    const auto pos_sym = normalized(query.positive_symptoms);
    const auto pos_sign = normalized(query.positive_signs);
    const auto neg_sym = normalized(query.negated_symptoms);

    OracleResult result;
    for (const auto& row : table.rows) {
        std::unordered_set<std::string> symptoms, signs;
        for (const auto& s : row.symptoms) symptoms.insert(text::normalize_phrase(s));
        for (const auto& s : row.signs) signs.insert(text::normalize_phrase(s));
        auto all_in = [](const std::vector<std::string>& needles,
                         const std::unordered_set<std::string>& hay) {
            return std::all_of(needles.begin(), needles.end(),
                               [&](const std::string& n) { return hay.count(n) > 0; });
        };
        bool excluded = std::any_of(neg_sym.begin(), neg_sym.end(),
                                    [&](const std::string& n) { return symptoms.count(n) > 0; });
        if (all_in(pos_sym, symptoms) && all_in(pos_sign, signs) && !excluded)
            result.candidates.push_back(row.diagnosis);
    }
    result.unique = result.candidates.size() == 1;
    return result;
}

OracleResult oracle_answer(std::string_view question, const DiagnosisTable& table) {
    return execute_query(parse_question(question), table);
}

}  // namespace biotab
