#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "biotab/table.hpp"
#include "biotab/templates.hpp"

namespace biotab {

struct ResolvedSlot {
    char label = 'A';
    SlotKind kind = SlotKind::Symptom;
    bool negated = false;
    std::string value;

    bool operator==(const ResolvedSlot&) const = default;
};

/// Parsed question semantics. Lists are in slot-label order.
struct StructuredQuery {
    int task_id = 0;
    std::vector<std::string> positive_symptoms;
    std::vector<std::string> positive_signs;
    std::vector<std::string> negated_symptoms;

    bool operator==(const StructuredQuery&) const = default;
};

struct OracleResult {
    std::vector<std::string> candidates;  // table row order
    bool unique = false;
};

/// Matches the question against every catalog template skeleton, longest
/// literal text first. Throws NoTemplateMatch.
StructuredQuery parse_question(std::string_view question);

/// Builds the query directly from generator slot metadata.
StructuredQuery query_from_slots(int task_id, const std::vector<ResolvedSlot>& slots);

OracleResult execute_query(const StructuredQuery& query, const DiagnosisTable& table);

OracleResult oracle_answer(std::string_view question, const DiagnosisTable& table);

}  // namespace biotab
