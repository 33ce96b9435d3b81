#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace biotab {

inline constexpr int kNumTasks = 22;

enum class SlotKind { Symptom, Sign };

const char* to_string(SlotKind kind);
SlotKind slot_kind_from_string(std::string_view s);

struct SlotSpec {
    char label = 'A';  // 'A'..'D'
    SlotKind kind = SlotKind::Symptom;
    bool negated = false;

    /// Placeholder text as it appears in patterns, e.g. "{symptom A}".
    std::string placeholder() const;
    /// Catalog notation without braces, e.g. "symptom A".
    std::string notation() const;

    bool operator==(const SlotSpec&) const = default;
};

struct TemplateSpec {
    int task_id = 0;
    std::string question_pattern;
    std::string prompt_pattern;
    std::vector<SlotSpec> slots;
};

struct SlotSummary {
    int n_symptoms = 0;  // includes negated slots
    int n_signs = 0;
    int n_negated = 0;
    int total_mentions = 0;

    bool operator==(const SlotSummary&) const = default;
};

/// The 22 fixed question templates with their instruction prompts, ordered by task id.
const std::vector<TemplateSpec>& template_catalog();

/// Throws PreconditionError for ids outside 1..22.
const TemplateSpec& template_for(int task_id);

SlotSummary slot_summary(const TemplateSpec& spec);

/// Placeholders in order of first appearance.
std::vector<std::string> placeholders_in(std::string_view pattern);

/// Substitutes each "{kind L}" placeholder with the mapped value. Unmapped
/// placeholders are left as is.
std::string render_pattern(std::string_view pattern,
                           const std::map<std::string, std::string>& values_by_placeholder);

/// Renders with catalog notation ("symptom A") in place of each placeholder.
std::string render_notation(std::string_view pattern);

/// Returns the list of problems with a (possibly user-supplied) template; empty when valid.
std::vector<std::string> check_template(const TemplateSpec& spec);

nlohmann::ordered_json to_json(const TemplateSpec& spec);
TemplateSpec template_from_json(const nlohmann::json& j);

/// Parses "1-22", "1,4,7", "1-3,9" into a sorted set of ids in 1..22.
std::vector<int> parse_task_set(std::string_view spec);

}  // namespace biotab
