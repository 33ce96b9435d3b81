#include "biotab/templates.hpp"

#include <algorithm>
#include <set>

#include "biotab/error.hpp"
#include "biotab/text.hpp"

namespace biotab {

const char* to_string(SlotKind kind) { return kind == SlotKind::Symptom ? "symptom" : "sign"; }

SlotKind slot_kind_from_string(std::string_view s) {
    if (s == "symptom") return SlotKind::Symptom;
    if (s == "sign") return SlotKind::Sign;
    throw DataError("unknown slot kind: " + std::string(s));
}

std::string SlotSpec::notation() const { return std::string(to_string(kind)) + " " + label; }

std::string SlotSpec::placeholder() const { return "{" + notation() + "}"; }

namespace {

SlotSpec sym(char l) { return {l, SlotKind::Symptom, false}; }
SlotSpec sgn(char l) { return {l, SlotKind::Sign, false}; }
SlotSpec neg(char l) { return {l, SlotKind::Symptom, true}; }

const std::string kP1 = "If {symptom A} is in symptom list, report corresponding disease.";
const std::string kPSymSign =
    "If {symptom A} is in symptom list, and {sign A} is in sign list, report corresponding disease.";
const std::string kP2 = "If {symptom A} and {symptom B} are in symptom list, report corresponding disease.";
const std::string kP3 =
    "If {symptom A}, {symptom B} and {symptom C} are in symptom list, report corresponding disease.";

std::vector<TemplateSpec> build_catalog() {
    // Question wording is kept verbatim, including the source's irregular
    // spacing in tasks 6 and 11 and the misspelling in task 7.
    return {
        {1, "I have {symptom A}, what disease do I have?", kP1, {sym('A')}},
        {2, "I have {symptom A} and {sign A}, what is my diagnosis?", kPSymSign, {sym('A'), sgn('A')}},
        {3, "I have {symptom A} and {symptom B}, what is wrong with me?", kP2, {sym('A'), sym('B')}},
        {4, "I have {sign A} and {sign B}, what disease do you think I have?",
         "If {sign A} is in sign list, and {sign B} is in sign list, report corresponding disease.",
         {sgn('A'), sgn('B')}},
        {5, "I have {symptom A} and {symptom B} but not {symptom C}, what is my potential diagnosis?",
         "If {symptom A} and {symptom B} are in symptom list, but {symptom C} is not in symptom list, "
         "report corresponding disease.",
         {sym('A'), sym('B'), neg('C')}},
        {6, "A patient is showing {symptom A} , {symptom B} and {symptom C}, what could be causing this?",
         kP3, {sym('A'), sym('B'), sym('C')}},
        {7, "A patient is exhibitng {symptom A} and {sign A}, diagnose her", kPSymSign,
         {sym('A'), sgn('A')}},
        {8, "What disease can cause {symptom A} and {symptom B}?", kP2, {sym('A'), sym('B')}},
        {9, "What disease causes {symptom A}, {symptom B} and {sign A}?",
         "If {symptom A} and {symptom B} are in symptom list, and {sign A} is in sign list, report "
         "corresponding disease.",
         {sym('A'), sym('B'), sgn('A')}},
        {10, "If my friend has {symptom A} and {symptom B}, then what is his potential diagnosis?", kP2,
         {sym('A'), sym('B')}},
        {11, "The patient has {symptom A},{symptom B} and {symptom C}, what disease can cause these symptoms?",
         kP3, {sym('A'), sym('B'), sym('C')}},
        {12, "Which disease is associated with {symptom A} and {symptom B}?", kP2, {sym('A'), sym('B')}},
        {13, "A patient is complaining about {symptom A}, {symptom B} and {symptom C}, diagnose him.", kP3,
         {sym('A'), sym('B'), sym('C')}},
        {14, "What disease is responsible for {symptom A}, {symptom B} and {symptom C}?", kP3,
         {sym('A'), sym('B'), sym('C')}},
        {15, "I am experiencing {symptom A}, what is wrong with me?", kP1, {sym('A')}},
        {16, "Why am I experiencing {symptom A} and {symptom B}?", kP2, {sym('A'), sym('B')}},
        {17, "I have {symptom A}, {symptom B} and {symptom C}, why is this happening?", kP3,
         {sym('A'), sym('B'), sym('C')}},
        // The source lists a three-symptom prompt here; the question has two
        // symptoms, so the prompt follows the question.
        {18, "A patient is showing {symptom A} and {symptom B}, what illness is associated with these symptoms?",
         kP2, {sym('A'), sym('B')}},
        {19, "I have {symptom A}, and {symptom B}, what disease may I have?", kP2, {sym('A'), sym('B')}},
        {20, "I have {symptom A} and {symptom B}, what possible disease could I have?", kP2,
         {sym('A'), sym('B')}},
        {21, "What is causing my {symptom A}?", kP1, {sym('A')}},
        {22, "I have {symptom A}, {symptom B}, {symptom C} but no {symptom D}, what is causing this?",
         "If {symptom A}, {symptom B} and {symptom C} are in symptom list, but {symptom D} is not in "
         "symptom list, report corresponding disease.",
         {sym('A'), sym('B'), sym('C'), neg('D')}},
    };
}

}  // namespace

const std::vector<TemplateSpec>& template_catalog() {
    static const std::vector<TemplateSpec> catalog = build_catalog();
    return catalog;
}

const TemplateSpec& template_for(int task_id) {
    if (task_id < 1 || task_id > kNumTasks)
        throw PreconditionError("task id out of range 1..22: " + std::to_string(task_id));
    return template_catalog()[static_cast<std::size_t>(task_id - 1)];
}

SlotSummary slot_summary(const TemplateSpec& spec) {
    SlotSummary s;
    for (const auto& slot : spec.slots) {
        if (slot.kind == SlotKind::Symptom) ++s.n_symptoms;
        else ++s.n_signs;
        if (slot.negated) ++s.n_negated;
    }
    s.total_mentions = s.n_symptoms + s.n_signs;
    return s;
}

std::vector<std::string> placeholders_in(std::string_view pattern) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while ((pos = pattern.find('{', pos)) != std::string_view::npos) {
        auto end = pattern.find('}', pos);
        if (end == std::string_view::npos) break;
        std::string ph(pattern.substr(pos, end - pos + 1));
        if (std::find(out.begin(), out.end(), ph) == out.end()) out.push_back(ph);
        pos = end + 1;
    }
    return out;
}

std::string render_pattern(std::string_view pattern,
                           const std::map<std::string, std::string>& values) {
    std::string out;
    std::size_t pos = 0;
    while (pos < pattern.size()) {
        auto open = pattern.find('{', pos);
        if (open == std::string_view::npos) break;
        auto close = pattern.find('}', open);
        if (close == std::string_view::npos) break;
        out.append(pattern.substr(pos, open - pos));
        std::string ph(pattern.substr(open, close - open + 1));
        auto it = values.find(ph);
        out.append(it != values.end() ? it->second : ph);
        pos = close + 1;
    }
    out.append(pattern.substr(pos));
    return out;
}

std::string render_notation(std::string_view pattern) {
    std::map<std::string, std::string> values;
    for (const auto& ph : placeholders_in(pattern)) values[ph] = ph.substr(1, ph.size() - 2);
    return render_pattern(pattern, values);
}

std::vector<std::string> check_template(const TemplateSpec& spec) {
    std::vector<std::string> problems;
    if (spec.slots.empty()) problems.push_back("template has no slots");
    std::set<std::string> slot_phs;
    std::set<char> labels_by_kind[2];
    for (const auto& s : spec.slots) {
        if (s.label < 'A' || s.label > 'D') problems.push_back("slot label outside A..D");
        if (!labels_by_kind[s.kind == SlotKind::Sign].insert(s.label).second)
            problems.push_back("duplicate slot " + s.notation());
        if (s.negated && s.kind != SlotKind::Symptom)
            problems.push_back("negated slot must be a symptom: " + s.notation());
        slot_phs.insert(s.placeholder());
    }
    auto q = placeholders_in(spec.question_pattern);
    std::set<std::string> q_set(q.begin(), q.end());
    if (q_set != slot_phs) problems.push_back("question placeholders do not match slots");
    for (const auto& ph : placeholders_in(spec.prompt_pattern))
        if (!q_set.count(ph)) problems.push_back("prompt placeholder " + ph + " absent from question");
    return problems;
}

nlohmann::ordered_json to_json(const TemplateSpec& spec) {
    nlohmann::ordered_json slots = nlohmann::ordered_json::array();
    for (const auto& s : spec.slots) {
        nlohmann::ordered_json js;
        js["label"] = std::string(1, s.label);
        js["kind"] = to_string(s.kind);
        js["negated"] = s.negated;
        slots.push_back(std::move(js));
    }
    nlohmann::ordered_json j;
    j["task_id"] = spec.task_id;
    j["question_pattern"] = spec.question_pattern;
    j["prompt_pattern"] = spec.prompt_pattern;
    j["slots"] = std::move(slots);
    return j;
}

TemplateSpec template_from_json(const nlohmann::json& j) {
    TemplateSpec spec;
    spec.task_id = j.at("task_id").get<int>();
    spec.question_pattern = j.at("question_pattern").get<std::string>();
    spec.prompt_pattern = j.at("prompt_pattern").get<std::string>();
    for (const auto& js : j.at("slots")) {
        auto label = js.at("label").get<std::string>();
        if (label.size() != 1) throw DataError("slot label must be a single letter");
        spec.slots.push_back({label[0], slot_kind_from_string(js.at("kind").get<std::string>()),
                              js.value("negated", false)});
    }
    return spec;
}

std::vector<int> parse_task_set(std::string_view spec) {
    std::set<int> ids;
    auto parse_int = [&](const std::string& s) {
        std::string t = text::trim(s);
        if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
            throw PreconditionError("bad task set: " + std::string(spec));
        int v = std::stoi(t);
        if (v < 1 || v > kNumTasks)
            throw PreconditionError("task id out of range 1..22: " + t);
        return v;
    };
    for (const auto& part : text::split(spec, ',')) {
        auto dash = part.find('-');
        if (dash == std::string::npos) {
            ids.insert(parse_int(part));
        } else {
            int lo = parse_int(part.substr(0, dash));
            int hi = parse_int(part.substr(dash + 1));
            if (lo > hi) throw PreconditionError("bad task range: " + part);
            for (int i = lo; i <= hi; ++i) ids.insert(i);
        }
    }
    return {ids.begin(), ids.end()};
}

}  // namespace biotab
