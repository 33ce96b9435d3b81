#include <doctest.h>

#include <map>
#include <set>

#include "biotab/error.hpp"
#include "biotab/templates.hpp"

using namespace biotab;

TEST_CASE("catalog has 22 templates numbered 1..22") {
    const auto& cat = template_catalog();
    REQUIRE(cat.size() == 22);
    for (int i = 0; i < 22; ++i) CHECK(cat[static_cast<std::size_t>(i)].task_id == i + 1);
}

TEST_CASE("catalog text") {
    CHECK(template_for(1).question_pattern == "I have {symptom A}, what disease do I have?");
    CHECK(template_for(22).prompt_pattern ==
          "If {symptom A}, {symptom B} and {symptom C} are in symptom list, but {symptom D} is not "
          "in symptom list, report corresponding disease.");
    CHECK(template_for(1).prompt_pattern ==
          "If {symptom A} is in symptom list, report corresponding disease.");
    // Task 18's question names two symptoms, and so does its prompt.
    CHECK(template_for(18).prompt_pattern ==
          "If {symptom A} and {symptom B} are in symptom list, report corresponding disease.");
    CHECK_THROWS_AS(template_for(0), PreconditionError);
    CHECK_THROWS_AS(template_for(23), PreconditionError);
}

TEST_CASE("every catalog template is internally consistent") {
    for (const auto& t : template_catalog()) {
        CAPTURE(t.task_id);
        CHECK(check_template(t).empty());
        for (const auto& s : t.slots)
            if (s.negated) CHECK(s.kind == SlotKind::Symptom);
    }
}

TEST_CASE("slot_summary") {
    CHECK(slot_summary(template_for(22)) == SlotSummary{4, 0, 1, 4});
    CHECK(slot_summary(template_for(9)) == SlotSummary{2, 1, 0, 3});
    CHECK(slot_summary(template_for(1)) == SlotSummary{1, 0, 0, 1});
    CHECK(slot_summary(template_for(5)) == SlotSummary{3, 0, 1, 3});
    CHECK(slot_summary(template_for(4)) == SlotSummary{0, 2, 0, 2});
}

TEST_CASE("slot-count histogram and negation set") {
    std::map<int, std::set<int>> by_k;
    std::set<int> negated;
    for (const auto& t : template_catalog()) {
        auto s = slot_summary(t);
        CHECK(s.total_mentions == s.n_symptoms + s.n_signs);
        by_k[s.total_mentions].insert(t.task_id);
        if (s.n_negated > 0) negated.insert(t.task_id);
    }
    CHECK(by_k[1] == std::set<int>{1, 15, 21});
    CHECK(by_k[2] == std::set<int>{2, 3, 4, 7, 8, 10, 12, 16, 18, 19, 20});
    CHECK(by_k[3] == std::set<int>{5, 6, 9, 11, 13, 14, 17});
    CHECK(by_k[4] == std::set<int>{22});
    CHECK(negated == std::set<int>{5, 22});
}

TEST_CASE("rendered questions carry no braces and placeholder counts match the summary") {
    for (const auto& t : template_catalog()) {
        std::map<std::string, std::string> values;
        int i = 0;
        for (const auto& s : t.slots) values[s.placeholder()] = "VALUE" + std::to_string(i++);
        auto q = render_pattern(t.question_pattern, values);
        CHECK(q.find('{') == std::string::npos);
        CHECK(q.find('}') == std::string::npos);
        int found = 0;
        for (int j = 0; j < i; ++j)
            if (q.find("VALUE" + std::to_string(j)) != std::string::npos) ++found;
        CHECK(found == slot_summary(t).total_mentions);
    }
}

TEST_CASE("render_notation drops braces") {
    CHECK(render_notation(template_for(2).prompt_pattern) ==
          "If symptom A is in symptom list, and sign A is in sign list, report corresponding disease.");
}

TEST_CASE("check_template flags malformed user templates") {
    TemplateSpec bad{30, "I have {symptom A} and {symptom B}?", "If {symptom C} holds.",
                     {{'A', SlotKind::Symptom, false}, {'A', SlotKind::Sign, true}}};
    auto problems = check_template(bad);
    CHECK(problems.size() >= 3);
}

TEST_CASE("template records round-trip") {
    for (const auto& t : template_catalog()) {
        auto back = template_from_json(nlohmann::json::parse(to_json(t).dump()));
        CHECK(back.task_id == t.task_id);
        CHECK(back.question_pattern == t.question_pattern);
        CHECK(back.prompt_pattern == t.prompt_pattern);
        CHECK(back.slots == t.slots);
    }
}

TEST_CASE("parse_task_set") {
    CHECK(parse_task_set("1-22").size() == 22);
    CHECK(parse_task_set("1,4,7,15,21") == std::vector<int>{1, 4, 7, 15, 21});
    CHECK(parse_task_set("3-5,1") == std::vector<int>{1, 3, 4, 5});
    CHECK_THROWS_AS(parse_task_set("0-3"), PreconditionError);
    CHECK_THROWS_AS(parse_task_set("5-2"), PreconditionError);
    CHECK_THROWS_AS(parse_task_set("x"), PreconditionError);
}
