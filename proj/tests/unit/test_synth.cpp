#include <doctest.h>

#include <set>

#include "biotab/synth.hpp"
#include "biotab/text.hpp"

using namespace biotab;

TEST_CASE("synthetic corpus is valid and deterministic") {
    SynthConfig cfg;
    cfg.n_tables = 30;
    cfg.seed = 11;
    auto a = synthesize_corpus(cfg);
    auto b = synthesize_corpus(cfg);
    REQUIRE(a.tables.size() == 30);
    CHECK(a.tables == b.tables);
    cfg.seed = 12;
    CHECK(synthesize_corpus(cfg).tables != a.tables);

    std::set<std::string> ids;
    for (const auto& t : a.tables) {
        ids.insert(t.table_id);
        CHECK_FALSE(has_errors(validate_table(t)));
        CHECK(t.rows.size() >= 3);
        CHECK(t.rows.size() <= 6);
        for (const auto& row : t.rows) {
            CHECK(row.symptoms.size() >= 2);
            CHECK(row.symptoms.size() <= 6);
            CHECK(row.signs.size() >= 1);
            CHECK(row.signs.size() <= 4);
        }
    }
    CHECK(ids.size() == 30);
}

TEST_CASE("synthetic phrases are free of question delimiters") {
    SynthConfig cfg;
    cfg.n_tables = 50;
    auto corpus = synthesize_corpus(cfg);
    const std::set<std::string> banned = {"and", "but", "no", "not"};
    auto clean = [&](const std::string& phrase) {
        if (phrase.find(',') != std::string::npos) return false;
        for (const auto& w : text::split_whitespace(phrase))
            if (banned.count(text::to_lower(w))) return false;
        return true;
    };
    for (const auto& t : corpus.tables)
        for (const auto& row : t.rows) {
            for (const auto& s : row.symptoms) CHECK(clean(s));
            for (const auto& s : row.signs) CHECK(clean(s));
        }
}

TEST_CASE("rows within a table share phrases") {
    SynthConfig cfg;
    cfg.n_tables = 20;
    auto corpus = synthesize_corpus(cfg);
    std::size_t overlapping = 0;
    for (const auto& t : corpus.tables) {
        std::set<std::string> seen;
        bool overlap = false;
        for (const auto& row : t.rows)
            for (const auto& s : row.symptoms) overlap |= !seen.insert(s).second;
        overlapping += overlap;
    }
    CHECK(overlapping > 0);
}
