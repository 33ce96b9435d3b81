#include "support.hpp"

#include <fstream>
#include <random>
#include <sstream>

namespace biotab::testing {

DiagnosisTable headache_table(const std::string& id) {
    return {id,
            {{"Migraine", {"unilateral headache", "nausea", "photophobia"}, {"normal examination"}},
             {"Tension headache", {"bilateral headache", "nausea"}, {"pericranial tenderness"}}}};
}

Corpus corpus_of(std::initializer_list<DiagnosisTable> tables) {
    Corpus c;
    c.tables.assign(tables.begin(), tables.end());
    c.source_label = "test";
    return c;
}

TempDir::TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("biotab-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    out << text;
}

}  // namespace biotab::testing
