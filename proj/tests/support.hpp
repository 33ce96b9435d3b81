#pragma once

#include <filesystem>
#include <string>

#include "biotab/table.hpp"

namespace biotab::testing {

/// Migraine: [unilateral headache, nausea, photophobia]; Tension headache:
/// [bilateral headache, nausea].
DiagnosisTable headache_table(const std::string& id = "t1");

Corpus corpus_of(std::initializer_list<DiagnosisTable> tables);

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

std::string read_file(const std::filesystem::path& path);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace biotab::testing
