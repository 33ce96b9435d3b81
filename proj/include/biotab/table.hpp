#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace biotab {

struct DiagnosisRow {
    std::string diagnosis;
    std::vector<std::string> symptoms;
    std::vector<std::string> signs;

    bool operator==(const DiagnosisRow&) const = default;
};

struct DiagnosisTable {
    std::string table_id;
    std::vector<DiagnosisRow> rows;

    bool operator==(const DiagnosisTable&) const = default;
};

struct Corpus {
    std::vector<DiagnosisTable> tables;
    std::string source_label;

    const DiagnosisTable* find(const std::string& table_id) const;
};

enum class ViolationKind {
    EmptyTableId,
    EmptyTable,
    EmptyDiagnosis,
    EmptyPhrase,
    UntrimmedPhrase,
    DuplicatePhrase,
    DuplicateDiagnosis,
};

enum class Severity { Error, Warning };

struct Violation {
    ViolationKind kind;
    Severity severity = Severity::Error;
    int row = -1;  // 0-based, -1 when table-level
    std::string detail;
};

struct ValidationPolicy {
    bool duplicate_diagnosis_is_error = true;
};

const char* to_string(ViolationKind kind);

std::vector<Violation> validate_table(const DiagnosisTable& table,
                                      const ValidationPolicy& policy = {});

bool has_errors(const std::vector<Violation>& violations);

enum class CorpusFormat { Auto, JsonLines, Csv };

/// Reads a corpus file. Auto picks CSV for a ".csv" extension, line-delimited
/// JSON otherwise. Every returned table validates with zero errors.
Corpus load_corpus(const std::filesystem::path& path,
                   CorpusFormat format = CorpusFormat::Auto,
                   const ValidationPolicy& policy = {});

/// Reads tables without rejecting invariant violations; syntax errors and
/// duplicate table ids still throw. Used to report every violation at once.
Corpus load_corpus_unchecked(const std::filesystem::path& path,
                             CorpusFormat format = CorpusFormat::Auto);

Corpus parse_corpus_jsonl(std::istream& in, const ValidationPolicy* policy);
Corpus parse_corpus_csv(std::istream& in, const ValidationPolicy* policy);

void write_corpus_jsonl(std::ostream& out, const Corpus& corpus);
void write_corpus_csv(std::ostream& out, const Corpus& corpus);
void save_corpus(const std::filesystem::path& path, const Corpus& corpus,
                 CorpusFormat format = CorpusFormat::Auto);

nlohmann::ordered_json to_json(const DiagnosisTable& table);
DiagnosisTable table_from_json(const nlohmann::json& j);

/// "Row 1 is: Diagnosis is d, Key symptoms are s1, s2, Key signs are g1; Row 2 is: ..."
std::string linearize_table(const DiagnosisTable& table);

}  // namespace biotab
