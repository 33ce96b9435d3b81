#include "biotab/table.hpp"

#include <fstream>
#include <sstream>
#include <unordered_set>

#include "biotab/error.hpp"
#include "biotab/text.hpp"

namespace biotab {

using nlohmann::json;
using nlohmann::ordered_json;

const DiagnosisTable* Corpus::find(const std::string& table_id) const {
    for (const auto& t : tables)
        if (t.table_id == table_id) return &t;
    return nullptr;
}

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::EmptyTableId: return "EmptyTableId";
        case ViolationKind::EmptyTable: return "EmptyTable";
        case ViolationKind::EmptyDiagnosis: return "EmptyDiagnosis";
        case ViolationKind::EmptyPhrase: return "EmptyPhrase";
        case ViolationKind::UntrimmedPhrase: return "UntrimmedPhrase";
        case ViolationKind::DuplicatePhrase: return "DuplicatePhrase";
        case ViolationKind::DuplicateDiagnosis: return "DuplicateDiagnosis";
    }
    return "Unknown";
}

namespace {

void check_phrases(const std::vector<std::string>& phrases, const char* column, int row,
                   std::vector<Violation>& out) {
    std::unordered_set<std::string> seen;
    for (const auto& p : phrases) {
        std::string trimmed = text::trim(p);
        if (trimmed.empty()) {
            out.push_back({ViolationKind::EmptyPhrase, Severity::Error, row,
                           std::string("empty phrase in ") + column});
            continue;
        }
        if (trimmed != p)
            out.push_back({ViolationKind::UntrimmedPhrase, Severity::Error, row,
                           std::string(column) + " phrase \"" + p +
                               "\" has leading/trailing whitespace"});
        if (!seen.insert(text::normalize_phrase(p)).second)
            out.push_back({ViolationKind::DuplicatePhrase, Severity::Error, row,
                           std::string("duplicate ") + column + " phrase \"" + p + "\""});
    }
}

}  // namespace

std::vector<Violation> validate_table(const DiagnosisTable& table, const ValidationPolicy& policy) {
    std::vector<Violation> out;
    if (text::trim(table.table_id).empty())
        out.push_back({ViolationKind::EmptyTableId, Severity::Error, -1, "table_id is empty"});
    if (table.rows.empty())
        out.push_back({ViolationKind::EmptyTable, Severity::Error, -1, "table has no rows"});

    std::unordered_set<std::string> diagnoses;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        const int r = static_cast<int>(i);
        if (text::trim(row.diagnosis).empty()) {
            out.push_back({ViolationKind::EmptyDiagnosis, Severity::Error, r, "diagnosis is empty"});
        } else {
            if (text::trim(row.diagnosis) != row.diagnosis)
                out.push_back({ViolationKind::UntrimmedPhrase, Severity::Error, r,
                               "diagnosis has leading/trailing whitespace"});
            if (!diagnoses.insert(text::normalize_phrase(row.diagnosis)).second)
                out.push_back({ViolationKind::DuplicateDiagnosis,
                               policy.duplicate_diagnosis_is_error ? Severity::Error
                                                                   : Severity::Warning,
                               r, "duplicate diagnosis \"" + row.diagnosis + "\""});
        }
        check_phrases(row.symptoms, "symptom", r, out);
        check_phrases(row.signs, "sign", r, out);
    }
    return out;
}

bool has_errors(const std::vector<Violation>& violations) {
    for (const auto& v : violations)
        if (v.severity == Severity::Error) return true;
    return false;
}

ordered_json to_json(const DiagnosisTable& table) {
    ordered_json rows = ordered_json::array();
    for (const auto& r : table.rows) {
        ordered_json jr;
        jr["diagnosis"] = r.diagnosis;
        jr["symptoms"] = r.symptoms;
        jr["signs"] = r.signs;
        rows.push_back(std::move(jr));
    }
    ordered_json j;
    j["table_id"] = table.table_id;
    j["rows"] = std::move(rows);
    return j;
}

namespace {

std::vector<std::string> string_list(const json& j, const char* field) {
    if (!j.contains(field)) return {};
    const auto& v = j.at(field);
    if (!v.is_array()) throw std::runtime_error(std::string(field) + " must be an array");
    std::vector<std::string> out;
    for (const auto& e : v) {
        if (!e.is_string())
            throw std::runtime_error(std::string(field) + " entries must be strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::string string_field(const json& j, const char* field) {
    if (!j.contains(field) || !j.at(field).is_string())
        throw std::runtime_error(std::string("missing or non-string field ") + field);
    return j.at(field).get<std::string>();
}

std::string describe(const Violation& v) {
    std::string s = to_string(v.kind);
    if (v.row >= 0) s += " (row " + std::to_string(v.row + 1) + ")";
    return s + ": " + v.detail;
}

void check_table(const DiagnosisTable& table, std::size_t line, const ValidationPolicy* policy) {
    if (!policy) return;
    for (const auto& v : validate_table(table, *policy))
        if (v.severity == Severity::Error) throw MalformedRecord(line, describe(v));
}

}  // namespace

DiagnosisTable table_from_json(const json& j) {
    if (!j.is_object()) throw std::runtime_error("record is not an object");
    DiagnosisTable t;
    t.table_id = string_field(j, "table_id");
    if (!j.contains("rows") || !j.at("rows").is_array())
        throw std::runtime_error("missing or non-array field rows");
    for (const auto& jr : j.at("rows")) {
        if (!jr.is_object()) throw std::runtime_error("row is not an object");
        DiagnosisRow r;
        r.diagnosis = string_field(jr, "diagnosis");
        r.symptoms = string_list(jr, "symptoms");
        r.signs = string_list(jr, "signs");
        t.rows.push_back(std::move(r));
    }
    return t;
}

Corpus parse_corpus_jsonl(std::istream& in, const ValidationPolicy* policy) {
    Corpus corpus;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        DiagnosisTable t;
        try {
            t = table_from_json(json::parse(line));
        } catch (const std::exception& e) {
            throw MalformedRecord(lineno, e.what());
        }
        check_table(t, lineno, policy);
        if (!ids.insert(t.table_id).second) throw DuplicateTableId(t.table_id);
        corpus.tables.push_back(std::move(t));
    }
    return corpus;
}

namespace {

// One CSV record per physical line; quoted fields may contain commas and "".
std::vector<std::string> split_csv_line(const std::string& line, std::size_t lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    if (quoted) throw MalformedRecord(lineno, "unterminated quoted field");
    fields.push_back(std::move(cur));
    return fields;
}

std::vector<std::string> split_cell_list(const std::string& cell) {
    std::vector<std::string> out;
    if (text::trim(cell).empty()) return out;
    for (auto& item : text::split(cell, '|')) out.push_back(text::trim(item));
    return out;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    return out + "\"";
}

}  // namespace

Corpus parse_corpus_csv(std::istream& in, const ValidationPolicy* policy) {
    Corpus corpus;
    std::string line;
    std::size_t lineno = 0;
    int col_id = -1, col_diag = -1, col_sym = -1, col_sign = -1;
    std::size_t n_cols = 0;
    bool have_header = false;

    std::unordered_set<std::string> ids;
    std::size_t table_line = 0;
    auto finish = [&] {
        if (corpus.tables.empty()) return;
        check_table(corpus.tables.back(), table_line, policy);
    };

    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        auto fields = split_csv_line(line, lineno);
        if (!have_header) {
            for (std::size_t i = 0; i < fields.size(); ++i) {
                const std::string name = text::trim(fields[i]);
                const int idx = static_cast<int>(i);
                if (name == "table_id") col_id = idx;
                else if (name == "diagnosis") col_diag = idx;
                else if (name == "symptoms") col_sym = idx;
                else if (name == "signs") col_sign = idx;
            }
            if (col_id < 0 || col_diag < 0 || col_sym < 0 || col_sign < 0)
                throw MalformedRecord(lineno,
                                      "header must name table_id, diagnosis, symptoms, signs");
            n_cols = fields.size();
            have_header = true;
            continue;
        }
        if (fields.size() != n_cols)
            throw MalformedRecord(lineno, "expected " + std::to_string(n_cols) + " fields, got " +
                                              std::to_string(fields.size()));
        std::string id = text::trim(fields[col_id]);
        DiagnosisRow row{text::trim(fields[col_diag]), split_cell_list(fields[col_sym]),
                         split_cell_list(fields[col_sign])};
        if (policy && row.diagnosis.empty())
            throw MalformedRecord(lineno, "EmptyDiagnosis: diagnosis is empty");
        if (corpus.tables.empty() || corpus.tables.back().table_id != id) {
            finish();
            if (!ids.insert(id).second) throw DuplicateTableId(id);
            corpus.tables.push_back({id, {}});
            table_line = lineno;
        }
        corpus.tables.back().rows.push_back(std::move(row));
    }
    finish();
    return corpus;
}

namespace {

Corpus load_with(const std::filesystem::path& path, CorpusFormat format,
                 const ValidationPolicy* policy) {
    std::ifstream in(path);
    if (!in) throw FileNotFound(path.string());
    if (format == CorpusFormat::Auto)
        format = path.extension() == ".csv" ? CorpusFormat::Csv : CorpusFormat::JsonLines;
    Corpus corpus = format == CorpusFormat::Csv ? parse_corpus_csv(in, policy)
                                                : parse_corpus_jsonl(in, policy);
    corpus.source_label = path.string();
    return corpus;
}

}  // namespace

Corpus load_corpus(const std::filesystem::path& path, CorpusFormat format,
                   const ValidationPolicy& policy) {
    return load_with(path, format, &policy);
}

Corpus load_corpus_unchecked(const std::filesystem::path& path, CorpusFormat format) {
    return load_with(path, format, nullptr);
}

void write_corpus_jsonl(std::ostream& out, const Corpus& corpus) {
    for (const auto& t : corpus.tables) out << to_json(t).dump() << '\n';
}

void write_corpus_csv(std::ostream& out, const Corpus& corpus) {
    out << "table_id,diagnosis,symptoms,signs\n";
    for (const auto& t : corpus.tables)
        for (const auto& r : t.rows)
            out << csv_quote(t.table_id) << ',' << csv_quote(r.diagnosis) << ','
                << csv_quote(text::join(r.symptoms, "|")) << ','
                << csv_quote(text::join(r.signs, "|")) << '\n';
}

void save_corpus(const std::filesystem::path& path, const Corpus& corpus, CorpusFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    if (format == CorpusFormat::Auto)
        format = path.extension() == ".csv" ? CorpusFormat::Csv : CorpusFormat::JsonLines;
    if (format == CorpusFormat::Csv) write_corpus_csv(out, corpus);
    else write_corpus_jsonl(out, corpus);
}

namespace {

std::string render_list(const std::vector<std::string>& items) {
    return items.empty() ? std::string("none") : text::join(items, ", ");
}

}  // namespace

std::string linearize_table(const DiagnosisTable& table) {
    std::string out;
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& r = table.rows[i];
        if (i) out += "; ";
        out += "Row " + std::to_string(i + 1) + " is: Diagnosis is " + r.diagnosis +
               ", Key symptoms are " + render_list(r.symptoms) + ", Key signs are " +
               render_list(r.signs);
    }
    return out;
}

}  // namespace biotab
