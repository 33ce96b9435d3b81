#include "biotab/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <spdlog/sinks/ostream_sink.h>
#include <spdlog/spdlog.h>

#include "biotab/error.hpp"
#include "biotab/eval.hpp"
#include "biotab/generator.hpp"
#include "biotab/instructions.hpp"
#include "biotab/oracle.hpp"
#include "biotab/splits.hpp"
#include "biotab/synth.hpp"
#include "biotab/table.hpp"
#include "biotab/templates.hpp"

namespace biotab {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct Options {
    std::string corpus;
    bool csv = false;
    std::string tasks = "1-22";
    std::uint64_t seed = 0;
    std::string out;
    int canonical = 1;
    double fraction = 1.0 / 3.0;
    std::string cross_tables = "test-tables";
    std::string enforce_unique = "on";
    std::uint64_t cap = 0;  // 0 = unlimited
    std::string negative_pool = "same-table";
    std::string instructions = "on";
    std::string exemplar_mode = "fixed";
    int budget = 512;
    unsigned jobs = 1;
    std::string duplicate_diagnosis = "error";

    std::string table;
    std::string question;
    std::string dataset;
    std::string gold;
    std::string pred;
    std::string format = "table";
    std::string averaging = "macro";
    int split = 0;
    std::string use_slots = "on";

    std::string kind;
    int donor = 0;
    std::string scope = "prompt";
    int task = 0;
    std::string exclude;

    std::size_t n_tables = 20;
    std::size_t rows_min = 3, rows_max = 6;
    std::size_t symptoms_min = 2, symptoms_max = 6;
    std::size_t signs_min = 1, signs_max = 4;
};

bool on_off(const std::string& v) { return v == "on"; }

CorpusFormat corpus_format(const Options& o) {
    return o.csv ? CorpusFormat::Csv : CorpusFormat::Auto;
}

ValidationPolicy validation_policy(const Options& o) {
    return {o.duplicate_diagnosis != "warning"};
}

GenerationPolicy generation_policy(const Options& o) {
    GenerationPolicy p;
    p.seed = o.seed;
    if (o.cap > 0) p.combos_per_row_cap = o.cap;
    p.enforce_unique_answer = on_off(o.enforce_unique);
    p.negative_pool = o.negative_pool == "corpus-wide" ? NegativePool::CorpusWide : NegativePool::SameTable;
    p.attach_instructions = on_off(o.instructions);
    p.exemplar_mode = o.exemplar_mode == "per-instance" ? ExemplarMode::PerInstance : ExemplarMode::Fixed;
    p.token_budget = o.budget;
    return p;
}

// Writes `content` to `path`, creating parent directories.
void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot write " + path.string());
    f << content;
}

std::string dataset_text(const Dataset& ds) {
    std::ostringstream s;
    write_dataset(s, ds);
    return s.str();
}

class Manifest {
public:
    Manifest(std::string command, const std::string& config_file)
        : start_(std::chrono::steady_clock::now()) {
        j_["command"] = std::move(command);
        j_["version"] = kVersion;
        if (!config_file.empty()) {
            std::ifstream f(config_file);
            std::stringstream ss;
            ss << f.rdbuf();
            j_["config_file"] = {{"path", config_file}, {"content", ss.str()}};
        }
        j_["inputs"] = ordered_json::array();
        j_["outputs"] = ordered_json::array();
    }
    ordered_json& operator[](const char* key) { return j_[key]; }
    void input(const std::string& p) { j_["inputs"].push_back(p); }
    void output(const std::string& p) { j_["outputs"].push_back(p); }
    void write(const fs::path& path) {
        auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_);
        j_["duration_seconds"] = elapsed.count();
        write_file(path, j_.dump(2) + "\n");
    }

private:
    ordered_json j_;
    std::chrono::steady_clock::time_point start_;
};

void add_corpus_opts(CLI::App* cmd, Options& o) {
    cmd->add_option("--corpus", o.corpus, "Corpus file (line-delimited records or CSV)")->required();
    cmd->add_flag("--csv", o.csv, "Force the CSV adapter");
    cmd->add_option("--duplicate-diagnosis", o.duplicate_diagnosis, "error or warning")
        ->check(CLI::IsMember({"error", "warning"}));
}

void add_generation_opts(CLI::App* cmd, Options& o) {
    cmd->add_option("--seed", o.seed, "Random seed")->required();
    cmd->add_option("--cap", o.cap, "Slot combinations per (row, task); 0 = unlimited");
    cmd->add_option("--enforce-unique", o.enforce_unique, "Drop ambiguous instances")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--negative-pool", o.negative_pool, "same-table or corpus-wide")
        ->check(CLI::IsMember({"same-table", "corpus-wide"}));
    cmd->add_option("--instructions", o.instructions, "Attach instructions with exemplars")
        ->check(CLI::IsMember({"on", "off"}));
    cmd->add_option("--exemplar-mode", o.exemplar_mode, "fixed or per-instance")
        ->check(CLI::IsMember({"fixed", "per-instance"}));
    cmd->add_option("--budget", o.budget, "Token budget for assembled model inputs")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

int cmd_validate(const Options& o, std::ostream& out) {
    auto corpus = load_corpus_unchecked(o.corpus, corpus_format(o));
    const auto policy = validation_policy(o);
    bool errors = false;
    for (const auto& t : corpus.tables) {
        for (const auto& v : validate_table(t, policy)) {
            ordered_json j;
            j["table_id"] = t.table_id;
            j["kind"] = to_string(v.kind);
            j["severity"] = v.severity == Severity::Error ? "error" : "warning";
            if (v.row >= 0) j["row"] = v.row;
            j["detail"] = v.detail;
            out << j.dump() << '\n';
            errors = errors || v.severity == Severity::Error;
        }
    }
    spdlog::info("validated {} tables", corpus.tables.size());
    if (errors) throw DataError("corpus has invariant violations");
    return kExitOk;
}

int cmd_templates_export(const Options& o, std::ostream& out, const std::string& config) {
    std::ostringstream s;
    for (const auto& t : template_catalog()) s << to_json(t).dump() << '\n';
    if (o.out.empty()) {
        out << s.str();
        return kExitOk;
    }
    Manifest m("templates export", config);
    write_file(o.out, s.str());
    m.output(o.out);
    m["counts"] = {{"templates", template_catalog().size()}};
    m.write(fs::path(o.out).parent_path() / "manifest.json");
    return kExitOk;
}

int cmd_synth(const Options& o, const std::string& config) {
    SynthConfig c;
    c.n_tables = o.n_tables;
    c.rows_min = o.rows_min;
    c.rows_max = o.rows_max;
    c.symptoms_min = o.symptoms_min;
    c.symptoms_max = o.symptoms_max;
    c.signs_min = o.signs_min;
    c.signs_max = o.signs_max;
    c.seed = o.seed;
    auto corpus = synthesize_corpus(c);
    fs::path path(o.out);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    save_corpus(path, corpus);
    Manifest m("synth", config);
    m["seed"] = o.seed;
    m.output(o.out);
    m["counts"] = {{"tables", corpus.tables.size()}};
    m.write(path.parent_path() / "manifest.json");
    return kExitOk;
}

int cmd_generate(const Options& o, std::ostream& out, const std::string& config) {
    auto corpus = load_corpus(o.corpus, corpus_format(o), validation_policy(o));
    auto policy = generation_policy(o);
    auto result = generate_dataset(corpus, parse_task_set(o.tasks), policy, o.jobs);
    fs::path dir(o.out);
    write_file(dir / "dataset.jsonl", dataset_text(result.dataset));
    write_file(dir / "report.json", to_json(result.report).dump(2) + "\n");

    Manifest m("generate", config);
    m["seed"] = o.seed;
    m["policy"] = to_json(policy);
    m["tasks"] = parse_task_set(o.tasks);
    m.input(o.corpus);
    m.output((dir / "dataset.jsonl").string());
    m.output((dir / "report.json").string());
    m["counts"] = {{"instances", result.dataset.instances.size()},
                   {"skips", result.report.skips.size()},
                   {"over_budget", result.report.over_budget.size()}};
    m["stats"] = to_json(dataset_stats(result.dataset));
    m.write(dir / "manifest.json");
    out << result.dataset.instances.size() << " instances written to " << (dir / "dataset.jsonl").string()
        << '\n';
    return kExitOk;
}

int cmd_split(const Options& o, std::ostream& out, const std::string& config) {
    auto corpus = load_corpus(o.corpus, corpus_format(o), validation_policy(o));
    auto spec = canonical_splits(o.seed).at(static_cast<std::size_t>(o.canonical - 1));
    spec.table_train_fraction = o.fraction;
    spec.cross_table_source = cross_table_source_from_string(o.cross_tables);
    auto policy = generation_policy(o);
    auto split = build_split(corpus, spec, policy, o.jobs);

    fs::path dir(o.out);
    const std::pair<const char*, const GenerationResult*> parts[] = {
        {"train", &split.train}, {"iid_test", &split.iid_test}, {"cross_test", &split.cross_test}};
    Manifest m("split", config);
    m["seed"] = o.seed;
    m["spec"] = to_json(spec);
    m["policy"] = to_json(policy);
    m["partition"] = {{"train_table_ids", split.table_partition.train_table_ids},
                      {"test_table_ids", split.table_partition.test_table_ids}};
    m.input(o.corpus);
    ordered_json counts, stats;
    for (const auto& [name, res] : parts) {
        const std::string file = std::string(name) + ".jsonl";
        const std::string report = std::string(name) + "_report.json";
        write_file(dir / file, dataset_text(res->dataset));
        write_file(dir / report, to_json(res->report).dump(2) + "\n");
        m.output((dir / file).string());
        m.output((dir / report).string());
        counts[name] = res->dataset.instances.size();
    }
    stats["train"] = to_json(split.train_stats);
    stats["iid_test"] = to_json(split.iid_test_stats);
    stats["cross_test"] = to_json(split.cross_test_stats);
    m["counts"] = counts;
    m["stats"] = stats;
    m.write(dir / "manifest.json");
    out << spec.name << ": train " << split.train.dataset.instances.size() << ", iid_test "
        << split.iid_test.dataset.instances.size() << ", cross_test "
        << split.cross_test.dataset.instances.size() << '\n';
    return kExitOk;
}

const DiagnosisTable& require_table(const Corpus& corpus, const std::string& id) {
    const auto* t = corpus.find(id);
    if (!t) throw DataError("unknown table id: " + id);
    return *t;
}

int cmd_linearize(const Options& o, std::ostream& out) {
    auto corpus = load_corpus(o.corpus, corpus_format(o), validation_policy(o));
    if (!o.table.empty()) {
        out << linearize_table(require_table(corpus, o.table)) << '\n';
        return kExitOk;
    }
    for (const auto& t : corpus.tables) {
        ordered_json j;
        j["table_id"] = t.table_id;
        j["linearized"] = linearize_table(t);
        out << j.dump() << '\n';
    }
    return kExitOk;
}

ordered_json result_json(const OracleResult& r) {
    ordered_json j;
    j["candidates"] = r.candidates;
    j["unique"] = r.unique;
    return j;
}

int cmd_oracle_answer(const Options& o, std::ostream& out) {
    auto corpus = load_corpus(o.corpus, corpus_format(o), validation_policy(o));
    auto result = oracle_answer(o.question, require_table(corpus, o.table));
    out << result_json(result).dump() << '\n';
    return kExitOk;
}

int cmd_oracle_batch(const Options& o, std::ostream& out, const std::string& config) {
    auto corpus = load_corpus(o.corpus, corpus_format(o), validation_policy(o));
    auto dataset = load_dataset(o.dataset);
    std::ostringstream s;
    std::size_t unique = 0;
    for (const auto& inst : dataset.instances) {
        const auto& table = require_table(corpus, inst.table_id);
        auto query = on_off(o.use_slots) && !inst.slots.empty()
                         ? query_from_slots(inst.task_id, inst.slots)
                         : parse_question(inst.question);
        auto r = execute_query(query, table);
        unique += r.unique ? 1 : 0;
        ordered_json j;
        j["instance_id"] = inst.instance_id;
        j["prediction"] = r.candidates.empty() ? std::string{} : r.candidates.front();
        j["candidates"] = r.candidates;
        j["unique"] = r.unique;
        s << j.dump() << '\n';
    }
    write_file(o.out, s.str());
    Manifest m("oracle batch", config);
    m.input(o.corpus);
    m.input(o.dataset);
    m.output(o.out);
    m["counts"] = {{"predictions", dataset.instances.size()}, {"unique", unique}};
    m.write(fs::path(o.out).parent_path() / "oracle_manifest.json");
    out << dataset.instances.size() << " predictions written to " << o.out << '\n';
    return kExitOk;
}

int cmd_score(const Options& o, std::ostream& out, const std::string& config) {
    auto dataset = load_dataset(o.gold);
    auto preds = load_predictions(o.pred);
    std::optional<SplitSpec> spec;
    if (o.split > 0) spec = canonical_splits().at(static_cast<std::size_t>(o.split - 1));
    auto report = score_predictions(preds, dataset, spec ? &*spec : nullptr,
                                    o.averaging == "micro" ? Averaging::Micro : Averaging::Macro);
    if (o.format == "records") out << render_report_records(report);
    else out << render_report_table(report);
    if (!o.out.empty()) {
        write_file(o.out, to_json(report).dump(2) + "\n");
        Manifest m("score", config);
        m.input(o.gold);
        m.input(o.pred);
        m.output(o.out);
        m["counts"] = {{"instances", dataset.instances.size()},
                       {"predictions", preds.entries.size()},
                       {"missing", report.n_missing}};
        m.write(fs::path(o.out).parent_path() / "score_manifest.json");
    }
    if (report.n_missing > 0)
        spdlog::warn("{} gold instance(s) had no prediction", report.n_missing);
    return kExitOk;
}

int cmd_perturb(const Options& o, std::ostream& out, const std::string& config) {
    auto dataset = load_dataset(o.dataset);
    PerturbationKind kind{perturbation_type_from_string(o.kind), std::nullopt};
    if (o.donor > 0) kind.donor_task_id = o.donor;
    const bool block = o.scope == "block";
    std::optional<Corpus> corpus;
    if (block && kind.type == PerturbationKind::Type::Mismatched) {
        if (o.corpus.empty()) throw PreconditionError("--scope block with mismatched needs --corpus");
        corpus = load_corpus(o.corpus, corpus_format(o), validation_policy(o));
    }

    std::size_t rewritten_instructions = 0;
    for (auto& inst : dataset.instances) {
        Rng prompt_rng(derive_seed(o.seed, inst.instance_id + "#prompt"));
        inst.prompt = perturb_prompt(inst.prompt, inst.task_id, kind, prompt_rng);
        const int donor = kind.type == PerturbationKind::Type::Mismatched
                              ? kind.donor_task_id.value_or(default_donor(inst.task_id))
                              : 0;
        if (inst.instruction) {
            Rng ins_rng(derive_seed(o.seed, inst.instance_id + "#instruction"));
            if (!block && inst.exemplar) {
                auto p = perturb_prompt(inst.exemplar->prompt, inst.task_id, kind, ins_rng);
                inst.instruction = render_instruction(p, inst.exemplar->question, inst.exemplar->answer);
                ++rewritten_instructions;
            } else if (block && corpus) {
                auto ex = select_exemplar(donor, *corpus, inst.table_id);
                inst.instruction = build_instruction(donor, ex).rendered;
                ++rewritten_instructions;
            } else if (block) {
                inst.instruction = perturb_prompt(*inst.instruction, inst.task_id, kind, ins_rng);
                ++rewritten_instructions;
            }
        }
        PerturbationTag tag;
        tag.kind = to_string(kind.type);
        if (donor > 0) tag.donor_task_id = donor;
        tag.seed = o.seed;
        tag.scope = o.scope;
        inst.perturbation = std::move(tag);
    }
    fs::path dir(o.out);
    write_file(dir / "dataset.jsonl", dataset_text(dataset));
    Manifest m("perturb", config);
    m["seed"] = o.seed;
    m["kind"] = to_string(kind.type);
    m["scope"] = o.scope;
    m.input(o.dataset);
    m.output((dir / "dataset.jsonl").string());
    m["counts"] = {{"instances", dataset.instances.size()},
                   {"instructions_rewritten", rewritten_instructions}};
    m.write(dir / "manifest.json");
    out << dataset.instances.size() << " records perturbed (" << to_string(kind.type) << ")\n";
    return kExitOk;
}

int cmd_stats(const Options& o, std::ostream& out) {
    auto dataset = load_dataset(o.dataset);
    if (!o.tasks.empty() && o.tasks != "present") {
        auto ids = parse_task_set(o.tasks);
        dataset.task_ids = {ids.begin(), ids.end()};
    }
    out << to_json(dataset_stats(dataset)).dump(2) << '\n';
    return kExitOk;
}

int cmd_exemplar(const Options& o, std::ostream& out) {
    auto corpus = load_corpus(o.corpus, corpus_format(o), validation_policy(o));
    auto policy = generation_policy(o);
    auto ex = select_exemplar(o.task, corpus, o.exclude, policy);
    auto ins = build_instruction(o.task, ex);
    ordered_json j;
    j["task_id"] = o.task;
    j["table_id"] = ex.table_id;
    j["row_index"] = ex.row_index;
    j["question"] = ex.question;
    j["answer"] = ex.answer;
    j["instruction"] = ins.rendered;
    out << j.dump() << '\n';
    return kExitOk;
}

void configure_logging(std::ostream& err) {
    auto sink = std::make_shared<spdlog::sinks::ostream_sink_mt>(err);
    auto logger = std::make_shared<spdlog::logger>("biotab", sink);
    logger->set_pattern("[%l] %v");
    const char* level = std::getenv("BIOTAB_LOG");
    logger->set_level(level ? spdlog::level::from_str(level) : spdlog::level::warn);
    spdlog::set_default_logger(logger);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    configure_logging(err);
    Options o;
    std::string config_file;

    CLI::App app{"Differential-diagnosis table QA benchmark toolkit", "biotab"};
    app.set_version_flag("--version", kVersion);
    app.set_config("--config", "", "Optional TOML/INI file of flag values");
    app.require_subcommand(1);

    auto* validate = app.add_subcommand("validate", "Report invariant violations in a corpus");
    add_corpus_opts(validate, o);

    auto* templates = app.add_subcommand("templates", "Template catalog");
    templates->require_subcommand(1);
    auto* tmpl_export = templates->add_subcommand("export", "Emit the catalog as records");
    tmpl_export->add_option("--out", o.out, "Output file (stdout when omitted)");

    auto* synth = app.add_subcommand("synth", "Write a synthetic sample corpus");
    synth->add_option("--tables", o.n_tables, "Number of tables")->check(CLI::PositiveNumber);
    synth->add_option("--rows-min", o.rows_min);
    synth->add_option("--rows-max", o.rows_max);
    synth->add_option("--symptoms-min", o.symptoms_min);
    synth->add_option("--symptoms-max", o.symptoms_max);
    synth->add_option("--signs-min", o.signs_min);
    synth->add_option("--signs-max", o.signs_max);
    synth->add_option("--seed", o.seed)->required();
    synth->add_option("--out", o.out, "Output corpus file")->required();

    auto* generate = app.add_subcommand("generate", "Instantiate templates over a corpus");
    add_corpus_opts(generate, o);
    generate->add_option("--tasks", o.tasks, "Task set, e.g. 1-22 or 1,4,7");
    generate->add_option("--out", o.out, "Output directory")->required();
    add_generation_opts(generate, o);

    auto* split = app.add_subcommand("split", "Materialize a canonical task split");
    add_corpus_opts(split, o);
    split->add_option("--canonical", o.canonical, "Split number")->check(CLI::Range(1, 3));
    split->add_option("--fraction", o.fraction, "Fraction of tables used for training");
    split->add_option("--cross-tables", o.cross_tables, "Cross-task table source")
        ->check(CLI::IsMember({"train-tables", "test-tables", "all-tables"}));
    split->add_option("--out", o.out, "Output directory")->required();
    add_generation_opts(split, o);

    auto* linearize = app.add_subcommand("linearize", "Linearize corpus tables");
    add_corpus_opts(linearize, o);
    linearize->add_option("--table", o.table, "Only this table, as plain text");

    auto* oracle = app.add_subcommand("oracle", "Ground-truth answer engine");
    oracle->require_subcommand(1);
    auto* answer = oracle->add_subcommand("answer", "Answer one question over one table");
    add_corpus_opts(answer, o);
    answer->add_option("--table", o.table)->required();
    answer->add_option("--question", o.question)->required();
    auto* batch = oracle->add_subcommand("batch", "Answer every instance of a dataset file");
    add_corpus_opts(batch, o);
    batch->add_option("--dataset", o.dataset)->required();
    batch->add_option("--out", o.out, "Predictions file")->required();
    batch->add_option("--use-slots", o.use_slots, "Prefer slot metadata over parsing")
        ->check(CLI::IsMember({"on", "off"}));

    auto* score = app.add_subcommand("score", "Exact-match scoring");
    score->add_option("--gold", o.gold, "Gold dataset file")->required();
    score->add_option("--pred", o.pred, "Predictions file")->required();
    score->add_option("--split", o.split, "Canonical split for average rows")->check(CLI::Range(1, 3));
    score->add_option("--format", o.format)->check(CLI::IsMember({"table", "records"}));
    score->add_option("--averaging", o.averaging)->check(CLI::IsMember({"macro", "micro"}));
    score->add_option("--out", o.out, "Write the structured report here");

    auto* perturb = app.add_subcommand("perturb", "Perturb instruction prompts");
    perturb->add_option("--dataset", o.dataset)->required();
    perturb->add_option("--kind", o.kind)
        ->required()
        ->check(CLI::IsMember({"mismatched", "repeat", "random-string", "random-words"}));
    perturb->add_option("--seed", o.seed)->required();
    perturb->add_option("--donor", o.donor, "Donor task for mismatched")->check(CLI::Range(1, 22));
    perturb->add_option("--scope", o.scope)->check(CLI::IsMember({"prompt", "block"}));
    perturb->add_option("--corpus", o.corpus, "Needed for --scope block --kind mismatched");
    perturb->add_option("--out", o.out, "Output directory")->required();

    auto* stats = app.add_subcommand("stats", "Dataset statistics");
    stats->add_option("--dataset", o.dataset)->required();
    stats->add_option("--tasks", o.tasks, "Task set for the template rows (default: tasks present)");

    auto* exemplar = app.add_subcommand("exemplar", "Show the in-context exemplar for a task");
    add_corpus_opts(exemplar, o);
    exemplar->add_option("--task", o.task)->required()->check(CLI::Range(1, 22));
    exemplar->add_option("--exclude", o.exclude, "Table id to exclude");
    exemplar->add_option("--enforce-unique", o.enforce_unique)->check(CLI::IsMember({"on", "off"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
    }
    if (auto* opt = app.get_config_ptr(); opt && opt->count() > 0) config_file = opt->as<std::string>();

    try {
        if (validate->parsed()) return cmd_validate(o, out);
        if (tmpl_export->parsed()) return cmd_templates_export(o, out, config_file);
        if (synth->parsed()) return cmd_synth(o, config_file);
        if (generate->parsed()) return cmd_generate(o, out, config_file);
        if (split->parsed()) return cmd_split(o, out, config_file);
        if (linearize->parsed()) return cmd_linearize(o, out);
        if (answer->parsed()) return cmd_oracle_answer(o, out);
        if (batch->parsed()) return cmd_oracle_batch(o, out, config_file);
        if (score->parsed()) return cmd_score(o, out, config_file);
        if (perturb->parsed()) return cmd_perturb(o, out, config_file);
        if (stats->parsed()) {
            if (stats->get_option("--tasks")->count() == 0) o.tasks = "present";
            return cmd_stats(o, out);
        }
        if (exemplar->parsed()) return cmd_exemplar(o, out);
    } catch (const PreconditionError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    err << "error: no subcommand handled\n";
    return kExitUsage;
}

}  // namespace biotab
