// Command line front end: corpus inspection, splitting, training, parsing,
// evaluation, baselines, annotator agreement and the improvement simulation.
//
// Exit codes: 0 success, 1 data or model error, 2 usage error. All outputs
// are deterministic for a fixed argv + inputs + seed.

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "argstruct/agreement.hpp"
#include "argstruct/corpus.hpp"
#include "argstruct/errors.hpp"
#include "argstruct/eval.hpp"
#include "argstruct/features.hpp"
#include "argstruct/io.hpp"
#include "argstruct/joint.hpp"
#include "argstruct/learners.hpp"
#include "argstruct/log.hpp"
#include "argstruct/pipeline.hpp"

namespace fs = std::filesystem;
using namespace argstruct;
using corpus::Document;
using pipeline::Models;
using pipeline::PipelineConfig;
using pipeline::StagePredictions;
using pipeline::Task;

namespace {

// Bad flag combinations detected after CLI11 parsing still count as usage
// errors (exit 2), not data errors.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Required values are checked in the runners, after the config file has been
// merged, so they may come from either the command line or --config.
void require_value(const std::string& flag, const std::string& value) {
    if (value.empty()) {
        throw UsageError(flag + " is required");
    }
}

// CLI11 only reads config files attached to the root command, so each
// subcommand merges its own --config by hand: flat "key = value" lines named
// after the long options, filling only values the command line left unset.
void apply_config_file(CLI::App& cmd, const std::string& path) {
    const CLI::ConfigTOML reader;
    for (const CLI::ConfigItem& item : reader.from_file(path)) {
        if (!item.parents.empty() || item.name == "++" || item.name == "--") {
            throw CLI::ConfigError(path + ": sections are not supported (" + item.fullname() +
                                   ")");
        }
        CLI::Option* opt = cmd.get_option_no_throw("--" + item.name);
        if (opt == nullptr) {
            throw CLI::ConfigError(path + ": unknown key '" + item.name + "'");
        }
        if (!opt->empty()) {
            continue;
        }
        if (opt->get_expected_min() == 0 && item.inputs.size() <= 1) {
            opt->add_result(opt->get_flag_value(item.name, reader.to_flag(item)));
        } else {
            opt->add_result(item.inputs);
        }
        opt->run_callback();
    }
}

const std::vector<std::string> kFeatureGroups = {"struct", "lex",  "syn", "lexsyn",
                                                 "indic",  "ctx",  "prob", "disc",
                                                 "pmi",    "shno", "emb",  "sent"};

std::string fmt4(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << v;
    return out.str();
}

void emit_output(const std::string& path, const std::string& content) {
    if (path.empty() || path == "-") {
        std::cout << content;
    } else {
        io::write_file(path, content);
    }
}

std::vector<Document> load_docs(const std::string& dir) {
    require_value("--corpus", dir);
    std::vector<Document> docs = corpus::load_corpus_dir(dir);
    if (docs.empty()) {
        throw DataError("no essays found in " + dir);
    }
    return docs;
}

std::vector<const Document*> all_pointers(const std::vector<Document>& docs) {
    std::vector<const Document*> out;
    for (const Document& d : docs) out.push_back(&d);
    return out;
}

// (train, test) per the split file; without one both sides are the whole
// corpus, which is fine for inspection but not a real experiment.
std::pair<std::vector<const Document*>, std::vector<const Document*>> apply_split(
    const std::vector<Document>& docs, const std::string& split_path) {
    if (split_path.empty()) {
        log::info("no --split given, using every essay for both sides");
        return {all_pointers(docs), all_pointers(docs)};
    }
    const corpus::SplitSpec spec = corpus::parse_split_csv(io::read_file(split_path));
    return corpus::load_split(spec, docs);
}

std::vector<Task> parse_tasks(const std::string& which) {
    if (which == "all") {
        return {Task::Identify, Task::Classify, Task::Relations, Task::Stance};
    }
    return {pipeline::task_from_string(which)};
}

features::FeatureConfig feature_config(const std::vector<std::string>& groups) {
    features::FeatureConfig config;
    if (!groups.empty()) {
        config.enabled = std::set<std::string>(groups.begin(), groups.end());
    }
    return config;
}

std::string strip_first_line(const std::string& text) {
    const auto pos = text.find('\n');
    return pos == std::string::npos ? std::string() : text.substr(pos + 1);
}

// Ordered parallel map: workers pull indices, results keep index order.
template <typename Fn>
void parallel_indices(int n, int jobs, Fn fn) {
    jobs = std::max(1, std::min(jobs, n));
    if (jobs <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr failure;
    std::mutex failure_mu;
    std::vector<std::thread> pool;
    for (int w = 0; w < jobs; ++w) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    const std::lock_guard<std::mutex> lock(failure_mu);
                    if (!failure) failure = std::current_exception();
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

int default_jobs() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// ---------------------------------------------------------------------------
// shared option bundles
// ---------------------------------------------------------------------------

struct TrainFlags {
    int epochs = 10;
    unsigned seed = 1;
    std::vector<std::string> features;
    std::string embeddings;
    std::string subjectivity;
};

void add_train_flags(CLI::App* cmd, TrainFlags& flags) {
    cmd->add_option("--epochs", flags.epochs, "Perceptron epochs")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", flags.seed, "Shuffle seed");
    cmd->add_option("--features", flags.features, "Feature groups to enable (default: all)")
        ->check(CLI::IsMember(kFeatureGroups));
    cmd->add_option("--embeddings", flags.embeddings, "Word embedding table (text format)");
    cmd->add_option("--subjectivity", flags.subjectivity, "Subjectivity lexicon CSV");
}

// Resources referenced by TrainOptions must outlive train_models; the caller
// keeps this alive across the call.
struct TrainResources {
    std::optional<features::EmbeddingTable> embeddings;
    std::optional<features::SubjectivityLexicon> subjectivity;
};

pipeline::TrainOptions train_options(const TrainFlags& flags, TrainResources& resources) {
    pipeline::TrainOptions opts;
    opts.learner.epochs = flags.epochs;
    opts.learner.seed = flags.seed;
    opts.features = feature_config(flags.features);
    if (!flags.embeddings.empty()) {
        resources.embeddings = features::load_embeddings(flags.embeddings);
        opts.embeddings = &*resources.embeddings;
    }
    if (!flags.subjectivity.empty()) {
        resources.subjectivity = features::load_subjectivity(flags.subjectivity);
        opts.subjectivity = &*resources.subjectivity;
    }
    return opts;
}

struct PhiFlags {
    double r = 0.5;
    double cr = 0.25;
    double c = 0.25;
};

void add_phi_flags(CLI::App* cmd, PhiFlags& phi) {
    cmd->add_option("--phi-r", phi.r, "Relation score weight")->check(CLI::NonNegativeNumber);
    cmd->add_option("--phi-cr", phi.cr, "Claim score difference weight")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--phi-c", phi.c, "Claim prediction weight")->check(CLI::NonNegativeNumber);
}

// ---------------------------------------------------------------------------
// stats / validate / split
// ---------------------------------------------------------------------------

struct StatsOpts {
    std::string corpus;
    std::string out;
};

int run_stats(const StatsOpts& o) {
    const std::vector<Document> docs = load_docs(o.corpus);
    emit_output(o.out, corpus::stats_to_csv(corpus::corpus_stats(docs), docs));
    return 0;
}

struct ValidateOpts {
    std::string corpus;
    std::string out;
};

int run_validate(const ValidateOpts& o) {
    const std::vector<Document> docs = load_docs(o.corpus);
    std::ostringstream csv;
    csv << "essay,kind,detail\n";
    long total = 0;
    for (const Document& doc : docs) {
        for (const corpus::Violation& v : corpus::validate_document(doc)) {
            csv << v.essay_id << ',' << v.kind << ',' << v.detail << '\n';
            ++total;
        }
    }
    emit_output(o.out, csv.str());
    if (total > 0) {
        log::error(std::to_string(total), " structural violation(s) found");
        return 1;
    }
    return 0;
}

struct SplitOpts {
    std::string corpus;
    std::string out;
    unsigned seed = 1;
    double test_fraction = 0.2;
};

int run_split(const SplitOpts& o) {
    const std::vector<Document> docs = load_docs(o.corpus);
    const int n = static_cast<int>(docs.size());
    if (n < 2) {
        throw DataError("cannot split a corpus with fewer than two essays");
    }
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(o.seed);
    learners::deterministic_shuffle(order, rng);
    long test = std::lround(o.test_fraction * n);
    test = std::max<long>(1, std::min<long>(test, n - 1));
    std::set<int> test_set(order.begin(), order.begin() + test);
    std::ostringstream csv;
    csv << "\"ID\";\"SET\"\n";
    for (int i = 0; i < n; ++i) {
        csv << '"' << docs[static_cast<size_t>(i)].essay_id << "\";\""
            << (test_set.count(i) ? "TEST" : "TRAIN") << "\"\n";
    }
    emit_output(o.out, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainCmdOpts {
    std::string corpus;
    std::string split;
    std::string out;
    std::string stage = "all";
    TrainFlags flags;
};

std::string models_out_path(const std::string& out) {
    if (out.empty()) {
        throw UsageError("train requires --out (file or directory for the model bundle)");
    }
    if (out.back() == '/' || fs::is_directory(out)) {
        return (fs::path(out) / "models.json").string();
    }
    return out;
}

int run_train(const TrainCmdOpts& o) {
    const std::vector<Document> docs = load_docs(o.corpus);
    const auto [train, test] = apply_split(docs, o.split);
    (void)test;
    TrainResources resources;
    const pipeline::TrainOptions opts = train_options(o.flags, resources);
    Models models = pipeline::train_models(train, opts);
    if (o.stage != "all") {
        // Keep only the requested stage model; the tables always travel along.
        const Task keep = pipeline::task_from_string(o.stage);
        if (keep != Task::Identify) models.identify.reset();
        if (keep != Task::Classify) models.classify.reset();
        if (keep != Task::Relations) models.relation.reset();
        if (keep != Task::Stance) models.stance.reset();
    }
    const std::string path = models_out_path(o.out);
    pipeline::save_models(models, path);
    log::info("wrote model bundle to ", path);
    return 0;
}

// ---------------------------------------------------------------------------
// parse
// ---------------------------------------------------------------------------

struct ParseCmdOpts {
    std::string models;
    std::string essay;
    std::string corpus;
    std::string out;
    bool json = false;
    bool timings = false;
    bool gold_components = false;
    bool no_fallback = false;
    int jobs = default_jobs();
    PhiFlags phi;
    std::vector<std::string> features;
};

PipelineConfig parse_config(const ParseCmdOpts& o, const Models& models) {
    PipelineConfig cfg;
    cfg.phi = {o.phi.r, o.phi.cr, o.phi.c};
    cfg.use_gold_components = o.gold_components;
    cfg.heuristic_fallback = !o.no_fallback;
    cfg.features = feature_config(o.features);
    // Stages without a model in the bundle are skipped rather than rejected,
    // so a single-stage bundle still produces its partial output.
    if (!models.classify) {
        cfg.run_classify = false;
        cfg.run_joint = false;
        log::info("bundle has no component classifier, skipping classification");
    }
    if (!models.relation) {
        cfg.run_relations = false;
        cfg.run_joint = false;
        log::info("bundle has no relation classifier, skipping relations");
    }
    if (!models.stance) {
        cfg.run_stance = false;
        log::info("bundle has no stance classifier, skipping stance recognition");
    }
    return cfg;
}

int run_parse(const ParseCmdOpts& o) {
    require_value("--models", o.models);
    if (o.essay.empty() == o.corpus.empty()) {
        throw UsageError("parse needs exactly one of --essay or --corpus");
    }
    const Models models = pipeline::load_models(o.models);
    const PipelineConfig cfg = parse_config(o, models);
    if (!o.essay.empty()) {
        const std::string text = io::read_file(o.essay);
        const std::string id = fs::path(o.essay).stem().string();
        const Document doc = corpus::parse_brat(id, text, "");
        const pipeline::ParsedEssay essay = pipeline::run_pipeline(doc, models, cfg);
        emit_output(o.out, o.json ? pipeline::to_json_string(essay, o.timings)
                                  : corpus::to_ann(essay.doc));
        return 0;
    }
    const std::vector<Document> docs = load_docs(o.corpus);
    if (o.out.empty()) {
        throw UsageError("parse --corpus requires --out (a directory for the results)");
    }
    std::vector<std::string> results(docs.size());
    parallel_indices(static_cast<int>(docs.size()), o.jobs, [&](int i) {
        const pipeline::ParsedEssay essay =
            pipeline::run_pipeline(docs[static_cast<size_t>(i)], models, cfg);
        results[static_cast<size_t>(i)] =
            o.json ? pipeline::to_json_string(essay, o.timings) : corpus::to_ann(essay.doc);
    });
    const char* ext = o.json ? ".json" : ".ann";
    for (size_t i = 0; i < docs.size(); ++i) {
        io::write_file((fs::path(o.out) / (docs[i].essay_id + ext)).string(), results[i]);
    }
    log::info("parsed ", docs.size(), " essays into ", o.out);
    return 0;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalCmdOpts {
    std::string corpus;
    std::string split;
    std::string models;
    std::string out;
    std::string task = "all";
    int folds = 0;
    bool json = false;
    bool confusion = false;
    bool end_to_end = false;
    int jobs = default_jobs();
    PhiFlags phi;
    TrainFlags flags;
};

std::string end_to_end_csv(const eval::SpanMatchScores& s) {
    std::ostringstream csv;
    csv << "task,class,precision,recall,f1\n";
    for (const eval::ClassScores& c : s.per_class) {
        csv << "end-to-end," << c.label << ',' << fmt4(c.precision) << ',' << fmt4(c.recall)
            << ',' << fmt4(c.f1) << '\n';
    }
    csv << "end-to-end,macro,,," << fmt4(s.macro_f1) << '\n';
    csv << "end-to-end,spans," << s.matched_spans << ',' << s.predicted << ',' << s.gold << '\n';
    return csv.str();
}

int run_eval(const EvalCmdOpts& o) {
    const std::vector<Document> docs = load_docs(o.corpus);
    const auto [train, test] = apply_split(docs, o.split);
    const std::vector<Task> tasks = parse_tasks(o.task);

    std::vector<std::pair<std::string, eval::TaskEvaluation>> rows;
    std::string extra;
    if (o.folds > 0) {
        // Cross-validation trains its own models per fold on the train side.
        TrainResources resources;
        const pipeline::TrainOptions opts = train_options(o.flags, resources);
        for (Task task : tasks) {
            const eval::CrossValidationResult res =
                eval::cross_validate(train, o.folds, task, opts, o.flags.seed);
            rows.emplace_back(pipeline::to_string(task),
                              eval::TaskEvaluation{res.matrix, res.scores});
        }
    } else {
        if (o.models.empty()) {
            throw UsageError("eval requires --models (or --folds for cross-validation)");
        }
        const Models models = pipeline::load_models(o.models);
        for (Task task : tasks) {
            rows.emplace_back(pipeline::to_string(task), eval::evaluate_task(test, models, task));
        }
        if (o.end_to_end) {
            PipelineConfig cfg;
            cfg.phi = {o.phi.r, o.phi.cr, o.phi.c};
            std::vector<pipeline::ParsedEssay> parsed(test.size());
            parallel_indices(static_cast<int>(test.size()), o.jobs, [&](int i) {
                parsed[static_cast<size_t>(i)] =
                    pipeline::run_pipeline(*test[static_cast<size_t>(i)], models, cfg);
            });
            std::vector<const pipeline::ParsedEssay*> ptrs;
            for (const auto& p : parsed) ptrs.push_back(&p);
            extra = end_to_end_csv(eval::end_to_end_components(test, ptrs));
        }
    }

    if (o.json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [name, te] : rows) {
            arr.push_back(nlohmann::ordered_json::parse(eval::scores_to_json(name, te.scores)));
        }
        emit_output(o.out, arr.dump(2) + "\n");
        return 0;
    }
    std::string csv;
    for (const auto& [name, te] : rows) {
        const std::string block = eval::scores_to_csv(name, te.scores);
        csv += csv.empty() ? block : strip_first_line(block);
    }
    if (o.confusion) {
        for (const auto& [name, te] : rows) {
            csv += "\nmatrix," + name + "\n" + eval::confusion_to_csv(te.matrix);
        }
    }
    if (!extra.empty()) {
        csv += "\n" + extra;
    }
    emit_output(o.out, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// baseline
// ---------------------------------------------------------------------------

struct BaselineCmdOpts {
    std::string corpus;
    std::string split;
    std::string out;
    std::string task = "all";
    bool json = false;
};

int run_baseline(const BaselineCmdOpts& o) {
    const std::vector<Document> docs = load_docs(o.corpus);
    const auto [train, test] = apply_split(docs, o.split);
    const pipeline::MajorityModel majority = pipeline::majority_from_training(train);

    std::vector<std::pair<std::string, eval::MacroScores>> rows;
    for (Task task : parse_tasks(o.task)) {
        std::vector<StagePredictions> heuristic;
        std::vector<StagePredictions> constant;
        for (const Document* d : test) {
            heuristic.push_back(pipeline::heuristic_baseline(*d));
            constant.push_back(pipeline::majority_baseline(majority, *d));
        }
        const std::string name = pipeline::to_string(task);
        rows.emplace_back(name + "-heuristic",
                          eval::evaluate_predictions(test, heuristic, task).scores);
        rows.emplace_back(name + "-majority",
                          eval::evaluate_predictions(test, constant, task).scores);
    }

    if (o.json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const auto& [name, scores] : rows) {
            arr.push_back(nlohmann::ordered_json::parse(eval::scores_to_json(name, scores)));
        }
        emit_output(o.out, arr.dump(2) + "\n");
        return 0;
    }
    std::string csv;
    for (const auto& [name, scores] : rows) {
        const std::string block = eval::scores_to_csv(name, scores);
        csv += csv.empty() ? block : strip_first_line(block);
    }
    emit_output(o.out, csv);
    return 0;
}

// ---------------------------------------------------------------------------
// agreement
// ---------------------------------------------------------------------------

struct AgreementCmdOpts {
    std::string raters;
    std::string out;
    bool cpm = false;
};

// Directory layout: <essay>.txt plus <essay>.<rater>.ann for every rater.
agreement::RaterCorpora load_rater_corpora(const std::string& dir) {
    std::vector<std::string> essays;
    std::set<std::string> rater_names;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const fs::path p = entry.path();
        if (p.extension() == ".txt") {
            essays.push_back(p.stem().string());
        } else if (p.extension() == ".ann") {
            const std::string inner = p.stem().extension().string();  // ".r1"
            if (inner.size() > 1) rater_names.insert(inner.substr(1));
        }
    }
    std::sort(essays.begin(), essays.end());
    if (essays.empty()) {
        throw DataError("no .txt essays found in " + dir);
    }
    if (rater_names.size() < 2) {
        throw DataError("agreement needs at least two <essay>.<rater>.ann files per essay");
    }
    agreement::RaterCorpora raters(rater_names.size());
    for (const std::string& essay : essays) {
        const std::string text = io::read_file(dir + "/" + essay + ".txt");
        size_t r = 0;
        for (const std::string& rater : rater_names) {
            const std::string ann = io::read_file(dir + "/" + essay + "." + rater + ".ann");
            raters[r].push_back(corpus::parse_brat(essay, text, ann));
            ++r;
        }
    }
    return raters;
}

int run_agreement(const AgreementCmdOpts& o) {
    require_value("--raters", o.raters);
    const agreement::RaterCorpora raters = load_rater_corpora(o.raters);
    const agreement::AgreementTable components = agreement::sentence_component_table(raters);
    const auto stance = agreement::sentence_stance_table(raters);
    const agreement::AgreementTable relations = agreement::relation_pair_table(raters);
    const auto continua = agreement::component_continua(raters);

    std::ostringstream csv;
    csv << "measure,markable,value\n";
    const auto row = [&](const std::string& measure, const std::string& markable, double value) {
        csv << measure << ',' << markable << ',' << fmt4(value) << '\n';
    };
    const auto table_rows = [&](const std::string& markable,
                                const agreement::AgreementTable& table) {
        row("percent", markable, agreement::observed_agreement(table));
        row("kappa", markable, agreement::fleiss_kappa(table));
    };
    table_rows("components", components);
    table_rows("major_claims",
               agreement::sentence_type_table(raters, corpus::ComponentType::MajorClaim));
    table_rows("claims", agreement::sentence_type_table(raters, corpus::ComponentType::Claim));
    table_rows("premises", agreement::sentence_type_table(raters, corpus::ComponentType::Premise));
    table_rows("stance", stance.first);
    table_rows("relations", relations);
    row("alpha_u", "components", agreement::krippendorff_alpha_u(continua));
    row("alpha_u", "major_claims",
        agreement::krippendorff_alpha_u(continua, std::string("MajorClaim")));
    row("alpha_u", "claims", agreement::krippendorff_alpha_u(continua, std::string("Claim")));
    row("alpha_u", "premises", agreement::krippendorff_alpha_u(continua, std::string("Premise")));
    if (stance.second > 0) {
        log::warn(std::to_string(stance.second), " sentence(s) held claims of mixed stance");
    }

    if (o.cpm) {
        const agreement::CpmResult cpm = agreement::confusion_probability_matrix(components);
        csv << "\ncategory";
        for (const std::string& c : cpm.categories) csv << ',' << c;
        csv << '\n';
        for (size_t i = 0; i < cpm.matrix.size(); ++i) {
            if (!cpm.defined[i]) continue;
            csv << cpm.categories[i];
            for (double v : cpm.matrix[i]) csv << ',' << fmt4(v);
            csv << '\n';
        }
    }
    emit_output(o.out, csv.str());
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateCmdOpts {
    std::string corpus;
    std::string split;
    std::string models;
    std::string out;
    std::string which = "both";
    std::vector<double> fractions;
    int repeats = 3;
    unsigned seed = 1;
    bool json = false;
    int jobs = default_jobs();
    PhiFlags phi;
};

int run_simulate(const SimulateCmdOpts& o) {
    require_value("--models", o.models);
    const std::vector<Document> docs = load_docs(o.corpus);
    const auto [train, test] = apply_split(docs, o.split);
    (void)train;
    const Models models = pipeline::load_models(o.models);

    std::vector<StagePredictions> base(test.size());
    parallel_indices(static_cast<int>(test.size()), o.jobs, [&](int i) {
        base[static_cast<size_t>(i)] =
            eval::model_predictions(*test[static_cast<size_t>(i)], models);
    });

    std::vector<double> fractions = o.fractions;
    if (fractions.empty()) {
        for (int i = 0; i <= 10; ++i) fractions.push_back(i / 10.0);
    }
    eval::ImproveWhich which = eval::ImproveWhich::Both;
    if (o.which == "types") which = eval::ImproveWhich::Types;
    if (o.which == "relations") which = eval::ImproveWhich::Relations;
    PipelineConfig cfg;
    cfg.phi = {o.phi.r, o.phi.cr, o.phi.c};
    const auto curve =
        eval::improvement_simulation(test, base, fractions, which, cfg, o.seed, o.repeats);

    if (o.json) {
        nlohmann::ordered_json arr = nlohmann::ordered_json::array();
        for (const eval::SimulationPoint& pt : curve) {
            nlohmann::ordered_json j;
            j["fraction"] = pt.fraction;
            j["component_f1"] = pt.component_f1;
            j["relation_f1"] = pt.relation_f1;
            arr.push_back(j);
        }
        emit_output(o.out, arr.dump(2) + "\n");
        return 0;
    }
    emit_output(o.out, eval::curve_to_csv(curve));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"argumentation structure parser for persuasive essays"};
    app.require_subcommand(1);

    StatsOpts stats_opts;
    CLI::App* stats_cmd = app.add_subcommand("stats", "Corpus statistics as CSV");
    stats_cmd->add_option("--corpus", stats_opts.corpus, "Corpus directory");
    stats_cmd->add_option("--out", stats_opts.out, "Output path (default stdout)");

    ValidateOpts validate_opts;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "Check the per-paragraph forest rules");
    validate_cmd->add_option("--corpus", validate_opts.corpus, "Corpus directory");
    validate_cmd->add_option("--out", validate_opts.out, "Output path (default stdout)");

    SplitOpts split_opts;
    CLI::App* split_cmd = app.add_subcommand("split", "Write a deterministic train/test split");
    split_cmd->add_option("--corpus", split_opts.corpus, "Corpus directory");
    split_cmd->add_option("--out", split_opts.out, "Output path (default stdout)");
    split_cmd->add_option("--seed", split_opts.seed, "Shuffle seed");
    split_cmd->add_option("--test-fraction", split_opts.test_fraction, "Share of test essays")
        ->check(CLI::Range(0.0, 1.0));

    TrainCmdOpts train_opts_cmd;
    CLI::App* train_cmd = app.add_subcommand("train", "Train the stage models");
    train_cmd->add_option("--corpus", train_opts_cmd.corpus, "Corpus directory");
    train_cmd->add_option("--split", train_opts_cmd.split, "Split CSV (train side is used)");
    train_cmd->add_option("--out", train_opts_cmd.out, "Bundle file or directory");
    train_cmd->add_option("--stage", train_opts_cmd.stage, "Keep one stage model only")
        ->check(CLI::IsMember({"all", "identify", "classify", "relations", "stance"}));
    add_train_flags(train_cmd, train_opts_cmd.flags);

    ParseCmdOpts parse_opts;
    CLI::App* parse_cmd = app.add_subcommand("parse", "Parse essays into argument structures");
    parse_cmd->add_option("--models", parse_opts.models, "Model bundle path");
    CLI::Option_group* input = parse_cmd->add_option_group("input", "What to parse");
    input->add_option("--essay", parse_opts.essay, "One raw essay text file");
    input->add_option("--corpus", parse_opts.corpus, "Corpus directory");
    parse_cmd->add_option("--out", parse_opts.out,
                          "Output file (--essay) or directory (--corpus)");
    parse_cmd->add_flag("--json", parse_opts.json, "Emit structure JSON instead of .ann");
    parse_cmd->add_flag("--timings", parse_opts.timings, "Include stage timings in JSON");
    parse_cmd->add_flag("--gold-components", parse_opts.gold_components,
                        "Start from the gold component spans");
    parse_cmd->add_flag("--no-fallback", parse_opts.no_fallback,
                        "Disable the heuristic solver fallback");
    parse_cmd->add_option("--jobs", parse_opts.jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
    parse_cmd->add_option("--features", parse_opts.features, "Feature groups to enable")
        ->check(CLI::IsMember(kFeatureGroups));
    add_phi_flags(parse_cmd, parse_opts.phi);

    EvalCmdOpts eval_opts;
    CLI::App* eval_cmd = app.add_subcommand("eval", "Score models per task");
    eval_cmd->add_option("--corpus", eval_opts.corpus, "Corpus directory");
    eval_cmd->add_option("--split", eval_opts.split, "Split CSV (test side is scored)");
    eval_cmd->add_option("--models", eval_opts.models, "Model bundle path");
    eval_cmd->add_option("--out", eval_opts.out, "Output path (default stdout)");
    eval_cmd->add_option("--task", eval_opts.task, "identify|classify|relations|stance|all")
        ->check(CLI::IsMember({"all", "identify", "classify", "relations", "stance"}));
    eval_cmd->add_option("--folds", eval_opts.folds, "Cross-validate with this many folds")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_flag("--json", eval_opts.json, "Emit JSON instead of CSV");
    eval_cmd->add_flag("--confusion", eval_opts.confusion, "Append confusion matrices");
    eval_cmd->add_flag("--end-to-end", eval_opts.end_to_end,
                       "Also score fully parsed components by exact span");
    eval_cmd->add_option("--jobs", eval_opts.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_phi_flags(eval_cmd, eval_opts.phi);
    add_train_flags(eval_cmd, eval_opts.flags);

    BaselineCmdOpts baseline_opts;
    CLI::App* baseline_cmd =
        app.add_subcommand("baseline", "Score the heuristic and majority baselines");
    baseline_cmd->add_option("--corpus", baseline_opts.corpus, "Corpus directory");
    baseline_cmd->add_option("--split", baseline_opts.split,
                             "Split CSV (majority counts come from the train side)");
    baseline_cmd->add_option("--out", baseline_opts.out, "Output path (default stdout)");
    baseline_cmd->add_option("--task", baseline_opts.task,
                             "identify|classify|relations|stance|all")
        ->check(CLI::IsMember({"all", "identify", "classify", "relations", "stance"}));
    baseline_cmd->add_flag("--json", baseline_opts.json, "Emit JSON instead of CSV");

    AgreementCmdOpts agreement_opts;
    CLI::App* agreement_cmd =
        app.add_subcommand("agreement", "Inter-annotator agreement measures");
    agreement_cmd
        ->add_option("--raters", agreement_opts.raters,
                     "Directory of <essay>.txt and <essay>.<rater>.ann files");
    agreement_cmd->add_option("--out", agreement_opts.out, "Output path (default stdout)");
    agreement_cmd->add_flag("--cpm", agreement_opts.cpm,
                            "Append the component confusion probability matrix");

    SimulateCmdOpts simulate_opts;
    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "Base classifier improvement simulation");
    simulate_cmd->add_option("--corpus", simulate_opts.corpus, "Corpus directory");
    simulate_cmd->add_option("--split", simulate_opts.split, "Split CSV (test side is used)");
    simulate_cmd->add_option("--models", simulate_opts.models, "Model bundle path");
    simulate_cmd->add_option("--out", simulate_opts.out, "Output path (default stdout)");
    simulate_cmd->add_option("--which", simulate_opts.which, "types|relations|both")
        ->check(CLI::IsMember({"types", "relations", "both"}));
    simulate_cmd->add_option("--fractions", simulate_opts.fractions,
                             "Fractions of errors to flip (default 0, 0.1, ..., 1)")
        ->check(CLI::Range(0.0, 1.0));
    simulate_cmd->add_option("--repeats", simulate_opts.repeats, "Random repeats per fraction")
        ->check(CLI::PositiveNumber);
    simulate_cmd->add_option("--seed", simulate_opts.seed, "Flip selection seed");
    simulate_cmd->add_flag("--json", simulate_opts.json, "Emit JSON instead of CSV");
    simulate_cmd->add_option("--jobs", simulate_opts.jobs, "Worker threads")
        ->check(CLI::PositiveNumber);
    add_phi_flags(simulate_cmd, simulate_opts.phi);

    std::string config_path;
    for (CLI::App* cmd : {stats_cmd, validate_cmd, split_cmd, train_cmd, parse_cmd, eval_cmd,
                          baseline_cmd, agreement_cmd, simulate_cmd}) {
        cmd->add_option("--config", config_path,
                        "key=value file of long option names; explicit flags win");
    }

    try {
        app.parse(argc, argv);
        if (!config_path.empty()) {
            for (CLI::App* cmd : app.get_subcommands()) {
                apply_config_file(*cmd, config_path);
            }
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (stats_cmd->parsed()) return run_stats(stats_opts);
        if (validate_cmd->parsed()) return run_validate(validate_opts);
        if (split_cmd->parsed()) return run_split(split_opts);
        if (train_cmd->parsed()) return run_train(train_opts_cmd);
        if (parse_cmd->parsed()) return run_parse(parse_opts);
        if (eval_cmd->parsed()) return run_eval(eval_opts);
        if (baseline_cmd->parsed()) return run_baseline(baseline_opts);
        if (agreement_cmd->parsed()) return run_agreement(agreement_opts);
        if (simulate_cmd->parsed()) return run_simulate(simulate_opts);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
