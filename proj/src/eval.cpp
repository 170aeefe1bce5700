#include "argstruct/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "argstruct/errors.hpp"

namespace argstruct::eval {

using corpus::ComponentType;
using corpus::Document;
using pipeline::Models;
using pipeline::PipelineConfig;
using pipeline::StagePredictions;
using pipeline::Task;

namespace {

// Chi-square critical value for one degree of freedom at p = .05.
constexpr double kChiSquare05 = 3.841;

std::string format_score(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(4) << v;
    return out.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// confusion matrices
// ---------------------------------------------------------------------------

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> axis_labels)
    : labels(std::move(axis_labels)) {
    counts.assign(labels.size(), std::vector<long>(labels.size(), 0));
}

void ConfusionMatrix::add(int gold, int predicted, long n) {
    if (gold < 0 || gold >= size() || predicted < 0 || predicted >= size()) {
        throw ValidityError("confusion matrix index out of range");
    }
    counts[static_cast<size_t>(gold)][static_cast<size_t>(predicted)] += n;
}

ConfusionMatrix& ConfusionMatrix::operator+=(const ConfusionMatrix& other) {
    if (labels != other.labels) {
        throw ValidityError("cannot accumulate confusion matrices with different labels");
    }
    for (size_t i = 0; i < counts.size(); ++i) {
        for (size_t j = 0; j < counts.size(); ++j) {
            counts[i][j] += other.counts[i][j];
        }
    }
    return *this;
}

long ConfusionMatrix::total() const {
    long sum = 0;
    for (const auto& row : counts) {
        for (long c : row) sum += c;
    }
    return sum;
}

MacroScores macro_prf(const ConfusionMatrix& cm) {
    const int k = cm.size();
    if (k < 2) {
        throw ValidityError("macro averaging needs at least two classes");
    }
    MacroScores out;
    long trace = 0;
    for (int i = 0; i < k; ++i) {
        long tp = cm.counts[static_cast<size_t>(i)][static_cast<size_t>(i)];
        long row = 0;
        long col = 0;
        for (int j = 0; j < k; ++j) {
            row += cm.counts[static_cast<size_t>(i)][static_cast<size_t>(j)];
            col += cm.counts[static_cast<size_t>(j)][static_cast<size_t>(i)];
        }
        ClassScores cs;
        cs.label = cm.labels[static_cast<size_t>(i)];
        cs.precision = col > 0 ? static_cast<double>(tp) / static_cast<double>(col) : 0.0;
        cs.recall = row > 0 ? static_cast<double>(tp) / static_cast<double>(row) : 0.0;
        cs.f1 = cs.precision + cs.recall > 0.0
                    ? 2.0 * cs.precision * cs.recall / (cs.precision + cs.recall)
                    : 0.0;
        out.per_class.push_back(cs);
        out.precision += cs.precision;
        out.recall += cs.recall;
        out.f1 += cs.f1;
        trace += tp;
    }
    out.precision /= k;
    out.recall /= k;
    out.f1 /= k;
    const long n = cm.total();
    out.accuracy = n > 0 ? static_cast<double>(trace) / static_cast<double>(n) : 0.0;
    return out;
}

MacroScores average_scores(const std::vector<MacroScores>& runs) {
    if (runs.empty()) {
        throw ValidityError("cannot average an empty score list");
    }
    MacroScores out;
    out.per_class.resize(runs.front().per_class.size());
    for (size_t c = 0; c < out.per_class.size(); ++c) {
        out.per_class[c].label = runs.front().per_class[c].label;
    }
    for (const MacroScores& run : runs) {
        if (run.per_class.size() != out.per_class.size()) {
            throw ValidityError("score lists disagree on the class set");
        }
        out.precision += run.precision;
        out.recall += run.recall;
        out.f1 += run.f1;
        out.accuracy += run.accuracy;
        for (size_t c = 0; c < out.per_class.size(); ++c) {
            if (run.per_class[c].label != out.per_class[c].label) {
                throw ValidityError("score lists disagree on the class set");
            }
            out.per_class[c].precision += run.per_class[c].precision;
            out.per_class[c].recall += run.per_class[c].recall;
            out.per_class[c].f1 += run.per_class[c].f1;
        }
    }
    const double n = static_cast<double>(runs.size());
    out.precision /= n;
    out.recall /= n;
    out.f1 /= n;
    out.accuracy /= n;
    for (ClassScores& cs : out.per_class) {
        cs.precision /= n;
        cs.recall /= n;
        cs.f1 /= n;
    }
    return out;
}

// ---------------------------------------------------------------------------
// task markables
// ---------------------------------------------------------------------------

const std::vector<std::string>& task_labels(Task task) {
    static const std::vector<std::string> iob = {"Arg-B", "Arg-I", "O"};
    static const std::vector<std::string> types = {"MajorClaim", "Claim", "Premise"};
    static const std::vector<std::string> links = {"NotLinked", "Linked"};
    static const std::vector<std::string> stances = {"Support", "Attack"};
    switch (task) {
        case Task::Identify: return iob;
        case Task::Classify: return types;
        case Task::Relations: return links;
        case Task::Stance: return stances;
    }
    throw ConfigError("unknown task");
}

ConfusionMatrix make_task_matrix(Task task) { return ConfusionMatrix(task_labels(task)); }

std::vector<int> gold_task_labels(const Document& doc, Task task) {
    std::vector<int> out;
    switch (task) {
        case Task::Identify:
            for (corpus::IobLabel l : corpus::encode_iob(doc)) out.push_back(static_cast<int>(l));
            break;
        case Task::Classify:
            for (const corpus::ArgumentComponent& c : doc.components) {
                out.push_back(static_cast<int>(c.ctype));
            }
            break;
        case Task::Relations:
            return pipeline::gold_links(doc);
        case Task::Stance:
            for (corpus::RelationType s : pipeline::gold_stances(doc)) {
                out.push_back(static_cast<int>(s));
            }
            break;
    }
    return out;
}

std::vector<int> predicted_task_labels(const StagePredictions& p, Task task) {
    std::vector<int> out;
    switch (task) {
        case Task::Identify:
            for (corpus::IobLabel l : p.iob) out.push_back(static_cast<int>(l));
            break;
        case Task::Classify:
            for (ComponentType t : p.types) out.push_back(static_cast<int>(t));
            break;
        case Task::Relations:
            return p.linked;
        case Task::Stance:
            for (corpus::RelationType s : p.stances) out.push_back(static_cast<int>(s));
            break;
    }
    return out;
}

void add_labels(ConfusionMatrix& cm, const std::vector<int>& gold,
                const std::vector<int>& predicted) {
    if (gold.size() != predicted.size()) {
        throw ValidityError("gold and predicted label counts differ");
    }
    for (size_t i = 0; i < gold.size(); ++i) {
        cm.add(gold[i], predicted[i]);
    }
}

namespace {

// One stage against the gold structure of its upstream stages; only the
// vector belonging to the task is filled.
StagePredictions predict_stage(const Document& doc, const Models& models, Task task,
                               const PipelineConfig& base) {
    PipelineConfig cfg = base;
    cfg.oracle = false;
    cfg.use_gold_components = task != Task::Identify;
    cfg.run_classify = task == Task::Classify;
    cfg.run_relations = task == Task::Relations;
    cfg.run_joint = false;
    cfg.run_stance = task == Task::Stance;
    pipeline::ParsedEssay essay = run_pipeline(doc, models, cfg);
    StagePredictions p;
    switch (task) {
        case Task::Identify:
            p.iob = std::move(essay.iob);
            break;
        case Task::Classify:
            p.types = std::move(essay.base_types);
            break;
        case Task::Relations: {
            const std::set<std::pair<int, int>> linked(essay.base_links.begin(),
                                                       essay.base_links.end());
            for (const auto& pair : corpus::document_component_pairs(doc)) {
                p.linked.push_back(linked.count(pair) ? 1 : 0);
            }
            break;
        }
        case Task::Stance:
            p.stances = std::move(essay.stances);
            break;
    }
    return p;
}

}  // namespace

StagePredictions model_predictions(const Document& doc, const Models& models,
                                   const PipelineConfig& config) {
    StagePredictions p;
    p.iob = predict_stage(doc, models, Task::Identify, config).iob;
    p.types = predict_stage(doc, models, Task::Classify, config).types;
    p.linked = predict_stage(doc, models, Task::Relations, config).linked;
    p.stances = predict_stage(doc, models, Task::Stance, config).stances;
    return p;
}

TaskEvaluation evaluate_predictions(const std::vector<const Document*>& docs,
                                    const std::vector<StagePredictions>& predictions,
                                    Task task) {
    if (docs.size() != predictions.size()) {
        throw ValidityError("document and prediction counts differ");
    }
    TaskEvaluation out;
    out.matrix = make_task_matrix(task);
    for (size_t d = 0; d < docs.size(); ++d) {
        add_labels(out.matrix, gold_task_labels(*docs[d], task),
                   predicted_task_labels(predictions[d], task));
    }
    out.scores = macro_prf(out.matrix);
    return out;
}

TaskEvaluation evaluate_task(const std::vector<const Document*>& docs, const Models& models,
                             Task task, const PipelineConfig& config) {
    TaskEvaluation out;
    out.matrix = make_task_matrix(task);
    for (const Document* doc : docs) {
        add_labels(out.matrix, gold_task_labels(*doc, task),
                   predicted_task_labels(predict_stage(*doc, models, task, config), task));
    }
    out.scores = macro_prf(out.matrix);
    return out;
}

// ---------------------------------------------------------------------------
// cross-validation
// ---------------------------------------------------------------------------

std::vector<std::vector<int>> fold_assignment(int n, int folds, unsigned seed) {
    if (folds < 2) {
        throw ConfigError("cross-validation needs at least two folds");
    }
    if (folds > n) {
        throw ConfigError("more folds than documents");
    }
    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::mt19937 rng(seed);
    learners::deterministic_shuffle(order, rng);
    std::vector<std::vector<int>> out(static_cast<size_t>(folds));
    for (int i = 0; i < n; ++i) {
        out[static_cast<size_t>(i % folds)].push_back(order[static_cast<size_t>(i)]);
    }
    return out;
}

CrossValidationResult cross_validate(const std::vector<const Document*>& docs, int folds,
                                     Task task, const pipeline::TrainOptions& options,
                                     unsigned seed) {
    const auto assignment = fold_assignment(static_cast<int>(docs.size()), folds, seed);
    CrossValidationResult res;
    res.matrix = make_task_matrix(task);
    for (size_t f = 0; f < assignment.size(); ++f) {
        std::vector<const Document*> train;
        for (size_t g = 0; g < assignment.size(); ++g) {
            if (g == f) continue;
            for (int idx : assignment[g]) train.push_back(docs[static_cast<size_t>(idx)]);
        }
        const Models models = pipeline::train_models(train, options);
        std::vector<std::string> ids;
        for (int idx : assignment[f]) {
            const Document& doc = *docs[static_cast<size_t>(idx)];
            add_labels(res.matrix, gold_task_labels(doc, task),
                       predicted_task_labels(predict_stage(doc, models, task, {}), task));
            ids.push_back(doc.essay_id);
        }
        res.fold_ids.push_back(std::move(ids));
    }
    res.scores = macro_prf(res.matrix);
    return res;
}

// ---------------------------------------------------------------------------
// significance testing
// ---------------------------------------------------------------------------

PairedOutcomes paired_outcomes(const std::vector<int>& gold, const std::vector<int>& a,
                               const std::vector<int>& b) {
    if (gold.size() != a.size() || gold.size() != b.size()) {
        throw ValidityError("paired outcome vectors differ in length");
    }
    PairedOutcomes out;
    out.outcomes.reserve(gold.size());
    for (size_t i = 0; i < gold.size(); ++i) {
        out.outcomes.emplace_back(a[i] == gold[i], b[i] == gold[i]);
    }
    return out;
}

McNemarResult mcnemar(const PairedOutcomes& outcomes) {
    McNemarResult res;
    for (const auto& [a_ok, b_ok] : outcomes.outcomes) {
        if (a_ok && !b_ok) res.b++;
        if (!a_ok && b_ok) res.c++;
    }
    const long disagree = res.b + res.c;
    if (disagree == 0) {
        return res;  // identical error patterns, nothing to test
    }
    const double diff = std::abs(static_cast<double>(res.b - res.c)) - 1.0;
    res.statistic = diff * diff / static_cast<double>(disagree);
    res.significant = res.statistic > kChiSquare05;
    return res;
}

// ---------------------------------------------------------------------------
// improvement simulation
// ---------------------------------------------------------------------------

std::vector<int> parsed_links(const pipeline::ParsedEssay& essay) {
    std::set<std::pair<int, int>> edges;
    for (const corpus::ArgumentativeRelation& r : essay.doc.relations) {
        const int s = essay.doc.component_index(r.source);
        const int t = essay.doc.component_index(r.target);
        if (s >= 0 && t >= 0) edges.insert({s, t});
    }
    std::vector<int> out;
    for (const auto& pair : corpus::document_component_pairs(essay.doc)) {
        out.push_back(edges.count(pair) ? 1 : 0);
    }
    return out;
}

std::vector<SimulationPoint> improvement_simulation(const std::vector<const Document*>& docs,
                                                    const std::vector<StagePredictions>& base,
                                                    const std::vector<double>& fractions,
                                                    ImproveWhich which,
                                                    const PipelineConfig& config, unsigned seed,
                                                    int repeats) {
    if (docs.size() != base.size()) {
        throw ValidityError("document and prediction counts differ");
    }
    if (repeats < 1) {
        throw ConfigError("simulation needs at least one repeat");
    }
    std::vector<std::vector<ComponentType>> gold_types(docs.size());
    std::vector<std::vector<int>> gold_linked(docs.size());
    // Pool of wrong base predictions as (document, markable) addresses.
    std::vector<std::pair<int, int>> type_pool;
    std::vector<std::pair<int, int>> link_pool;
    for (size_t d = 0; d < docs.size(); ++d) {
        const Document& doc = *docs[d];
        for (const corpus::ArgumentComponent& c : doc.components) {
            gold_types[d].push_back(c.ctype);
        }
        gold_linked[d] = pipeline::gold_links(doc);
        if (base[d].types.size() != gold_types[d].size() ||
            base[d].linked.size() != gold_linked[d].size()) {
            throw ValidityError("base predictions do not match the document markables");
        }
        for (size_t i = 0; i < gold_types[d].size(); ++i) {
            if (base[d].types[i] != gold_types[d][i]) {
                type_pool.emplace_back(static_cast<int>(d), static_cast<int>(i));
            }
        }
        for (size_t k = 0; k < gold_linked[d].size(); ++k) {
            if (base[d].linked[k] != gold_linked[d][k]) {
                link_pool.emplace_back(static_cast<int>(d), static_cast<int>(k));
            }
        }
    }

    std::vector<double> component_sum(fractions.size(), 0.0);
    std::vector<double> relation_sum(fractions.size(), 0.0);
    for (int rep = 0; rep < repeats; ++rep) {
        // Nested flip sets: one shuffled order per repeat, a fraction flips
        // its prefix, so larger fractions extend smaller ones.
        std::mt19937 rng(seed + static_cast<unsigned>(rep));
        std::vector<int> type_order(static_cast<size_t>(type_pool.size()));
        std::iota(type_order.begin(), type_order.end(), 0);
        learners::deterministic_shuffle(type_order, rng);
        std::vector<int> link_order(static_cast<size_t>(link_pool.size()));
        std::iota(link_order.begin(), link_order.end(), 0);
        learners::deterministic_shuffle(link_order, rng);

        for (size_t fi = 0; fi < fractions.size(); ++fi) {
            const double f = fractions[fi];
            if (f < 0.0 || f > 1.0) {
                throw ConfigError("simulation fractions must lie in [0, 1]");
            }
            std::vector<std::vector<ComponentType>> types;
            std::vector<std::vector<int>> linked;
            types.reserve(docs.size());
            linked.reserve(docs.size());
            for (size_t d = 0; d < docs.size(); ++d) {
                types.push_back(base[d].types);
                linked.push_back(base[d].linked);
            }
            if (which != ImproveWhich::Relations) {
                const long k = std::lround(f * static_cast<double>(type_pool.size()));
                for (long i = 0; i < k; ++i) {
                    const auto [d, m] = type_pool[static_cast<size_t>(type_order[static_cast<size_t>(i)])];
                    types[static_cast<size_t>(d)][static_cast<size_t>(m)] =
                        gold_types[static_cast<size_t>(d)][static_cast<size_t>(m)];
                }
            }
            if (which != ImproveWhich::Types) {
                const long k = std::lround(f * static_cast<double>(link_pool.size()));
                for (long i = 0; i < k; ++i) {
                    const auto [d, m] = link_pool[static_cast<size_t>(link_order[static_cast<size_t>(i)])];
                    linked[static_cast<size_t>(d)][static_cast<size_t>(m)] =
                        gold_linked[static_cast<size_t>(d)][static_cast<size_t>(m)];
                }
            }
            ConfusionMatrix cm_types = make_task_matrix(Task::Classify);
            ConfusionMatrix cm_links = make_task_matrix(Task::Relations);
            for (size_t d = 0; d < docs.size(); ++d) {
                const pipeline::ParsedEssay essay =
                    pipeline::structure_from_base(*docs[d], types[d], linked[d], config);
                for (size_t i = 0; i < essay.doc.components.size(); ++i) {
                    cm_types.add(static_cast<int>(gold_types[d][i]),
                                 static_cast<int>(essay.doc.components[i].ctype));
                }
                add_labels(cm_links, gold_linked[d], parsed_links(essay));
            }
            component_sum[fi] += macro_prf(cm_types).f1;
            relation_sum[fi] += macro_prf(cm_links).f1;
        }
    }

    std::vector<SimulationPoint> curve;
    for (size_t fi = 0; fi < fractions.size(); ++fi) {
        SimulationPoint pt;
        pt.fraction = fractions[fi];
        pt.component_f1 = component_sum[fi] / repeats;
        pt.relation_f1 = relation_sum[fi] / repeats;
        curve.push_back(pt);
    }
    return curve;
}

// ---------------------------------------------------------------------------
// end-to-end component scoring
// ---------------------------------------------------------------------------

SpanMatchScores end_to_end_components(const std::vector<const Document*>& gold,
                                      const std::vector<const pipeline::ParsedEssay*>& parsed) {
    if (gold.size() != parsed.size()) {
        throw ValidityError("document and parse counts differ");
    }
    const auto& labels = task_labels(Task::Classify);
    const int k = static_cast<int>(labels.size());
    std::vector<long> tp(static_cast<size_t>(k), 0);
    std::vector<long> predicted(static_cast<size_t>(k), 0);
    std::vector<long> gold_count(static_cast<size_t>(k), 0);
    SpanMatchScores out;
    for (size_t d = 0; d < gold.size(); ++d) {
        std::map<std::pair<int, int>, ComponentType> gold_spans;
        for (const corpus::ArgumentComponent& c : gold[d]->components) {
            gold_spans[{c.span.begin, c.span.end}] = c.ctype;
            gold_count[static_cast<size_t>(c.ctype)]++;
            out.gold++;
        }
        for (const corpus::ArgumentComponent& c : parsed[d]->doc.components) {
            predicted[static_cast<size_t>(c.ctype)]++;
            out.predicted++;
            const auto it = gold_spans.find({c.span.begin, c.span.end});
            if (it == gold_spans.end()) continue;
            out.matched_spans++;
            if (it->second == c.ctype) tp[static_cast<size_t>(c.ctype)]++;
        }
    }
    for (int i = 0; i < k; ++i) {
        ClassScores cs;
        cs.label = labels[static_cast<size_t>(i)];
        const long tpi = tp[static_cast<size_t>(i)];
        cs.precision = predicted[static_cast<size_t>(i)] > 0
                           ? static_cast<double>(tpi) / static_cast<double>(predicted[static_cast<size_t>(i)])
                           : 0.0;
        cs.recall = gold_count[static_cast<size_t>(i)] > 0
                        ? static_cast<double>(tpi) / static_cast<double>(gold_count[static_cast<size_t>(i)])
                        : 0.0;
        cs.f1 = cs.precision + cs.recall > 0.0
                    ? 2.0 * cs.precision * cs.recall / (cs.precision + cs.recall)
                    : 0.0;
        out.per_class.push_back(cs);
        out.macro_f1 += cs.f1;
    }
    out.macro_f1 /= k;
    return out;
}

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

std::string scores_to_csv(const std::string& task, const MacroScores& scores) {
    std::ostringstream out;
    out << "task,class,precision,recall,f1\n";
    for (const ClassScores& cs : scores.per_class) {
        out << task << ',' << cs.label << ',' << format_score(cs.precision) << ','
            << format_score(cs.recall) << ',' << format_score(cs.f1) << '\n';
    }
    out << task << ",macro," << format_score(scores.precision) << ','
        << format_score(scores.recall) << ',' << format_score(scores.f1) << '\n';
    return out.str();
}

std::string scores_to_json(const std::string& task, const MacroScores& scores) {
    nlohmann::ordered_json j;
    j["task"] = task;
    j["precision"] = scores.precision;
    j["recall"] = scores.recall;
    j["f1"] = scores.f1;
    j["accuracy"] = scores.accuracy;
    j["classes"] = nlohmann::ordered_json::array();
    for (const ClassScores& cs : scores.per_class) {
        nlohmann::ordered_json c;
        c["class"] = cs.label;
        c["precision"] = cs.precision;
        c["recall"] = cs.recall;
        c["f1"] = cs.f1;
        j["classes"].push_back(c);
    }
    return j.dump(2) + "\n";
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
    std::ostringstream out;
    out << "gold";
    for (const std::string& l : cm.labels) out << ',' << l;
    out << '\n';
    for (int i = 0; i < cm.size(); ++i) {
        out << cm.labels[static_cast<size_t>(i)];
        for (int j = 0; j < cm.size(); ++j) {
            out << ',' << cm.counts[static_cast<size_t>(i)][static_cast<size_t>(j)];
        }
        out << '\n';
    }
    return out.str();
}

std::string curve_to_csv(const std::vector<SimulationPoint>& curve) {
    std::ostringstream out;
    out << "fraction,component_f1,relation_f1\n";
    for (const SimulationPoint& pt : curve) {
        out << format_score(pt.fraction) << ',' << format_score(pt.component_f1) << ','
            << format_score(pt.relation_f1) << '\n';
    }
    return out.str();
}

}  // namespace argstruct::eval
