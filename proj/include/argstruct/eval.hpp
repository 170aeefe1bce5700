#pragma once

// Evaluation harness: fold-accumulated confusion matrices, macro-averaged
// precision/recall/F1, McNemar significance testing, and the base-classifier
// improvement simulation.

#include <string>
#include <utility>
#include <vector>

#include "argstruct/corpus.hpp"
#include "argstruct/pipeline.hpp"

namespace argstruct::eval {

// Square count matrix with gold rows and predicted columns.
struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<long>> counts;

    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> axis_labels);

    int size() const { return static_cast<int>(labels.size()); }
    void add(int gold, int predicted, long n = 1);
    // Fold accumulation; the axes must match (ValidityError otherwise).
    ConfusionMatrix& operator+=(const ConfusionMatrix& other);
    long total() const;
    bool operator==(const ConfusionMatrix&) const = default;
};

struct ClassScores {
    std::string label;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct MacroScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double accuracy = 0.0;
    std::vector<ClassScores> per_class;
};

// Unweighted macro averaging; zero denominators score zero. Needs at least
// two classes (ValidityError).
MacroScores macro_prf(const ConfusionMatrix& cm);

// Field-wise mean over several score sets (used to average annotator pairs
// into a human upper bound). Per-class lists must agree on labels.
MacroScores average_scores(const std::vector<MacroScores>& runs);

// ---------------------------------------------------------------------------
// task markables
// ---------------------------------------------------------------------------
// Identification is scored token-wise over Arg-B/Arg-I/O, classification per
// gold component, relation identification per ordered same-paragraph pair,
// stance per claim and premise.

const std::vector<std::string>& task_labels(pipeline::Task task);
ConfusionMatrix make_task_matrix(pipeline::Task task);
std::vector<int> gold_task_labels(const corpus::Document& doc, pipeline::Task task);
std::vector<int> predicted_task_labels(const pipeline::StagePredictions& p, pipeline::Task task);
// Adds aligned gold/predicted label vectors (ValidityError on size mismatch).
void add_labels(ConfusionMatrix& cm, const std::vector<int>& gold,
                const std::vector<int>& predicted);

// Per-stage predictions of a trained bundle over the gold markables: the
// tagger runs on raw text, every other stage runs against the gold structure
// of its upstream stages, mirroring the per-stage evaluation protocol.
pipeline::StagePredictions model_predictions(const corpus::Document& doc,
                                             const pipeline::Models& models,
                                             const pipeline::PipelineConfig& config = {});

struct TaskEvaluation {
    ConfusionMatrix matrix;
    MacroScores scores;
};

TaskEvaluation evaluate_predictions(const std::vector<const corpus::Document*>& docs,
                                    const std::vector<pipeline::StagePredictions>& predictions,
                                    pipeline::Task task);
TaskEvaluation evaluate_task(const std::vector<const corpus::Document*>& docs,
                             const pipeline::Models& models, pipeline::Task task,
                             const pipeline::PipelineConfig& config = {});

// ---------------------------------------------------------------------------
// cross-validation
// ---------------------------------------------------------------------------

// Deterministic essay-level partition: a seeded shuffle dealt round-robin
// into balanced folds. Throws ConfigError unless 2 <= folds <= n.
std::vector<std::vector<int>> fold_assignment(int n, int folds, unsigned seed);

struct CrossValidationResult {
    ConfusionMatrix matrix;  // accumulated over folds, scored once
    MacroScores scores;
    std::vector<std::vector<std::string>> fold_ids;
};

CrossValidationResult cross_validate(const std::vector<const corpus::Document*>& docs, int folds,
                                     pipeline::Task task, const pipeline::TrainOptions& options,
                                     unsigned seed);

// ---------------------------------------------------------------------------
// significance testing
// ---------------------------------------------------------------------------

struct PairedOutcomes {
    std::vector<std::pair<bool, bool>> outcomes;  // (a correct, b correct)
};

PairedOutcomes paired_outcomes(const std::vector<int>& gold, const std::vector<int>& a,
                               const std::vector<int>& b);

struct McNemarResult {
    long b = 0;  // a correct, b wrong
    long c = 0;  // a wrong, b correct
    double statistic = 0.0;
    bool significant = false;  // chi-square above 3.841 (p = .05, 1 df)
};

McNemarResult mcnemar(const PairedOutcomes& outcomes);

// ---------------------------------------------------------------------------
// improvement simulation
// ---------------------------------------------------------------------------

enum class ImproveWhich { Types, Relations, Both };

struct SimulationPoint {
    double fraction = 0.0;
    double component_f1 = 0.0;
    double relation_f1 = 0.0;
};

// For each fraction, flips that share of the wrong base predictions to gold
// (chosen uniformly at random across the corpus), reruns the tree stage, and
// scores the resulting components and relations; points average the repeats.
std::vector<SimulationPoint> improvement_simulation(
    const std::vector<const corpus::Document*>& docs,
    const std::vector<pipeline::StagePredictions>& base, const std::vector<double>& fractions,
    ImproveWhich which, const pipeline::PipelineConfig& config, unsigned seed, int repeats = 3);

// Linked/NotLinked labels of a parsed essay per ordered component pair.
std::vector<int> parsed_links(const pipeline::ParsedEssay& essay);

// ---------------------------------------------------------------------------
// end-to-end component scoring
// ---------------------------------------------------------------------------

// Predicted components count as correct when an identically-spanned gold
// component of the same type exists; there is no partial-overlap credit.
struct SpanMatchScores {
    std::vector<ClassScores> per_class;  // MajorClaim / Claim / Premise
    double macro_f1 = 0.0;
    long matched_spans = 0;  // span matches regardless of type
    long predicted = 0;
    long gold = 0;
};

SpanMatchScores end_to_end_components(const std::vector<const corpus::Document*>& gold,
                                      const std::vector<const pipeline::ParsedEssay*>& parsed);

// ---------------------------------------------------------------------------
// emission
// ---------------------------------------------------------------------------

// Rows of task,class,precision,recall,f1 with a trailing macro row.
std::string scores_to_csv(const std::string& task, const MacroScores& scores);
std::string scores_to_json(const std::string& task, const MacroScores& scores);
std::string confusion_to_csv(const ConfusionMatrix& cm);
std::string curve_to_csv(const std::vector<SimulationPoint>& curve);

}  // namespace argstruct::eval
