#pragma once

// The five-stage parser: component identification, component classification,
// relation identification, tree generation, stance recognition. Also the
// heuristic and majority baselines and the trained-model bundle.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "argstruct/corpus.hpp"
#include "argstruct/features.hpp"
#include "argstruct/joint.hpp"
#include "argstruct/learners.hpp"

namespace argstruct::pipeline {

enum class Task { Identify, Classify, Relations, Stance };

std::string to_string(Task t);
Task task_from_string(std::string_view s);

// Everything a parse needs. Optional members stay empty for stages that are
// disabled (run_pipeline throws ConfigError when an enabled stage has no
// model). The feature config records the toggles used at training time; it is
// the default for parsing when the pipeline config leaves features unset.
struct Models {
    std::optional<learners::SequenceModel> identify;
    std::optional<learners::ClassifierModel> classify;
    std::optional<learners::ClassifierModel> relation;
    std::optional<learners::ClassifierModel> stance;
    features::FeatureTables tables;
    features::FeatureConfig features;
    std::optional<features::EmbeddingTable> embeddings;
    std::optional<features::SubjectivityLexicon> subjectivity;
};

struct PipelineConfig {
    // Start from the gold component spans instead of the tagger (stage 1 is
    // skipped exactly; everything downstream is unchanged).
    bool use_gold_components = false;
    // Replace the stage 2/3/5 classifiers with gold lookups. Requires
    // use_gold_components; used by oracle tests and improvement simulations.
    bool oracle = false;
    bool run_classify = true;
    bool run_relations = true;
    bool run_joint = true;
    bool run_stance = true;
    // In paragraphs where the base classifiers predict neither claims nor
    // linked pairs, seed the solver with the relation heuristic baseline.
    bool heuristic_fallback = true;
    joint::Phi phi;
    features::FeatureConfig features;  // empty = use the model bundle's config
    std::string models_path;           // CLI plumbing; run_pipeline ignores it
};

struct StageTrace {
    std::string name;
    double millis = 0.0;
};

struct ParsedEssay {
    corpus::Document doc;  // input document with predicted structure attached
    std::vector<corpus::IobLabel> iob;               // stage 1 (or gold encoding)
    std::vector<corpus::ComponentType> base_types;   // stage 2, before the solver
    std::vector<std::pair<int, int>> base_links;     // stage 3 linked pairs
    std::vector<corpus::RelationType> stances;       // stage 5, per stance markable
    std::vector<int> fallback_paragraphs;            // where the heuristic seeded the solver
    std::vector<StageTrace> stages;
};

// Runs the enabled stages in order. The output document carries the predicted
// components (ids T1..), stance attributes and relations (ids R1..); with all
// structural stages enabled it satisfies the per-paragraph forest rules
// (enforced, DataError on violation). Major claims take part in neither pair
// generation nor the solver.
ParsedEssay run_pipeline(const corpus::Document& doc, const Models& models,
                         const PipelineConfig& config = {});

// Tree generation alone, from explicit base predictions over the gold
// components. linked is indexed like corpus::document_component_pairs; pairs
// touching a major claim are ignored. Used by the improvement simulation.
ParsedEssay structure_from_base(const corpus::Document& doc,
                                const std::vector<corpus::ComponentType>& base_types,
                                const std::vector<int>& linked,
                                const PipelineConfig& config = {});

// JSON structure dump: components, relations, stances, per-stage notes.
// Timings are optional so that repeated runs stay byte-identical.
std::string to_json_string(const ParsedEssay& essay, bool include_timings = false);

// ---------------------------------------------------------------------------
// training
// ---------------------------------------------------------------------------
struct TrainOptions {
    learners::LearnerOptions learner;  // epochs / seed / shuffle, shared
    int classify_degree = 1;
    int relation_degree = 1;
    int stance_degree = 1;
    features::FeatureConfig features;
    // Optional resources, copied into the bundle when given (not owned).
    const features::EmbeddingTable* embeddings = nullptr;
    const features::SubjectivityLexicon* subjectivity = nullptr;
};

// Fits the probability/PMI/cutoff tables on the training documents and trains
// all four stage models. Throws DataError on an unusable training set (for
// example no relations or single-stance corpora).
Models train_models(const std::vector<const corpus::Document*>& train,
                    const TrainOptions& options = {});

std::string to_json_string(const Models& models);
Models models_from_json(const std::string& text);
void save_models(const Models& models, const std::string& path);
Models load_models(const std::string& path);

// ---------------------------------------------------------------------------
// baselines and task markables
// ---------------------------------------------------------------------------

// Components that carry a stance label: claims (attribute) and premises
// (outgoing relation type). Index-ordered, major claims excluded.
std::vector<int> stance_markables(const corpus::Document& doc);

// Gold labels per markable set, shared by training and evaluation. Premises
// without an outgoing relation (invalid documents) default to Support.
std::vector<corpus::RelationType> gold_stances(const corpus::Document& doc);
std::vector<int> gold_links(const corpus::Document& doc);  // per document_component_pairs

// Majority classes measured on training data.
struct MajorityModel {
    corpus::IobLabel iob = corpus::IobLabel::ArgI;
    corpus::ComponentType ctype = corpus::ComponentType::Premise;
    bool linked = false;
    corpus::RelationType stance = corpus::RelationType::Support;
};
MajorityModel majority_from_training(const std::vector<const corpus::Document*>& train);

// Predictions over the gold markables of one document: iob per token, types
// per component, linked per document_component_pairs, stances per stance
// markable.
struct StagePredictions {
    std::vector<corpus::IobLabel> iob;
    std::vector<corpus::ComponentType> types;
    std::vector<int> linked;
    std::vector<corpus::RelationType> stances;
};

StagePredictions majority_baseline(const MajorityModel& model, const corpus::Document& doc);

// Rule baselines: identification selects whole sentences except the first
// two and the last one (title lines are not counted, sentence-final full
// stops stay outside); classification labels the first component of each body
// paragraph Claim, the last of the introduction and the first of the
// conclusion MajorClaim, the rest Premise; relation identification links a
// pair when the target is the first component of a body paragraph; stance
// marks every component in the second-last paragraph Attack.
StagePredictions heuristic_baseline(const corpus::Document& doc);

}  // namespace argstruct::pipeline
