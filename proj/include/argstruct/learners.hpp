#pragma once

// Linear models trained with the averaged perceptron: a first-order sequence
// labeler decoded with Viterbi and a multi-class classifier with optional
// explicit second-degree feature conjunctions.

#include <map>
#include <random>
#include <string>
#include <vector>

namespace argstruct {

// Sparse feature vector. An ordered map keeps every iteration deterministic.
using FeatureVector = std::map<std::string, double>;

namespace learners {

struct LearnerOptions {
    int epochs = 10;
    unsigned seed = 1;
    bool shuffle = true;
    bool average = true;
};

// ---------------------------------------------------------------------------
// sequence labeling
// ---------------------------------------------------------------------------
struct SequenceExample {
    std::vector<FeatureVector> tokens;
    std::vector<int> labels;
};

struct SequenceModel {
    std::vector<std::string> labels;
    // feature -> one weight per label
    std::map<std::string, std::vector<double>> emission;
    // transition[prev + 1][cur]; row 0 holds the start transitions
    std::vector<std::vector<double>> transition;
};

// Collins-style averaged perceptron over whole sequences. Throws DataError on
// an empty training set or malformed examples, ConfigError on bad options.
SequenceModel train_sequence(const std::vector<SequenceExample>& examples,
                             const std::vector<std::string>& labels,
                             const LearnerOptions& options = {});

// Viterbi decoding. Score ties prefer the smaller label index, both when
// choosing a predecessor and when choosing the final state.
std::vector<int> decode_sequence(const SequenceModel& model,
                                 const std::vector<FeatureVector>& tokens);

// Total model score of a given labeling (used by tests and diagnostics).
double sequence_score(const SequenceModel& model,
                      const std::vector<FeatureVector>& tokens,
                      const std::vector<int>& labels);

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------
struct ClassifierExample {
    FeatureVector features;
    int label = 0;
};

struct ClassifierModel {
    std::vector<std::string> classes;
    int degree = 1;  // 1 or 2; 2 adds products of feature pairs
    std::map<std::string, std::vector<double>> weights;
    std::vector<double> bias;
};

// Multi-class averaged perceptron. The training set must use at least two
// distinct labels (DataError otherwise). degree must be 1 or 2 (ConfigError).
ClassifierModel train_classifier(const std::vector<ClassifierExample>& examples,
                                 const std::vector<std::string>& classes,
                                 int degree = 1, const LearnerOptions& options = {});

int classify(const ClassifierModel& model, const FeatureVector& features);
std::vector<double> class_scores(const ClassifierModel& model,
                                 const FeatureVector& features);

// Explicit conjunction expansion used by degree-2 models: adds f1&f2 products
// for every unordered feature pair (including squares). Features whose name
// starts with "emb:" stay linear; pairing dense embedding dimensions would
// square the vector size for no benefit.
FeatureVector expand_features(const FeatureVector& features, int degree);

// ---------------------------------------------------------------------------
// serialization (versioned JSON)
// ---------------------------------------------------------------------------
std::string to_json_string(const SequenceModel& model);
std::string to_json_string(const ClassifierModel& model);
SequenceModel sequence_from_json(const std::string& text);
ClassifierModel classifier_from_json(const std::string& text);

// In-place Fisher-Yates on top of the standard-specified mt19937 stream;
// std::shuffle is not guaranteed to produce the same permutation everywhere.
void deterministic_shuffle(std::vector<int>& order, std::mt19937& rng);

}  // namespace learners
}  // namespace argstruct
