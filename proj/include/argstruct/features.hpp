#pragma once

// Feature extraction for all four stages: token-level identification
// features, component classification features, relation pair features, and
// stance features, plus the statistics tables estimated from training data.

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "argstruct/corpus.hpp"
#include "argstruct/learners.hpp"  // FeatureVector

namespace argstruct::features {

// Which feature groups to extract. Group names are the prefixes before ':'
// in feature names; absent config means every group.
struct FeatureConfig {
    std::optional<std::set<std::string>> enabled;

    bool on(const std::string& group) const {
        return !enabled || enabled->count(group) > 0;
    }
};

// Conditional probabilities keyed by the preceding-token n-gram (n = 1..3,
// tokens joined with single spaces) and an outcome name.
struct ProbabilityTable {
    std::map<std::string, std::map<std::string, double>> table;

    double lookup(const std::string& ngram, const std::string& outcome) const;
};

// PMI between a lemma and a relation direction; unseen pairs score 0.
struct PmiTable {
    std::map<std::string, double> incoming;
    std::map<std::string, double> outgoing;

    double value(const std::string& lemma, bool is_incoming) const;
};

// The phrase lists driving the indicator features, tokenized with the corpus
// tokenizer so multi-word phrases match token sequences exactly
// (case-sensitive; "so" and "So" are distinct entries).
struct IndicatorLexicon {
    std::vector<std::vector<std::string>> forward;
    std::vector<std::vector<std::string>> backward;
    std::vector<std::vector<std::string>> thesis;
    std::vector<std::vector<std::string>> rebuttal;
    std::vector<std::string> first_person;

    static const IndicatorLexicon& builtin();
};

// word2vec-style text table: "word v1 v2 ... vd" per line.
struct EmbeddingTable {
    int dim = 0;
    std::map<std::string, std::vector<double>> vectors;
};
EmbeddingTable load_embeddings(const std::string& path);
EmbeddingTable parse_embeddings(const std::string& text);

// word,polarity CSV with polarity in {positive, negative, neutral}.
struct SubjectivityLexicon {
    std::map<std::string, int> polarity;  // +1 / -1 / 0
};
SubjectivityLexicon load_subjectivity(const std::string& path);
SubjectivityLexicon parse_subjectivity(const std::string& text);

// Every trained statistic the extractors consume.
struct FeatureTables {
    ProbabilityTable argb;       // outcome "Arg-B"
    ProbabilityTable type_prob;  // outcomes MajorClaim / Claim / Premise
    PmiTable pmi;
    std::set<std::string> dep_tuples;     // 2000 most frequent
    std::set<std::string> pair_unigrams;  // 500 most frequent
    std::set<std::string> pair_rules;     // 500 most frequent
};

// ---------------------------------------------------------------------------
// estimation (training folds only)
// ---------------------------------------------------------------------------
ProbabilityTable estimate_argb_probabilities(const std::vector<const corpus::Document*>& train);
ProbabilityTable estimate_type_probabilities(const std::vector<const corpus::Document*>& train);
PmiTable estimate_pmi(const std::vector<const corpus::Document*>& train);

// k most frequent items; ties broken lexicographically.
std::set<std::string> most_frequent_dependency_tuples(
    const std::vector<const corpus::Document*>& train, size_t k = 2000);
std::set<std::string> most_frequent_unigrams(
    const std::vector<const corpus::Document*>& train, size_t k = 500);
std::set<std::string> most_frequent_production_rules(
    const std::vector<const corpus::Document*>& train, size_t k = 500);

FeatureTables fit_tables(const std::vector<const corpus::Document*>& train);

// Versioned JSON round-trip for the fitted tables (part of the model bundle).
std::string to_json_string(const FeatureTables& tables);
FeatureTables tables_from_json(const std::string& text);

// ---------------------------------------------------------------------------
// extraction
// ---------------------------------------------------------------------------
// Identification features for one token (groups struct, syn, lexsyn, prob).
FeatureVector token_features(const corpus::Document& doc, int token_index,
                             const FeatureTables& tables, const FeatureConfig& config = {});

// Classification features for one component (groups lex, struct, indic, ctx,
// syn, prob, disc, emb).
FeatureVector component_features(const corpus::Document& doc, int comp_index,
                                 const FeatureTables& tables, const IndicatorLexicon& lexicon,
                                 const EmbeddingTable* embeddings,
                                 const FeatureConfig& config = {});

// Relation features for an ordered same-paragraph pair (groups lex, syn,
// struct, indic, disc, pmi, shno). A cross-paragraph pair violates the
// contract and throws ValidityError.
FeatureVector pair_features(const corpus::Document& doc, int source_index, int target_index,
                            const FeatureTables& tables, const IndicatorLexicon& lexicon,
                            const FeatureConfig& config = {});

// Stance features for one component (groups lex, sent, syn, struct, disc, emb).
FeatureVector stance_features(const corpus::Document& doc, int comp_index,
                              const SubjectivityLexicon* subjectivity,
                              const EmbeddingTable* embeddings,
                              const FeatureConfig& config = {});

// Shared helpers exposed for tests and the pipeline.
std::vector<int> tokens_in_span(const corpus::Document& doc, corpus::Span span);
int intro_paragraph(const corpus::Document& doc);
int conclusion_paragraph(const corpus::Document& doc);

}  // namespace argstruct::features
