#pragma once

// Inter-annotator agreement measures over categorical markables and over
// unitized continua, plus helpers that build those structures from multiple
// annotated versions of the same documents.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "argstruct/corpus.hpp"

namespace argstruct::agreement {

// Complete assignment table: every rater assigned one category to every
// markable. rows[m][r] is the category index chosen by rater r.
struct AgreementTable {
    std::vector<std::string> categories;
    std::vector<std::vector<int>> rows;

    int raters() const { return rows.empty() ? 0 : static_cast<int>(rows.front().size()); }
};

// Mean pairwise proportion of markables on which two raters agree.
// Throws DataError when the table has no markables or fewer than two raters.
double observed_agreement(const AgreementTable& table);

// Fleiss' multi-rater kappa. Throws DataError on an empty table and when the
// expected agreement is 1 (every rating in a single category), where the
// statistic is undefined.
double fleiss_kappa(const AgreementTable& table);

// Row-conditional confusion probability matrix over ordered rater pairs.
// matrix[i][j] is an estimate of P(other rater says j | one rater says i).
// Rows for categories never used by any rater are all zero and marked
// undefined instead of carrying NaN.
struct CpmResult {
    std::vector<std::string> categories;
    std::vector<std::vector<double>> matrix;
    std::vector<bool> defined;
};
CpmResult confusion_probability_matrix(const AgreementTable& table);

// One annotator's view of a continuum: units with integer [begin,end)
// positions and a category label. Gaps are implicit.
struct Unit {
    int begin = 0;
    int end = 0;
    std::string category;
};
using Continuum = std::vector<Unit>;

// All annotators over one document's continuum of `length` positions.
struct UnitizingData {
    std::vector<Continuum> annotators;
    int length = 0;
};

// Krippendorff's unitized alpha. Documents are concatenated into a single
// continuum; every document must carry the same number of annotators (>= 2).
// With a category, only units of that category count; without one the
// disagreements of all categories are pooled. Throws DataError when the
// expected disagreement is zero (no units to compare).
double krippendorff_alpha_u(const std::vector<UnitizingData>& docs,
                            const std::optional<std::string>& category = std::nullopt);

// ---------------------------------------------------------------------------
// Markable construction from per-rater parses of the same essays.
// raters[r][d] is essay d as annotated by rater r; texts must be identical
// across raters (ConfigError otherwise). Title paragraphs carry no
// annotations and are excluded from the sentence markables.
// ---------------------------------------------------------------------------
using RaterCorpora = std::vector<std::vector<corpus::Document>>;

// Binary per-type table: a sentence is "Yes" for a rater when any component
// of the given type overlaps it. Categories: Yes, No.
AgreementTable sentence_type_table(const RaterCorpora& raters, corpus::ComponentType type);

// Four-way component table with precedence MajorClaim > Claim > Premise when
// a sentence holds several types. Categories: MajorClaim, Claim, Premise, NoArg.
AgreementTable sentence_component_table(const RaterCorpora& raters);

// Stance recoding: for/against when a stanced claim overlaps the sentence,
// none otherwise. When one rater has several claims with differing stances in
// one sentence, the first component's stance wins; the second member of the
// result counts how often that happened. Categories: for, against, none.
std::pair<AgreementTable, int> sentence_stance_table(const RaterCorpora& raters);

// Ordered sentence pairs within the same non-title paragraph, categorized as
// Attack when any attack relation runs from a component in the first sentence
// to one in the second, Support for a support relation, Not-Linked otherwise.
AgreementTable relation_pair_table(const RaterCorpora& raters);

// Token-level continua for unitized alpha: one document entry per essay, one
// unit per component with the component type as category.
std::vector<UnitizingData> component_continua(const RaterCorpora& raters);

}  // namespace argstruct::agreement
