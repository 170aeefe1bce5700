#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace argstruct::corpus {

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

enum class ComponentType { MajorClaim, Claim, Premise };
enum class RelationType { Support, Attack };
enum class Stance { For, Against };

/// Token-level tags for component identification. Enumeration order is the
/// fixed tie-break order used by the sequence decoder.
enum class IobLabel : int { ArgB = 0, ArgI = 1, Outside = 2 };

std::string to_string(ComponentType t);
std::string to_string(RelationType t);
std::string to_string(Stance s);
std::string to_string(IobLabel l);
ComponentType component_type_from_string(std::string_view s);

/// Half-open interval of Unicode scalar value offsets into the essay text.
struct Span {
    int begin = 0;
    int end = 0;
    int length() const { return end - begin; }
    bool contains(int pos) const { return begin <= pos && pos < end; }
    bool overlaps(const Span& o) const { return begin < o.end && o.begin < end; }
    bool operator==(const Span& o) const = default;
};

struct Token {
    std::string surface;
    int char_start = 0;  ///< offset of first scalar value
    int char_end = 0;    ///< one past the last scalar value
    int sent_index = -1; ///< essay-wide sentence index
    int para_index = -1;
    std::string pos;     ///< empty when no POS layer present
    std::string lemma;   ///< empty when no lemma layer present

    Span span() const { return {char_start, char_end}; }
    /// Lemma if provided, lowercased surface otherwise.
    std::string lemma_or_surface() const;
};

struct ArgumentComponent {
    std::string id;  ///< brat id, e.g. "T3"
    ComponentType ctype = ComponentType::Premise;
    Span span;
    std::optional<Stance> stance;        ///< claims only
    std::optional<Span> preceding_span;  ///< same-sentence tokens before the component

    // Token alignment, filled at parse time. Half-open flat token indices.
    int token_begin = -1;
    int token_end = -1;
    int para_index = -1;
};

struct ArgumentativeRelation {
    std::string id;  ///< brat id, e.g. "R1"
    std::string source;
    std::string target;
    RelationType rtype = RelationType::Support;
};

struct Sentence {
    Span span;
    int token_begin = 0;  ///< half-open range into Document::tokens
    int token_end = 0;
    int para_index = -1;
};

struct Paragraph {
    Span span;
    int sent_begin = 0;  ///< half-open range into Document::sentences
    int sent_end = 0;
    int token_begin = 0;
    int token_end = 0;
    bool is_title = false;
};

// Optional linguistic layers shipped next to an essay. All spans use the
// same scalar-value offsets as the annotation file.
struct DependencyEdge {
    int head = -1;  ///< sentence-local token index, -1 for root
    int dependent = -1;
    std::string label;
};

struct DiscourseRelation {
    std::string type;  ///< e.g. "Contrast"
    Span arg1;
    Span arg2;
    bool is_explicit = false;
};

struct SidecarToken {
    Span span;
    std::string pos;
    std::string lemma;
};

struct SidecarLayers {
    std::optional<std::vector<Span>> sentences;
    std::optional<std::vector<SidecarToken>> tokens;
    std::optional<std::vector<std::string>> constituency;  ///< bracketed, one per sentence
    std::optional<std::vector<std::vector<DependencyEdge>>> dependencies;  ///< per sentence
    std::optional<std::vector<DiscourseRelation>> discourse;
    std::optional<std::vector<std::array<double, 5>>> sentiment;  ///< per sentence
};

struct Document {
    std::string essay_id;
    std::string text;                ///< raw UTF-8
    std::vector<char32_t> text_cp;   ///< decoded scalar values; offsets index this
    std::vector<Token> tokens;       ///< flat, offset-ordered
    std::vector<Sentence> sentences;
    std::vector<Paragraph> paragraphs;  ///< includes title paragraphs, flagged
    std::vector<ArgumentComponent> components;  ///< ordered by span.begin
    std::vector<ArgumentativeRelation> relations;

    std::vector<std::string> constituency;  ///< bracketed tree per sentence; empty if absent
    std::vector<std::vector<DependencyEdge>> dependencies;
    std::vector<DiscourseRelation> discourse;
    std::vector<std::array<double, 5>> sentiment;  ///< per sentence

    std::string span_text(Span s) const;
    int component_index(std::string_view id) const;  ///< -1 when absent
    const ArgumentComponent* find_component(std::string_view id) const;
    int paragraph_of(int cp_offset) const;  ///< -1 when outside all paragraphs
    /// Component indices lying in the given paragraph, offset-ordered.
    std::vector<int> components_in_paragraph(int para_index) const;
    /// Paragraph indices that are not title lines, in order.
    std::vector<int> body_like_paragraphs() const;

    bool has_constituency() const { return !constituency.empty(); }
    bool has_dependencies() const { return !dependencies.empty(); }
    bool has_discourse() const { return !discourse.empty(); }
    bool has_sentiment() const { return !sentiment.empty(); }
};

struct ParseOptions {
    /// Treat the first paragraph as the essay title / prompt line.
    bool has_title = true;
};

// ---------------------------------------------------------------------------
// Fallback segmentation (used when no sidecar layer supplies it)
// ---------------------------------------------------------------------------

/// Sentence boundaries after [.?!] runs followed by whitespace, plus line
/// breaks. Returns trimmed sentence spans for the given range.
std::vector<Span> split_sentences(const std::vector<char32_t>& text_cp, Span range);

/// Whitespace tokenization with leading/trailing punctuation split off as
/// single-character tokens. Internal apostrophes and hyphens are kept.
std::vector<Span> tokenize(const std::vector<char32_t>& text_cp, Span range);

/// Paragraph spans: maximal non-empty line runs (split at '\n').
std::vector<Span> split_paragraphs(const std::vector<char32_t>& text_cp);

// ---------------------------------------------------------------------------
// Parsing and serialization
// ---------------------------------------------------------------------------

/// Parses a brat standoff annotation (T/A/R records) against the essay text.
/// Segmentation comes from the sidecar when given, from the fallback
/// segmenter otherwise. Components are aligned to tokens (boundaries that
/// split a token snap outward, logged).
///
/// Throws ParseError (malformed record, with line number), ReferenceError
/// (dangling T reference), ValidityError (offsets out of bounds, overlapping
/// components).
Document parse_brat(std::string essay_id, std::string_view essay_text, std::string_view ann_text,
                    const SidecarLayers* sidecar = nullptr, const ParseOptions& opts = {});

/// Parses the sidecar JSON layer file.
SidecarLayers parse_sidecar_json(std::string_view json_text);

/// Serializes components, stance attributes and relations back to brat
/// standoff records (T, then A, then R lines).
std::string to_ann(const Document& doc);

/// Loads essayXXX.txt [+ .ann, + .json sidecar] files from a directory,
/// sorted by essay id.
std::vector<Document> load_corpus_dir(const std::string& dir, const ParseOptions& opts = {});

// ---------------------------------------------------------------------------
// IOB encoding
// ---------------------------------------------------------------------------

/// Essay-wide token label sequence: first token of each component Arg-B,
/// remaining covered tokens Arg-I, everything else O.
std::vector<IobLabel> encode_iob(const Document& doc);

/// Half-open token index range.
struct TokenSpan {
    int begin = 0;
    int end = 0;
    bool operator==(const TokenSpan& o) const = default;
};

/// Component token spans: each Arg-B opens a span that runs until the next
/// Arg-B/O. An Arg-I run without a preceding Arg-B opens a span at the run
/// start. Runs never cross paragraph boundaries; a label run that does is
/// split at the boundary.
std::vector<TokenSpan> decode_iob(const std::vector<IobLabel>& labels,
                                  const std::vector<Token>& tokens);

// ---------------------------------------------------------------------------
// Pairing, statistics, splits, validation
// ---------------------------------------------------------------------------

/// All ordered index pairs (i, j), i != j, of n items: source-major order.
std::vector<std::pair<int, int>> component_pairs(int n);

/// Same-paragraph ordered component index pairs for a whole document.
std::vector<std::pair<int, int>> document_component_pairs(const Document& doc);

struct CorpusStats {
    long essays = 0;
    long sentences = 0;
    long tokens = 0;
    long paragraphs = 0;  ///< title lines excluded
    long components = 0;
    long major_claims = 0;
    long claims = 0;
    long premises = 0;
    long claims_for = 0;
    long claims_against = 0;
    long support = 0;
    long attack = 0;
    long arguments = 0;         ///< claims with at least one incoming premise
    long serial_arguments = 0;  ///< arguments whose premise subtree has depth > 1

    bool operator==(const CorpusStats& o) const = default;
};

CorpusStats corpus_stats(const std::vector<Document>& corpus);

/// Writes the stats as (field, total, mean per essay, stddev) CSV rows.
std::string stats_to_csv(const CorpusStats& stats, const std::vector<Document>& corpus);

enum class SplitSet { Train, Test };

struct SplitSpec {
    std::map<std::string, SplitSet> assignment;
};

/// Parses the split file: CSV with header "ID;SET" and TRAIN/TEST values.
/// Values may be double-quoted. Throws ParseError on malformed rows and
/// ConfigError on duplicate ids.
SplitSpec parse_split_csv(std::string_view csv);

/// Partitions the corpus. Every corpus essay must be assigned exactly once
/// and every split id must exist in the corpus (ConfigError otherwise).
std::pair<std::vector<const Document*>, std::vector<const Document*>> load_split(
    const SplitSpec& split, const std::vector<Document>& corpus);

struct Violation {
    std::string essay_id;
    std::string kind;  ///< "premise out-degree", "claim out-degree", "cycle", ...
    std::string detail;
};

/// Checks the per-paragraph forest rules: premise out-degree exactly one,
/// claim/major-claim out-degree zero, acyclicity, relations intra-paragraph,
/// stance present iff the component is a claim. Violations are data, the
/// function never throws.
std::vector<Violation> validate_document(const Document& doc);

}  // namespace argstruct::corpus
