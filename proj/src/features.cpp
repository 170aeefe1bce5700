#include "argstruct/features.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "argstruct/errors.hpp"
#include "argstruct/io.hpp"
#include "argstruct/log.hpp"
#include "argstruct/syntax.hpp"
#include "argstruct/text.hpp"

namespace argstruct::features {

using corpus::ArgumentComponent;
using corpus::Document;
using corpus::Span;

namespace {

// A missing optional layer disables the groups depending on it; say so once
// per process instead of flooding the log. Feature extraction may run from
// several threads, so the seen-set is locked.
void warn_once(const std::string& key, const std::string& message) {
    static std::mutex mu;
    static std::set<std::string> warned;
    bool fresh;
    {
        const std::lock_guard<std::mutex> lock(mu);
        fresh = warned.insert(key).second;
    }
    if (fresh) log::warn(message);
}

bool has_pos_tags(const Document& doc) {
    for (const auto& t : doc.tokens)
        if (!t.pos.empty()) return true;
    return false;
}

bool is_punct_token(const corpus::Token& t) {
    const auto cps = text::decode_utf8(t.surface);
    if (cps.empty()) return false;
    for (char32_t c : cps)
        if (!text::is_punct(c)) return false;
    return true;
}

// n-gram of the n token surfaces directly before index i, all inside the
// token's paragraph; empty when the window is unavailable.
std::string preceding_ngram(const Document& doc, int i, int n) {
    if (i - n < 0 || i >= static_cast<int>(doc.tokens.size())) return {};
    const int para = doc.tokens[i].para_index;
    std::string out;
    for (int k = i - n; k < i; ++k) {
        if (doc.tokens[k].para_index != para) return {};
        if (!out.empty()) out += ' ';
        out += doc.tokens[k].surface;
    }
    return out;
}

// First token index of the component-plus-preceding-tokens region.
int region_begin(const Document& doc, const ArgumentComponent& comp) {
    if (!comp.preceding_span) return comp.token_begin;
    const auto pre = tokens_in_span(doc, *comp.preceding_span);
    return pre.empty() ? comp.token_begin : std::min(pre.front(), comp.token_begin);
}

std::vector<std::string> surfaces(const Document& doc, int begin, int end) {
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(std::max(0, end - begin)));
    for (int i = begin; i < end; ++i) out.push_back(doc.tokens[i].surface);
    return out;
}

bool contains_sequence(const std::vector<std::string>& hay, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > hay.size()) return false;
    for (size_t i = 0; i + needle.size() <= hay.size(); ++i) {
        bool ok = true;
        for (size_t j = 0; j < needle.size(); ++j)
            if (hay[i + j] != needle[j]) { ok = false; break; }
        if (ok) return true;
    }
    return false;
}

bool any_indicator(const std::vector<std::vector<std::string>>& phrases,
                   const std::vector<std::string>& hay) {
    for (const auto& p : phrases)
        if (contains_sequence(hay, p)) return true;
    return false;
}

const std::vector<std::vector<std::string>>& indicator_list(const IndicatorLexicon& lex,
                                                            const std::string& kind) {
    if (kind == "forward") return lex.forward;
    if (kind == "backward") return lex.backward;
    if (kind == "thesis") return lex.thesis;
    return lex.rebuttal;
}

const std::array<std::string, 4> kIndicatorKinds = {"forward", "backward", "thesis", "rebuttal"};

// Sentence tree parsed only when its leaves line up with the sentence
// tokens; anything else means the layer does not describe this segmentation.
std::optional<syntax::ParseTree> sentence_tree(const Document& doc, int sent_index) {
    if (sent_index < 0 || sent_index >= static_cast<int>(doc.constituency.size())) return std::nullopt;
    const auto& s = doc.sentences[sent_index];
    syntax::ParseTree tree;
    try {
        tree = syntax::parse_tree(doc.constituency[sent_index]);
    } catch (const ParseError&) {
        return std::nullopt;
    }
    if (static_cast<int>(tree.leaves.size()) != s.token_end - s.token_begin) return std::nullopt;
    return tree;
}

// Subtree leaf range as flat token indices.
std::pair<int, int> subtree_token_range(const syntax::ParseTree& tree, int node, int sent_token_begin) {
    int lo = INT32_MAX, hi = -1;
    std::vector<int> stack = {node};
    while (!stack.empty()) {
        int n = stack.back();
        stack.pop_back();
        if (tree.nodes[n].is_leaf()) {
            lo = std::min(lo, tree.nodes[n].leaf_index);
            hi = std::max(hi, tree.nodes[n].leaf_index);
        }
        for (int c : tree.nodes[n].children) stack.push_back(c);
    }
    return {sent_token_begin + lo, sent_token_begin + hi + 1};
}

std::vector<int> sentences_of(const Document& doc, int token_begin, int token_end) {
    std::vector<int> out;
    for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
        if (doc.sentences[s].token_begin < token_end && token_begin < doc.sentences[s].token_end)
            out.push_back(s);
    }
    return out;
}

// Production rules of constituents lying entirely inside the token range.
std::vector<std::string> rules_in_range(const Document& doc, int token_begin, int token_end) {
    std::vector<std::string> out;
    for (int s : sentences_of(doc, token_begin, token_end)) {
        auto tree = sentence_tree(doc, s);
        if (!tree) continue;
        for (int n = 0; n < static_cast<int>(tree->nodes.size()); ++n) {
            const auto& node = tree->nodes[n];
            if (node.is_leaf() || node.children.empty()) continue;
            if (node.children.size() == 1 && tree->nodes[node.children[0]].is_leaf()) continue;
            auto [lo, hi] = subtree_token_range(*tree, n, doc.sentences[s].token_begin);
            if (lo < token_begin || hi > token_end) continue;
            std::string rule = node.label + " ->";
            for (int c : node.children) rule += " " + tree->nodes[c].label;
            out.push_back(rule);
        }
    }
    return out;
}

// Lowercased leaf word sequences of NP / VP constituents inside the range.
std::vector<std::vector<std::string>> phrases_in_range(const Document& doc, int token_begin,
                                                       int token_end, const std::string& label) {
    std::vector<std::vector<std::string>> out;
    for (int s : sentences_of(doc, token_begin, token_end)) {
        auto tree = sentence_tree(doc, s);
        if (!tree) continue;
        for (int n = 0; n < static_cast<int>(tree->nodes.size()); ++n) {
            if (tree->nodes[n].is_leaf() || tree->nodes[n].label != label) continue;
            auto [lo, hi] = subtree_token_range(*tree, n, doc.sentences[s].token_begin);
            if (lo < token_begin || hi > token_end) continue;
            std::vector<std::string> words;
            for (int i = lo; i < hi; ++i) words.push_back(text::lowercase(doc.tokens[i].surface));
            out.push_back(std::move(words));
        }
    }
    return out;
}

std::vector<std::string> lowercased_surfaces(const Document& doc, int begin, int end) {
    std::vector<std::string> out;
    for (int i = begin; i < end; ++i) out.push_back(text::lowercase(doc.tokens[i].surface));
    return out;
}

void add_pos_distribution(FeatureVector& fv, const Document& doc, int begin, int end,
                          const std::string& prefix) {
    std::map<std::string, int> counts;
    int total = 0;
    for (int i = begin; i < end; ++i) {
        if (doc.tokens[i].pos.empty()) continue;
        ++counts[doc.tokens[i].pos];
        ++total;
    }
    for (const auto& [tag, c] : counts)
        fv[prefix + tag] = static_cast<double>(c) / static_cast<double>(total);
}

void add_discourse_triples(FeatureVector& fv, const Document& doc, Span span,
                           const std::string& prefix) {
    for (const auto& dr : doc.discourse) {
        const std::string tag = dr.type + (dr.is_explicit ? "_exp" : "_imp");
        if (dr.arg1.overlaps(span)) fv[prefix + tag + "_Arg1"] = 1.0;
        if (dr.arg2.overlaps(span)) fv[prefix + tag + "_Arg2"] = 1.0;
    }
}

void add_embedding_sum(FeatureVector& fv, const Document& doc, int begin, int end,
                       const EmbeddingTable& emb) {
    std::vector<double> sum(static_cast<size_t>(emb.dim), 0.0);
    for (int i = begin; i < end; ++i) {
        auto it = emb.vectors.find(text::lowercase(doc.tokens[i].surface));
        if (it == emb.vectors.end()) it = emb.vectors.find(doc.tokens[i].lemma_or_surface());
        if (it == emb.vectors.end()) continue;
        for (int d = 0; d < emb.dim; ++d) sum[static_cast<size_t>(d)] += it->second[static_cast<size_t>(d)];
    }
    for (int d = 0; d < emb.dim; ++d)
        if (sum[static_cast<size_t>(d)] != 0.0) fv["emb:" + std::to_string(d)] = sum[static_cast<size_t>(d)];
}

// Dependency edges whose endpoints both lie inside the token range, as
// "headlemma~deplemma" tuples.
std::vector<std::string> dependency_tuples_in_range(const Document& doc, int token_begin,
                                                    int token_end) {
    std::vector<std::string> out;
    for (int s : sentences_of(doc, token_begin, token_end)) {
        if (s >= static_cast<int>(doc.dependencies.size())) continue;
        const auto& sent = doc.sentences[s];
        for (const auto& e : doc.dependencies[s]) {
            if (e.head < 0) continue;
            const int h = sent.token_begin + e.head;
            const int d = sent.token_begin + e.dependent;
            if (h < token_begin || h >= token_end || d < token_begin || d >= token_end) continue;
            if (h >= sent.token_end || d >= sent.token_end) continue;
            out.push_back(doc.tokens[h].lemma_or_surface() + "~" + doc.tokens[d].lemma_or_surface());
        }
    }
    return out;
}

std::set<std::string> top_k(const std::map<std::string, long>& counts, size_t k) {
    std::vector<std::pair<std::string, long>> items(counts.begin(), counts.end());
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (items.size() > k) items.resize(k);
    std::set<std::string> out;
    for (auto& [name, c] : items) out.insert(name);
    return out;
}

// Ratio of component tokens whose direction association is positive /
// negative; used for both relation directions.
void add_pmi_ratios(FeatureVector& fv, const Document& doc, const ArgumentComponent& comp,
                    const PmiTable& pmi, const std::string& side) {
    const int len = comp.token_end - comp.token_begin;
    if (len <= 0) return;
    int pos_in = 0, neg_in = 0, pos_out = 0, neg_out = 0;
    for (int i = comp.token_begin; i < comp.token_end; ++i) {
        const std::string lemma = doc.tokens[i].lemma_or_surface();
        const double in = pmi.value(lemma, true);
        const double out = pmi.value(lemma, false);
        if (in > 0) ++pos_in;
        if (in < 0) ++neg_in;
        if (out > 0) ++pos_out;
        if (out < 0) ++neg_out;
    }
    const auto ratio = [len](int c) { return static_cast<double>(c) / static_cast<double>(len); };
    if (pos_in) fv["pmi:" + side + "_pos_in"] = ratio(pos_in);
    if (neg_in) fv["pmi:" + side + "_neg_in"] = ratio(neg_in);
    if (pos_out) fv["pmi:" + side + "_pos_out"] = ratio(pos_out);
    if (neg_out) fv["pmi:" + side + "_neg_out"] = ratio(neg_out);
}

const ArgumentComponent& checked_component(const Document& doc, int index, const char* what) {
    if (index < 0 || index >= static_cast<int>(doc.components.size()))
        throw ValidityError(std::string(what) + " component index out of range");
    return doc.components[static_cast<size_t>(index)];
}

std::vector<std::vector<std::string>> tokenize_phrases(const std::vector<std::string>& phrases) {
    std::vector<std::vector<std::string>> out;
    out.reserve(phrases.size());
    for (const auto& p : phrases) {
        const auto cps = text::decode_utf8(p);
        std::vector<std::string> toks;
        for (const auto& sp : corpus::tokenize(cps, {0, static_cast<int>(cps.size())}))
            toks.push_back(text::encode_utf8(cps, static_cast<size_t>(sp.begin), static_cast<size_t>(sp.end)));
        out.push_back(std::move(toks));
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// tables
// ---------------------------------------------------------------------------

double ProbabilityTable::lookup(const std::string& ngram, const std::string& outcome) const {
    const auto it = table.find(ngram);
    if (it == table.end()) return 0.0;
    const auto jt = it->second.find(outcome);
    return jt == it->second.end() ? 0.0 : jt->second;
}

double PmiTable::value(const std::string& lemma, bool is_incoming) const {
    const auto& m = is_incoming ? incoming : outgoing;
    const auto it = m.find(lemma);
    return it == m.end() ? 0.0 : it->second;
}

const IndicatorLexicon& IndicatorLexicon::builtin() {
    static const IndicatorLexicon lex = [] {
        IndicatorLexicon l;
        l.forward = tokenize_phrases({
            "As a result", "As the consequence", "Because", "Clearly", "Consequently",
            "Considering this subject", "Furthermore", "Hence", "leading to the consequence",
            "so", "So", "taking account on this fact", "That is the reason why",
            "The reason is that", "Therefore", "therefore", "This means that",
            "This shows that", "This will result", "Thus", "thus",
            "Thus, it is clearly seen that", "Thus, it is seen", "Thus, the example shows"});
        l.backward = tokenize_phrases({
            "Additionally", "As a matter of fact", "because", "Besides", "due to", "Finally",
            "First of all", "Firstly", "for example", "For example", "For instance",
            "for instance", "Furthermore", "has proved it", "In addition", "In addition to this",
            "In the first place", "is due to the fact that", "It should also be noted",
            "Moreover", "On one hand", "On the one hand", "On the other hand",
            "One of the main reasons", "Secondly", "Similarly", "since", "Since", "So",
            "The reason", "To begin with", "To offer an instance", "What is more"});
        l.thesis = tokenize_phrases({
            "All in all", "All things considered", "As far as I am concerned",
            "Based on some reasons", "by analyzing both the views",
            "considering both the previous fact", "Finally", "For the reasons mentioned above",
            "From explanation above", "From this point of view", "I agree that", "I agree with",
            "I agree with the statement that", "I believe", "I believe that",
            "I do not agree with this statement", "I firmly believe that",
            "I highly advocate that", "I highly recommend", "I strongly believe that",
            "I think that", "I think the view is", "I totally agree",
            "I totally agree to this opinion", "I would have to argue that",
            "I would reaffirm my position that", "In conclusion", "in conclusion",
            "in my opinion", "In my opinion", "In my personal point of view",
            "in my point of view", "In my point of view", "In summary",
            "In the light of the facts outlined above", "it can be said that",
            "it is clear that", "it seems to me that", "my deep conviction", "My sentiments",
            "Overall", "Personally", "the above explanations and example shows that",
            "This, however", "To conclude", "To my way of thinking", "To sum up", "Ultimately"});
        l.rebuttal = tokenize_phrases({
            "Admittedly", "although", "Although", "besides these advantages", "but", "But",
            "Even though", "even though", "However", "Otherwise"});
        l.first_person = {"I", "me", "my", "mine", "myself"};
        return l;
    }();
    return lex;
}

// ---------------------------------------------------------------------------
// resource loaders
// ---------------------------------------------------------------------------

EmbeddingTable parse_embeddings(const std::string& content) {
    EmbeddingTable table;
    std::istringstream in(content);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::strip(line).empty()) continue;
        std::istringstream row(line);
        std::string word;
        row >> word;
        std::vector<double> vec;
        double v = 0.0;
        while (row >> v) vec.push_back(v);
        if (!row.eof())
            throw DataError("embeddings line " + std::to_string(lineno) + ": non-numeric value");
        if (vec.empty())
            throw DataError("embeddings line " + std::to_string(lineno) + ": no values");
        if (table.dim == 0) table.dim = static_cast<int>(vec.size());
        if (static_cast<int>(vec.size()) != table.dim)
            throw DataError("embeddings line " + std::to_string(lineno) + ": expected " +
                            std::to_string(table.dim) + " values, got " + std::to_string(vec.size()));
        table.vectors[word] = std::move(vec);
    }
    return table;
}

EmbeddingTable load_embeddings(const std::string& path) {
    return parse_embeddings(io::read_file(path));
}

SubjectivityLexicon parse_subjectivity(const std::string& content) {
    SubjectivityLexicon lex;
    std::istringstream in(content);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (text::strip(line).empty()) continue;
        const auto fields = text::split(line, ',');
        if (fields.size() != 2)
            throw DataError("subjectivity line " + std::to_string(lineno) + ": expected word,polarity");
        const std::string word = text::strip(fields[0]);
        const std::string pol = text::strip(fields[1]);
        if (lineno == 1 && text::lowercase(word) == "word" && text::lowercase(pol) == "polarity")
            continue;  // header row
        int value = 0;
        if (pol == "positive") value = 1;
        else if (pol == "negative") value = -1;
        else if (pol == "neutral") value = 0;
        else throw DataError("subjectivity line " + std::to_string(lineno) + ": unknown polarity '" + pol + "'");
        lex.polarity[text::lowercase(word)] = value;
    }
    return lex;
}

SubjectivityLexicon load_subjectivity(const std::string& path) {
    return parse_subjectivity(io::read_file(path));
}

// ---------------------------------------------------------------------------
// estimation
// ---------------------------------------------------------------------------

ProbabilityTable estimate_argb_probabilities(const std::vector<const Document*>& train) {
    std::map<std::string, long> seen, begins;
    for (const Document* doc : train) {
        const auto labels = corpus::encode_iob(*doc);
        for (int i = 0; i < static_cast<int>(doc->tokens.size()); ++i) {
            for (int n = 1; n <= 3; ++n) {
                const std::string g = preceding_ngram(*doc, i, n);
                if (g.empty()) continue;
                ++seen[g];
                if (labels[static_cast<size_t>(i)] == corpus::IobLabel::ArgB) ++begins[g];
            }
        }
    }
    ProbabilityTable out;
    for (const auto& [g, b] : begins)
        out.table[g]["Arg-B"] = static_cast<double>(b) / static_cast<double>(seen[g]);
    return out;
}

ProbabilityTable estimate_type_probabilities(const std::vector<const Document*>& train) {
    std::map<std::string, long> seen;
    std::map<std::string, std::map<std::string, long>> before;
    for (const Document* doc : train) {
        for (int i = 0; i < static_cast<int>(doc->tokens.size()); ++i) {
            for (int n = 1; n <= 3; ++n) {
                const std::string g = preceding_ngram(*doc, i, n);
                if (!g.empty()) ++seen[g];
            }
        }
        for (const auto& comp : doc->components) {
            for (int n = 1; n <= 3; ++n) {
                const std::string g = preceding_ngram(*doc, comp.token_begin, n);
                if (!g.empty()) ++before[g][corpus::to_string(comp.ctype)];
            }
        }
    }
    ProbabilityTable out;
    for (const auto& [g, outcomes] : before)
        for (const auto& [t, c] : outcomes)
            out.table[g][t] = static_cast<double>(c) / static_cast<double>(seen[g]);
    return out;
}

PmiTable estimate_pmi(const std::vector<const Document*>& train) {
    // Sample space: token occurrences inside components. A direction is
    // present when the covering component takes part in at least one
    // relation in that direction.
    long total = 0, in_total = 0, out_total = 0;
    std::map<std::string, long> cnt, cnt_in, cnt_out;
    for (const Document* doc : train) {
        std::set<std::string> has_in, has_out;
        for (const auto& rel : doc->relations) {
            has_out.insert(rel.source);
            has_in.insert(rel.target);
        }
        for (const auto& comp : doc->components) {
            const bool in = has_in.count(comp.id) > 0;
            const bool out = has_out.count(comp.id) > 0;
            for (int i = comp.token_begin; i < comp.token_end; ++i) {
                const std::string lemma = doc->tokens[i].lemma_or_surface();
                ++total;
                ++cnt[lemma];
                if (in) { ++in_total; ++cnt_in[lemma]; }
                if (out) { ++out_total; ++cnt_out[lemma]; }
            }
        }
    }
    PmiTable table;
    const auto fill = [&](const std::map<std::string, long>& joint, long dir_total,
                          std::map<std::string, double>& out) {
        if (dir_total == 0 || total == 0) return;
        for (const auto& [lemma, c] : joint) {
            const double p_td = static_cast<double>(c) / static_cast<double>(total);
            const double p_t = static_cast<double>(cnt[lemma]) / static_cast<double>(total);
            const double p_d = static_cast<double>(dir_total) / static_cast<double>(total);
            out[lemma] = std::log(p_td / (p_t * p_d));
        }
    };
    fill(cnt_in, in_total, table.incoming);
    fill(cnt_out, out_total, table.outgoing);
    return table;
}

std::set<std::string> most_frequent_dependency_tuples(const std::vector<const Document*>& train,
                                                      size_t k) {
    std::map<std::string, long> counts;
    for (const Document* doc : train)
        for (const auto& tuple : dependency_tuples_in_range(*doc, 0, static_cast<int>(doc->tokens.size())))
            ++counts[tuple];
    return top_k(counts, k);
}

std::set<std::string> most_frequent_unigrams(const std::vector<const Document*>& train, size_t k) {
    std::map<std::string, long> counts;
    for (const Document* doc : train)
        for (const auto& t : doc->tokens) ++counts[t.lemma_or_surface()];
    return top_k(counts, k);
}

std::set<std::string> most_frequent_production_rules(const std::vector<const Document*>& train,
                                                     size_t k) {
    std::map<std::string, long> counts;
    for (const Document* doc : train)
        for (const auto& comp : doc->components)
            for (const auto& rule : rules_in_range(*doc, comp.token_begin, comp.token_end))
                ++counts[rule];
    return top_k(counts, k);
}

FeatureTables fit_tables(const std::vector<const Document*>& train) {
    FeatureTables t;
    t.argb = estimate_argb_probabilities(train);
    t.type_prob = estimate_type_probabilities(train);
    t.pmi = estimate_pmi(train);
    t.dep_tuples = most_frequent_dependency_tuples(train);
    t.pair_unigrams = most_frequent_unigrams(train);
    t.pair_rules = most_frequent_production_rules(train);
    return t;
}

// ---------------------------------------------------------------------------
// token features
// ---------------------------------------------------------------------------

FeatureVector token_features(const Document& doc, int token_index, const FeatureTables& tables,
                             const FeatureConfig& config) {
    if (token_index < 0 || token_index >= static_cast<int>(doc.tokens.size()))
        throw ValidityError("token index out of range");
    const auto& tok = doc.tokens[static_cast<size_t>(token_index)];
    const auto& sent = doc.sentences[static_cast<size_t>(tok.sent_index)];
    const auto& para = doc.paragraphs[static_cast<size_t>(tok.para_index)];
    const int n_tokens = static_cast<int>(doc.tokens.size());
    FeatureVector fv;

    if (config.on("struct")) {
        if (tok.para_index == intro_paragraph(doc)) fv["struct:in_intro"] = 1.0;
        if (tok.para_index == conclusion_paragraph(doc)) fv["struct:in_conclusion"] = 1.0;
        if (token_index == sent.token_begin) fv["struct:sent_first"] = 1.0;
        if (token_index == sent.token_end - 1) fv["struct:sent_last"] = 1.0;

        const auto put = [&fv](const std::string& name, double v) {
            if (v != 0.0) fv[name] = v;
        };
        put("struct:pos_doc_abs", token_index);
        put("struct:pos_doc_rel", static_cast<double>(token_index) / std::max(1, n_tokens - 1));
        put("struct:pos_para_abs", token_index - para.token_begin);
        put("struct:pos_para_rel", static_cast<double>(token_index - para.token_begin) /
                                       std::max(1, para.token_end - para.token_begin - 1));
        put("struct:pos_sent_abs", token_index - sent.token_begin);
        put("struct:pos_sent_rel", static_cast<double>(token_index - sent.token_begin) /
                                       std::max(1, sent.token_end - sent.token_begin - 1));

        if (is_punct_token(tok)) fv["struct:is_punct"] = 1.0;
        if (tok.surface == ".") fv["struct:is_fullstop"] = 1.0;
        const auto mark = [&](int other, const std::string& where) {
            if (other < 0 || other >= n_tokens) return;
            const auto& o = doc.tokens[static_cast<size_t>(other)];
            if (is_punct_token(o)) fv["struct:" + where + "_punct"] = 1.0;
            if (o.surface == ".") fv["struct:" + where + "_fullstop"] = 1.0;
            if (o.surface == ",") fv["struct:" + where + "_comma"] = 1.0;
            if (o.surface == ";") fv["struct:" + where + "_semicolon"] = 1.0;
        };
        mark(token_index + 1, "precedes");
        mark(token_index - 1, "follows");

        put("struct:sent_pos_doc_abs", tok.sent_index);
        put("struct:sent_pos_doc_rel", static_cast<double>(tok.sent_index) /
                                           std::max(1, static_cast<int>(doc.sentences.size()) - 1));
        put("struct:sent_pos_para_abs", tok.sent_index - para.sent_begin);
        put("struct:sent_pos_para_rel", static_cast<double>(tok.sent_index - para.sent_begin) /
                                            std::max(1, para.sent_end - para.sent_begin - 1));
    }

    if (config.on("syn")) {
        if (!tok.pos.empty()) fv["syn:pos=" + tok.pos] = 1.0;
        auto tree = sentence_tree(doc, tok.sent_index);
        if (!doc.has_constituency()) {
            warn_once("syn:" + doc.essay_id, doc.essay_id + ": no constituency layer, skipping tree features");
        } else if (tree) {
            const int local = token_index - sent.token_begin;
            const int leaf = tree->leaves[static_cast<size_t>(local)];
            const int tree_depth = tree->depth();
            if (local > 0) {
                const int lca = tree->lca(leaf, tree->leaves[static_cast<size_t>(local - 1)]);
                fv["syn:lca_pre"] = static_cast<double>(tree->node_depth(lca)) / tree_depth;
                fv["syn:lca_pre_type=" + tree->nodes[static_cast<size_t>(lca)].label] = 1.0;
            } else {
                fv["syn:lca_pre"] = -1.0;
            }
            if (local < static_cast<int>(tree->leaves.size()) - 1) {
                const int lca = tree->lca(leaf, tree->leaves[static_cast<size_t>(local + 1)]);
                fv["syn:lca_fol"] = static_cast<double>(tree->node_depth(lca)) / tree_depth;
                fv["syn:lca_fol_type=" + tree->nodes[static_cast<size_t>(lca)].label] = 1.0;
            } else {
                fv["syn:lca_fol"] = -1.0;
            }
        }
    }

    if (config.on("lexsyn")) {
        auto tree = sentence_tree(doc, tok.sent_index);
        if (!doc.has_constituency()) {
            warn_once("lexsyn:" + doc.essay_id,
                      doc.essay_id + ": no constituency layer, skipping lexico-syntactic features");
        } else if (tree) {
            const int local = token_index - sent.token_begin;
            const int leaf = tree->leaves[static_cast<size_t>(local)];
            const int proj = syntax::head_projection(*tree, leaf);
            const std::string word = text::lowercase(tok.surface);
            fv["lexsyn:node=" + tree->nodes[static_cast<size_t>(proj)].label + "~" + word] = 1.0;
            if (proj != leaf) {
                // child of the projection on the path down to the token
                int child = leaf;
                while (tree->nodes[static_cast<size_t>(child)].parent != proj)
                    child = tree->nodes[static_cast<size_t>(child)].parent;
                const int child_head = syntax::head_leaf(*tree, child);
                fv["lexsyn:child=" + tree->nodes[static_cast<size_t>(child)].label + "~" +
                   text::lowercase(tree->nodes[static_cast<size_t>(child_head)].word)] = 1.0;
                const auto& siblings = tree->nodes[static_cast<size_t>(proj)].children;
                const auto it = std::find(siblings.begin(), siblings.end(), child);
                if (it != siblings.end() && it + 1 != siblings.end()) {
                    const int sib = *(it + 1);
                    const int sib_head = syntax::head_leaf(*tree, sib);
                    fv["lexsyn:sib=" + tree->nodes[static_cast<size_t>(sib)].label + "~" +
                       text::lowercase(tree->nodes[static_cast<size_t>(sib_head)].word)] = 1.0;
                }
            }
        }
    }

    if (config.on("prob")) {
        double best = 0.0;
        for (int n = 1; n <= 3; ++n) {
            const std::string g = preceding_ngram(doc, token_index, n);
            if (!g.empty()) best = std::max(best, tables.argb.lookup(g, "Arg-B"));
        }
        if (best > 0.0) fv["prob:argb"] = best;
    }

    return fv;
}

// ---------------------------------------------------------------------------
// component features
// ---------------------------------------------------------------------------

FeatureVector component_features(const Document& doc, int comp_index, const FeatureTables& tables,
                                 const IndicatorLexicon& lexicon, const EmbeddingTable* embeddings,
                                 const FeatureConfig& config) {
    const auto& comp = checked_component(doc, comp_index, "component");
    const int begin = region_begin(doc, comp);
    const auto& sent = doc.sentences[static_cast<size_t>(doc.tokens[static_cast<size_t>(comp.token_begin)].sent_index)];
    const auto& para = doc.paragraphs[static_cast<size_t>(comp.para_index)];
    const auto region = surfaces(doc, begin, comp.token_end);
    FeatureVector fv;

    if (config.on("lex")) {
        for (int i = begin; i < comp.token_end; ++i)
            fv["lex:uni=" + doc.tokens[i].lemma_or_surface()] = 1.0;
        if (!doc.has_dependencies()) {
            warn_once("dep:" + doc.essay_id,
                      doc.essay_id + ": no dependency layer, skipping dependency tuple features");
        } else {
            for (const auto& tuple : dependency_tuples_in_range(doc, comp.token_begin, comp.token_end))
                if (tables.dep_tuples.count(tuple)) fv["lex:dep=" + tuple] = 1.0;
        }
    }

    if (config.on("struct")) {
        const auto put = [&fv](const std::string& name, double v) {
            if (v != 0.0) fv[name] = v;
        };
        put("struct:tok_comp", comp.token_end - comp.token_begin);
        put("struct:tok_para", para.token_end - para.token_begin);
        put("struct:tok_sent", sent.token_end - sent.token_begin);
        put("struct:tok_before", comp.token_begin - sent.token_begin);
        put("struct:tok_after", std::max(0, sent.token_end - comp.token_end));
        put("struct:ratio_comp_sent", static_cast<double>(comp.token_end - comp.token_begin) /
                                          std::max(1, sent.token_end - sent.token_begin));

        const auto in_para = doc.components_in_paragraph(comp.para_index);
        const auto it = std::find(in_para.begin(), in_para.end(), comp_index);
        const int order = static_cast<int>(it - in_para.begin());
        const int count = static_cast<int>(in_para.size());
        if (order == 0) fv["struct:first_in_para"] = 1.0;
        if (order == count - 1) fv["struct:last_in_para"] = 1.0;
        put("struct:rel_pos_para", static_cast<double>(order) / std::max(1, count - 1));
        put("struct:n_preceding_comps", order);
        put("struct:n_following_comps", count - 1 - order);
        if (comp.para_index == intro_paragraph(doc)) fv["struct:in_intro"] = 1.0;
        if (comp.para_index == conclusion_paragraph(doc)) fv["struct:in_conclusion"] = 1.0;
    }

    if (config.on("indic")) {
        for (const auto& kind : kIndicatorKinds)
            if (any_indicator(indicator_list(lexicon, kind), region)) fv["indic:" + kind] = 1.0;
        for (const auto& s : region) {
            if (std::find(lexicon.first_person.begin(), lexicon.first_person.end(), s) !=
                lexicon.first_person.end()) {
                fv["indic:first_person"] = 1.0;
                break;
            }
        }
    }

    if (config.on("ctx")) {
        const auto before = surfaces(doc, para.token_begin, begin);
        const auto after = surfaces(doc, comp.token_end, para.token_end);
        for (const auto& kind : kIndicatorKinds) {
            const auto& phrases = indicator_list(lexicon, kind);
            if (any_indicator(phrases, before)) fv["ctx:before_" + kind] = 1.0;
            if (any_indicator(phrases, after)) fv["ctx:after_" + kind] = 1.0;
        }
        if (!doc.has_constituency()) {
            warn_once("ctx:" + doc.essay_id,
                      doc.essay_id + ": no constituency layer, skipping shared phrase features");
        } else {
            const int intro = intro_paragraph(doc);
            const int concl = conclusion_paragraph(doc);
            const auto region_words = [&](int p) {
                return p < 0 ? std::vector<std::string>{}
                             : lowercased_surfaces(doc, doc.paragraphs[static_cast<size_t>(p)].token_begin,
                                                   doc.paragraphs[static_cast<size_t>(p)].token_end);
            };
            const auto intro_words = region_words(intro);
            const auto concl_words = region_words(concl);
            int shared_np = 0, shared_vp = 0;
            for (const auto& [label, counter, name] :
                 {std::tuple{std::string("NP"), &shared_np, std::string("np")},
                  std::tuple{std::string("VP"), &shared_vp, std::string("vp")}}) {
                for (const auto& phrase : phrases_in_range(doc, comp.token_begin, comp.token_end, label)) {
                    const bool in_intro = comp.para_index != intro && contains_sequence(intro_words, phrase);
                    const bool in_concl = comp.para_index != concl && contains_sequence(concl_words, phrase);
                    if (in_intro) fv["ctx:" + name + "_in_intro"] = 1.0;
                    if (in_concl) fv["ctx:" + name + "_in_concl"] = 1.0;
                    if (in_intro || in_concl) ++*counter;
                }
            }
            if (shared_np) fv["ctx:shared_np_count"] = shared_np;
            if (shared_vp) fv["ctx:shared_vp_count"] = shared_vp;
        }
    }

    if (config.on("syn")) {
        if (!has_pos_tags(doc)) {
            warn_once("pos:" + doc.essay_id, doc.essay_id + ": no POS tags, skipping POS features");
        } else {
            add_pos_distribution(fv, doc, comp.token_begin, comp.token_end, "syn:pos=");
            static const std::map<std::string, std::string> kTense = {
                {"VBD", "past"}, {"VBN", "participle"}, {"VBG", "gerund"},
                {"VBZ", "present"}, {"VBP", "present"}, {"VB", "base"}, {"MD", "modal"}};
            bool tense_done = false;
            for (int i = comp.token_begin; i < comp.token_end; ++i) {
                const auto& pos = doc.tokens[i].pos;
                if (pos == "MD") fv["syn:modal"] = 1.0;
                const auto it = kTense.find(pos);
                if (!tense_done && it != kTense.end()) {
                    fv["syn:tense=" + it->second] = 1.0;
                    tense_done = true;
                }
            }
        }
        if (!doc.has_constituency()) {
            warn_once("syn:" + doc.essay_id, doc.essay_id + ": no constituency layer, skipping tree features");
        } else if (auto tree = sentence_tree(doc, doc.tokens[static_cast<size_t>(comp.token_begin)].sent_index)) {
            fv["syn:tree_depth"] = tree->depth();
            int sub = 0;
            for (int n = 1; n < static_cast<int>(tree->nodes.size()); ++n) {
                const auto& label = tree->nodes[static_cast<size_t>(n)].label;
                if (label == "S" || label == "SBAR") ++sub;
            }
            if (sub) fv["syn:subclauses"] = sub;
        }
    }

    if (config.on("prob")) {
        for (const auto* outcome : {"MajorClaim", "Claim", "Premise"}) {
            double best = 0.0;
            for (int n = 1; n <= 3; ++n) {
                const std::string g = preceding_ngram(doc, comp.token_begin, n);
                if (!g.empty()) best = std::max(best, tables.type_prob.lookup(g, outcome));
            }
            if (best > 0.0) fv[std::string("prob:type=") + outcome] = best;
        }
    }

    if (config.on("disc")) {
        if (!doc.has_discourse())
            warn_once("disc:" + doc.essay_id, doc.essay_id + ": no discourse layer, skipping discourse features");
        else
            add_discourse_triples(fv, doc, comp.span, "disc:");
    }

    if (config.on("emb") && embeddings) add_embedding_sum(fv, doc, begin, comp.token_end, *embeddings);

    return fv;
}

// ---------------------------------------------------------------------------
// pair features
// ---------------------------------------------------------------------------

FeatureVector pair_features(const Document& doc, int source_index, int target_index,
                            const FeatureTables& tables, const IndicatorLexicon& lexicon,
                            const FeatureConfig& config) {
    const auto& src = checked_component(doc, source_index, "source");
    const auto& tgt = checked_component(doc, target_index, "target");
    if (source_index == target_index) throw ValidityError("pair features need two distinct components");
    if (src.para_index != tgt.para_index)
        throw ValidityError("pair features are defined for same-paragraph components only");

    const auto& para = doc.paragraphs[static_cast<size_t>(src.para_index)];
    const auto in_para = doc.components_in_paragraph(src.para_index);
    const int src_order = static_cast<int>(std::find(in_para.begin(), in_para.end(), source_index) - in_para.begin());
    const int tgt_order = static_cast<int>(std::find(in_para.begin(), in_para.end(), target_index) - in_para.begin());
    FeatureVector fv;

    if (config.on("lex")) {
        const auto add = [&](const ArgumentComponent& c, const std::string& side) {
            for (int i = region_begin(doc, c); i < c.token_end; ++i) {
                const std::string lemma = doc.tokens[i].lemma_or_surface();
                if (tables.pair_unigrams.count(lemma)) fv["lex:" + side + "=" + lemma] = 1.0;
            }
        };
        add(src, "src");
        add(tgt, "tgt");
    }

    if (config.on("syn")) {
        if (!has_pos_tags(doc)) {
            warn_once("pos:" + doc.essay_id, doc.essay_id + ": no POS tags, skipping POS features");
        } else {
            for (int i = src.token_begin; i < src.token_end; ++i)
                if (!doc.tokens[i].pos.empty()) fv["syn:src_pos=" + doc.tokens[i].pos] = 1.0;
            for (int i = tgt.token_begin; i < tgt.token_end; ++i)
                if (!doc.tokens[i].pos.empty()) fv["syn:tgt_pos=" + doc.tokens[i].pos] = 1.0;
        }
        if (!doc.has_constituency()) {
            warn_once("syn:" + doc.essay_id, doc.essay_id + ": no constituency layer, skipping tree features");
        } else {
            for (const auto& rule : rules_in_range(doc, src.token_begin, src.token_end))
                if (tables.pair_rules.count(rule)) fv["syn:src_rule=" + rule] = 1.0;
            for (const auto& rule : rules_in_range(doc, tgt.token_begin, tgt.token_end))
                if (tables.pair_rules.count(rule)) fv["syn:tgt_rule=" + rule] = 1.0;
        }
    }

    if (config.on("struct")) {
        const auto put = [&fv](const std::string& name, double v) {
            if (v != 0.0) fv[name] = v;
        };
        put("struct:src_tokens", src.token_end - src.token_begin);
        put("struct:tgt_tokens", tgt.token_end - tgt.token_begin);
        put("struct:comps_between", std::abs(src_order - tgt_order) - 1);
        put("struct:comps_in_para", static_cast<int>(in_para.size()));
        const int src_sent = doc.tokens[static_cast<size_t>(src.token_begin)].sent_index;
        const int tgt_sent = doc.tokens[static_cast<size_t>(tgt.token_begin)].sent_index;
        if (src_sent == tgt_sent) fv["struct:same_sentence"] = 1.0;
        if (tgt.span.begin < src.span.begin) fv["struct:target_before_source"] = 1.0;
        if (src_order == 0) fv["struct:src_first"] = 1.0;
        if (src_order == static_cast<int>(in_para.size()) - 1) fv["struct:src_last"] = 1.0;
        if (tgt_order == 0) fv["struct:tgt_first"] = 1.0;
        if (tgt_order == static_cast<int>(in_para.size()) - 1) fv["struct:tgt_last"] = 1.0;
        if (src.para_index == intro_paragraph(doc)) fv["struct:in_intro"] = 1.0;
        if (src.para_index == conclusion_paragraph(doc)) fv["struct:in_conclusion"] = 1.0;
    }

    if (config.on("indic")) {
        const auto src_region = surfaces(doc, region_begin(doc, src), src.token_end);
        const auto tgt_region = surfaces(doc, region_begin(doc, tgt), tgt.token_end);
        const ArgumentComponent& first = src.span.begin <= tgt.span.begin ? src : tgt;
        const ArgumentComponent& second = src.span.begin <= tgt.span.begin ? tgt : src;
        const auto between = surfaces(doc, first.token_end, std::max(first.token_end, region_begin(doc, second)));
        const auto before = surfaces(doc, para.token_begin, region_begin(doc, first));
        const auto after = surfaces(doc, second.token_end, para.token_end);
        for (const auto& kind : kIndicatorKinds) {
            const auto& phrases = indicator_list(lexicon, kind);
            if (any_indicator(phrases, src_region)) fv["indic:src_" + kind] = 1.0;
            if (any_indicator(phrases, tgt_region)) fv["indic:tgt_" + kind] = 1.0;
            if (any_indicator(phrases, between)) fv["indic:between_" + kind] = 1.0;
            if (any_indicator(phrases, before)) fv["indic:before_" + kind] = 1.0;
            if (any_indicator(phrases, after)) fv["indic:after_" + kind] = 1.0;
        }
    }

    if (config.on("disc")) {
        if (!doc.has_discourse()) {
            warn_once("disc:" + doc.essay_id, doc.essay_id + ": no discourse layer, skipping discourse features");
        } else {
            add_discourse_triples(fv, doc, src.span, "disc:src_");
            add_discourse_triples(fv, doc, tgt.span, "disc:tgt_");
        }
    }

    if (config.on("pmi")) {
        add_pmi_ratios(fv, doc, src, tables.pmi, "src");
        add_pmi_ratios(fv, doc, tgt, tables.pmi, "tgt");
        for (const auto& [name, side] : {std::pair{"pos_in", "_pos_in"}, {"neg_in", "_neg_in"},
                                         {"pos_out", "_pos_out"}, {"neg_out", "_neg_out"}}) {
            if (fv.count(std::string("pmi:src") + side) || fv.count(std::string("pmi:tgt") + side))
                fv[std::string("pmi:any_") + name] = 1.0;
        }
    }

    if (config.on("shno")) {
        if (!has_pos_tags(doc)) {
            warn_once("pos:" + doc.essay_id, doc.essay_id + ": no POS tags, skipping POS features");
        } else {
            std::set<std::string> src_nouns;
            for (int i = src.token_begin; i < src.token_end; ++i)
                if (text::starts_with(doc.tokens[i].pos, "NN")) src_nouns.insert(doc.tokens[i].lemma_or_surface());
            std::set<std::string> shared;
            for (int i = tgt.token_begin; i < tgt.token_end; ++i)
                if (text::starts_with(doc.tokens[i].pos, "NN") && src_nouns.count(doc.tokens[i].lemma_or_surface()))
                    shared.insert(doc.tokens[i].lemma_or_surface());
            if (!shared.empty()) {
                fv["shno:present"] = 1.0;
                fv["shno:count"] = static_cast<double>(shared.size());
            }
        }
    }

    return fv;
}

// ---------------------------------------------------------------------------
// stance features
// ---------------------------------------------------------------------------

FeatureVector stance_features(const Document& doc, int comp_index,
                              const SubjectivityLexicon* subjectivity, const EmbeddingTable* embeddings,
                              const FeatureConfig& config) {
    const auto& comp = checked_component(doc, comp_index, "stance");
    const int begin = region_begin(doc, comp);
    const int sent_index = doc.tokens[static_cast<size_t>(comp.token_begin)].sent_index;
    const auto& sent = doc.sentences[static_cast<size_t>(sent_index)];
    FeatureVector fv;

    if (config.on("lex")) {
        for (int i = begin; i < comp.token_end; ++i)
            fv["lex:uni=" + doc.tokens[i].lemma_or_surface()] = 1.0;
    }

    if (config.on("sent")) {
        if (!subjectivity) {
            warn_once("subj", "no subjectivity lexicon, skipping polarity count features");
        } else {
            int pos = 0, neg = 0, neutral = 0;
            for (int i = comp.token_begin; i < comp.token_end; ++i) {
                const auto it = subjectivity->polarity.find(doc.tokens[i].lemma_or_surface());
                if (it == subjectivity->polarity.end()) continue;
                if (it->second > 0) ++pos;
                else if (it->second < 0) ++neg;
                else ++neutral;
            }
            if (neg) fv["sent:has_negative"] = 1.0;
            if (neg) fv["sent:n_negative"] = neg;
            if (pos) fv["sent:n_positive"] = pos;
            if (neutral) fv["sent:n_neutral"] = neutral;
            if (pos - neg != 0) fv["sent:balance"] = pos - neg;
        }
        if (!doc.has_sentiment()) {
            warn_once("sent:" + doc.essay_id,
                      doc.essay_id + ": no sentiment layer, skipping sentence score features");
        } else if (sent_index < static_cast<int>(doc.sentiment.size())) {
            const auto& scores = doc.sentiment[static_cast<size_t>(sent_index)];
            for (int d = 0; d < 5; ++d)
                if (scores[static_cast<size_t>(d)] != 0.0)
                    fv["sent:score_" + std::to_string(d)] = scores[static_cast<size_t>(d)];
        }
    }

    if (config.on("syn")) {
        if (!has_pos_tags(doc))
            warn_once("pos:" + doc.essay_id, doc.essay_id + ": no POS tags, skipping POS features");
        else
            add_pos_distribution(fv, doc, comp.token_begin, comp.token_end, "syn:pos=");
        if (!doc.has_constituency())
            warn_once("syn:" + doc.essay_id, doc.essay_id + ": no constituency layer, skipping tree features");
        else
            for (const auto& rule : rules_in_range(doc, comp.token_begin, comp.token_end))
                fv["syn:rule=" + rule] = 1.0;
    }

    if (config.on("struct")) {
        const auto put = [&fv](const std::string& name, double v) {
            if (v != 0.0) fv[name] = v;
        };
        const auto in_para = doc.components_in_paragraph(comp.para_index);
        const auto it = std::find(in_para.begin(), in_para.end(), comp_index);
        const int order = static_cast<int>(it - in_para.begin());
        if (order == 0) fv["struct:first_in_para"] = 1.0;
        if (order == static_cast<int>(in_para.size()) - 1) fv["struct:last_in_para"] = 1.0;
        put("struct:rel_pos_para", static_cast<double>(order) / std::max(1, static_cast<int>(in_para.size()) - 1));
        put("struct:tok_sent", sent.token_end - sent.token_begin);
        put("struct:tok_before", comp.token_begin - sent.token_begin);
        put("struct:tok_after", std::max(0, sent.token_end - comp.token_end));
        put("struct:ratio_comp_sent", static_cast<double>(comp.token_end - comp.token_begin) /
                                          std::max(1, sent.token_end - sent.token_begin));
    }

    if (config.on("disc")) {
        if (!doc.has_discourse())
            warn_once("disc:" + doc.essay_id, doc.essay_id + ": no discourse layer, skipping discourse features");
        else
            add_discourse_triples(fv, doc, comp.span, "disc:");
    }

    if (config.on("emb") && embeddings) add_embedding_sum(fv, doc, begin, comp.token_end, *embeddings);

    return fv;
}

// ---------------------------------------------------------------------------
// shared helpers
// ---------------------------------------------------------------------------

std::vector<int> tokens_in_span(const Document& doc, Span span) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(doc.tokens.size()); ++i)
        if (doc.tokens[i].span().overlaps(span)) out.push_back(i);
    return out;
}

int intro_paragraph(const Document& doc) {
    for (int p = 0; p < static_cast<int>(doc.paragraphs.size()); ++p)
        if (!doc.paragraphs[static_cast<size_t>(p)].is_title) return p;
    return -1;
}

int conclusion_paragraph(const Document& doc) {
    for (int p = static_cast<int>(doc.paragraphs.size()) - 1; p >= 0; --p)
        if (!doc.paragraphs[static_cast<size_t>(p)].is_title) return p;
    return -1;
}

std::string to_json_string(const FeatureTables& tables) {
    nlohmann::ordered_json j;
    j["format"] = "argstruct-tables";
    j["version"] = 1;
    j["argb"] = tables.argb.table;
    j["type_prob"] = tables.type_prob.table;
    j["pmi_incoming"] = tables.pmi.incoming;
    j["pmi_outgoing"] = tables.pmi.outgoing;
    j["dep_tuples"] = tables.dep_tuples;
    j["pair_unigrams"] = tables.pair_unigrams;
    j["pair_rules"] = tables.pair_rules;
    return j.dump();
}

FeatureTables tables_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad feature table json: ") + e.what());
    }
    if (j.value("format", "") != "argstruct-tables") {
        throw DataError("not a feature table file");
    }
    FeatureTables t;
    try {
        j.at("argb").get_to(t.argb.table);
        j.at("type_prob").get_to(t.type_prob.table);
        j.at("pmi_incoming").get_to(t.pmi.incoming);
        j.at("pmi_outgoing").get_to(t.pmi.outgoing);
        j.at("dep_tuples").get_to(t.dep_tuples);
        j.at("pair_unigrams").get_to(t.pair_unigrams);
        j.at("pair_rules").get_to(t.pair_rules);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad feature table json: ") + e.what());
    }
    return t;
}

}  // namespace argstruct::features
