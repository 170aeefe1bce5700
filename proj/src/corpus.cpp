#include "argstruct/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "argstruct/errors.hpp"
#include "argstruct/io.hpp"
#include "argstruct/log.hpp"
#include "argstruct/text.hpp"

namespace argstruct::corpus {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Enum names
// ---------------------------------------------------------------------------

std::string to_string(ComponentType t) {
    switch (t) {
        case ComponentType::MajorClaim: return "MajorClaim";
        case ComponentType::Claim: return "Claim";
        case ComponentType::Premise: return "Premise";
    }
    return "?";
}

std::string to_string(RelationType t) {
    return t == RelationType::Support ? "supports" : "attacks";
}

std::string to_string(Stance s) { return s == Stance::For ? "For" : "Against"; }

std::string to_string(IobLabel l) {
    switch (l) {
        case IobLabel::ArgB: return "Arg-B";
        case IobLabel::ArgI: return "Arg-I";
        case IobLabel::Outside: return "O";
    }
    return "?";
}

ComponentType component_type_from_string(std::string_view s) {
    if (s == "MajorClaim") return ComponentType::MajorClaim;
    if (s == "Claim") return ComponentType::Claim;
    if (s == "Premise") return ComponentType::Premise;
    throw ParseError("unknown component type: " + std::string(s));
}

std::string Token::lemma_or_surface() const {
    return lemma.empty() ? text::lowercase(surface) : lemma;
}

// ---------------------------------------------------------------------------
// Document helpers
// ---------------------------------------------------------------------------

std::string Document::span_text(Span s) const {
    int b = std::max(0, s.begin);
    int e = std::min<int>(static_cast<int>(text_cp.size()), s.end);
    if (b >= e) return "";
    return text::encode_utf8(text_cp, static_cast<std::size_t>(b), static_cast<std::size_t>(e));
}

int Document::component_index(std::string_view id) const {
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].id == id) return static_cast<int>(i);
    }
    return -1;
}

const ArgumentComponent* Document::find_component(std::string_view id) const {
    int i = component_index(id);
    return i < 0 ? nullptr : &components[static_cast<std::size_t>(i)];
}

int Document::paragraph_of(int cp_offset) const {
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        if (paragraphs[i].span.contains(cp_offset)) return static_cast<int>(i);
    }
    return -1;
}

std::vector<int> Document::components_in_paragraph(int para_index) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < components.size(); ++i) {
        if (components[i].para_index == para_index) out.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> Document::body_like_paragraphs() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        if (!paragraphs[i].is_title) out.push_back(static_cast<int>(i));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fallback segmentation
// ---------------------------------------------------------------------------

std::vector<Span> split_paragraphs(const std::vector<char32_t>& text_cp) {
    std::vector<Span> out;
    int n = static_cast<int>(text_cp.size());
    int line_start = 0;
    for (int i = 0; i <= n; ++i) {
        if (i == n || text_cp[static_cast<std::size_t>(i)] == U'\n') {
            int b = line_start, e = i;
            while (b < e && text::is_space(text_cp[static_cast<std::size_t>(b)])) ++b;
            while (e > b && text::is_space(text_cp[static_cast<std::size_t>(e - 1)])) --e;
            if (b < e) out.push_back({b, e});
            line_start = i + 1;
        }
    }
    return out;
}

std::vector<Span> split_sentences(const std::vector<char32_t>& text_cp, Span range) {
    std::vector<Span> out;
    auto at = [&](int i) { return text_cp[static_cast<std::size_t>(i)]; };
    auto is_terminal = [](char32_t c) { return c == U'.' || c == U'?' || c == U'!'; };
    int i = range.begin;
    while (i < range.end) {
        while (i < range.end && text::is_space(at(i))) ++i;
        if (i >= range.end) break;
        int start = i;
        int end = -1;
        while (i < range.end) {
            if (at(i) == U'\n') {
                end = i;
                break;
            }
            if (is_terminal(at(i))) {
                int j = i;
                while (j < range.end && is_terminal(at(j))) ++j;
                // closing quote directly after the terminal run stays in the sentence
                while (j < range.end && (at(j) == U'"' || at(j) == 0x201D || at(j) == U'\'')) ++j;
                if (j >= range.end || text::is_space(at(j))) {
                    end = j;
                    break;
                }
                i = j;
                continue;
            }
            ++i;
        }
        if (end < 0) end = range.end;
        while (end > start && text::is_space(at(end - 1))) --end;
        if (start < end) out.push_back({start, end});
        i = std::max(i + 1, end);
    }
    return out;
}

std::vector<Span> tokenize(const std::vector<char32_t>& text_cp, Span range) {
    std::vector<Span> out;
    auto at = [&](int i) { return text_cp[static_cast<std::size_t>(i)]; };
    int i = range.begin;
    while (i < range.end) {
        while (i < range.end && text::is_space(at(i))) ++i;
        if (i >= range.end) break;
        int b = i;
        while (i < range.end && !text::is_space(at(i))) ++i;
        int e = i;
        // leading punctuation as single-character tokens
        while (b < e && text::is_punct(at(b))) {
            out.push_back({b, b + 1});
            ++b;
        }
        // trailing punctuation, emitted after the core token
        int core_end = e;
        while (core_end > b && text::is_punct(at(core_end - 1))) --core_end;
        if (b < core_end) out.push_back({b, core_end});
        for (int p = core_end; p < e; ++p) out.push_back({p, p + 1});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Sidecar JSON
// ---------------------------------------------------------------------------

namespace {

Span span_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer()) {
        throw ParseError("sidecar: span must be [begin, end]");
    }
    return {j[0].get<int>(), j[1].get<int>()};
}

}  // namespace

SidecarLayers parse_sidecar_json(std::string_view json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("sidecar: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("sidecar: top level must be an object");

    SidecarLayers out;
    if (j.contains("sentences")) {
        std::vector<Span> sents;
        for (const auto& s : j.at("sentences")) sents.push_back(span_from_json(s));
        out.sentences = std::move(sents);
    }
    if (j.contains("tokens")) {
        std::vector<SidecarToken> toks;
        for (const auto& t : j.at("tokens")) {
            SidecarToken st;
            st.span = span_from_json(t.at("span"));
            st.pos = t.value("pos", "");
            st.lemma = t.value("lemma", "");
            toks.push_back(std::move(st));
        }
        out.tokens = std::move(toks);
    }
    if (j.contains("constituency")) {
        out.constituency = j.at("constituency").get<std::vector<std::string>>();
    }
    if (j.contains("dependencies")) {
        std::vector<std::vector<DependencyEdge>> deps;
        for (const auto& sent : j.at("dependencies")) {
            std::vector<DependencyEdge> edges;
            for (const auto& e : sent) {
                DependencyEdge de;
                de.head = e.at("head").get<int>();
                de.dependent = e.at("dep").get<int>();
                de.label = e.value("label", "");
                edges.push_back(std::move(de));
            }
            deps.push_back(std::move(edges));
        }
        out.dependencies = std::move(deps);
    }
    if (j.contains("discourse")) {
        std::vector<DiscourseRelation> rels;
        for (const auto& r : j.at("discourse")) {
            DiscourseRelation dr;
            dr.type = r.at("type").get<std::string>();
            dr.arg1 = span_from_json(r.at("arg1"));
            dr.arg2 = span_from_json(r.at("arg2"));
            dr.is_explicit = r.value("explicit", false);
            rels.push_back(std::move(dr));
        }
        out.discourse = std::move(rels);
    }
    if (j.contains("sentiment")) {
        std::vector<std::array<double, 5>> scores;
        for (const auto& row : j.at("sentiment")) {
            if (!row.is_array() || row.size() != 5) {
                throw ParseError("sidecar: sentiment rows must hold 5 scores");
            }
            std::array<double, 5> a{};
            for (int k = 0; k < 5; ++k) a[static_cast<std::size_t>(k)] = row[static_cast<std::size_t>(k)].get<double>();
            scores.push_back(a);
        }
        out.sentiment = std::move(scores);
    }
    return out;
}

// ---------------------------------------------------------------------------
// brat parsing
// ---------------------------------------------------------------------------

namespace {

struct AnnRecords {
    std::vector<ArgumentComponent> components;
    std::vector<ArgumentativeRelation> relations;
    std::vector<std::pair<std::string, Stance>> stances;  // (component id, value)
};

AnnRecords parse_ann_records(std::string_view ann_text, int text_len) {
    AnnRecords rec;
    std::set<std::string> seen_ids;
    int line_no = 0;
    for (const std::string& raw : text::split(ann_text, '\n')) {
        ++line_no;
        std::string line = raw;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto err = [&](const std::string& msg) {
            return ParseError("annotation line " + std::to_string(line_no) + ": " + msg);
        };
        std::vector<std::string> fields = text::split(line, '\t');
        if (fields.size() < 2) throw err("expected tab-separated record");
        const std::string& id = fields[0];
        if (id.empty()) throw err("empty id");
        if (!seen_ids.insert(id).second) throw err("duplicate id " + id);

        std::vector<std::string> head;
        for (const std::string& part : text::split(fields[1], ' ')) {
            if (!part.empty()) head.push_back(part);
        }
        if (id[0] == 'T') {
            if (fields.size() < 3) throw err("component record needs a text field");
            if (head.size() != 3) throw err("expected '<Type> <start> <end>'");
            ArgumentComponent c;
            c.id = id;
            c.ctype = component_type_from_string(head[0]);
            try {
                c.span.begin = std::stoi(head[1]);
                c.span.end = std::stoi(head[2]);
            } catch (const std::exception&) {
                throw err("offsets must be integers");
            }
            if (c.span.begin < 0 || c.span.end > text_len || c.span.begin >= c.span.end) {
                throw ValidityError("annotation line " + std::to_string(line_no) + ": span [" +
                                    std::to_string(c.span.begin) + "," + std::to_string(c.span.end) +
                                    ") outside text of length " + std::to_string(text_len));
            }
            rec.components.push_back(std::move(c));
        } else if (id[0] == 'A') {
            if (head.size() != 3 || head[0] != "Stance") throw err("expected 'Stance <Tref> <value>'");
            Stance s;
            if (head[2] == "For") {
                s = Stance::For;
            } else if (head[2] == "Against") {
                s = Stance::Against;
            } else {
                throw err("stance value must be For or Against");
            }
            rec.stances.emplace_back(head[1], s);
        } else if (id[0] == 'R') {
            if (head.size() != 3) throw err("expected '<type> Arg1:<T> Arg2:<T>'");
            ArgumentativeRelation r;
            r.id = id;
            if (head[0] == "supports") {
                r.rtype = RelationType::Support;
            } else if (head[0] == "attacks") {
                r.rtype = RelationType::Attack;
            } else {
                throw err("relation type must be supports or attacks");
            }
            if (!text::starts_with(head[1], "Arg1:") || !text::starts_with(head[2], "Arg2:")) {
                throw err("expected Arg1:/Arg2: endpoints");
            }
            r.source = head[1].substr(5);
            r.target = head[2].substr(5);
            rec.relations.push_back(std::move(r));
        } else {
            throw err("unknown record type '" + std::string(1, id[0]) + "'");
        }
    }
    return rec;
}

}  // namespace

Document parse_brat(std::string essay_id, std::string_view essay_text, std::string_view ann_text,
                    const SidecarLayers* sidecar, const ParseOptions& opts) {
    Document doc;
    doc.essay_id = std::move(essay_id);
    doc.text = std::string(essay_text);
    doc.text_cp = text::decode_utf8(doc.text);
    int text_len = static_cast<int>(doc.text_cp.size());

    // paragraphs: non-empty lines; leading paragraph is the title line
    for (Span p : split_paragraphs(doc.text_cp)) {
        Paragraph para;
        para.span = p;
        doc.paragraphs.push_back(para);
    }
    if (opts.has_title && !doc.paragraphs.empty()) {
        doc.paragraphs[0].is_title = true;
    }

    // sentences per paragraph
    std::vector<Span> sentence_spans;
    if (sidecar && sidecar->sentences) {
        sentence_spans = *sidecar->sentences;
        std::sort(sentence_spans.begin(), sentence_spans.end(),
                  [](const Span& a, const Span& b) { return a.begin < b.begin; });
    } else {
        for (const Paragraph& p : doc.paragraphs) {
            for (Span s : split_sentences(doc.text_cp, p.span)) sentence_spans.push_back(s);
        }
    }
    for (Span s : sentence_spans) {
        Sentence sent;
        sent.span = s;
        sent.para_index = doc.paragraph_of(s.begin);
        if (sent.para_index < 0) {
            throw ValidityError(doc.essay_id + ": sentence at " + std::to_string(s.begin) +
                                " lies outside every paragraph");
        }
        doc.sentences.push_back(sent);
    }

    // tokens per sentence
    if (sidecar && sidecar->tokens) {
        std::vector<SidecarToken> toks = *sidecar->tokens;
        std::sort(toks.begin(), toks.end(),
                  [](const SidecarToken& a, const SidecarToken& b) { return a.span.begin < b.span.begin; });
        std::size_t ti = 0;
        for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
            Sentence& sent = doc.sentences[si];
            sent.token_begin = static_cast<int>(doc.tokens.size());
            while (ti < toks.size() && toks[ti].span.begin < sent.span.end) {
                if (toks[ti].span.begin < sent.span.begin) {
                    throw ValidityError(doc.essay_id + ": token at " +
                                        std::to_string(toks[ti].span.begin) +
                                        " lies outside every sentence");
                }
                Token t;
                t.surface = doc.span_text(toks[ti].span);
                t.char_start = toks[ti].span.begin;
                t.char_end = toks[ti].span.end;
                t.sent_index = static_cast<int>(si);
                t.para_index = sent.para_index;
                t.pos = toks[ti].pos;
                t.lemma = toks[ti].lemma;
                doc.tokens.push_back(std::move(t));
                ++ti;
            }
            sent.token_end = static_cast<int>(doc.tokens.size());
        }
        if (ti < toks.size()) {
            throw ValidityError(doc.essay_id + ": token at " + std::to_string(toks[ti].span.begin) +
                                " lies outside every sentence");
        }
    } else {
        for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
            Sentence& sent = doc.sentences[si];
            sent.token_begin = static_cast<int>(doc.tokens.size());
            for (Span ts : tokenize(doc.text_cp, sent.span)) {
                Token t;
                t.surface = doc.span_text(ts);
                t.char_start = ts.begin;
                t.char_end = ts.end;
                t.sent_index = static_cast<int>(si);
                t.para_index = sent.para_index;
                doc.tokens.push_back(std::move(t));
            }
            sent.token_end = static_cast<int>(doc.tokens.size());
        }
    }

    // paragraph ranges over sentences/tokens
    for (std::size_t pi = 0; pi < doc.paragraphs.size(); ++pi) {
        Paragraph& p = doc.paragraphs[pi];
        p.sent_begin = static_cast<int>(doc.sentences.size());
        p.sent_end = 0;
        p.token_begin = static_cast<int>(doc.tokens.size());
        p.token_end = 0;
        for (std::size_t si = 0; si < doc.sentences.size(); ++si) {
            if (doc.sentences[si].para_index != static_cast<int>(pi)) continue;
            p.sent_begin = std::min(p.sent_begin, static_cast<int>(si));
            p.sent_end = std::max(p.sent_end, static_cast<int>(si) + 1);
            p.token_begin = std::min(p.token_begin, doc.sentences[si].token_begin);
            p.token_end = std::max(p.token_end, doc.sentences[si].token_end);
        }
        if (p.sent_end == 0) {  // paragraph without sentences
            p.sent_begin = p.sent_end = 0;
            p.token_begin = p.token_end = 0;
        }
    }

    // extra layers; lengths must match the sentence count when present
    if (sidecar) {
        auto check_len = [&](std::size_t got, const char* layer) {
            if (got != doc.sentences.size()) {
                throw ValidityError(doc.essay_id + ": " + layer + " layer has " +
                                    std::to_string(got) + " entries for " +
                                    std::to_string(doc.sentences.size()) + " sentences");
            }
        };
        if (sidecar->constituency) {
            check_len(sidecar->constituency->size(), "constituency");
            doc.constituency = *sidecar->constituency;
        }
        if (sidecar->dependencies) {
            check_len(sidecar->dependencies->size(), "dependencies");
            doc.dependencies = *sidecar->dependencies;
        }
        if (sidecar->sentiment) {
            check_len(sidecar->sentiment->size(), "sentiment");
            doc.sentiment = *sidecar->sentiment;
        }
        if (sidecar->discourse) {
            doc.discourse = *sidecar->discourse;
        }
    }

    // annotation records
    AnnRecords rec = parse_ann_records(ann_text, text_len);
    doc.components = std::move(rec.components);
    doc.relations = std::move(rec.relations);
    std::sort(doc.components.begin(), doc.components.end(),
              [](const ArgumentComponent& a, const ArgumentComponent& b) {
                  if (a.span.begin != b.span.begin) return a.span.begin < b.span.begin;
                  return a.span.end < b.span.end;
              });
    for (std::size_t i = 1; i < doc.components.size(); ++i) {
        if (doc.components[i - 1].span.overlaps(doc.components[i].span)) {
            throw ValidityError(doc.essay_id + ": components " + doc.components[i - 1].id +
                                " and " + doc.components[i].id + " overlap");
        }
    }
    for (const auto& [cid, stance] : rec.stances) {
        int idx = doc.component_index(cid);
        if (idx < 0) throw ReferenceError(doc.essay_id + ": stance attribute references missing " + cid);
        doc.components[static_cast<std::size_t>(idx)].stance = stance;
    }
    for (const ArgumentativeRelation& r : doc.relations) {
        if (doc.component_index(r.source) < 0) {
            throw ReferenceError(doc.essay_id + ": relation " + r.id + " references missing " + r.source);
        }
        if (doc.component_index(r.target) < 0) {
            throw ReferenceError(doc.essay_id + ": relation " + r.id + " references missing " + r.target);
        }
    }

    // token alignment and sentence context
    std::map<int, int> last_component_token_end_in_sentence;
    for (ArgumentComponent& c : doc.components) {
        int tb = -1, te = -1;
        for (std::size_t ti = 0; ti < doc.tokens.size(); ++ti) {
            const Token& t = doc.tokens[ti];
            if (t.char_end <= c.span.begin) continue;
            if (t.char_start >= c.span.end) break;
            if (tb < 0) tb = static_cast<int>(ti);
            te = static_cast<int>(ti) + 1;
        }
        if (tb < 0) {
            throw ValidityError(doc.essay_id + ": component " + c.id + " covers no tokens");
        }
        const Token& first = doc.tokens[static_cast<std::size_t>(tb)];
        const Token& last = doc.tokens[static_cast<std::size_t>(te - 1)];
        if (first.char_start < c.span.begin || last.char_end > c.span.end) {
            log::info(doc.essay_id, ": component ", c.id, " boundary snapped to [",
                      first.char_start, ",", last.char_end, ")");
        }
        c.token_begin = tb;
        c.token_end = te;
        c.para_index = first.para_index;
        if (last.para_index != first.para_index) {
            throw ValidityError(doc.essay_id + ": component " + c.id + " spans paragraphs");
        }

        const Sentence& sent = doc.sentences[static_cast<std::size_t>(first.sent_index)];
        int lo = sent.token_begin;
        auto it = last_component_token_end_in_sentence.find(first.sent_index);
        if (it != last_component_token_end_in_sentence.end()) lo = std::max(lo, it->second);
        if (lo < tb) {
            c.preceding_span = Span{doc.tokens[static_cast<std::size_t>(lo)].char_start,
                                    doc.tokens[static_cast<std::size_t>(tb - 1)].char_end};
        }
        last_component_token_end_in_sentence[first.sent_index] = te;
    }
    return doc;
}

std::string to_ann(const Document& doc) {
    std::ostringstream out;
    for (const ArgumentComponent& c : doc.components) {
        out << c.id << '\t' << to_string(c.ctype) << ' ' << c.span.begin << ' ' << c.span.end
            << '\t' << doc.span_text(c.span) << '\n';
    }
    int next_attr = 1;
    for (const ArgumentComponent& c : doc.components) {
        if (c.stance) {
            out << 'A' << next_attr++ << "\tStance " << c.id << ' ' << to_string(*c.stance) << '\n';
        }
    }
    for (const ArgumentativeRelation& r : doc.relations) {
        out << r.id << '\t' << to_string(r.rtype) << " Arg1:" << r.source << " Arg2:" << r.target
            << '\n';
    }
    return out.str();
}

std::vector<Document> load_corpus_dir(const std::string& dir, const ParseOptions& opts) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) {
        throw DataError("corpus directory not found: " + dir);
    }
    std::vector<fs::path> txt_files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".txt") {
            txt_files.push_back(entry.path());
        }
    }
    std::sort(txt_files.begin(), txt_files.end());
    std::vector<Document> corpus;
    for (const fs::path& txt : txt_files) {
        std::string essay_id = txt.stem().string();
        std::string essay_text = io::read_file(txt.string());
        fs::path ann = txt;
        ann.replace_extension(".ann");
        std::string ann_text = fs::exists(ann) ? io::read_file(ann.string()) : std::string();
        fs::path side = txt;
        side.replace_extension(".json");
        std::optional<SidecarLayers> layers;
        if (fs::exists(side)) {
            layers = parse_sidecar_json(io::read_file(side.string()));
        }
        corpus.push_back(parse_brat(essay_id, essay_text, ann_text,
                                    layers ? &*layers : nullptr, opts));
    }
    return corpus;
}

// ---------------------------------------------------------------------------
// IOB
// ---------------------------------------------------------------------------

std::vector<IobLabel> encode_iob(const Document& doc) {
    std::vector<IobLabel> labels(doc.tokens.size(), IobLabel::Outside);
    for (const ArgumentComponent& c : doc.components) {
        if (c.token_begin < 0) continue;
        labels[static_cast<std::size_t>(c.token_begin)] = IobLabel::ArgB;
        for (int t = c.token_begin + 1; t < c.token_end; ++t) {
            labels[static_cast<std::size_t>(t)] = IobLabel::ArgI;
        }
    }
    return labels;
}

std::vector<TokenSpan> decode_iob(const std::vector<IobLabel>& labels,
                                  const std::vector<Token>& tokens) {
    std::vector<TokenSpan> spans;
    int n = static_cast<int>(labels.size());
    int i = 0;
    while (i < n) {
        if (labels[static_cast<std::size_t>(i)] == IobLabel::Outside) {
            ++i;
            continue;
        }
        int para = tokens[static_cast<std::size_t>(i)].para_index;
        int j = i + 1;
        while (j < n && labels[static_cast<std::size_t>(j)] == IobLabel::ArgI &&
               tokens[static_cast<std::size_t>(j)].para_index == para) {
            ++j;
        }
        spans.push_back({i, j});
        i = j;
    }
    return spans;
}

// ---------------------------------------------------------------------------
// Pairs, stats, splits, validation
// ---------------------------------------------------------------------------

std::vector<std::pair<int, int>> component_pairs(int n) {
    std::vector<std::pair<int, int>> out;
    out.reserve(n > 1 ? static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) : 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i != j) out.emplace_back(i, j);
        }
    }
    return out;
}

std::vector<std::pair<int, int>> document_component_pairs(const Document& doc) {
    std::vector<std::pair<int, int>> out;
    for (std::size_t pi = 0; pi < doc.paragraphs.size(); ++pi) {
        std::vector<int> comps = doc.components_in_paragraph(static_cast<int>(pi));
        for (auto [i, j] : component_pairs(static_cast<int>(comps.size()))) {
            out.emplace_back(comps[static_cast<std::size_t>(i)], comps[static_cast<std::size_t>(j)]);
        }
    }
    return out;
}

namespace {

// Incoming-relation depth of the premise tree feeding each component.
// Returns per-component counts used for argument statistics.
void argument_counts(const Document& doc, long& arguments, long& serial) {
    std::map<std::string, std::vector<const ArgumentativeRelation*>> incoming;
    for (const ArgumentativeRelation& r : doc.relations) incoming[r.target].push_back(&r);
    for (const ArgumentComponent& c : doc.components) {
        if (c.ctype == ComponentType::Premise) continue;
        auto it = incoming.find(c.id);
        if (it == incoming.end() || it->second.empty()) continue;
        ++arguments;
        // serial when any premise feeding this claim is itself a relation target
        bool is_serial = false;
        std::vector<std::string> queue;
        for (const auto* r : it->second) queue.push_back(r->source);
        std::set<std::string> seen;
        while (!queue.empty() && !is_serial) {
            std::string cur = queue.back();
            queue.pop_back();
            if (!seen.insert(cur).second) continue;
            auto in = incoming.find(cur);
            if (in != incoming.end() && !in->second.empty()) {
                is_serial = true;
                break;
            }
        }
        if (is_serial) ++serial;
    }
}

}  // namespace

CorpusStats corpus_stats(const std::vector<Document>& corpus) {
    CorpusStats s;
    s.essays = static_cast<long>(corpus.size());
    for (const Document& doc : corpus) {
        s.sentences += static_cast<long>(doc.sentences.size());
        s.tokens += static_cast<long>(doc.tokens.size());
        for (const Paragraph& p : doc.paragraphs) {
            if (!p.is_title) ++s.paragraphs;
        }
        for (const ArgumentComponent& c : doc.components) {
            ++s.components;
            switch (c.ctype) {
                case ComponentType::MajorClaim: ++s.major_claims; break;
                case ComponentType::Claim: ++s.claims; break;
                case ComponentType::Premise: ++s.premises; break;
            }
            if (c.ctype == ComponentType::Claim && c.stance) {
                if (*c.stance == Stance::For) {
                    ++s.claims_for;
                } else {
                    ++s.claims_against;
                }
            }
        }
        for (const ArgumentativeRelation& r : doc.relations) {
            if (r.rtype == RelationType::Support) {
                ++s.support;
            } else {
                ++s.attack;
            }
        }
        argument_counts(doc, s.arguments, s.serial_arguments);
    }
    return s;
}

std::string stats_to_csv(const CorpusStats& stats, const std::vector<Document>& corpus) {
    std::ostringstream out;
    out << "metric;total;mean_per_essay;stddev\n";
    auto fmt = [](double v) {
        std::ostringstream o;
        o.precision(4);
        o << std::fixed << v;
        return o.str();
    };
    auto row = [&](const std::string& name, long total, auto per_essay) {
        double n = corpus.empty() ? 1.0 : static_cast<double>(corpus.size());
        double mean = 0.0, var = 0.0;
        std::vector<double> vals;
        for (const Document& d : corpus) vals.push_back(static_cast<double>(per_essay(d)));
        for (double v : vals) mean += v;
        mean /= n;
        for (double v : vals) var += (v - mean) * (v - mean);
        var /= n;
        out << name << ';' << total << ';' << (corpus.empty() ? "" : fmt(mean)) << ';'
            << (corpus.empty() ? "" : fmt(std::sqrt(var))) << '\n';
    };
    out << "essays;" << stats.essays << ";;\n";
    row("sentences", stats.sentences, [](const Document& d) { return d.sentences.size(); });
    row("tokens", stats.tokens, [](const Document& d) { return d.tokens.size(); });
    row("paragraphs", stats.paragraphs, [](const Document& d) {
        long c = 0;
        for (const Paragraph& p : d.paragraphs) {
            if (!p.is_title) ++c;
        }
        return c;
    });
    auto type_count = [](const Document& d, ComponentType t) {
        long c = 0;
        for (const ArgumentComponent& comp : d.components) {
            if (comp.ctype == t) ++c;
        }
        return c;
    };
    row("components", stats.components, [](const Document& d) { return d.components.size(); });
    row("major_claims", stats.major_claims,
        [&](const Document& d) { return type_count(d, ComponentType::MajorClaim); });
    row("claims", stats.claims, [&](const Document& d) { return type_count(d, ComponentType::Claim); });
    row("premises", stats.premises,
        [&](const Document& d) { return type_count(d, ComponentType::Premise); });
    out << "claims_for;" << stats.claims_for << ";;\n";
    out << "claims_against;" << stats.claims_against << ";;\n";
    out << "support_relations;" << stats.support << ";;\n";
    out << "attack_relations;" << stats.attack << ";;\n";
    out << "arguments;" << stats.arguments << ";;\n";
    out << "serial_arguments;" << stats.serial_arguments << ";;\n";
    return out.str();
}

namespace {

std::string strip_quotes(const std::string& s) {
    std::string v = text::strip(s);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') {
        v = v.substr(1, v.size() - 2);
    }
    return v;
}

}  // namespace

SplitSpec parse_split_csv(std::string_view csv) {
    SplitSpec spec;
    int line_no = 0;
    bool header_seen = false;
    for (const std::string& raw : text::split(csv, '\n')) {
        ++line_no;
        std::string line = text::strip(raw);
        if (line.empty()) continue;
        std::vector<std::string> cells = text::split(line, ';');
        if (cells.size() != 2) {
            throw ParseError("split line " + std::to_string(line_no) + ": expected 'ID;SET'");
        }
        std::string id = strip_quotes(cells[0]);
        std::string set = strip_quotes(cells[1]);
        if (!header_seen) {
            header_seen = true;
            std::string u0, u1;
            for (char c : id) u0 += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            for (char c : set) u1 += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
            if (u0 == "ID" && u1 == "SET") continue;
            throw ParseError("split line " + std::to_string(line_no) + ": missing 'ID;SET' header");
        }
        SplitSet value;
        if (set == "TRAIN") {
            value = SplitSet::Train;
        } else if (set == "TEST") {
            value = SplitSet::Test;
        } else {
            throw ParseError("split line " + std::to_string(line_no) + ": set must be TRAIN or TEST");
        }
        if (!spec.assignment.emplace(id, value).second) {
            throw ConfigError("split: duplicate id " + id);
        }
    }
    return spec;
}

std::pair<std::vector<const Document*>, std::vector<const Document*>> load_split(
    const SplitSpec& split, const std::vector<Document>& corpus) {
    std::set<std::string> corpus_ids;
    for (const Document& d : corpus) corpus_ids.insert(d.essay_id);
    for (const auto& [id, set] : split.assignment) {
        (void)set;
        if (!corpus_ids.count(id)) {
            throw ConfigError("split: id " + id + " not in corpus");
        }
    }
    std::vector<const Document*> train, test;
    for (const Document& d : corpus) {
        auto it = split.assignment.find(d.essay_id);
        if (it == split.assignment.end()) {
            throw ConfigError("split: essay " + d.essay_id + " missing from split");
        }
        (it->second == SplitSet::Train ? train : test).push_back(&d);
    }
    return {std::move(train), std::move(test)};
}

std::vector<Violation> validate_document(const Document& doc) {
    std::vector<Violation> out;
    auto add = [&](const std::string& kind, const std::string& detail) {
        out.push_back({doc.essay_id, kind, detail});
    };
    std::map<std::string, int> out_degree;
    std::map<std::string, std::vector<std::string>> adj;
    for (const ArgumentativeRelation& r : doc.relations) {
        ++out_degree[r.source];
        adj[r.source].push_back(r.target);
        const ArgumentComponent* s = doc.find_component(r.source);
        const ArgumentComponent* t = doc.find_component(r.target);
        if (s && t && s->para_index != t->para_index) {
            add("cross-paragraph relation", r.id + ": " + r.source + " -> " + r.target);
        }
        if (s && t && r.source == r.target) {
            add("self relation", r.id);
        }
    }
    for (const ArgumentComponent& c : doc.components) {
        int deg = out_degree.count(c.id) ? out_degree[c.id] : 0;
        if (c.ctype == ComponentType::Premise && deg != 1) {
            add("premise out-degree", c.id + " has out-degree " + std::to_string(deg));
        }
        if (c.ctype != ComponentType::Premise && deg != 0) {
            add(c.ctype == ComponentType::Claim ? "claim out-degree" : "major-claim out-degree",
                c.id + " has out-degree " + std::to_string(deg));
        }
        if (c.ctype == ComponentType::Claim && !c.stance) {
            add("claim without stance", c.id);
        }
        if (c.ctype != ComponentType::Claim && c.stance) {
            add("stance on non-claim", c.id);
        }
    }
    // cycle check over the relation graph
    std::map<std::string, int> state;  // 0 unvisited, 1 on stack, 2 done
    std::vector<std::string> cycle_nodes;
    std::function<bool(const std::string&)> dfs = [&](const std::string& u) -> bool {
        state[u] = 1;
        for (const std::string& v : adj[u]) {
            if (state[v] == 1) return true;
            if (state[v] == 0 && dfs(v)) return true;
        }
        state[u] = 2;
        return false;
    };
    for (const ArgumentComponent& c : doc.components) {
        if (state[c.id] == 0 && dfs(c.id)) {
            add("cycle", "relation graph contains a cycle through " + c.id);
            break;
        }
    }
    return out;
}

}  // namespace argstruct::corpus
