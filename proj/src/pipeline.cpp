#include "argstruct/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <set>

#include <json.hpp>

#include "argstruct/errors.hpp"
#include "argstruct/io.hpp"
#include "argstruct/log.hpp"

namespace argstruct::pipeline {

using corpus::ArgumentComponent;
using corpus::ArgumentativeRelation;
using corpus::ComponentType;
using corpus::Document;
using corpus::IobLabel;
using corpus::RelationType;
using corpus::Span;
using corpus::Stance;

namespace {

// Class name lists follow the enum orders; classifier label indices cast
// directly to the enums.
const std::vector<std::string> kIobNames = {"Arg-B", "Arg-I", "O"};
const std::vector<std::string> kTypeNames = {"MajorClaim", "Claim", "Premise"};
const std::vector<std::string> kLinkNames = {"NotLinked", "Linked"};
const std::vector<std::string> kStanceNames = {"Support", "Attack"};

const features::IndicatorLexicon& builtin_lexicon() {
    static const features::IndicatorLexicon lex = features::IndicatorLexicon::builtin();
    return lex;
}

struct Timer {
    std::chrono::steady_clock::time_point mark = std::chrono::steady_clock::now();

    double lap() {
        const auto now = std::chrono::steady_clock::now();
        const double ms = std::chrono::duration<double, std::milli>(now - mark).count();
        mark = now;
        return ms;
    }
};

bool is_body_paragraph(const std::vector<int>& body_like, int para) {
    if (body_like.size() < 3) return false;
    return std::find(body_like.begin() + 1, body_like.end() - 1, para) != body_like.end() - 1;
}

// Gold relation lookup: ordered component index pairs that carry a relation.
std::map<std::pair<int, int>, RelationType> gold_relation_map(const Document& doc) {
    std::map<std::pair<int, int>, RelationType> out;
    for (const ArgumentativeRelation& r : doc.relations) {
        const int s = doc.component_index(r.source);
        const int t = doc.component_index(r.target);
        if (s >= 0 && t >= 0) out[{s, t}] = r.rtype;
    }
    return out;
}

// Builds predicted components from decoded token spans, mirroring the token
// alignment the corpus parser performs for gold annotations.
void attach_predicted_components(Document& work, const std::vector<corpus::TokenSpan>& spans) {
    work.components.clear();
    std::map<int, int> last_end_in_sentence;
    int serial = 1;
    for (const corpus::TokenSpan& ts : spans) {
        ArgumentComponent c;
        c.id = "T" + std::to_string(serial++);
        c.ctype = ComponentType::Premise;
        const corpus::Token& first = work.tokens[static_cast<size_t>(ts.begin)];
        const corpus::Token& last = work.tokens[static_cast<size_t>(ts.end - 1)];
        c.span = Span{first.char_start, last.char_end};
        c.token_begin = ts.begin;
        c.token_end = ts.end;
        c.para_index = first.para_index;
        const corpus::Sentence& sent = work.sentences[static_cast<size_t>(first.sent_index)];
        int lo = sent.token_begin;
        const auto it = last_end_in_sentence.find(first.sent_index);
        if (it != last_end_in_sentence.end()) lo = std::max(lo, it->second);
        if (lo < ts.begin) {
            c.preceding_span = Span{work.tokens[static_cast<size_t>(lo)].char_start,
                                    work.tokens[static_cast<size_t>(ts.begin - 1)].char_end};
        }
        last_end_in_sentence[first.sent_index] = ts.end;
        work.components.push_back(std::move(c));
    }
}

void materialize_relations(Document& work, const std::vector<std::pair<int, int>>& edges) {
    work.relations.clear();
    int serial = 1;
    for (const auto& [s, t] : edges) {
        ArgumentativeRelation r;
        r.id = "R" + std::to_string(serial++);
        r.source = work.components[static_cast<size_t>(s)].id;
        r.target = work.components[static_cast<size_t>(t)].id;
        r.rtype = RelationType::Support;
        work.relations.push_back(std::move(r));
    }
}

nlohmann::ordered_json embeddings_to_json(const features::EmbeddingTable& e) {
    return nlohmann::ordered_json{{"dim", e.dim}, {"vectors", e.vectors}};
}

// Tree generation for every paragraph: solves the weighted structure among
// the non-major-claim components, rewrites their types, and returns the
// chosen edges as component index pairs. Paragraphs where the base
// predictions contain neither claims nor links are seeded with the relation
// heuristic when enabled; their indices are appended to fallback_out.
std::vector<std::pair<int, int>> run_joint_stage(Document& work,
                                                 const std::vector<ComponentType>& base_types,
                                                 const std::set<std::pair<int, int>>& linked,
                                                 const PipelineConfig& config,
                                                 std::vector<int>& fallback_out) {
    std::vector<std::pair<int, int>> edges;
    const auto body_like = work.body_like_paragraphs();
    for (int p = 0; p < static_cast<int>(work.paragraphs.size()); ++p) {
        std::vector<int> members;
        for (int c : work.components_in_paragraph(p)) {
            if (base_types[static_cast<size_t>(c)] != ComponentType::MajorClaim) {
                members.push_back(c);
            }
        }
        const int n = static_cast<int>(members.size());
        if (n == 0) continue;

        joint::BinaryMatrix r(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), 0));
        bool any_claim = false, any_link = false;
        for (int a = 0; a < n; ++a) {
            any_claim = any_claim ||
                        base_types[static_cast<size_t>(members[static_cast<size_t>(a)])] ==
                            ComponentType::Claim;
            for (int b = 0; b < n; ++b) {
                if (a != b && linked.count({members[static_cast<size_t>(a)],
                                            members[static_cast<size_t>(b)]})) {
                    r[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
                    any_link = true;
                }
            }
        }
        if (config.heuristic_fallback && !any_claim && !any_link &&
            is_body_paragraph(body_like, p)) {
            for (int a = 1; a < n; ++a) r[static_cast<size_t>(a)][0] = 1;
            fallback_out.push_back(p);
        }

        std::vector<bool> is_claim(static_cast<size_t>(n));
        std::vector<ComponentType> member_types(static_cast<size_t>(n));
        for (int a = 0; a < n; ++a) {
            const ComponentType t = base_types[static_cast<size_t>(members[static_cast<size_t>(a)])];
            is_claim[static_cast<size_t>(a)] = t == ComponentType::Claim;
            member_types[static_cast<size_t>(a)] = t;
        }
        const auto sol = joint::solve_tree(joint::build_weights(r, is_claim, config.phi));
        const auto structure = joint::apply_structure(sol, member_types);
        for (int a = 0; a < n; ++a) {
            work.components[static_cast<size_t>(members[static_cast<size_t>(a)])].ctype =
                structure.types[static_cast<size_t>(a)];
        }
        for (const auto& [a, b] : structure.relations) {
            edges.emplace_back(members[static_cast<size_t>(a)], members[static_cast<size_t>(b)]);
        }
    }
    return edges;
}

}  // namespace

std::string to_string(Task t) {
    switch (t) {
        case Task::Identify: return "identify";
        case Task::Classify: return "classify";
        case Task::Relations: return "relations";
        case Task::Stance: return "stance";
    }
    return "identify";
}

Task task_from_string(std::string_view s) {
    if (s == "identify") return Task::Identify;
    if (s == "classify") return Task::Classify;
    if (s == "relations") return Task::Relations;
    if (s == "stance") return Task::Stance;
    throw ConfigError("unknown task '" + std::string(s) +
                      "' (expected identify, classify, relations or stance)");
}

std::vector<int> stance_markables(const Document& doc) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(doc.components.size()); ++i) {
        if (doc.components[static_cast<size_t>(i)].ctype != ComponentType::MajorClaim) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<RelationType> gold_stances(const Document& doc) {
    std::vector<RelationType> out;
    for (int i : stance_markables(doc)) {
        const ArgumentComponent& c = doc.components[static_cast<size_t>(i)];
        if (c.ctype == ComponentType::Claim) {
            const bool against = c.stance && *c.stance == Stance::Against;
            out.push_back(against ? RelationType::Attack : RelationType::Support);
            continue;
        }
        RelationType label = RelationType::Support;
        for (const ArgumentativeRelation& r : doc.relations) {
            if (r.source == c.id) {
                label = r.rtype;
                break;
            }
        }
        out.push_back(label);
    }
    return out;
}

std::vector<int> gold_links(const Document& doc) {
    const auto gold = gold_relation_map(doc);
    std::vector<int> out;
    for (const auto& pair : corpus::document_component_pairs(doc)) {
        out.push_back(gold.count(pair) ? 1 : 0);
    }
    return out;
}

// ---------------------------------------------------------------------------
// parsing
// ---------------------------------------------------------------------------

ParsedEssay run_pipeline(const Document& doc, const Models& models, const PipelineConfig& config) {
    if (config.oracle && !config.use_gold_components) {
        throw ConfigError("oracle mode requires use_gold_components");
    }
    if (!config.use_gold_components && !models.identify) {
        throw ConfigError("identification stage enabled but no sequence model loaded");
    }
    if (!config.oracle) {
        if (config.run_classify && !models.classify) {
            throw ConfigError("classification stage enabled but no classifier loaded");
        }
        if (config.run_relations && !models.relation) {
            throw ConfigError("relation stage enabled but no classifier loaded");
        }
        if (config.run_stance && !models.stance) {
            throw ConfigError("stance stage enabled but no classifier loaded");
        }
    }
    const features::FeatureConfig& fc =
        config.features.enabled ? config.features : models.features;
    const features::EmbeddingTable* emb =
        models.embeddings ? &*models.embeddings : nullptr;
    const features::SubjectivityLexicon* subj =
        models.subjectivity ? &*models.subjectivity : nullptr;

    ParsedEssay out;
    out.doc = doc;
    Document& work = out.doc;
    Timer timer;

    // stage 1: component identification
    if (config.use_gold_components) {
        out.iob = corpus::encode_iob(work);
    } else {
        out.iob.assign(work.tokens.size(), IobLabel::Outside);
        for (const corpus::Paragraph& para : work.paragraphs) {
            if (para.token_begin >= para.token_end) continue;
            std::vector<FeatureVector> feats;
            for (int t = para.token_begin; t < para.token_end; ++t) {
                feats.push_back(features::token_features(work, t, models.tables, fc));
            }
            const std::vector<int> labels = learners::decode_sequence(*models.identify, feats);
            for (size_t k = 0; k < labels.size(); ++k) {
                out.iob[static_cast<size_t>(para.token_begin) + k] =
                    static_cast<IobLabel>(labels[k]);
            }
        }
        attach_predicted_components(work, corpus::decode_iob(out.iob, work.tokens));
        work.relations.clear();
    }
    out.stages.push_back({"identify", timer.lap()});

    const int nc = static_cast<int>(work.components.size());

    // stage 2: component classification
    out.base_types.resize(static_cast<size_t>(nc));
    for (int i = 0; i < nc; ++i) {
        out.base_types[static_cast<size_t>(i)] = work.components[static_cast<size_t>(i)].ctype;
    }
    if (config.run_classify) {
        for (int i = 0; i < nc; ++i) {
            ComponentType t;
            if (config.oracle) {
                t = doc.components[static_cast<size_t>(i)].ctype;
            } else {
                const FeatureVector f =
                    features::component_features(work, i, models.tables, builtin_lexicon(), emb, fc);
                t = static_cast<ComponentType>(learners::classify(*models.classify, f));
            }
            out.base_types[static_cast<size_t>(i)] = t;
            work.components[static_cast<size_t>(i)].ctype = t;
        }
        out.stages.push_back({"classify", timer.lap()});
    }

    // stage 3: relation identification over same-paragraph pairs, major
    // claims excluded
    std::set<std::pair<int, int>> linked;
    if (config.run_relations) {
        const auto gold = config.oracle ? gold_relation_map(doc)
                                        : std::map<std::pair<int, int>, RelationType>{};
        for (const auto& [i, j] : corpus::document_component_pairs(work)) {
            if (out.base_types[static_cast<size_t>(i)] == ComponentType::MajorClaim ||
                out.base_types[static_cast<size_t>(j)] == ComponentType::MajorClaim) {
                continue;
            }
            bool link;
            if (config.oracle) {
                link = gold.count({i, j}) > 0;
            } else {
                const FeatureVector f =
                    features::pair_features(work, i, j, models.tables, builtin_lexicon(), fc);
                link = learners::classify(*models.relation, f) == 1;
            }
            if (link) {
                linked.insert({i, j});
                out.base_links.emplace_back(i, j);
            }
        }
        out.stages.push_back({"relations", timer.lap()});
    }

    // stage 4: tree generation paragraph by paragraph
    if (config.run_joint) {
        const auto edges =
            run_joint_stage(work, out.base_types, linked, config, out.fallback_paragraphs);
        materialize_relations(work, edges);
        out.stages.push_back({"joint", timer.lap()});
    } else if (config.run_relations) {
        // Diagnostic mode: keep the raw base predictions as relations.
        materialize_relations(work, out.base_links);
    }

    // stage 5: stance recognition
    if (config.run_stance) {
        const auto oracle_stances = config.oracle ? gold_stances(doc) : std::vector<RelationType>{};
        const auto oracle_marks = config.oracle ? stance_markables(doc) : std::vector<int>{};
        std::map<int, RelationType> oracle_by_component;
        for (size_t k = 0; k < oracle_marks.size(); ++k) {
            oracle_by_component[oracle_marks[k]] = oracle_stances[k];
        }
        for (int i = 0; i < nc; ++i) work.components[static_cast<size_t>(i)].stance.reset();
        for (int i = 0; i < nc; ++i) {
            ArgumentComponent& c = work.components[static_cast<size_t>(i)];
            if (c.ctype == ComponentType::MajorClaim) continue;
            RelationType label;
            if (config.oracle) {
                label = oracle_by_component.at(i);
            } else {
                const FeatureVector f = features::stance_features(work, i, subj, emb, fc);
                label = static_cast<RelationType>(learners::classify(*models.stance, f));
            }
            out.stances.push_back(label);
            if (c.ctype == ComponentType::Claim) {
                c.stance = label == RelationType::Attack ? Stance::Against : Stance::For;
            } else {
                for (ArgumentativeRelation& r : work.relations) {
                    if (r.source == c.id) r.rtype = label;
                }
            }
        }
        out.stages.push_back({"stance", timer.lap()});
    }

    if (config.run_classify && config.run_relations && config.run_joint && config.run_stance) {
        const auto violations = corpus::validate_document(work);
        if (!violations.empty()) {
            throw DataError(work.essay_id + ": pipeline produced an invalid structure: " +
                            violations.front().kind + " (" + violations.front().detail + ")");
        }
    }
    return out;
}

ParsedEssay structure_from_base(const Document& doc,
                                const std::vector<ComponentType>& base_types,
                                const std::vector<int>& linked,
                                const PipelineConfig& config) {
    if (base_types.size() != doc.components.size()) {
        throw ValidityError("base type count does not match the document");
    }
    const auto pairs = corpus::document_component_pairs(doc);
    if (linked.size() != pairs.size()) {
        throw ValidityError("linked vector does not match the component pair count");
    }
    ParsedEssay out;
    out.doc = doc;
    out.iob = corpus::encode_iob(doc);
    out.base_types = base_types;
    std::set<std::pair<int, int>> linkset;
    for (size_t k = 0; k < pairs.size(); ++k) {
        const auto [i, j] = pairs[k];
        if (linked[k] && base_types[static_cast<size_t>(i)] != ComponentType::MajorClaim &&
            base_types[static_cast<size_t>(j)] != ComponentType::MajorClaim) {
            linkset.insert(pairs[k]);
            out.base_links.push_back(pairs[k]);
        }
    }

    Document& work = out.doc;
    for (int i = 0; i < static_cast<int>(work.components.size()); ++i) {
        work.components[static_cast<size_t>(i)].ctype = base_types[static_cast<size_t>(i)];
    }
    const auto edges = run_joint_stage(work, base_types, linkset, config, out.fallback_paragraphs);
    materialize_relations(work, edges);
    out.stages.push_back({"joint", 0.0});
    return out;
}

std::string to_json_string(const ParsedEssay& essay, bool include_timings) {
    nlohmann::ordered_json j;
    j["essay"] = essay.doc.essay_id;
    j["components"] = nlohmann::ordered_json::array();
    for (const ArgumentComponent& c : essay.doc.components) {
        nlohmann::ordered_json e{{"id", c.id},
                                 {"type", corpus::to_string(c.ctype)},
                                 {"span", {c.span.begin, c.span.end}}};
        if (c.stance) e["stance"] = corpus::to_string(*c.stance);
        j["components"].push_back(std::move(e));
    }
    j["relations"] = nlohmann::ordered_json::array();
    for (const ArgumentativeRelation& r : essay.doc.relations) {
        j["relations"].push_back(nlohmann::ordered_json{{"id", r.id},
                                                        {"source", r.source},
                                                        {"target", r.target},
                                                        {"type", corpus::to_string(r.rtype)}});
    }
    j["base_types"] = nlohmann::ordered_json::array();
    for (ComponentType t : essay.base_types) j["base_types"].push_back(corpus::to_string(t));
    j["base_links"] = essay.base_links;
    j["fallback_paragraphs"] = essay.fallback_paragraphs;
    j["stages"] = nlohmann::ordered_json::array();
    for (const StageTrace& s : essay.stages) {
        nlohmann::ordered_json e{{"name", s.name}};
        if (include_timings) e["millis"] = s.millis;
        j["stages"].push_back(std::move(e));
    }
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// training
// ---------------------------------------------------------------------------

Models train_models(const std::vector<const Document*>& train, const TrainOptions& options) {
    if (train.empty()) throw DataError("cannot train on an empty corpus");
    Models m;
    m.features = options.features;
    m.tables = features::fit_tables(train);
    if (options.embeddings) m.embeddings = *options.embeddings;
    if (options.subjectivity) m.subjectivity = *options.subjectivity;
    const features::EmbeddingTable* emb = m.embeddings ? &*m.embeddings : nullptr;
    const features::SubjectivityLexicon* subj = m.subjectivity ? &*m.subjectivity : nullptr;

    std::vector<learners::SequenceExample> sequences;
    std::vector<learners::ClassifierExample> components;
    std::vector<learners::ClassifierExample> pairs;
    std::vector<learners::ClassifierExample> stances;
    for (const Document* doc : train) {
        const auto iob = corpus::encode_iob(*doc);
        for (const corpus::Paragraph& para : doc->paragraphs) {
            if (para.token_begin >= para.token_end) continue;
            learners::SequenceExample ex;
            for (int t = para.token_begin; t < para.token_end; ++t) {
                ex.tokens.push_back(features::token_features(*doc, t, m.tables, options.features));
                ex.labels.push_back(static_cast<int>(iob[static_cast<size_t>(t)]));
            }
            sequences.push_back(std::move(ex));
        }
        for (int i = 0; i < static_cast<int>(doc->components.size()); ++i) {
            components.push_back(
                {features::component_features(*doc, i, m.tables, builtin_lexicon(), emb,
                                              options.features),
                 static_cast<int>(doc->components[static_cast<size_t>(i)].ctype)});
        }
        const auto gold = gold_relation_map(*doc);
        for (const auto& [i, j] : corpus::document_component_pairs(*doc)) {
            if (doc->components[static_cast<size_t>(i)].ctype == ComponentType::MajorClaim ||
                doc->components[static_cast<size_t>(j)].ctype == ComponentType::MajorClaim) {
                continue;
            }
            pairs.push_back(
                {features::pair_features(*doc, i, j, m.tables, builtin_lexicon(), options.features),
                 gold.count({i, j}) ? 1 : 0});
        }
        const auto marks = stance_markables(*doc);
        const auto labels = gold_stances(*doc);
        for (size_t k = 0; k < marks.size(); ++k) {
            stances.push_back(
                {features::stance_features(*doc, marks[k], subj, emb, options.features),
                 static_cast<int>(labels[k])});
        }
    }

    m.identify = learners::train_sequence(sequences, kIobNames, options.learner);
    m.classify =
        learners::train_classifier(components, kTypeNames, options.classify_degree, options.learner);
    m.relation =
        learners::train_classifier(pairs, kLinkNames, options.relation_degree, options.learner);
    m.stance =
        learners::train_classifier(stances, kStanceNames, options.stance_degree, options.learner);
    return m;
}

std::string to_json_string(const Models& m) {
    nlohmann::ordered_json j;
    j["format"] = "argstruct-models";
    j["version"] = 1;
    if (m.identify) j["identify"] = nlohmann::json::parse(learners::to_json_string(*m.identify));
    if (m.classify) j["classify"] = nlohmann::json::parse(learners::to_json_string(*m.classify));
    if (m.relation) j["relation"] = nlohmann::json::parse(learners::to_json_string(*m.relation));
    if (m.stance) j["stance"] = nlohmann::json::parse(learners::to_json_string(*m.stance));
    j["tables"] = nlohmann::json::parse(features::to_json_string(m.tables));
    if (m.features.enabled) j["features"] = *m.features.enabled;
    if (m.embeddings) j["embeddings"] = embeddings_to_json(*m.embeddings);
    if (m.subjectivity) j["subjectivity"] = m.subjectivity->polarity;
    return j.dump();
}

Models models_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad model bundle: ") + e.what());
    }
    if (j.value("format", "") != "argstruct-models") {
        throw DataError("not a model bundle file");
    }
    Models m;
    try {
        if (j.contains("identify")) m.identify = learners::sequence_from_json(j["identify"].dump());
        if (j.contains("classify")) m.classify = learners::classifier_from_json(j["classify"].dump());
        if (j.contains("relation")) m.relation = learners::classifier_from_json(j["relation"].dump());
        if (j.contains("stance")) m.stance = learners::classifier_from_json(j["stance"].dump());
        m.tables = features::tables_from_json(j.at("tables").dump());
        if (j.contains("features")) {
            m.features.enabled = j["features"].get<std::set<std::string>>();
        }
        if (j.contains("embeddings")) {
            features::EmbeddingTable e;
            e.dim = j["embeddings"].at("dim").get<int>();
            j["embeddings"].at("vectors").get_to(e.vectors);
            m.embeddings = std::move(e);
        }
        if (j.contains("subjectivity")) {
            features::SubjectivityLexicon s;
            j["subjectivity"].get_to(s.polarity);
            m.subjectivity = std::move(s);
        }
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("bad model bundle: ") + e.what());
    }
    return m;
}

void save_models(const Models& m, const std::string& path) {
    io::write_file(path, to_json_string(m));
}

Models load_models(const std::string& path) { return models_from_json(io::read_file(path)); }

// ---------------------------------------------------------------------------
// baselines
// ---------------------------------------------------------------------------

MajorityModel majority_from_training(const std::vector<const Document*>& train) {
    long iob_counts[3] = {0, 0, 0};
    long type_counts[3] = {0, 0, 0};
    long linked = 0, not_linked = 0;
    long stance_counts[2] = {0, 0};
    for (const Document* doc : train) {
        for (IobLabel l : corpus::encode_iob(*doc)) iob_counts[static_cast<int>(l)]++;
        for (const ArgumentComponent& c : doc->components) type_counts[static_cast<int>(c.ctype)]++;
        for (int g : gold_links(*doc)) (g ? linked : not_linked)++;
        for (RelationType s : gold_stances(*doc)) stance_counts[static_cast<int>(s)]++;
    }
    MajorityModel m;
    // Ties fall to the smaller enum value.
    m.iob = static_cast<IobLabel>(
        std::max_element(iob_counts, iob_counts + 3) - iob_counts);
    m.ctype = static_cast<ComponentType>(
        std::max_element(type_counts, type_counts + 3) - type_counts);
    m.linked = linked > not_linked;
    m.stance = static_cast<RelationType>(
        std::max_element(stance_counts, stance_counts + 2) - stance_counts);
    return m;
}

StagePredictions majority_baseline(const MajorityModel& model, const Document& doc) {
    StagePredictions p;
    p.iob.assign(doc.tokens.size(), model.iob);
    p.types.assign(doc.components.size(), model.ctype);
    p.linked.assign(corpus::document_component_pairs(doc).size(), model.linked ? 1 : 0);
    p.stances.assign(stance_markables(doc).size(), model.stance);
    return p;
}

StagePredictions heuristic_baseline(const Document& doc) {
    StagePredictions p;
    const auto body_like = doc.body_like_paragraphs();

    // identification: whole sentences, skipping the first two and the last
    // non-title sentence; a sentence-final full stop stays outside
    p.iob.assign(doc.tokens.size(), IobLabel::Outside);
    std::vector<int> sentence_ids;
    for (int s = 0; s < static_cast<int>(doc.sentences.size()); ++s) {
        const int para = doc.sentences[static_cast<size_t>(s)].para_index;
        if (para >= 0 && doc.paragraphs[static_cast<size_t>(para)].is_title) continue;
        sentence_ids.push_back(s);
    }
    if (sentence_ids.size() > 3) {
        for (size_t k = 2; k + 1 < sentence_ids.size(); ++k) {
            const corpus::Sentence& sent =
                doc.sentences[static_cast<size_t>(sentence_ids[k])];
            for (int t = sent.token_begin; t < sent.token_end; ++t) {
                p.iob[static_cast<size_t>(t)] =
                    t == sent.token_begin ? IobLabel::ArgB : IobLabel::ArgI;
            }
            if (sent.token_end > sent.token_begin &&
                doc.tokens[static_cast<size_t>(sent.token_end - 1)].surface == ".") {
                p.iob[static_cast<size_t>(sent.token_end - 1)] = IobLabel::Outside;
            }
        }
    }

    // classification: body-first Claim, intro-last and conclusion-first
    // MajorClaim, rest Premise
    p.types.assign(doc.components.size(), ComponentType::Premise);
    if (!body_like.empty()) {
        for (int para : body_like) {
            const auto comps = doc.components_in_paragraph(para);
            if (comps.empty()) continue;
            if (is_body_paragraph(body_like, para)) {
                p.types[static_cast<size_t>(comps.front())] = ComponentType::Claim;
            }
            if (para == body_like.front()) {
                p.types[static_cast<size_t>(comps.back())] = ComponentType::MajorClaim;
            }
            if (para == body_like.back()) {
                p.types[static_cast<size_t>(comps.front())] = ComponentType::MajorClaim;
            }
        }
    }

    // relations: linked iff the target opens a body paragraph
    for (const auto& [i, j] : corpus::document_component_pairs(doc)) {
        (void)i;
        const ArgumentComponent& target = doc.components[static_cast<size_t>(j)];
        bool first_in_body = false;
        if (is_body_paragraph(body_like, target.para_index)) {
            const auto comps = doc.components_in_paragraph(target.para_index);
            first_in_body = !comps.empty() && comps.front() == j;
        }
        p.linked.push_back(first_in_body ? 1 : 0);
    }

    // stance: everything in the second-last paragraph attacks
    const int second_last =
        body_like.size() >= 2 ? body_like[body_like.size() - 2] : -1;
    for (int i : stance_markables(doc)) {
        const bool attack = doc.components[static_cast<size_t>(i)].para_index == second_last;
        p.stances.push_back(attack ? RelationType::Attack : RelationType::Support);
    }
    return p;
}

}  // namespace argstruct::pipeline
