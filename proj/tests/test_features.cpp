#include <doctest.h>

#include <cmath>
#include <functional>
#include <set>

#include "argstruct/corpus.hpp"
#include "argstruct/errors.hpp"
#include "argstruct/features.hpp"
#include "argstruct/syntax.hpp"

using namespace argstruct;
using namespace argstruct::features;

namespace {

const char* kFixtureDir = ARGSTRUCT_FIXTURE_DIR;

// Title paragraph, one body paragraph, a major claim with a thesis marker in
// its preceding tokens and a premise introduced by "Because". All expected
// values below were worked out by hand from this layout.
//
// flat tokens: Short(0) title(1) | In(2) my(3) opinion(4) X(5) is(6) good(7)
// .(8) | Because(9) Y(10) is(11) good(12) .(13) | Because(14) he(15) said(16)
// so(17) .(18)
corpus::Document toy_doc() {
    const std::string text =
        "Short title\n\nIn my opinion X is good. Because Y is good. Because he said so.\n";
    const std::string ann =
        "T1\tMajorClaim 27 36\tX is good\n"
        "T2\tPremise 46 55\tY is good\n"
        "R1\tsupports Arg1:T2 Arg2:T1\n";
    return corpus::parse_brat("toy", text, ann);
}

void check_same(const FeatureVector& got, const FeatureVector& want) {
    for (const auto& [name, value] : want) {
        INFO("missing or wrong: " << name);
        REQUIRE(got.count(name) == 1);
        CHECK(got.at(name) == doctest::Approx(value).epsilon(1e-12));
    }
    for (const auto& [name, value] : got) {
        INFO("unexpected: " << name);
        CHECK(want.count(name) == 1);
    }
}

// Disabling one group must remove exactly the names carrying its prefix.
void check_group_removal(const FeatureVector& full,
                         const std::function<FeatureVector(const FeatureConfig&)>& extract) {
    std::set<std::string> groups;
    for (const auto& [name, value] : full) groups.insert(name.substr(0, name.find(':')));
    for (const auto& g : groups) {
        FeatureConfig cfg;
        cfg.enabled = groups;
        cfg.enabled->erase(g);
        FeatureVector want;
        for (const auto& [name, value] : full)
            if (name.rfind(g + ":", 0) != 0) want[name] = value;
        check_same(extract(cfg), want);
    }
}

}  // namespace

TEST_CASE("indicator lexicon holds the tokenized phrase lists") {
    const auto& lex = IndicatorLexicon::builtin();
    CHECK(lex.forward.size() == 24);
    CHECK(lex.backward.size() == 33);
    CHECK(lex.thesis.size() == 48);
    CHECK(lex.rebuttal.size() == 10);
    CHECK(lex.first_person == std::vector<std::string>{"I", "me", "my", "mine", "myself"});

    // multi-word phrases are stored as token sequences from the corpus tokenizer
    const std::vector<std::string> comma_phrase = {"Thus", ",", "it", "is", "clearly",
                                                   "seen", "that"};
    bool found = false;
    for (const auto& p : lex.forward) found = found || p == comma_phrase;
    CHECK(found);
    // case matters: "Because" leads forward, "because" backward
    CHECK(std::count(lex.forward.begin(), lex.forward.end(),
                     std::vector<std::string>{"Because"}) == 1);
    CHECK(std::count(lex.backward.begin(), lex.backward.end(),
                     std::vector<std::string>{"because"}) == 1);
}

TEST_CASE("embedding table parses word-per-line vectors") {
    const auto table = parse_embeddings("a 1 2\nb -0.5 4\n\n");
    CHECK(table.dim == 2);
    CHECK(table.vectors.at("a") == std::vector<double>{1.0, 2.0});
    CHECK(table.vectors.at("b") == std::vector<double>{-0.5, 4.0});

    CHECK_THROWS_AS(parse_embeddings("a 1 2\nb 3\n"), DataError);
    CHECK_THROWS_AS(parse_embeddings("a one two\n"), DataError);
    CHECK_THROWS_AS(parse_embeddings("lonely\n"), DataError);
    CHECK(parse_embeddings("").vectors.empty());
}

TEST_CASE("bundled embedding fixture loads") {
    const auto table = load_embeddings(std::string(kFixtureDir) + "/embeddings.txt");
    CHECK(table.dim == 16);
    CHECK(table.vectors.count("the") == 1);
    CHECK(table.vectors.count("walkway") == 0);  // deliberately out of vocabulary
}

TEST_CASE("subjectivity lexicon parses polarity rows") {
    const auto lex = parse_subjectivity("Good,positive\nbad,negative\ntable,neutral\n");
    CHECK(lex.polarity.at("good") == 1);
    CHECK(lex.polarity.at("bad") == -1);
    CHECK(lex.polarity.at("table") == 0);
    CHECK_THROWS_AS(parse_subjectivity("word,sideways\n"), DataError);
    CHECK_THROWS_AS(parse_subjectivity("word\n"), DataError);

    const auto fixture = load_subjectivity(std::string(kFixtureDir) + "/subjclues.csv");
    bool pos = false, neg = false, neutral = false;
    for (const auto& [w, p] : fixture.polarity) {
        pos = pos || p > 0;
        neg = neg || p < 0;
        neutral = neutral || p == 0;
    }
    CHECK(pos);
    CHECK(neg);
    CHECK(neutral);
}

TEST_CASE("token begin probabilities count preceding n-grams") {
    const auto doc = toy_doc();
    REQUIRE(doc.tokens.size() == 19);
    std::vector<const corpus::Document*> train = {&doc};
    const auto table = estimate_argb_probabilities(train);

    // "opinion" precedes only the component start "X"
    CHECK(table.lookup("opinion", "Arg-B") == 1.0);
    CHECK(table.lookup("my opinion", "Arg-B") == 1.0);
    CHECK(table.lookup("In my opinion", "Arg-B") == 1.0);
    // "Because" precedes "Y" (a begin) and "he" (not one)
    CHECK(table.lookup("Because", "Arg-B") == 0.5);
    CHECK(table.lookup("good . Because", "Arg-B") == 0.5);
    // seen but never before a begin, and never seen at all
    CHECK(table.lookup("is", "Arg-B") == 0.0);
    CHECK(table.lookup("quantum", "Arg-B") == 0.0);
    // windows never cross the title boundary
    CHECK(table.lookup("title", "Arg-B") == 0.0);

    for (const auto& [g, outcomes] : table.table)
        for (const auto& [o, p] : outcomes) {
            CHECK(p >= 0.0);
            CHECK(p <= 1.0);
        }

    // duplicating the corpus scales numerator and denominator alike
    std::vector<const corpus::Document*> twice = {&doc, &doc};
    CHECK(estimate_argb_probabilities(twice).table == table.table);
}

TEST_CASE("component type probabilities are conditioned on preceding tokens") {
    const auto doc = toy_doc();
    std::vector<const corpus::Document*> train = {&doc};
    const auto table = estimate_type_probabilities(train);

    CHECK(table.lookup("opinion", "MajorClaim") == 1.0);
    CHECK(table.lookup("In my opinion", "MajorClaim") == 1.0);
    CHECK(table.lookup("Because", "Premise") == 0.5);
    CHECK(table.lookup("Because", "MajorClaim") == 0.0);
    CHECK(table.lookup("opinion", "Premise") == 0.0);

    std::vector<const corpus::Document*> twice = {&doc, &doc};
    CHECK(estimate_type_probabilities(twice).table == table.table);
}

TEST_CASE("direction association scores follow the log-ratio definition") {
    const auto doc = toy_doc();
    std::vector<const corpus::Document*> train = {&doc};
    const auto pmi = estimate_pmi(train);

    // component tokens: x,is,good with incoming; y,is,good with outgoing
    CHECK(pmi.value("x", true) == doctest::Approx(std::log(2.0)));
    CHECK(pmi.value("is", true) == doctest::Approx(0.0));
    CHECK(pmi.value("good", true) == doctest::Approx(0.0));
    CHECK(pmi.value("y", true) == 0.0);  // never in a component with incoming relations
    CHECK(pmi.incoming.count("y") == 0);
    CHECK(pmi.value("y", false) == doctest::Approx(std::log(2.0)));
    CHECK(pmi.value("x", false) == 0.0);
    CHECK(pmi.value("unseen", true) == 0.0);

    std::vector<const corpus::Document*> twice = {&doc, &doc};
    const auto again = estimate_pmi(twice);
    CHECK(again.incoming == pmi.incoming);
    CHECK(again.outgoing == pmi.outgoing);
}

TEST_CASE("frequency cutoffs keep the top k with lexicographic ties") {
    const std::string text = "Tie break\n\nb b a a c c\n";
    const std::string ann;
    const auto doc = corpus::parse_brat("ties", text, ann);
    std::vector<const corpus::Document*> train = {&doc};

    CHECK(most_frequent_unigrams(train, 2) == std::set<std::string>{"a", "b"});
    CHECK(most_frequent_unigrams(train, 100) ==
          std::set<std::string>{"a", "b", "break", "c", "tie"});
    // no dependency or constituency layers: nothing to count
    CHECK(most_frequent_dependency_tuples(train, 10).empty());
    CHECK(most_frequent_production_rules(train, 10).empty());
}

TEST_CASE("token features match a hand-derived vector") {
    const auto doc = toy_doc();
    std::vector<const corpus::Document*> train = {&doc};
    const auto tables = fit_tables(train);

    SUBCASE("component-initial token") {
        const auto fv = token_features(doc, 5, tables);  // "X"
        check_same(fv, {
                           {"prob:argb", 1.0},
                           {"struct:in_conclusion", 1.0},
                           {"struct:in_intro", 1.0},
                           {"struct:pos_doc_abs", 5.0},
                           {"struct:pos_doc_rel", 5.0 / 18},
                           {"struct:pos_para_abs", 3.0},
                           {"struct:pos_para_rel", 3.0 / 16},
                           {"struct:pos_sent_abs", 3.0},
                           {"struct:pos_sent_rel", 0.5},
                           {"struct:sent_pos_doc_abs", 1.0},
                           {"struct:sent_pos_doc_rel", 1.0 / 3},
                       });
    }

    SUBCASE("sentence-final full stop") {
        const auto fv = token_features(doc, 8, tables);
        check_same(fv, {
                           {"struct:in_conclusion", 1.0},
                           {"struct:in_intro", 1.0},
                           {"struct:is_fullstop", 1.0},
                           {"struct:is_punct", 1.0},
                           {"struct:pos_doc_abs", 8.0},
                           {"struct:pos_doc_rel", 8.0 / 18},
                           {"struct:pos_para_abs", 6.0},
                           {"struct:pos_para_rel", 6.0 / 16},
                           {"struct:pos_sent_abs", 6.0},
                           {"struct:pos_sent_rel", 1.0},
                           {"struct:sent_last", 1.0},
                           {"struct:sent_pos_doc_abs", 1.0},
                           {"struct:sent_pos_doc_rel", 1.0 / 3},
                       });
    }

    SUBCASE("token after a full stop") {
        const auto fv = token_features(doc, 9, tables);  // "Because"
        CHECK(fv.at("struct:follows_punct") == 1.0);
        CHECK(fv.at("struct:follows_fullstop") == 1.0);
        CHECK(fv.at("struct:sent_first") == 1.0);
        CHECK(fv.count("struct:pos_sent_abs") == 0);  // zero values are omitted
    }

    SUBCASE("begin probability takes the best preceding window") {
        CHECK(token_features(doc, 10, tables).at("prob:argb") == 0.5);
    }

    SUBCASE("out of range") {
        CHECK_THROWS_AS(token_features(doc, 19, tables), ValidityError);
        CHECK_THROWS_AS(token_features(doc, -1, tables), ValidityError);
    }
}

TEST_CASE("component features match a hand-derived vector") {
    const auto doc = toy_doc();
    std::vector<const corpus::Document*> train = {&doc};
    const auto tables = fit_tables(train);
    const auto& lex = IndicatorLexicon::builtin();

    const auto fv = component_features(doc, 0, tables, lex, nullptr);
    check_same(fv, {
                       {"ctx:after_forward", 1.0},
                       {"indic:first_person", 1.0},  // "my"
                       {"indic:thesis", 1.0},        // "In my opinion"
                       {"lex:uni=good", 1.0},
                       {"lex:uni=in", 1.0},
                       {"lex:uni=is", 1.0},
                       {"lex:uni=my", 1.0},
                       {"lex:uni=opinion", 1.0},
                       {"lex:uni=x", 1.0},
                       {"prob:type=MajorClaim", 1.0},
                       {"struct:first_in_para", 1.0},
                       {"struct:in_conclusion", 1.0},
                       {"struct:in_intro", 1.0},
                       {"struct:n_following_comps", 1.0},
                       {"struct:ratio_comp_sent", 3.0 / 7},
                       {"struct:tok_after", 1.0},
                       {"struct:tok_before", 3.0},
                       {"struct:tok_comp", 3.0},
                       {"struct:tok_para", 17.0},
                       {"struct:tok_sent", 7.0},
                   });

    // the premise sees "Because" in its preceding tokens and splits the
    // type probability with the non-component occurrence
    const auto premise = component_features(doc, 1, tables, lex, nullptr);
    CHECK(premise.at("indic:forward") == 1.0);  // "Because" (capitalized) is forward
    CHECK(premise.at("prob:type=Premise") == 0.5);
    CHECK(premise.count("prob:type=MajorClaim") == 0);
    CHECK(premise.at("struct:last_in_para") == 1.0);
    CHECK(premise.count("indic:first_person") == 0);

    CHECK_THROWS_AS(component_features(doc, 2, tables, lex, nullptr), ValidityError);
}

TEST_CASE("pair features match a hand-derived vector") {
    const auto doc = toy_doc();
    std::vector<const corpus::Document*> train = {&doc};
    const auto tables = fit_tables(train);
    const auto& lex = IndicatorLexicon::builtin();

    // premise (index 1) as source, major claim (index 0) as target
    const auto fv = pair_features(doc, 1, 0, tables, lex);
    check_same(fv, {
                       {"indic:after_forward", 1.0},
                       {"indic:src_forward", 1.0},
                       {"indic:tgt_thesis", 1.0},
                       {"lex:src=because", 1.0},
                       {"lex:src=good", 1.0},
                       {"lex:src=is", 1.0},
                       {"lex:src=y", 1.0},
                       {"lex:tgt=good", 1.0},
                       {"lex:tgt=in", 1.0},
                       {"lex:tgt=is", 1.0},
                       {"lex:tgt=my", 1.0},
                       {"lex:tgt=opinion", 1.0},
                       {"lex:tgt=x", 1.0},
                       {"pmi:any_pos_in", 1.0},
                       {"pmi:any_pos_out", 1.0},
                       {"pmi:src_pos_out", 1.0 / 3},
                       {"pmi:tgt_pos_in", 1.0 / 3},
                       {"struct:comps_in_para", 2.0},
                       {"struct:in_conclusion", 1.0},
                       {"struct:in_intro", 1.0},
                       {"struct:src_last", 1.0},
                       {"struct:src_tokens", 3.0},
                       {"struct:target_before_source", 1.0},
                       {"struct:tgt_first", 1.0},
                       {"struct:tgt_tokens", 3.0},
                   });

    CHECK_THROWS_AS(pair_features(doc, 0, 0, tables, lex), ValidityError);
    CHECK_THROWS_AS(pair_features(doc, 0, 5, tables, lex), ValidityError);
}

TEST_CASE("stance features match a hand-derived vector") {
    const auto doc = toy_doc();
    SubjectivityLexicon subj;
    subj.polarity = {{"good", 1}, {"bad", -1}, {"x", 0}};

    const auto fv = stance_features(doc, 0, &subj, nullptr);
    check_same(fv, {
                       {"lex:uni=good", 1.0},
                       {"lex:uni=in", 1.0},
                       {"lex:uni=is", 1.0},
                       {"lex:uni=my", 1.0},
                       {"lex:uni=opinion", 1.0},
                       {"lex:uni=x", 1.0},
                       {"sent:balance", 1.0},
                       {"sent:n_neutral", 1.0},
                       {"sent:n_positive", 1.0},
                       {"struct:first_in_para", 1.0},
                       {"struct:ratio_comp_sent", 3.0 / 7},
                       {"struct:tok_after", 1.0},
                       {"struct:tok_before", 3.0},
                       {"struct:tok_sent", 7.0},
                   });

    // polarity counts cover the component only, not the preceding tokens
    SubjectivityLexicon wide;
    wide.polarity = {{"opinion", -1}};
    const auto none = stance_features(doc, 0, &wide, nullptr);
    CHECK(none.count("sent:has_negative") == 0);
    CHECK(none.count("sent:n_negative") == 0);
}

TEST_CASE("extraction is pure and layer-complete essays fill every group") {
    const auto corpus = corpus::load_corpus_dir(std::string(kFixtureDir) + "/corpus");
    REQUIRE(corpus.size() == 12);
    const auto& doc = corpus.front();
    std::vector<const corpus::Document*> train;
    for (const auto& d : corpus) train.push_back(&d);
    const auto tables = fit_tables(train);
    const auto& lex = IndicatorLexicon::builtin();
    const auto emb = load_embeddings(std::string(kFixtureDir) + "/embeddings.txt");
    const auto subj = load_subjectivity(std::string(kFixtureDir) + "/subjclues.csv");

    SUBCASE("every fixture tree parses and matches its sentence tokens") {
        for (const auto& d : corpus) {
            REQUIRE(d.constituency.size() == d.sentences.size());
            for (size_t s = 0; s < d.sentences.size(); ++s) {
                const auto tree = syntax::parse_tree(d.constituency[s]);
                INFO(d.essay_id << " sentence " << s);
                CHECK(static_cast<int>(tree.leaves.size()) ==
                      d.sentences[s].token_end - d.sentences[s].token_begin);
            }
        }
    }

    SUBCASE("every token has exactly one head projection feature") {
        for (int i = 0; i < static_cast<int>(doc.tokens.size()); ++i) {
            const auto fv = token_features(doc, i, tables);
            int lexsyn_nodes = 0;
            for (const auto& [name, v] : fv)
                if (name.rfind("lexsyn:node=", 0) == 0) ++lexsyn_nodes;
            INFO("token " << i << " '" << doc.tokens[static_cast<size_t>(i)].surface << "'");
            CHECK(lexsyn_nodes == 1);
            if (fv.count("prob:argb")) {
                CHECK(fv.at("prob:argb") >= 0.0);
                CHECK(fv.at("prob:argb") <= 1.0);
            }
        }
    }

    SUBCASE("ancestor features mark sentence boundaries with -1") {
        const int first = doc.sentences[1].token_begin;
        const auto fv = token_features(doc, first, tables);
        CHECK(fv.at("syn:lca_pre") == -1.0);
        CHECK(fv.count("syn:lca_pre_type=") == 0);
        CHECK(fv.at("syn:lca_fol") > 0.0);
        const auto mid = token_features(doc, first + 1, tables);
        CHECK(mid.at("syn:lca_pre") > 0.0);
        CHECK(mid.at("syn:lca_pre") <= 1.0);

        const int last = doc.sentences[1].token_end - 1;
        CHECK(token_features(doc, last, tables).at("syn:lca_fol") == -1.0);
    }

    SUBCASE("extraction is deterministic") {
        const auto a = component_features(doc, 0, tables, lex, &emb);
        const auto b = component_features(doc, 0, tables, lex, &emb);
        CHECK(a == b);
        const auto pairs = corpus::document_component_pairs(doc);
        REQUIRE(!pairs.empty());
        CHECK(pair_features(doc, pairs[0].first, pairs[0].second, tables, lex) ==
              pair_features(doc, pairs[0].first, pairs[0].second, tables, lex));
    }

    SUBCASE("disabling a group removes exactly its prefix") {
        check_group_removal(token_features(doc, 10, tables), [&](const FeatureConfig& cfg) {
            return token_features(doc, 10, tables, cfg);
        });
        check_group_removal(component_features(doc, 0, tables, lex, &emb),
                            [&](const FeatureConfig& cfg) {
                                return component_features(doc, 0, tables, lex, &emb, cfg);
                            });
        const auto pairs = corpus::document_component_pairs(doc);
        check_group_removal(pair_features(doc, pairs[0].first, pairs[0].second, tables, lex),
                            [&](const FeatureConfig& cfg) {
                                return pair_features(doc, pairs[0].first, pairs[0].second, tables,
                                                     lex, cfg);
                            });
        check_group_removal(stance_features(doc, 0, &subj, &emb), [&](const FeatureConfig& cfg) {
            return stance_features(doc, 0, &subj, &emb, cfg);
        });
    }

    SUBCASE("tree-dependent groups appear when the layers are present") {
        const auto fv = component_features(doc, 0, tables, lex, &emb);
        bool syn = false, emb_seen = false, disc = false;
        for (const auto& [name, v] : fv) {
            syn = syn || name.rfind("syn:", 0) == 0;
            emb_seen = emb_seen || name.rfind("emb:", 0) == 0;
            disc = disc || name.rfind("disc:", 0) == 0;
        }
        CHECK(syn);
        CHECK(emb_seen);
        CHECK(doc.has_discourse());

        const auto st = stance_features(doc, 0, &subj, &emb);
        bool score = false;
        for (const auto& [name, v] : st) score = score || name.rfind("sent:score_", 0) == 0;
        CHECK(score == doc.has_sentiment());
    }

    SUBCASE("cross-paragraph pairs violate the contract") {
        int a = -1, b = -1;
        for (size_t i = 0; i + 1 < doc.components.size() && a < 0; ++i)
            for (size_t j = i + 1; j < doc.components.size(); ++j)
                if (doc.components[i].para_index != doc.components[j].para_index) {
                    a = static_cast<int>(i);
                    b = static_cast<int>(j);
                    break;
                }
        REQUIRE(a >= 0);
        CHECK_THROWS_AS(pair_features(doc, a, b, tables, lex), ValidityError);
    }

    SUBCASE("fixture-wide table sanity") {
        for (const auto& [g, outcomes] : tables.type_prob.table)
            for (const auto& [o, p] : outcomes) {
                CHECK(p >= 0.0);
                CHECK(p <= 1.0);
            }
        CHECK(!tables.dep_tuples.empty());
        CHECK(!tables.pair_rules.empty());
        CHECK(!tables.pair_unigrams.empty());
        CHECK(most_frequent_dependency_tuples(train, 5).size() == 5);
        CHECK(most_frequent_unigrams(train, 7).size() == 7);
    }
}

TEST_CASE("span and paragraph helpers") {
    const auto doc = toy_doc();
    CHECK(tokens_in_span(doc, {27, 36}) == std::vector<int>{5, 6, 7});
    CHECK(tokens_in_span(doc, {0, 5}) == std::vector<int>{0});
    CHECK(intro_paragraph(doc) == 1);
    CHECK(conclusion_paragraph(doc) == 1);
}
