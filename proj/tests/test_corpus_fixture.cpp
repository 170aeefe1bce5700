#include <doctest.h>

#include <set>

#include "argstruct/corpus.hpp"
#include "argstruct/io.hpp"

using namespace argstruct;
using namespace argstruct::corpus;
using argstruct::io::read_file;

namespace {
const std::string kCorpusDir = std::string(ARGSTRUCT_FIXTURE_DIR) + "/corpus";
}

TEST_CASE("bundled corpus loads with twelve essays in id order") {
    auto docs = load_corpus_dir(kCorpusDir);
    REQUIRE(docs.size() == 12);
    CHECK(docs.front().essay_id == "essay001");
    CHECK(docs.back().essay_id == "essay012");
    for (size_t i = 1; i < docs.size(); ++i) CHECK(docs[i - 1].essay_id < docs[i].essay_id);
}

TEST_CASE("bundled corpus statistics match the hand-counted values") {
    auto docs = load_corpus_dir(kCorpusDir);
    auto st = corpus_stats(docs);
    CHECK(st.essays == 12);
    CHECK(st.sentences == 113);
    CHECK(st.tokens == 1442);
    CHECK(st.paragraphs == 57);
    CHECK(st.components == 121);
    CHECK(st.major_claims == 24);
    CHECK(st.claims == 34);
    CHECK(st.premises == 63);
    CHECK(st.claims_for == 27);
    CHECK(st.claims_against == 7);
    CHECK(st.support == 51);
    CHECK(st.attack == 12);
    CHECK(st.arguments == 33);
    CHECK(st.serial_arguments == 9);

    // one essay spot-checked token by token
    const Document* e1 = nullptr;
    for (const auto& d : docs)
        if (d.essay_id == "essay001") e1 = &d;
    REQUIRE(e1 != nullptr);
    CHECK(e1->tokens.size() == 124);
    CHECK(e1->sentences.size() == 10);
    CHECK(e1->paragraphs.size() == 5);  // incl. title line
    CHECK(e1->paragraphs[0].is_title);
    CHECK(e1->components.size() == 9);
}

TEST_CASE("bundled corpus forms valid argument forests") {
    auto docs = load_corpus_dir(kCorpusDir);
    for (const auto& d : docs) {
        auto v = validate_document(d);
        CHECK_MESSAGE(v.empty(), d.essay_id, ": ", v.empty() ? "" : v.front().kind);
    }
}

TEST_CASE("fallback segmentation reproduces the sidecar layers") {
    auto docs = load_corpus_dir(kCorpusDir);
    for (const auto& d : docs) {
        auto text = read_file(kCorpusDir + "/" + d.essay_id + ".txt");
        auto ann = read_file(kCorpusDir + "/" + d.essay_id + ".ann");
        auto bare = parse_brat(d.essay_id, text, ann);  // no sidecar
        REQUIRE(bare.tokens.size() == d.tokens.size());
        for (size_t i = 0; i < bare.tokens.size(); ++i) {
            CHECK(bare.tokens[i].span() == d.tokens[i].span());
            CHECK(bare.tokens[i].surface == d.tokens[i].surface);
        }
        REQUIRE(bare.sentences.size() == d.sentences.size());
        for (size_t i = 0; i < bare.sentences.size(); ++i)
            CHECK(bare.sentences[i].span == d.sentences[i].span);
    }
}

TEST_CASE("bundled corpus carries every sidecar layer") {
    auto docs = load_corpus_dir(kCorpusDir);
    for (const auto& d : docs) {
        CHECK(d.has_constituency());
        CHECK(d.has_dependencies());
        CHECK(d.has_discourse());
        CHECK(d.has_sentiment());
        REQUIRE(d.constituency.size() == d.sentences.size());
        REQUIRE(d.sentiment.size() == d.sentences.size());
        for (const auto& t : d.tokens) {
            CHECK(!t.pos.empty());
            CHECK(!t.lemma.empty());
        }
    }
}

TEST_CASE("bundled split assigns eight train and four test essays") {
    auto docs = load_corpus_dir(kCorpusDir);
    auto spec = parse_split_csv(read_file(kCorpusDir + "/train-test-split.csv"));
    auto [train, test] = load_split(spec, docs);
    CHECK(train.size() == 8);
    CHECK(test.size() == 4);
    std::set<std::string> test_ids;
    for (const auto* d : test) test_ids.insert(d->essay_id);
    CHECK(test_ids == std::set<std::string>{"essay009", "essay010", "essay011", "essay012"});
}

TEST_CASE("annotation serialization round-trips the bundled files byte for byte") {
    auto docs = load_corpus_dir(kCorpusDir);
    for (const auto& d : docs) {
        auto original = read_file(kCorpusDir + "/" + d.essay_id + ".ann");
        CHECK(to_ann(d) == original);
    }
}

TEST_CASE("non-ascii essay uses code point offsets") {
    auto docs = load_corpus_dir(kCorpusDir);
    const Document* e11 = nullptr;
    for (const auto& d : docs)
        if (d.essay_id == "essay011") e11 = &d;
    REQUIRE(e11 != nullptr);
    bool saw_cafe = false;
    for (const auto& c : e11->components) {
        auto text = e11->span_text(c.span);
        if (text.find("caf\xc3\xa9") != std::string::npos) saw_cafe = true;
        // every component's span must resolve to its annotation text
        CHECK(!text.empty());
    }
    CHECK(saw_cafe);
}
