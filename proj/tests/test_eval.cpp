#include <doctest.h>

#include <json.hpp>
#include <algorithm>
#include <set>
#include <string>

#include "argstruct/corpus.hpp"
#include "argstruct/errors.hpp"
#include "argstruct/eval.hpp"
#include "argstruct/features.hpp"
#include "argstruct/pipeline.hpp"

using namespace argstruct;
using namespace argstruct::eval;
using corpus::ComponentType;
using corpus::Document;
using pipeline::Models;
using pipeline::PipelineConfig;
using pipeline::StagePredictions;
using pipeline::Task;

namespace {

const std::string kCorpusDir = std::string(ARGSTRUCT_FIXTURE_DIR) + "/corpus";

const std::string kToyText =
    "Cars in cities\n"
    "\n"
    "Everyone debates cars. I think cars should be banned.\n"
    "\n"
    "Cars pollute the air. Exhaust fumes are toxic.\n"
    "\n"
    "Cars cause accidents. Drivers are often careless.\n"
    "\n"
    "Thus cars must be banned.\n";

std::string span_of(const std::string& needle) {
    const auto pos = kToyText.find(needle);
    REQUIRE(pos != std::string::npos);
    return std::to_string(pos) + " " + std::to_string(pos + needle.size());
}

Document toy_doc() {
    const std::string ann =
        "T1\tMajorClaim " + span_of("cars should be banned") + "\tcars should be banned\n" +
        "T2\tClaim " + span_of("Cars pollute the air") + "\tCars pollute the air\n" +
        "T3\tPremise " + span_of("Exhaust fumes are toxic") + "\tExhaust fumes are toxic\n" +
        "T4\tClaim " + span_of("Cars cause accidents") + "\tCars cause accidents\n" +
        "T5\tPremise " + span_of("Drivers are often careless") + "\tDrivers are often careless\n" +
        "T6\tMajorClaim " + span_of("cars must be banned") + "\tcars must be banned\n" +
        "A1\tStance T2 For\n"
        "A2\tStance T4 For\n"
        "R1\tsupports Arg1:T3 Arg2:T2\n"
        "R2\tsupports Arg1:T5 Arg2:T4\n";
    return corpus::parse_brat("toy", kToyText, ann);
}

const std::vector<Document>& fixture_corpus() {
    static const std::vector<Document> docs = corpus::load_corpus_dir(kCorpusDir);
    return docs;
}

std::vector<const Document*> fixture_pointers() {
    std::vector<const Document*> out;
    for (const Document& d : fixture_corpus()) out.push_back(&d);
    return out;
}

const Models& fixture_models() {
    static const Models models = [] {
        static const features::EmbeddingTable emb =
            features::load_embeddings(std::string(ARGSTRUCT_FIXTURE_DIR) + "/embeddings.txt");
        static const features::SubjectivityLexicon subj =
            features::load_subjectivity(std::string(ARGSTRUCT_FIXTURE_DIR) + "/subjclues.csv");
        pipeline::TrainOptions opts;
        opts.embeddings = &emb;
        opts.subjectivity = &subj;
        return pipeline::train_models(fixture_pointers(), opts);
    }();
    return models;
}

std::vector<ComponentType> gold_types(const Document& doc) {
    std::vector<ComponentType> out;
    for (const corpus::ArgumentComponent& c : doc.components) out.push_back(c.ctype);
    return out;
}

}  // namespace

TEST_CASE("confusion matrices count and accumulate") {
    ConfusionMatrix cm({"x", "y", "z"});
    REQUIRE(cm.size() == 3);
    CHECK(cm.total() == 0);
    cm.add(0, 0);
    cm.add(1, 2, 4);
    cm.add(2, 2);
    CHECK(cm.counts[0][0] == 1);
    CHECK(cm.counts[1][2] == 4);
    CHECK(cm.total() == 6);
    CHECK_THROWS_AS(cm.add(3, 0), ValidityError);
    CHECK_THROWS_AS(cm.add(0, -1), ValidityError);

    SUBCASE("accumulation equals concatenated label streams") {
        ConfusionMatrix a({"x", "y", "z"});
        ConfusionMatrix b({"x", "y", "z"});
        add_labels(a, {0, 1, 2, 1}, {0, 2, 2, 1});
        add_labels(b, {2, 2, 0}, {2, 1, 0});
        ConfusionMatrix both({"x", "y", "z"});
        add_labels(both, {0, 1, 2, 1, 2, 2, 0}, {0, 2, 2, 1, 2, 1, 0});
        a += b;
        CHECK(a == both);
    }
    SUBCASE("axes must match to accumulate") {
        ConfusionMatrix a({"x", "y"});
        ConfusionMatrix b({"y", "x"});
        CHECK_THROWS_AS(a += b, ValidityError);
    }
    SUBCASE("mismatched label vectors are rejected") {
        ConfusionMatrix a({"x", "y"});
        CHECK_THROWS_AS(add_labels(a, {0, 1}, {0}), ValidityError);
    }
}

TEST_CASE("macro averaging scores each class equally") {
    SUBCASE("perfect diagonal") {
        ConfusionMatrix cm({"a", "b"});
        cm.add(0, 0, 7);
        cm.add(1, 1, 3);
        const MacroScores s = macro_prf(cm);
        CHECK(s.precision == 1.0);
        CHECK(s.recall == 1.0);
        CHECK(s.f1 == 1.0);
        CHECK(s.accuracy == 1.0);
        for (const ClassScores& c : s.per_class) CHECK(c.f1 == 1.0);
    }
    SUBCASE("hand-computed three class matrix") {
        ConfusionMatrix cm({"a", "b", "c"});
        const long counts[3][3] = {{5, 1, 0}, {2, 6, 2}, {0, 1, 8}};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) cm.add(i, j, counts[i][j]);
        const MacroScores s = macro_prf(cm);
        CHECK(s.per_class[0].precision == doctest::Approx(5.0 / 7.0).epsilon(1e-12));
        CHECK(s.per_class[0].recall == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
        CHECK(s.per_class[0].f1 == doctest::Approx(10.0 / 13.0).epsilon(1e-12));
        CHECK(s.per_class[1].precision == doctest::Approx(3.0 / 4.0).epsilon(1e-12));
        CHECK(s.per_class[1].recall == doctest::Approx(3.0 / 5.0).epsilon(1e-12));
        CHECK(s.per_class[1].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(s.per_class[2].precision == doctest::Approx(4.0 / 5.0).epsilon(1e-12));
        CHECK(s.per_class[2].recall == doctest::Approx(8.0 / 9.0).epsilon(1e-12));
        CHECK(s.per_class[2].f1 == doctest::Approx(16.0 / 19.0).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx((10.0 / 13.0 + 2.0 / 3.0 + 16.0 / 19.0) / 3.0).epsilon(1e-12));
        CHECK(s.accuracy == doctest::Approx(19.0 / 25.0).epsilon(1e-12));
    }
    SUBCASE("zero denominators score zero") {
        ConfusionMatrix cm({"a", "b"});
        cm.add(0, 0, 4);  // class b never occurs and is never predicted
        const MacroScores s = macro_prf(cm);
        CHECK(s.per_class[1].precision == 0.0);
        CHECK(s.per_class[1].recall == 0.0);
        CHECK(s.per_class[1].f1 == 0.0);
        CHECK(s.f1 == doctest::Approx(0.5));
        const ConfusionMatrix empty({"a", "b"});
        CHECK(macro_prf(empty).accuracy == 0.0);
    }
    SUBCASE("class permutations do not change the averages") {
        ConfusionMatrix cm({"a", "b", "c"});
        ConfusionMatrix permuted({"c", "a", "b"});
        const long counts[3][3] = {{5, 1, 0}, {2, 6, 2}, {0, 1, 8}};
        const int sigma[3] = {1, 2, 0};  // a->index 1, b->index 2, c->index 0
        for (int i = 0; i < 3; ++i) {
            for (int j = 0; j < 3; ++j) {
                cm.add(i, j, counts[i][j]);
                permuted.add(sigma[i], sigma[j], counts[i][j]);
            }
        }
        const MacroScores s = macro_prf(cm);
        const MacroScores p = macro_prf(permuted);
        CHECK(s.precision == doctest::Approx(p.precision).epsilon(1e-12));
        CHECK(s.recall == doctest::Approx(p.recall).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(p.f1).epsilon(1e-12));
        CHECK(s.accuracy == doctest::Approx(p.accuracy).epsilon(1e-12));
        CHECK(s.per_class[0].f1 == doctest::Approx(p.per_class[1].f1).epsilon(1e-12));
    }
    SUBCASE("a single class cannot be macro averaged") {
        CHECK_THROWS_AS(macro_prf(ConfusionMatrix({"only"})), ValidityError);
    }
}

// Constant predictors against the published test-set distributions; the
// resulting macro F1 figures are the majority baselines of the four tasks.
TEST_CASE("constant predictors reproduce the corpus-level baselines") {
    SUBCASE("token identification, always Arg-I") {
        ConfusionMatrix cm = make_task_matrix(Task::Identify);
        cm.add(0, 1, 1266);
        cm.add(1, 1, 18655);
        cm.add(2, 1, 9403);
        const MacroScores s = macro_prf(cm);
        CHECK(s.per_class[1].f1 == doctest::Approx(37310.0 / 47979.0).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(37310.0 / 143937.0).epsilon(1e-12));
        CHECK(s.accuracy == doctest::Approx(18655.0 / 29324.0).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(0.259).epsilon(5e-3));
    }
    SUBCASE("component classification, always Premise") {
        ConfusionMatrix cm = make_task_matrix(Task::Classify);
        cm.add(0, 2, 153);
        cm.add(1, 2, 304);
        cm.add(2, 2, 809);
        const MacroScores s = macro_prf(cm);
        CHECK(s.per_class[2].f1 == doctest::Approx(1618.0 / 2075.0).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(1618.0 / 6225.0).epsilon(1e-12));
        CHECK(s.accuracy == doctest::Approx(809.0 / 1266.0).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(0.260).epsilon(5e-3));
    }
    SUBCASE("relation identification, never linked") {
        ConfusionMatrix cm = make_task_matrix(Task::Relations);
        cm.add(0, 0, 4113);
        cm.add(1, 0, 809);
        const MacroScores s = macro_prf(cm);
        CHECK(s.per_class[0].f1 == doctest::Approx(8226.0 / 9035.0).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(4113.0 / 9035.0).epsilon(1e-12));
        CHECK(s.accuracy == doctest::Approx(4113.0 / 4922.0).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(0.455).epsilon(5e-3));
    }
    SUBCASE("stance recognition, always Support") {
        ConfusionMatrix cm = make_task_matrix(Task::Stance);
        cm.add(0, 0, 1021);
        cm.add(1, 0, 92);
        const MacroScores s = macro_prf(cm);
        CHECK(s.per_class[0].f1 == doctest::Approx(1021.0 / 1067.0).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(1021.0 / 2134.0).epsilon(1e-12));
        CHECK(s.accuracy == doctest::Approx(1021.0 / 1113.0).epsilon(1e-12));
        CHECK(s.f1 == doctest::Approx(0.478).epsilon(5e-3));
    }
}

TEST_CASE("score lists average field by field") {
    MacroScores a;
    a.precision = 0.8;
    a.recall = 0.6;
    a.f1 = 0.7;
    a.accuracy = 0.9;
    a.per_class = {{"x", 1.0, 0.5, 0.75}, {"y", 0.6, 0.7, 0.65}};
    MacroScores b = a;
    b.precision = 0.4;
    b.per_class[0].precision = 0.0;
    const MacroScores avg = average_scores({a, b});
    CHECK(avg.precision == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(avg.recall == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(avg.f1 == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(avg.accuracy == doctest::Approx(0.9).epsilon(1e-12));
    CHECK(avg.per_class[0].precision == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(avg.per_class[0].label == "x");

    CHECK_THROWS_AS(average_scores({}), ValidityError);
    MacroScores c = a;
    c.per_class[1].label = "z";
    CHECK_THROWS_AS(average_scores({a, c}), ValidityError);
}

TEST_CASE("task markables line up with the gold structure") {
    const Document toy = toy_doc();
    CHECK(task_labels(Task::Identify) ==
          std::vector<std::string>{"Arg-B", "Arg-I", "O"});
    CHECK(task_labels(Task::Relations) == std::vector<std::string>{"NotLinked", "Linked"});
    CHECK(make_task_matrix(Task::Stance).labels ==
          std::vector<std::string>{"Support", "Attack"});

    const auto iob = gold_task_labels(toy, Task::Identify);
    REQUIRE(iob.size() == toy.tokens.size());
    const auto encoded = corpus::encode_iob(toy);
    for (size_t i = 0; i < iob.size(); ++i) CHECK(iob[i] == static_cast<int>(encoded[i]));

    CHECK(gold_task_labels(toy, Task::Classify) == std::vector<int>{0, 1, 2, 1, 2, 0});
    CHECK(gold_task_labels(toy, Task::Relations) == std::vector<int>{0, 1, 0, 1});
    CHECK(gold_task_labels(toy, Task::Stance) == std::vector<int>{0, 0, 0, 0});
}

// The rule baseline against the toy essay: hand-tabulated confusion counts.
TEST_CASE("rule baseline evaluation matches the hand tabulation") {
    const Document toy = toy_doc();
    const StagePredictions pred = pipeline::heuristic_baseline(toy);

    SUBCASE("token identification") {
        const TaskEvaluation te = evaluate_predictions({&toy}, {pred}, Task::Identify);
        const std::vector<std::vector<long>> expected = {{4, 0, 2}, {0, 11, 6}, {0, 0, 16}};
        CHECK(te.matrix.counts == expected);
        CHECK(te.scores.per_class[0].f1 == doctest::Approx(4.0 / 5.0).epsilon(1e-12));
        CHECK(te.scores.per_class[1].f1 == doctest::Approx(11.0 / 14.0).epsilon(1e-12));
        CHECK(te.scores.per_class[2].f1 == doctest::Approx(4.0 / 5.0).epsilon(1e-12));
        CHECK(te.scores.f1 ==
              doctest::Approx((4.0 / 5.0 + 11.0 / 14.0 + 4.0 / 5.0) / 3.0).epsilon(1e-12));
        CHECK(te.scores.accuracy == doctest::Approx(31.0 / 39.0).epsilon(1e-12));
    }
    SUBCASE("classification and relations are perfect on this essay") {
        CHECK(evaluate_predictions({&toy}, {pred}, Task::Classify).scores.f1 == 1.0);
        CHECK(evaluate_predictions({&toy}, {pred}, Task::Relations).scores.f1 == 1.0);
    }
    SUBCASE("stance marks the second-last paragraph Attack") {
        const TaskEvaluation te = evaluate_predictions({&toy}, {pred}, Task::Stance);
        const std::vector<std::vector<long>> expected = {{2, 2}, {0, 0}};
        CHECK(te.matrix.counts == expected);
        CHECK(te.scores.per_class[0].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(te.scores.f1 == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(te.scores.accuracy == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("prediction and document counts must agree") {
        CHECK_THROWS_AS(evaluate_predictions({&toy}, {}, Task::Identify), ValidityError);
    }
}

TEST_CASE("fold assignment is a balanced deterministic partition") {
    const auto folds = fold_assignment(12, 5, 3);
    REQUIRE(folds.size() == 5);
    std::vector<size_t> sizes;
    std::vector<int> all;
    for (const auto& f : folds) {
        sizes.push_back(f.size());
        all.insert(all.end(), f.begin(), f.end());
    }
    CHECK(sizes == std::vector<size_t>{3, 3, 2, 2, 2});
    std::sort(all.begin(), all.end());
    std::vector<int> expected(12);
    for (int i = 0; i < 12; ++i) expected[static_cast<size_t>(i)] = i;
    CHECK(all == expected);

    CHECK(fold_assignment(12, 5, 3) == folds);
    const auto leave_one_out = fold_assignment(4, 4, 9);
    for (const auto& f : leave_one_out) CHECK(f.size() == 1);

    CHECK_THROWS_AS(fold_assignment(12, 1, 3), ConfigError);
    CHECK_THROWS_AS(fold_assignment(12, 13, 3), ConfigError);
}

TEST_CASE("paired outcomes feed the significance test") {
    PairedOutcomes po;
    for (int i = 0; i < 15; ++i) po.outcomes.emplace_back(true, false);
    for (int i = 0; i < 5; ++i) po.outcomes.emplace_back(false, true);
    for (int i = 0; i < 10; ++i) po.outcomes.emplace_back(true, true);
    for (int i = 0; i < 3; ++i) po.outcomes.emplace_back(false, false);
    const McNemarResult r = mcnemar(po);
    CHECK(r.b == 15);
    CHECK(r.c == 5);
    CHECK(r.statistic == doctest::Approx(4.05).epsilon(1e-12));
    CHECK(r.significant);

    SUBCASE("swapping the systems keeps the statistic") {
        PairedOutcomes swapped;
        for (const auto& [a, b] : po.outcomes) swapped.outcomes.emplace_back(b, a);
        const McNemarResult s = mcnemar(swapped);
        CHECK(s.b == 5);
        CHECK(s.c == 15);
        CHECK(s.statistic == doctest::Approx(4.05).epsilon(1e-12));
        CHECK(s.significant);
    }
    SUBCASE("balanced disagreement is insignificant") {
        PairedOutcomes even;
        for (int i = 0; i < 6; ++i) even.outcomes.emplace_back(true, false);
        for (int i = 0; i < 6; ++i) even.outcomes.emplace_back(false, true);
        const McNemarResult s = mcnemar(even);
        CHECK(s.statistic == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
        CHECK_FALSE(s.significant);
    }
    SUBCASE("one-sided disagreement") {
        PairedOutcomes one;
        for (int i = 0; i < 10; ++i) one.outcomes.emplace_back(true, false);
        const McNemarResult s = mcnemar(one);
        CHECK(s.statistic == doctest::Approx(8.1).epsilon(1e-12));
        CHECK(s.significant);
        one.outcomes.clear();
        one.outcomes.emplace_back(true, false);
        CHECK(mcnemar(one).statistic == 0.0);
        CHECK_FALSE(mcnemar(one).significant);
    }
    SUBCASE("identical error patterns test as zero") {
        PairedOutcomes same;
        same.outcomes.emplace_back(true, true);
        same.outcomes.emplace_back(false, false);
        const McNemarResult s = mcnemar(same);
        CHECK(s.statistic == 0.0);
        CHECK_FALSE(s.significant);
    }
    SUBCASE("outcome vectors come from label comparisons") {
        const PairedOutcomes built = paired_outcomes({0, 1, 2}, {0, 1, 0}, {1, 1, 2});
        REQUIRE(built.outcomes.size() == 3);
        CHECK(built.outcomes[0] == std::pair<bool, bool>{true, false});
        CHECK(built.outcomes[1] == std::pair<bool, bool>{true, true});
        CHECK(built.outcomes[2] == std::pair<bool, bool>{false, true});
        CHECK_THROWS_AS(paired_outcomes({0, 1}, {0}, {0, 1}), ValidityError);
    }
}

TEST_CASE("cross-validation accumulates the fold matrices") {
    const auto docs = fixture_pointers();
    const pipeline::TrainOptions opts;

    const CrossValidationResult res = cross_validate(docs, 2, Task::Classify, opts, 11);
    CHECK(res.matrix.total() == 121);
    REQUIRE(res.fold_ids.size() == 2);
    std::multiset<std::string> seen;
    for (const auto& fold : res.fold_ids) seen.insert(fold.begin(), fold.end());
    std::multiset<std::string> all;
    for (const Document* d : docs) all.insert(d->essay_id);
    CHECK(seen == all);

    SUBCASE("the run is deterministic") {
        const CrossValidationResult again = cross_validate(docs, 2, Task::Classify, opts, 11);
        CHECK(again.matrix == res.matrix);
        CHECK(again.scores.f1 == res.scores.f1);
        CHECK(again.fold_ids == res.fold_ids);
    }
    SUBCASE("folds recomputed by hand give the same matrix") {
        const auto assignment = fold_assignment(static_cast<int>(docs.size()), 2, 11);
        ConfusionMatrix manual = make_task_matrix(Task::Classify);
        for (size_t f = 0; f < assignment.size(); ++f) {
            std::vector<const Document*> train;
            for (size_t g = 0; g < assignment.size(); ++g) {
                if (g == f) continue;
                for (int idx : assignment[g]) train.push_back(docs[static_cast<size_t>(idx)]);
            }
            const Models models = pipeline::train_models(train, opts);
            std::vector<const Document*> held_out;
            for (int idx : assignment[f]) held_out.push_back(docs[static_cast<size_t>(idx)]);
            manual += evaluate_task(held_out, models, Task::Classify).matrix;
        }
        CHECK(manual == res.matrix);
    }
    SUBCASE("every task covers its markables") {
        CHECK(cross_validate(docs, 3, Task::Relations, opts, 11).matrix.total() == 190);
    }
    SUBCASE("fold counts are validated") {
        CHECK_THROWS_AS(cross_validate(docs, 1, Task::Classify, opts, 11), ConfigError);
        CHECK_THROWS_AS(cross_validate(docs, 13, Task::Classify, opts, 11), ConfigError);
    }
}

TEST_CASE("trained per-stage evaluation covers every markable") {
    const auto docs = fixture_pointers();
    const Models& models = fixture_models();

    long tokens = 0;
    long components = 0;
    long pairs = 0;
    long stance_marks = 0;
    std::vector<StagePredictions> preds;
    for (const Document* d : docs) {
        tokens += static_cast<long>(d->tokens.size());
        components += static_cast<long>(d->components.size());
        pairs += static_cast<long>(corpus::document_component_pairs(*d).size());
        stance_marks += static_cast<long>(pipeline::stance_markables(*d).size());
        preds.push_back(model_predictions(*d, models));
        CHECK(preds.back().iob.size() == d->tokens.size());
        CHECK(preds.back().types.size() == d->components.size());
        CHECK(preds.back().linked.size() == corpus::document_component_pairs(*d).size());
        CHECK(preds.back().stances.size() == pipeline::stance_markables(*d).size());
    }
    CHECK(components == 121);
    CHECK(pairs == 190);
    CHECK(stance_marks == 97);

    const long totals[] = {tokens, components, pairs, stance_marks};
    const Task tasks[] = {Task::Identify, Task::Classify, Task::Relations, Task::Stance};
    for (int t = 0; t < 4; ++t) {
        const TaskEvaluation direct = evaluate_task(docs, models, tasks[t]);
        CHECK(direct.matrix.total() == totals[t]);
        const TaskEvaluation from_preds = evaluate_predictions(docs, preds, tasks[t]);
        CHECK(from_preds.matrix == direct.matrix);
        CHECK(from_preds.scores.f1 == direct.scores.f1);
    }
}

TEST_CASE("improvement simulation interpolates toward the gold structure") {
    const auto docs = fixture_pointers();
    const pipeline::MajorityModel majority = pipeline::majority_from_training(docs);
    std::vector<StagePredictions> base;
    for (const Document* d : docs) base.push_back(pipeline::majority_baseline(majority, *d));
    PipelineConfig cfg;
    cfg.phi = {1.0, 0.0, 0.0};

    const std::vector<double> fractions = {0.0, 0.25, 0.5, 0.75, 1.0};
    const auto curve = improvement_simulation(docs, base, fractions, ImproveWhich::Both, cfg, 7, 2);
    REQUIRE(curve.size() == 5);

    SUBCASE("the zero point scores the unmodified base predictions") {
        ConfusionMatrix ct = make_task_matrix(Task::Classify);
        ConfusionMatrix cr = make_task_matrix(Task::Relations);
        for (const Document* d : docs) {
            const StagePredictions p = pipeline::majority_baseline(majority, *d);
            const auto essay = pipeline::structure_from_base(*d, p.types, p.linked, cfg);
            const auto gold = gold_types(*d);
            for (size_t i = 0; i < essay.doc.components.size(); ++i) {
                ct.add(static_cast<int>(gold[i]), static_cast<int>(essay.doc.components[i].ctype));
            }
            add_labels(cr, pipeline::gold_links(*d), parsed_links(essay));
        }
        CHECK(curve[0].component_f1 == macro_prf(ct).f1);
        CHECK(curve[0].relation_f1 == macro_prf(cr).f1);
    }
    SUBCASE("flipping every error restores the gold structure") {
        CHECK(curve[4].component_f1 == 1.0);
        CHECK(curve[4].relation_f1 == 1.0);
    }
    SUBCASE("more corrections never hurt the component scores") {
        for (size_t i = 1; i < curve.size(); ++i) {
            CHECK(curve[i].component_f1 >= curve[i - 1].component_f1);
        }
        CHECK(curve.back().relation_f1 >= curve.front().relation_f1);
    }
    SUBCASE("the curve is deterministic") {
        const auto again =
            improvement_simulation(docs, base, fractions, ImproveWhich::Both, cfg, 7, 2);
        for (size_t i = 0; i < curve.size(); ++i) {
            CHECK(again[i].component_f1 == curve[i].component_f1);
            CHECK(again[i].relation_f1 == curve[i].relation_f1);
        }
    }
    SUBCASE("invalid arguments are rejected") {
        CHECK_THROWS_AS(
            improvement_simulation(docs, base, {0.5}, ImproveWhich::Both, cfg, 7, 0),
            ConfigError);
        CHECK_THROWS_AS(
            improvement_simulation(docs, base, {1.5}, ImproveWhich::Both, cfg, 7, 1),
            ConfigError);
        std::vector<StagePredictions> short_base(base.begin(), base.end() - 1);
        CHECK_THROWS_AS(
            improvement_simulation(docs, short_base, {0.5}, ImproveWhich::Both, cfg, 7, 1),
            ValidityError);
    }
}

TEST_CASE("end-to-end component scoring matches exact spans") {
    const Document toy = toy_doc();
    PipelineConfig cfg;
    cfg.phi = {1.0, 0.0, 0.0};
    const auto perfect =
        pipeline::structure_from_base(toy, gold_types(toy), pipeline::gold_links(toy), cfg);
    CHECK(parsed_links(perfect) == std::vector<int>{0, 1, 0, 1});

    SUBCASE("a gold reproduction scores one") {
        const SpanMatchScores s = end_to_end_components({&toy}, {&perfect});
        CHECK(s.macro_f1 == 1.0);
        for (const ClassScores& c : s.per_class) CHECK(c.f1 == 1.0);
        CHECK(s.matched_spans == 6);
        CHECK(s.predicted == 6);
        CHECK(s.gold == 6);
    }
    SUBCASE("type errors keep span credit but lose class credit") {
        // All-premise base predictions without links: the solver promotes the
        // paragraph roots, leaving [Claim, Claim, Premise, Claim, Premise, Claim].
        const std::vector<ComponentType> all_premise(6, ComponentType::Premise);
        const auto degraded =
            pipeline::structure_from_base(toy, all_premise, std::vector<int>(4, 0), {});
        const SpanMatchScores s = end_to_end_components({&toy}, {&degraded});
        CHECK(s.per_class[0].f1 == 0.0);
        CHECK(s.per_class[1].precision == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(s.per_class[1].recall == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.per_class[1].f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
        CHECK(s.per_class[2].f1 == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(s.macro_f1 == doctest::Approx(5.0 / 9.0).epsilon(1e-12));
        CHECK(s.matched_spans == 6);
    }
    SUBCASE("shifted spans stop matching") {
        auto shifted = perfect;
        shifted.doc.components[1].span.begin += 1;
        const SpanMatchScores s = end_to_end_components({&toy}, {&shifted});
        CHECK(s.matched_spans == 5);
        CHECK(s.per_class[1].precision == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(s.per_class[1].recall == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(s.macro_f1 == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
    }
    SUBCASE("document and parse counts must agree") {
        CHECK_THROWS_AS(end_to_end_components({&toy}, {}), ValidityError);
    }
}

TEST_CASE("score reports serialize deterministically") {
    const Document toy = toy_doc();
    const TaskEvaluation te =
        evaluate_predictions({&toy}, {pipeline::heuristic_baseline(toy)}, Task::Stance);

    SUBCASE("csv rows carry four-digit scores") {
        const std::string csv = scores_to_csv("stance", te.scores);
        CHECK(csv ==
              "task,class,precision,recall,f1\n"
              "stance,Support,1.0000,0.5000,0.6667\n"
              "stance,Attack,0.0000,0.0000,0.0000\n"
              "stance,macro,0.5000,0.2500,0.3333\n");
    }
    SUBCASE("json reports parse back") {
        const std::string text = scores_to_json("stance", te.scores);
        CHECK(text == scores_to_json("stance", te.scores));
        CHECK(text.rfind("{\n  \"task\": \"stance\",", 0) == 0);
        CHECK(text.back() == '\n');
        const auto j = nlohmann::json::parse(text);
        CHECK(j["f1"].get<double>() == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(j["accuracy"].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
        REQUIRE(j["classes"].size() == 2);
        CHECK(j["classes"][0]["class"] == "Support");
        CHECK(j["classes"][1]["f1"].get<double>() == 0.0);
    }
    SUBCASE("confusion tables list gold rows") {
        CHECK(confusion_to_csv(te.matrix) ==
              "gold,Support,Attack\n"
              "Support,2,2\n"
              "Attack,0,0\n");
    }
    SUBCASE("simulation curves emit one row per fraction") {
        const std::vector<SimulationPoint> curve = {{0.0, 0.5, 0.25}, {0.5, 2.0 / 3.0, 0.25}};
        CHECK(curve_to_csv(curve) ==
              "fraction,component_f1,relation_f1\n"
              "0.0000,0.5000,0.2500\n"
              "0.5000,0.6667,0.2500\n");
    }
}
