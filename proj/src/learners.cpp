#include "argstruct/learners.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "argstruct/errors.hpp"

namespace argstruct::learners {

using nlohmann::ordered_json;

namespace {

void require_options(const LearnerOptions& options) {
    if (options.epochs < 1) throw ConfigError("epochs must be at least 1");
}

// Averaged weights are the mean of the weight vector snapshots taken after
// every example presentation. The accumulator tracks, per cell, the last
// snapshot index already folded in, so untouched cells cost nothing.
struct AveragedCell {
    double weight = 0.0;
    double acc = 0.0;
    long long last = 0;
};

class AveragedVector {
  public:
    explicit AveragedVector(size_t n) : cells_(n) {}

    void update(size_t i, double delta, long long t) {
        auto& c = cells_[i];
        c.acc += c.weight * static_cast<double>(t - 1 - c.last);
        c.last = t - 1;
        c.weight += delta;
    }
    double raw(size_t i) const { return cells_[i].weight; }
    double averaged(size_t i, long long total) const {
        const auto& c = cells_[i];
        return (c.acc + c.weight * static_cast<double>(total - c.last)) /
               static_cast<double>(total);
    }

  private:
    std::vector<AveragedCell> cells_;
};

}  // namespace

void deterministic_shuffle(std::vector<int>& order, std::mt19937& rng) {
    for (size_t i = 0; i + 1 < order.size(); ++i) {
        size_t j = i + static_cast<size_t>(rng() % (order.size() - i));
        std::swap(order[i], order[j]);
    }
}

// ---------------------------------------------------------------------------
// sequence model
// ---------------------------------------------------------------------------
namespace {

std::vector<std::vector<double>> emission_scores(const SequenceModel& model,
                                                 const std::vector<FeatureVector>& tokens) {
    const size_t L = model.labels.size();
    std::vector<std::vector<double>> scores(tokens.size(), std::vector<double>(L, 0.0));
    for (size_t t = 0; t < tokens.size(); ++t) {
        for (const auto& [f, v] : tokens[t]) {
            auto it = model.emission.find(f);
            if (it == model.emission.end()) continue;
            for (size_t y = 0; y < L; ++y) scores[t][y] += it->second[y] * v;
        }
    }
    return scores;
}

}  // namespace

std::vector<int> decode_sequence(const SequenceModel& model,
                                 const std::vector<FeatureVector>& tokens) {
    const size_t L = model.labels.size();
    if (L == 0) throw DataError("sequence model has no labels");
    if (tokens.empty()) return {};
    auto em = emission_scores(model, tokens);
    const double neg = -std::numeric_limits<double>::infinity();
    std::vector<std::vector<double>> best(tokens.size(), std::vector<double>(L, neg));
    std::vector<std::vector<int>> back(tokens.size(), std::vector<int>(L, -1));
    for (size_t y = 0; y < L; ++y) best[0][y] = model.transition[0][y] + em[0][y];
    for (size_t t = 1; t < tokens.size(); ++t) {
        for (size_t y = 0; y < L; ++y) {
            for (size_t p = 0; p < L; ++p) {
                double s = best[t - 1][p] + model.transition[p + 1][y] + em[t][y];
                if (s > best[t][y]) {
                    best[t][y] = s;
                    back[t][y] = static_cast<int>(p);
                }
            }
        }
    }
    size_t last = 0;
    for (size_t y = 1; y < L; ++y)
        if (best.back()[y] > best.back()[last]) last = y;
    std::vector<int> out(tokens.size());
    out.back() = static_cast<int>(last);
    for (size_t t = tokens.size() - 1; t > 0; --t) out[t - 1] = back[t][out[t]];
    return out;
}

double sequence_score(const SequenceModel& model, const std::vector<FeatureVector>& tokens,
                      const std::vector<int>& labels) {
    if (labels.size() != tokens.size())
        throw DataError("label sequence length does not match token count");
    double s = 0.0;
    int prev = -1;
    for (size_t t = 0; t < tokens.size(); ++t) {
        const int y = labels[t];
        s += model.transition[prev + 1][y];
        for (const auto& [f, v] : tokens[t]) {
            auto it = model.emission.find(f);
            if (it != model.emission.end()) s += it->second[y] * v;
        }
        prev = y;
    }
    return s;
}

SequenceModel train_sequence(const std::vector<SequenceExample>& examples,
                             const std::vector<std::string>& labels,
                             const LearnerOptions& options) {
    require_options(options);
    if (examples.empty()) throw DataError("sequence training set is empty");
    if (labels.size() < 2) throw DataError("sequence model needs at least two labels");
    const size_t L = labels.size();
    for (const auto& ex : examples) {
        if (ex.tokens.empty()) throw DataError("sequence example has no tokens");
        if (ex.labels.size() != ex.tokens.size())
            throw DataError("sequence example labels do not match its tokens");
        for (int y : ex.labels)
            if (y < 0 || y >= static_cast<int>(L))
                throw DataError("sequence example label out of range");
    }

    SequenceModel model;
    model.labels = labels;
    model.transition.assign(L + 1, std::vector<double>(L, 0.0));

    std::map<std::string, AveragedVector> emission;
    auto touch = [&](const std::string& f) -> AveragedVector& {
        auto it = emission.find(f);
        if (it == emission.end()) it = emission.emplace(f, AveragedVector(L)).first;
        return it->second;
    };
    std::vector<std::vector<double>> trans(L + 1, std::vector<double>(L, 0.0));
    std::vector<std::vector<double>> trans_acc(L + 1, std::vector<double>(L, 0.0));

    std::mt19937 rng(options.seed);
    std::vector<int> order(examples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    long long t_now = 0;
    const long long total =
        static_cast<long long>(options.epochs) * static_cast<long long>(examples.size());
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        if (options.shuffle) deterministic_shuffle(order, rng);
        for (int idx : order) {
            ++t_now;
            const auto& ex = examples[static_cast<size_t>(idx)];
            // decode with the raw (non-averaged) weights; only the features
            // present in this example matter for its emission scores
            SequenceModel cur;
            cur.labels = labels;
            cur.transition = trans;
            for (const auto& tok : ex.tokens) {
                for (const auto& [f, v] : tok) {
                    if (cur.emission.count(f)) continue;
                    auto it = emission.find(f);
                    if (it == emission.end()) continue;
                    std::vector<double> w(L);
                    for (size_t y = 0; y < L; ++y) w[y] = it->second.raw(y);
                    cur.emission.emplace(f, std::move(w));
                }
            }
            auto pred = decode_sequence(cur, ex.tokens);
            if (pred != ex.labels) {
                int gp = -1, pp = -1;
                for (size_t k = 0; k < ex.tokens.size(); ++k) {
                    const int gy = ex.labels[k];
                    const int py = pred[k];
                    if (gy != py) {
                        for (const auto& [f, v] : ex.tokens[k]) {
                            auto& av = touch(f);
                            av.update(static_cast<size_t>(gy), v, t_now);
                            av.update(static_cast<size_t>(py), -v, t_now);
                        }
                    }
                    trans[gp + 1][gy] += 1.0;
                    trans[pp + 1][py] -= 1.0;
                    gp = gy;
                    pp = py;
                }
            }
            for (size_t p = 0; p <= L; ++p)
                for (size_t y = 0; y < L; ++y) trans_acc[p][y] += trans[p][y];
        }
    }

    const bool avg = options.average;
    for (const auto& [f, av] : emission) {
        std::vector<double> w(L);
        bool nonzero = false;
        for (size_t y = 0; y < L; ++y) {
            w[y] = avg ? av.averaged(y, total) : av.raw(y);
            if (w[y] != 0.0) nonzero = true;
        }
        if (nonzero) model.emission.emplace(f, std::move(w));
    }
    for (size_t p = 0; p <= L; ++p)
        for (size_t y = 0; y < L; ++y)
            model.transition[p][y] =
                avg ? trans_acc[p][y] / static_cast<double>(total) : trans[p][y];
    return model;
}

// ---------------------------------------------------------------------------
// classifier
// ---------------------------------------------------------------------------
FeatureVector expand_features(const FeatureVector& features, int degree) {
    if (degree != 1 && degree != 2)
        throw ConfigError("classifier degree must be 1 or 2");
    if (degree == 1) return features;
    FeatureVector out = features;
    std::vector<const std::pair<const std::string, double>*> pairable;
    for (const auto& kv : features)
        if (kv.first.rfind("emb:", 0) != 0) pairable.push_back(&kv);
    for (size_t i = 0; i < pairable.size(); ++i) {
        for (size_t j = i; j < pairable.size(); ++j) {
            out[pairable[i]->first + "&" + pairable[j]->first] =
                pairable[i]->second * pairable[j]->second;
        }
    }
    return out;
}

std::vector<double> class_scores(const ClassifierModel& model, const FeatureVector& features) {
    const size_t K = model.classes.size();
    auto x = expand_features(features, model.degree);
    std::vector<double> s(model.bias);
    s.resize(K, 0.0);
    for (const auto& [f, v] : x) {
        auto it = model.weights.find(f);
        if (it == model.weights.end()) continue;
        for (size_t c = 0; c < K; ++c) s[c] += it->second[c] * v;
    }
    return s;
}

int classify(const ClassifierModel& model, const FeatureVector& features) {
    auto s = class_scores(model, features);
    if (s.empty()) throw DataError("classifier model has no classes");
    size_t best = 0;
    for (size_t c = 1; c < s.size(); ++c)
        if (s[c] > s[best]) best = c;
    return static_cast<int>(best);
}

ClassifierModel train_classifier(const std::vector<ClassifierExample>& examples,
                                 const std::vector<std::string>& classes, int degree,
                                 const LearnerOptions& options) {
    require_options(options);
    if (degree != 1 && degree != 2)
        throw ConfigError("classifier degree must be 1 or 2");
    if (examples.empty()) throw DataError("classifier training set is empty");
    if (classes.size() < 2) throw DataError("classifier needs at least two classes");
    const size_t K = classes.size();
    std::vector<bool> seen(K, false);
    for (const auto& ex : examples) {
        if (ex.label < 0 || ex.label >= static_cast<int>(K))
            throw DataError("classifier example label out of range");
        seen[static_cast<size_t>(ex.label)] = true;
    }
    if (std::count(seen.begin(), seen.end(), true) < 2)
        throw DataError("classifier training set uses a single class");

    std::vector<FeatureVector> expanded;
    expanded.reserve(examples.size());
    for (const auto& ex : examples) expanded.push_back(expand_features(ex.features, degree));

    std::map<std::string, AveragedVector> weights;
    auto touch = [&](const std::string& f) -> AveragedVector& {
        auto it = weights.find(f);
        if (it == weights.end()) it = weights.emplace(f, AveragedVector(K)).first;
        return it->second;
    };
    std::vector<double> bias(K, 0.0), bias_acc(K, 0.0);

    std::mt19937 rng(options.seed);
    std::vector<int> order(examples.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);

    long long t_now = 0;
    const long long total =
        static_cast<long long>(options.epochs) * static_cast<long long>(examples.size());
    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        if (options.shuffle) deterministic_shuffle(order, rng);
        for (int idx : order) {
            ++t_now;
            const auto& x = expanded[static_cast<size_t>(idx)];
            const int gold = examples[static_cast<size_t>(idx)].label;
            std::vector<double> s(bias);
            for (const auto& [f, v] : x) {
                auto it = weights.find(f);
                if (it == weights.end()) continue;
                for (size_t c = 0; c < K; ++c) s[c] += it->second.raw(c) * v;
            }
            size_t pred = 0;
            for (size_t c = 1; c < K; ++c)
                if (s[c] > s[pred]) pred = c;
            if (static_cast<int>(pred) != gold) {
                for (const auto& [f, v] : x) {
                    auto& av = touch(f);
                    av.update(static_cast<size_t>(gold), v, t_now);
                    av.update(pred, -v, t_now);
                }
                bias[static_cast<size_t>(gold)] += 1.0;
                bias[pred] -= 1.0;
            }
            for (size_t c = 0; c < K; ++c) bias_acc[c] += bias[c];
        }
    }

    ClassifierModel model;
    model.classes = classes;
    model.degree = degree;
    const bool avg = options.average;
    for (const auto& [f, av] : weights) {
        std::vector<double> w(K);
        bool nonzero = false;
        for (size_t c = 0; c < K; ++c) {
            w[c] = avg ? av.averaged(c, total) : av.raw(c);
            if (w[c] != 0.0) nonzero = true;
        }
        if (nonzero) model.weights.emplace(f, std::move(w));
    }
    model.bias.resize(K);
    for (size_t c = 0; c < K; ++c)
        model.bias[c] = avg ? bias_acc[c] / static_cast<double>(total) : bias[c];
    return model;
}

// ---------------------------------------------------------------------------
// serialization
// ---------------------------------------------------------------------------
namespace {

constexpr int kModelVersion = 1;

ordered_json weights_to_json(const std::map<std::string, std::vector<double>>& w) {
    ordered_json out = ordered_json::object();
    for (const auto& [f, v] : w) out[f] = v;
    return out;
}

std::map<std::string, std::vector<double>> weights_from_json(const ordered_json& j) {
    std::map<std::string, std::vector<double>> out;
    for (auto it = j.begin(); it != j.end(); ++it)
        out[it.key()] = it.value().get<std::vector<double>>();
    return out;
}

ordered_json parse_model(const std::string& text, const std::string& kind) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || j.value("format", "") != "argstruct-model")
        throw DataError("model file missing the argstruct-model format marker");
    if (j.value("version", -1) != kModelVersion)
        throw DataError("unsupported model version");
    if (j.value("kind", "") != kind)
        throw DataError("model file holds a '" + j.value("kind", std::string("?")) +
                        "' model, expected '" + kind + "'");
    return j;
}

}  // namespace

std::string to_json_string(const SequenceModel& model) {
    ordered_json j;
    j["format"] = "argstruct-model";
    j["version"] = kModelVersion;
    j["kind"] = "sequence";
    j["labels"] = model.labels;
    j["transition"] = model.transition;
    j["emission"] = weights_to_json(model.emission);
    return j.dump(1);
}

std::string to_json_string(const ClassifierModel& model) {
    ordered_json j;
    j["format"] = "argstruct-model";
    j["version"] = kModelVersion;
    j["kind"] = "classifier";
    j["classes"] = model.classes;
    j["degree"] = model.degree;
    j["bias"] = model.bias;
    j["weights"] = weights_to_json(model.weights);
    return j.dump(1);
}

SequenceModel sequence_from_json(const std::string& text) {
    auto j = parse_model(text, "sequence");
    SequenceModel m;
    try {
        m.labels = j.at("labels").get<std::vector<std::string>>();
        m.transition = j.at("transition").get<std::vector<std::vector<double>>>();
        m.emission = weights_from_json(j.at("emission"));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed sequence model: ") + e.what());
    }
    if (m.transition.size() != m.labels.size() + 1)
        throw DataError("sequence model transition table has the wrong shape");
    for (const auto& row : m.transition)
        if (row.size() != m.labels.size())
            throw DataError("sequence model transition table has the wrong shape");
    for (const auto& [f, w] : m.emission)
        if (w.size() != m.labels.size())
            throw DataError("sequence model emission row has the wrong shape");
    return m;
}

ClassifierModel classifier_from_json(const std::string& text) {
    auto j = parse_model(text, "classifier");
    ClassifierModel m;
    try {
        m.classes = j.at("classes").get<std::vector<std::string>>();
        m.degree = j.at("degree").get<int>();
        m.bias = j.at("bias").get<std::vector<double>>();
        m.weights = weights_from_json(j.at("weights"));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed classifier model: ") + e.what());
    }
    if (m.degree != 1 && m.degree != 2) throw DataError("classifier model degree out of range");
    if (m.bias.size() != m.classes.size())
        throw DataError("classifier model bias has the wrong shape");
    for (const auto& [f, w] : m.weights)
        if (w.size() != m.classes.size())
            throw DataError("classifier model weight row has the wrong shape");
    return m;
}

}  // namespace argstruct::learners
