#include "argstruct/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "argstruct/errors.hpp"

namespace argstruct::agreement {

using corpus::ArgumentComponent;
using corpus::ComponentType;
using corpus::Document;
using corpus::RelationType;
using corpus::Span;
using corpus::Stance;

namespace {

void require_table(const AgreementTable& table) {
    if (table.rows.empty()) throw DataError("agreement table has no markables");
    const size_t m = table.rows.front().size();
    if (m < 2) throw DataError("agreement table needs at least two raters");
    for (const auto& row : table.rows) {
        if (row.size() != m) throw DataError("agreement table rows differ in rater count");
        for (int c : row)
            if (c < 0 || c >= static_cast<int>(table.categories.size()))
                throw DataError("agreement table category index out of range");
    }
}

}  // namespace

double observed_agreement(const AgreementTable& table) {
    require_table(table);
    const size_t m = table.rows.front().size();
    double total = 0.0;
    for (const auto& row : table.rows) {
        int agree = 0;
        for (size_t g = 0; g < m; ++g)
            for (size_t h = g + 1; h < m; ++h)
                if (row[g] == row[h]) ++agree;
        total += static_cast<double>(agree) / (m * (m - 1) / 2.0);
    }
    return total / static_cast<double>(table.rows.size());
}

double fleiss_kappa(const AgreementTable& table) {
    require_table(table);
    const size_t m = table.rows.front().size();
    const size_t k = table.categories.size();
    const size_t n = table.rows.size();
    std::vector<double> pj(k, 0.0);
    double pbar = 0.0;
    for (const auto& row : table.rows) {
        std::vector<int> counts(k, 0);
        for (int c : row) ++counts[c];
        double pi = 0.0;
        for (size_t j = 0; j < k; ++j) {
            pi += static_cast<double>(counts[j]) * (counts[j] - 1);
            pj[j] += counts[j];
        }
        pbar += pi / (m * (m - 1.0));
    }
    pbar /= static_cast<double>(n);
    double pe = 0.0;
    for (size_t j = 0; j < k; ++j) {
        double p = pj[j] / static_cast<double>(n * m);
        pe += p * p;
    }
    if (pe >= 1.0)
        throw DataError("fleiss kappa undefined: all ratings fall into one category");
    return (pbar - pe) / (1.0 - pe);
}

CpmResult confusion_probability_matrix(const AgreementTable& table) {
    require_table(table);
    const size_t m = table.rows.front().size();
    const size_t k = table.categories.size();
    std::vector<std::vector<double>> counts(k, std::vector<double>(k, 0.0));
    for (const auto& row : table.rows)
        for (size_t g = 0; g < m; ++g)
            for (size_t h = 0; h < m; ++h)
                if (g != h) counts[row[g]][row[h]] += 1.0;
    CpmResult out;
    out.categories = table.categories;
    out.matrix.assign(k, std::vector<double>(k, 0.0));
    out.defined.assign(k, false);
    for (size_t i = 0; i < k; ++i) {
        double rowsum = 0.0;
        for (size_t j = 0; j < k; ++j) rowsum += counts[i][j];
        if (rowsum <= 0.0) continue;
        out.defined[i] = true;
        for (size_t j = 0; j < k; ++j) out.matrix[i][j] = counts[i][j] / rowsum;
    }
    return out;
}

// ---------------------------------------------------------------------------
// unitized alpha
// ---------------------------------------------------------------------------
namespace {

// Average squared boundary distance between two units of lengths a and b over
// all integer placements on a continuum of length L. Intersecting placements
// contribute the squared begin and end differences, disjoint ones a^2 + b^2.
double expected_sq_distance(long long a, long long b, long long L) {
    const long long pa = L - a + 1;
    const long long pb = L - b + 1;
    const double total = static_cast<double>(pa) * static_cast<double>(pb);
    long long inter_pairs = 0;
    double inter_sum = 0.0;
    for (long long d = -a + 1; d <= b - 1; ++d) {
        const long long lo = std::max<long long>(0, d);
        const long long hi = std::min(L - a, L - b + d);
        if (hi < lo) continue;
        const long long cnt = hi - lo + 1;
        inter_pairs += cnt;
        const double db = static_cast<double>(d);
        const double de = static_cast<double>(d + a - b);
        inter_sum += static_cast<double>(cnt) * (db * db + de * de);
    }
    const double disjoint =
        (total - static_cast<double>(inter_pairs)) * static_cast<double>(a * a + b * b);
    return (inter_sum + disjoint) / total;
}

struct FlatUnit {
    long long begin, end;
    int rater;
    std::string category;
    long long length() const { return end - begin; }
};

}  // namespace

double krippendorff_alpha_u(const std::vector<UnitizingData>& docs,
                            const std::optional<std::string>& category) {
    if (docs.empty()) throw DataError("unitized alpha needs at least one document");
    const size_t m = docs.front().annotators.size();
    if (m < 2) throw DataError("unitized alpha needs at least two annotators");
    long long total_len = 0;
    std::vector<FlatUnit> units;
    for (const auto& doc : docs) {
        if (doc.annotators.size() != m)
            throw DataError("documents disagree on the number of annotators");
        if (doc.length <= 0) throw DataError("continuum length must be positive");
        for (size_t r = 0; r < m; ++r) {
            for (const auto& u : doc.annotators[r]) {
                if (u.begin < 0 || u.end > doc.length || u.begin >= u.end)
                    throw DataError("unit outside its continuum");
                if (category && u.category != *category) continue;
                units.push_back({total_len + u.begin, total_len + u.end,
                                 static_cast<int>(r), u.category});
            }
        }
        total_len += doc.length;
    }
    const long long L = total_len;

    std::map<std::string, double> raw_o;
    std::map<std::string, double> raw_e;

    // observed: each unit against every other rater's same-category units
    for (size_t r = 0; r < m; ++r) {
        for (size_t s = 0; s < m; ++s) {
            if (r == s) continue;
            for (const auto& u : units) {
                if (u.rater != static_cast<int>(r)) continue;
                bool intersected = false;
                double sum = 0.0;
                for (const auto& v : units) {
                    if (v.rater != static_cast<int>(s) || v.category != u.category) continue;
                    if (v.begin < u.end && u.begin < v.end) {
                        intersected = true;
                        const double db = static_cast<double>(u.begin - v.begin);
                        const double de = static_cast<double>(u.end - v.end);
                        sum += db * db + de * de;
                    }
                }
                if (!intersected) sum = static_cast<double>(u.length() * u.length());
                raw_o[u.category] += sum;
            }
        }
    }

    // expected: all ordered pairs of pooled same-category units, grouped by
    // length so the placement average is computed once per length pair
    std::map<std::string, std::map<long long, long long>> len_counts;
    for (const auto& u : units) ++len_counts[u.category][u.length()];
    std::map<std::pair<long long, long long>, double> e_cache;
    auto expected = [&](long long a, long long b) {
        auto key = std::make_pair(a, b);
        auto it = e_cache.find(key);
        if (it != e_cache.end()) return it->second;
        double v = expected_sq_distance(a, b, L);
        e_cache.emplace(key, v);
        return v;
    };
    for (const auto& [cat, counts] : len_counts) {
        double sum = 0.0;
        for (const auto& [a, na] : counts)
            for (const auto& [b, nb] : counts)
                sum += static_cast<double>(na) * static_cast<double>(nb) * expected(a, b);
        for (const auto& [a, na] : counts) sum -= static_cast<double>(na) * expected(a, a);
        raw_e[cat] = sum;
    }

    const double do_norm = static_cast<double>(m) * (m - 1.0) * static_cast<double>(L) *
                           static_cast<double>(L);
    const double de_norm = static_cast<double>(m) * static_cast<double>(L) *
                           (static_cast<double>(m) * static_cast<double>(L) - 1.0);
    double d_o = 0.0, d_e = 0.0;
    for (const auto& [cat, v] : raw_o) d_o += v / do_norm;
    for (const auto& [cat, v] : raw_e) d_e += v / de_norm;
    if (d_e <= 0.0)
        throw DataError("unitized alpha undefined: expected disagreement is zero");
    return 1.0 - d_o / d_e;
}

// ---------------------------------------------------------------------------
// markable builders
// ---------------------------------------------------------------------------
namespace {

void require_raters(const RaterCorpora& raters) {
    if (raters.size() < 2) throw ConfigError("agreement needs at least two raters");
    const size_t n = raters.front().size();
    if (n == 0) throw ConfigError("agreement needs at least one essay");
    for (const auto& docs : raters) {
        if (docs.size() != n) throw ConfigError("raters cover different essay sets");
        for (size_t d = 0; d < n; ++d) {
            if (docs[d].essay_id != raters.front()[d].essay_id ||
                docs[d].text != raters.front()[d].text)
                throw ConfigError("raters disagree on essay text or order: " +
                                  docs[d].essay_id);
        }
    }
}

std::vector<const ArgumentComponent*> components_overlapping(const Document& doc, Span s) {
    std::vector<const ArgumentComponent*> out;
    for (const auto& c : doc.components)
        if (c.span.overlaps(s)) out.push_back(&c);
    return out;
}

template <typename Fn>
void for_each_content_sentence(const Document& doc, Fn&& fn) {
    for (const auto& para : doc.paragraphs) {
        if (para.is_title) continue;
        for (int si = para.sent_begin; si < para.sent_end; ++si) fn(doc.sentences[si]);
    }
}

}  // namespace

AgreementTable sentence_type_table(const RaterCorpora& raters, ComponentType type) {
    require_raters(raters);
    AgreementTable table;
    table.categories = {"Yes", "No"};
    const size_t n = raters.front().size();
    for (size_t d = 0; d < n; ++d) {
        for_each_content_sentence(raters.front()[d], [&](const corpus::Sentence& sent) {
            std::vector<int> row;
            for (const auto& docs : raters) {
                bool hit = false;
                for (const auto* c : components_overlapping(docs[d], sent.span))
                    if (c->ctype == type) hit = true;
                row.push_back(hit ? 0 : 1);
            }
            table.rows.push_back(std::move(row));
        });
    }
    return table;
}

AgreementTable sentence_component_table(const RaterCorpora& raters) {
    require_raters(raters);
    AgreementTable table;
    table.categories = {"MajorClaim", "Claim", "Premise", "NoArg"};
    const size_t n = raters.front().size();
    for (size_t d = 0; d < n; ++d) {
        for_each_content_sentence(raters.front()[d], [&](const corpus::Sentence& sent) {
            std::vector<int> row;
            for (const auto& docs : raters) {
                int cat = 3;
                for (const auto* c : components_overlapping(docs[d], sent.span)) {
                    int rank = c->ctype == ComponentType::MajorClaim ? 0
                               : c->ctype == ComponentType::Claim    ? 1
                                                                     : 2;
                    cat = std::min(cat, rank);
                }
                row.push_back(cat);
            }
            table.rows.push_back(std::move(row));
        });
    }
    return table;
}

std::pair<AgreementTable, int> sentence_stance_table(const RaterCorpora& raters) {
    require_raters(raters);
    AgreementTable table;
    table.categories = {"for", "against", "none"};
    int mixed = 0;
    const size_t n = raters.front().size();
    for (size_t d = 0; d < n; ++d) {
        for_each_content_sentence(raters.front()[d], [&](const corpus::Sentence& sent) {
            std::vector<int> row;
            for (const auto& docs : raters) {
                int cat = 2;
                bool first = true;
                bool saw_for = false, saw_against = false;
                for (const auto* c : components_overlapping(docs[d], sent.span)) {
                    if (c->ctype != ComponentType::Claim || !c->stance) continue;
                    if (*c->stance == Stance::For) saw_for = true;
                    if (*c->stance == Stance::Against) saw_against = true;
                    if (first) {
                        cat = *c->stance == Stance::For ? 0 : 1;
                        first = false;
                    }
                }
                if (saw_for && saw_against) ++mixed;
                row.push_back(cat);
            }
            table.rows.push_back(std::move(row));
        });
    }
    return {table, mixed};
}

AgreementTable relation_pair_table(const RaterCorpora& raters) {
    require_raters(raters);
    AgreementTable table;
    table.categories = {"Support", "Attack", "Not-Linked"};
    const size_t n = raters.front().size();
    for (size_t d = 0; d < n; ++d) {
        const Document& layout = raters.front()[d];
        for (const auto& para : layout.paragraphs) {
            if (para.is_title) continue;
            for (int si = para.sent_begin; si < para.sent_end; ++si) {
                for (int sj = para.sent_begin; sj < para.sent_end; ++sj) {
                    if (si == sj) continue;
                    const Span a = layout.sentences[si].span;
                    const Span b = layout.sentences[sj].span;
                    std::vector<int> row;
                    for (const auto& docs : raters) {
                        const Document& doc = docs[d];
                        bool support = false, attack = false;
                        for (const auto& rel : doc.relations) {
                            const auto* src = doc.find_component(rel.source);
                            const auto* tgt = doc.find_component(rel.target);
                            if (!src || !tgt) continue;
                            if (!src->span.overlaps(a) || !tgt->span.overlaps(b)) continue;
                            if (rel.rtype == RelationType::Attack) attack = true;
                            else support = true;
                        }
                        row.push_back(attack ? 1 : support ? 0 : 2);
                    }
                    table.rows.push_back(std::move(row));
                }
            }
        }
    }
    return table;
}

std::vector<UnitizingData> component_continua(const RaterCorpora& raters) {
    require_raters(raters);
    std::vector<UnitizingData> out;
    const size_t n = raters.front().size();
    for (size_t d = 0; d < n; ++d) {
        UnitizingData data;
        data.length = static_cast<int>(raters.front()[d].tokens.size());
        for (const auto& docs : raters) {
            if (static_cast<int>(docs[d].tokens.size()) != data.length)
                throw ConfigError("raters disagree on tokenization: " + docs[d].essay_id);
            Continuum cont;
            for (const auto& c : docs[d].components)
                cont.push_back({c.token_begin, c.token_end, corpus::to_string(c.ctype)});
            data.annotators.push_back(std::move(cont));
        }
        out.push_back(std::move(data));
    }
    return out;
}

}  // namespace argstruct::agreement
