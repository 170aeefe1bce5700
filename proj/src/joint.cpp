#include "argstruct/joint.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "argstruct/errors.hpp"

namespace argstruct::joint {

namespace {

int checked_size(const BinaryMatrix& r) {
    const int n = static_cast<int>(r.size());
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(r[static_cast<size_t>(i)].size()) != n)
            throw ValidityError("adjacency matrix must be square");
        for (int j = 0; j < n; ++j) {
            const int v = r[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (v != 0 && v != 1) throw ValidityError("adjacency matrix must be binary");
            if (i == j && v != 0) throw ValidityError("adjacency matrix must have a zero diagonal");
        }
    }
    return n;
}

struct Search {
    const WeightMatrix& w;
    int n;
    // per node, the value of its best available outgoing edge clipped at 0;
    // summing it over unassigned nodes bounds the remaining gain
    std::vector<double> gain;
    std::vector<int> choice;          // -1 = no outgoing edge
    std::vector<std::vector<char>> reach;
    long explored = 0;

    explicit Search(const WeightMatrix& weights)
        : w(weights),
          n(static_cast<int>(weights.size())),
          gain(static_cast<size_t>(n), 0.0),
          choice(static_cast<size_t>(n), -1),
          reach(static_cast<size_t>(n), std::vector<char>(static_cast<size_t>(n), 0)) {
        for (int i = 0; i < n; ++i) {
            double best = 0.0;
            for (int j = 0; j < n; ++j)
                if (j != i) best = std::max(best, w[static_cast<size_t>(i)][static_cast<size_t>(j)]);
            gain[static_cast<size_t>(i)] = best;
        }
    }

    double remaining_bound(int from) const {
        double b = 0.0;
        for (int i = from; i < n; ++i) b += gain[static_cast<size_t>(i)];
        return b;
    }

    bool creates_cycle(int u, int v) const {
        return reach[static_cast<size_t>(v)][static_cast<size_t>(u)] != 0;
    }

    void add_edge(int u, int v) {
        std::vector<int> sources = {u}, sinks = {v};
        for (int a = 0; a < n; ++a) {
            if (reach[static_cast<size_t>(a)][static_cast<size_t>(u)]) sources.push_back(a);
            if (reach[static_cast<size_t>(v)][static_cast<size_t>(a)]) sinks.push_back(a);
        }
        for (int a : sources)
            for (int b : sinks) reach[static_cast<size_t>(a)][static_cast<size_t>(b)] = 1;
    }

    // Phase 1: exact optimum value by assigning each node's outgoing choice.
    double best_value(int node, double current) {
        ++explored;
        if (node == n) return current;
        double best = -1.0;
        const auto saved = reach;
        // no-edge branch first keeps the search shallow on sparse optima
        best = best_value(node + 1, current);
        for (int j = 0; j < n; ++j) {
            if (j == node || creates_cycle(node, j)) continue;
            const double edge = w[static_cast<size_t>(node)][static_cast<size_t>(j)];
            if (current + edge + remaining_bound(node + 1) <= best) continue;
            add_edge(node, j);
            best = std::max(best, best_value(node + 1, current + edge));
            reach = saved;
        }
        return best;
    }

    // Phase 2: first structure reaching the target objective when choices are
    // tried in increasing row order (no edge, then columns right to left),
    // which is exactly row-major lexicographic order on x.
    bool find_lex(int node, double current, double target) {
        ++explored;
        if (node == n) return std::abs(current - target) <= 1e-9;
        const auto saved = reach;
        if (current + remaining_bound(node + 1) >= target - 1e-9) {
            if (find_lex(node + 1, current, target)) return true;
        }
        for (int j = n - 1; j >= 0; --j) {
            if (j == node || creates_cycle(node, j)) continue;
            const double edge = w[static_cast<size_t>(node)][static_cast<size_t>(j)];
            if (current + edge + remaining_bound(node + 1) < target - 1e-9) continue;
            add_edge(node, j);
            choice[static_cast<size_t>(node)] = j;
            if (find_lex(node + 1, current + edge, target)) return true;
            choice[static_cast<size_t>(node)] = -1;
            reach = saved;
        }
        return false;
    }
};

}  // namespace

ClaimScores claim_scores(const BinaryMatrix& r) {
    const int n = checked_size(r);
    ClaimScores out;
    out.relin.assign(static_cast<size_t>(n), 0);
    out.relout.assign(static_cast<size_t>(n), 0);
    out.cs.assign(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (r[static_cast<size_t>(i)][static_cast<size_t>(j)]) {
                ++out.relout[static_cast<size_t>(i)];
                ++out.relin[static_cast<size_t>(j)];
                ++out.rel;
            }
    const int denom = out.rel + n - 1;
    if (denom <= 0) return out;  // single component, no relations
    for (int i = 0; i < n; ++i)
        out.cs[static_cast<size_t>(i)] =
            static_cast<double>(out.relin[static_cast<size_t>(i)] - out.relout[static_cast<size_t>(i)] + n - 1) /
            denom;
    return out;
}

WeightMatrix build_weights(const BinaryMatrix& r, const std::vector<bool>& is_claim, const Phi& phi) {
    if (phi.r < 0 || phi.cr < 0 || phi.c < 0)
        throw ConfigError("phi hyperparameters must be non-negative");
    const int n = checked_size(r);
    if (static_cast<int>(is_claim.size()) != n)
        throw ValidityError("claim predictions must cover every component");
    const ClaimScores scores = claim_scores(r);
    WeightMatrix w(static_cast<size_t>(n), std::vector<double>(static_cast<size_t>(n), 0.0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            const double cr = scores.cs[static_cast<size_t>(j)] - scores.cs[static_cast<size_t>(i)];
            w[static_cast<size_t>(i)][static_cast<size_t>(j)] =
                phi.r * r[static_cast<size_t>(i)][static_cast<size_t>(j)] + phi.cr * cr +
                phi.c * (is_claim[static_cast<size_t>(j)] ? 1.0 : 0.0);
        }
    return w;
}

IlpSolution solve_tree(const WeightMatrix& w) {
    const int n = static_cast<int>(w.size());
    for (const auto& row : w) {
        if (static_cast<int>(row.size()) != n) throw ValidityError("weight matrix must be square");
        for (double v : row)
            if (!std::isfinite(v)) throw ValidityError("weight matrix must be finite");
    }

    IlpSolution sol;
    sol.x.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), 0));
    sol.reach.assign(static_cast<size_t>(n), std::vector<int>(static_cast<size_t>(n), 0));
    if (n <= 1) return sol;

    Search search(w);
    const double best = search.best_value(0, 0.0);
    std::fill(search.choice.begin(), search.choice.end(), -1);
    for (auto& row : search.reach) std::fill(row.begin(), row.end(), 0);
    if (!search.find_lex(0, 0.0, best))
        throw DataError("tree solver failed to reproduce its optimum");

    sol.objective = 0.0;
    for (int i = 0; i < n; ++i) {
        const int j = search.choice[static_cast<size_t>(i)];
        if (j < 0) continue;
        sol.x[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;
        sol.objective += w[static_cast<size_t>(i)][static_cast<size_t>(j)];
    }
    sol.explored = search.explored;

    // transitive closure for the reachability view
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) sol.reach[static_cast<size_t>(i)][static_cast<size_t>(j)] = sol.x[static_cast<size_t>(i)][static_cast<size_t>(j)];
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (sol.reach[static_cast<size_t>(i)][static_cast<size_t>(k)] && sol.reach[static_cast<size_t>(k)][static_cast<size_t>(j)])
                    sol.reach[static_cast<size_t>(i)][static_cast<size_t>(j)] = 1;

    const auto violations = solution_violations(sol.x);
    if (!violations.empty()) throw DataError("tree solver produced " + violations.front());
    return sol;
}

std::vector<std::string> solution_violations(const BinaryMatrix& x) {
    std::vector<std::string> out;
    const int n = static_cast<int>(x.size());
    int edges = 0;
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(x[static_cast<size_t>(i)].size()) != n) {
            out.push_back("a non-square matrix");
            return out;
        }
        int outdeg = 0;
        for (int j = 0; j < n; ++j) {
            const int v = x[static_cast<size_t>(i)][static_cast<size_t>(j)];
            if (v != 0 && v != 1) out.push_back("a non-binary entry");
            if (i == j && v) out.push_back("a self relation");
            outdeg += v;
        }
        edges += outdeg;
        if (outdeg > 1) out.push_back("an out-degree above one");
    }
    if (edges > std::max(0, n - 1)) out.push_back("more than n-1 relations");

    // cycle check over the chosen edges
    std::vector<int> color(static_cast<size_t>(n), 0);
    std::vector<int> next(static_cast<size_t>(n), -1);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (x[static_cast<size_t>(i)][static_cast<size_t>(j)] && next[static_cast<size_t>(i)] < 0)
                next[static_cast<size_t>(i)] = j;
    for (int i = 0; i < n; ++i) {
        int u = i;
        std::vector<int> trail;
        while (u >= 0 && color[static_cast<size_t>(u)] == 0) {
            color[static_cast<size_t>(u)] = 1;
            trail.push_back(u);
            u = next[static_cast<size_t>(u)];
        }
        if (u >= 0 && color[static_cast<size_t>(u)] == 1) {
            out.push_back("a relation cycle");
            return out;
        }
        for (int v : trail) color[static_cast<size_t>(v)] = 2;
    }
    return out;
}

Structure apply_structure(const IlpSolution& solution,
                          const std::vector<corpus::ComponentType>& predicted) {
    const int n = static_cast<int>(predicted.size());
    if (static_cast<int>(solution.x.size()) != n)
        throw ValidityError("solution and predictions must cover the same components");
    Structure out;
    out.types = predicted;
    for (int i = 0; i < n; ++i) {
        bool outgoing = false;
        bool touched = false;
        for (int j = 0; j < n; ++j) {
            if (solution.x[static_cast<size_t>(i)][static_cast<size_t>(j)]) {
                outgoing = true;
                touched = true;
                out.relations.emplace_back(i, j);
            }
            if (solution.x[static_cast<size_t>(j)][static_cast<size_t>(i)]) touched = true;
        }
        if (predicted[static_cast<size_t>(i)] == corpus::ComponentType::MajorClaim) {
            if (touched) throw ValidityError("major claims may not take part in the solved structure");
            continue;
        }
        out.types[static_cast<size_t>(i)] =
            outgoing ? corpus::ComponentType::Premise : corpus::ComponentType::Claim;
    }
    return out;
}

std::string diagnostics_json(const IlpSolution& solution) {
    nlohmann::ordered_json j;
    j["n"] = solution.x.size();
    int edges = 0;
    for (const auto& row : solution.x)
        for (int v : row) edges += v;
    j["edges"] = edges;
    j["objective"] = solution.objective;
    j["explored"] = solution.explored;
    return j.dump();
}

}  // namespace argstruct::joint
