#pragma once

// Joint tree inference over one paragraph: claim scores and relation weights
// from the base classifier outputs, an exact solver for the constrained
// relation structure, and the rewrite of component types from the solution.

#include <string>
#include <utility>
#include <vector>

#include "argstruct/corpus.hpp"

namespace argstruct::joint {

using BinaryMatrix = std::vector<std::vector<int>>;
using WeightMatrix = std::vector<std::vector<double>>;

struct ClaimScores {
    std::vector<double> cs;
    std::vector<int> relin;
    std::vector<int> relout;
    int rel = 0;
};

// Mixing weights for the relation / claim-score / claim-type terms.
struct Phi {
    double r = 0.5;
    double cr = 0.25;
    double c = 0.25;
};

struct IlpSolution {
    BinaryMatrix x;       // chosen relations, zero diagonal
    BinaryMatrix reach;   // transitive closure of x
    double objective = 0.0;
    long explored = 0;    // search nodes visited across both phases
};

// cs_i = (relin_i - relout_i + n - 1) / (rel + n - 1); all zeros when the
// denominator is not positive (single component, no relations).
// Throws ValidityError unless R is square and binary with a zero diagonal.
ClaimScores claim_scores(const BinaryMatrix& r);

// w_ij = phi.r * r_ij + phi.cr * (cs_j - cs_i) + phi.c * [j predicted Claim].
// Major claims must be excluded by the caller; is_claim[j] refers to the
// claim/premise base prediction. Negative phi components throw ConfigError.
WeightMatrix build_weights(const BinaryMatrix& r, const std::vector<bool>& is_claim,
                           const Phi& phi = {});

// Maximizes sum w_ij x_ij over structures with per-node out-degree <= 1, no
// self loops, at most n-1 relations and no directed cycles. Exact, and among
// equal-objective optima returns the row-major lexicographically smallest x.
IlpSolution solve_tree(const WeightMatrix& w);

// Constraint violations of a candidate structure; empty for a valid one.
std::vector<std::string> solution_violations(const BinaryMatrix& x);

struct Structure {
    std::vector<corpus::ComponentType> types;
    std::vector<std::pair<int, int>> relations;  // source -> target
};

// Components with an outgoing relation become premises, the rest claims;
// major-claim predictions pass through and may not touch any relation.
Structure apply_structure(const IlpSolution& solution,
                          const std::vector<corpus::ComponentType>& predicted);

// {"n", "edges", "objective", "explored"} for verbose per-paragraph logs.
std::string diagnostics_json(const IlpSolution& solution);

}  // namespace argstruct::joint
