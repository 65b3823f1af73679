#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ivcut/graph.hpp"

namespace ivcut {

struct Literal {
    std::string var;
    bool positive = true;
    Literal negated() const { return {var, !positive}; }
    auto operator<=>(const Literal&) const = default;
};

using Clause = std::vector<Literal>;

struct CnfFormula {
    std::vector<Clause> clauses;
    std::vector<std::string> variables() const;  // sorted
    bool operator==(const CnfFormula&) const = default;
};

/// One clause per line, literals `a` or `!a` separated by whitespace or commas;
/// `#` starts a comment. Throws ParseError.
CnfFormula parse_cnf(std::string_view text);
std::string format_cnf(const CnfFormula& f);
std::string format_literal(const Literal& l);

using Assignment = std::map<std::string, bool>;

/// Exactly-one-true semantics, counting literal occurrences.
bool exactly_one_true(const CnfFormula& f, const Assignment& a);

struct Preprocessed {
    CnfFormula formula;   // clauses of 2 or 3 literals over distinct variables
    Assignment forced;    // variables fixed by simplification
    bool unsatisfiable = false;
};

/// Repeated literals are false, a complementary pair forces the third literal false,
/// a true literal falsifies its clause-mates; repeated to a fixpoint.
Preprocessed preprocess(const CnfFormula& f);

/// Reduction graph for λ_{x1 y}. Vertices: y, x1..xk, z1..zm, w1..wm with literals
/// numbered globally in clause order. Throws GraphError for an empty formula or a clause
/// with repeated variables.
MixedGraph build_sat_graph(const CnfFormula& f);

struct TsivWitness {
    std::vector<Vertex> S;  // sorted
    std::vector<Vertex> T;  // sorted
    int k = 0;
};

struct TsivSearch {
    std::optional<TsivWitness> witness;
    std::uint64_t examined = 0;   // complete (S, T) pairs tested
    bool budget_exhausted = false;
};

/// Direct check of the three tsIV conditions in G_flow for target x -> y, with the known
/// edges into y removed together with x' -> y' for the deficiency condition.
bool is_tsiv(const MixedGraph& g, DirectedEdge target, const KnownEdges& known, const std::vector<Vertex>& S,
             const std::vector<Vertex>& T);

/// First witness with |S| = |T| + 1 <= max_k, by size then lexicographically (T outer,
/// S inner). Stops with budget_exhausted once `budget` pairs were examined.
TsivSearch brute_force_tsiv(const MixedGraph& g, DirectedEdge target, const KnownEdges& known, int max_k,
                            std::uint64_t budget = 50'000'000);

class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Exhaustive search; throws BudgetExceeded beyond 20 variables.
std::optional<Assignment> brute_force_1in3sat(const CnfFormula& f);

/// Invariant of the reduction graph under renaming variables and reordering literals in
/// a clause: clause sizes plus the cross-clause literal relation (same / complement).
std::string reduction_class_key(const CnfFormula& f);

}  // namespace ivcut
