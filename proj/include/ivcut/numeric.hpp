#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ivcut/flowgraph.hpp"
#include "ivcut/graph.hpp"
#include "ivcut/identify.hpp"

namespace ivcut {

using Real = long double;
using Matrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

/// Concrete (Λ, Ω). lambda(i, j) is the coefficient of i -> j.
struct Parameterization {
    Matrix lambda;
    Matrix omega;
};

/// λ and off-diagonal ε uniform on ±[0.1, 1]; ε_ii = off-diagonal row abs sum + U[1, 2].
/// Draw order: directed edges, bidirected edges, diagonal, each in index order.
Parameterization random_parameterization(const MixedGraph& g, std::uint64_t seed);

struct CovarianceMatrix {
    Matrix sigma;
    /// Row v holds σ_{v*,·} = σ_{v,·} − Σ_j λ_jv σ_{j,·} over known edges j -> v.
    Matrix aux_rows;
};

/// Σ = (I − Λ)^{-T} Ω (I − Λ)^{-1}.
CovarianceMatrix covariance(const MixedGraph& g, const Parameterization& p, const KnownEdges& known = {});

Real edge_weight(const EdgeLabel& l, const Parameterization& p);

class OracleLimitExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Sum over all s -> t paths of the product of edge weights.
Real trek_sum_oracle(const WeightedFlowGraph& fg, const Parameterization& p, NodeId s, NodeId t,
                     std::size_t max_paths = 1'000'000);

/// Signed sum over all vertex-disjoint path systems from A to B (sign of the induced
/// permutation, A[i] matched to B[π(i)]).
Real gvl_det_oracle(const WeightedFlowGraph& fg, const Parameterization& p, std::span<const NodeId> A,
                    std::span<const NodeId> B, std::size_t max_systems = 1'000'000);

Real determinant(const Matrix& m);
/// Singular values above 1e-9 × the largest.
int numeric_rank(const Matrix& m);
bool positive_definite(const Matrix& m);

Matrix submatrix(const Matrix& m, std::span<const Vertex> rows, std::span<const Vertex> cols);

struct CertificateValue {
    Real value = 0;
    Real numerator = 0;
    Real denominator = 0;
    bool degenerate = false;
};

/// Evaluates a certificate's ratio on Σ. Known coefficients (star rows, corrections) are
/// read from `known_lambda`.
CertificateValue evaluate_certificate(const MixedGraph& g, const Certificate& cert, const Matrix& sigma,
                                      const Matrix& known_lambda);

struct Verdict {
    enum class Status { pass, fail, degenerate };
    Status status = Status::pass;
    double max_rel_error = 0;
    int trials = 0;
    std::uint64_t worst_seed = 0;
    bool ok() const { return status == Status::pass; }
};

const char* status_name(Verdict::Status s);

/// Trials use seeds first_seed, first_seed + 1, ...
Verdict verify_certificate(const MixedGraph& g, const Certificate& cert, int trials, double tol,
                           std::uint64_t first_seed = 1);

/// End-to-end mode: certificates are evaluated in discovery order, each consuming the
/// values recovered by earlier ones instead of the true coefficients. Seed edges use true
/// values. Returns one verdict per certificate.
std::vector<Verdict> verify_chained(const MixedGraph& g, const IdentificationResult& r,
                                    const KnownEdges& seed_known, int trials, double tol,
                                    std::uint64_t first_seed = 1);

}  // namespace ivcut
