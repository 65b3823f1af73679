#include "ivcut/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace ivcut {

Parameterization random_parameterization(const MixedGraph& g, std::uint64_t seed) {
    const auto n = static_cast<Eigen::Index>(g.size());
    Parameterization p{Matrix::Zero(n, n), Matrix::Zero(n, n)};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> magnitude(0.1, 1.0);
    std::uniform_real_distribution<double> diagonal(1.0, 2.0);
    auto signed_draw = [&] {
        const double m = magnitude(rng);
        return static_cast<Real>((rng() & 1u) ? m : -m);
    };
    for (auto [i, j] : g.directed_edges()) p.lambda(i, j) = signed_draw();
    for (auto [a, b] : g.bidirected_edges()) p.omega(a, b) = p.omega(b, a) = signed_draw();
    for (Eigen::Index v = 0; v < n; ++v)
        p.omega(v, v) = p.omega.row(v).cwiseAbs().sum() + static_cast<Real>(diagonal(rng));
    return p;
}

CovarianceMatrix covariance(const MixedGraph& g, const Parameterization& p, const KnownEdges& known) {
    const auto n = static_cast<Eigen::Index>(g.size());
    CovarianceMatrix c;
    if (n == 0) {
        c.sigma = Matrix(0, 0);
        c.aux_rows = Matrix(0, 0);
        return c;
    }
    // (I − Λ)^T is lower-triangular up to a permutation; LU handles it exactly.
    const Matrix a = Matrix::Identity(n, n) - p.lambda;
    Eigen::PartialPivLU<Matrix> at(a.transpose());
    const Matrix x = at.solve(p.omega);                // (I − Λ)^{-T} Ω
    const Matrix s = at.solve(x.transpose()).transpose();  // · (I − Λ)^{-1}
    c.sigma = (s + s.transpose()) / 2;
    c.aux_rows = c.sigma;
    for (const auto& e : known) c.aux_rows.row(e.to) -= p.lambda(e.from, e.to) * c.sigma.row(e.from);
    return c;
}

Real edge_weight(const EdgeLabel& l, const Parameterization& p) {
    switch (l.kind) {
        case EdgeLabel::Kind::lambda: return p.lambda(l.i, l.j);
        case EdgeLabel::Kind::epsilon: return p.omega(l.i, l.j);
        case EdgeLabel::Kind::unit: return 1;
    }
    return 0;
}

namespace {

// Number of paths from every node to t, saturating at cap.
std::vector<std::size_t> path_counts(const Dag& d, NodeId t, std::size_t cap) {
    std::vector<std::size_t> count(d.size(), 0);
    std::vector<std::uint8_t> done(d.size(), 0);
    std::vector<std::pair<NodeId, bool>> stack;
    for (NodeId root = 0; root < d.size(); ++root) {
        if (done[root]) continue;
        stack.push_back({root, false});
        while (!stack.empty()) {
            auto [u, expanded] = stack.back();
            stack.pop_back();
            if (done[u]) continue;
            if (!expanded) {
                stack.push_back({u, true});
                for (NodeId w : d.out(u))
                    if (!done[w]) stack.push_back({w, false});
                continue;
            }
            std::size_t c = u == t ? 1 : 0;
            for (NodeId w : d.out(u)) c = std::min(cap, c + count[w]);
            count[u] = c;
            done[u] = 1;
        }
    }
    return count;
}

}  // namespace

Real trek_sum_oracle(const WeightedFlowGraph& fg, const Parameterization& p, NodeId s, NodeId t,
                     std::size_t max_paths) {
    const Dag& d = fg.dag();
    if (s >= d.size() || t >= d.size()) throw std::out_of_range("trek_sum_oracle: node out of range");
    if (path_counts(d, t, max_paths + 1)[s] > max_paths)
        throw OracleLimitExceeded("trek_sum_oracle: more than " + std::to_string(max_paths) + " paths");
    Real total = 0;
    std::function<void(NodeId, Real)> walk = [&](NodeId u, Real w) {
        if (u == t) {
            total += w;
            return;
        }
        for (NodeId v : d.out(u)) walk(v, w * edge_weight(fg.label(u, v), p));
    };
    walk(s, 1);
    return total;
}

Real gvl_det_oracle(const WeightedFlowGraph& fg, const Parameterization& p, std::span<const NodeId> A,
                    std::span<const NodeId> B, std::size_t max_systems) {
    if (A.size() != B.size()) throw std::invalid_argument("gvl_det_oracle: |A| != |B|");
    const Dag& d = fg.dag();
    const std::size_t k = A.size();
    std::vector<std::uint8_t> used(d.size(), 0);
    std::vector<int> sink_index(d.size(), -1);
    for (std::size_t j = 0; j < k; ++j) sink_index[B[j]] = static_cast<int>(j);
    std::vector<int> perm(k, -1);
    std::vector<std::uint8_t> sink_taken(k, 0);
    std::size_t systems = 0;
    Real total = 0;

    auto sign = [&] {
        int s = 1;
        std::vector<std::uint8_t> seen(k, 0);
        for (std::size_t i = 0; i < k; ++i) {
            if (seen[i]) continue;
            std::size_t len = 0;
            for (std::size_t j = i; !seen[j]; j = static_cast<std::size_t>(perm[j])) {
                seen[j] = 1;
                ++len;
            }
            if (len % 2 == 0) s = -s;
        }
        return s;
    };

    // Paths are laid down one source at a time; each may end at any unclaimed sink.
    std::function<void(std::size_t, Real)> next_source;
    std::function<void(std::size_t, NodeId, Real)> extend = [&](std::size_t i, NodeId u, Real w) {
        int j = sink_index[u];
        if (j >= 0 && !sink_taken[j]) {
            sink_taken[j] = 1;
            perm[i] = j;
            next_source(i + 1, w);
            sink_taken[j] = 0;
        }
        for (NodeId v : d.out(u)) {
            if (used[v]) continue;
            used[v] = 1;
            extend(i, v, w * edge_weight(fg.label(u, v), p));
            used[v] = 0;
        }
    };
    next_source = [&](std::size_t i, Real w) {
        if (i == k) {
            if (++systems > max_systems)
                throw OracleLimitExceeded("gvl_det_oracle: more than " + std::to_string(max_systems) + " path systems");
            total += sign() * w;
            return;
        }
        NodeId a = A[i];
        if (used[a]) return;
        used[a] = 1;
        extend(i, a, w);
        used[a] = 0;
    };
    next_source(0, 1);
    return total;
}

Real determinant(const Matrix& m) {
    if (m.rows() == 0) return 1;
    return m.partialPivLu().determinant();
}

int numeric_rank(const Matrix& m) {
    if (m.size() == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv(0) == 0) return 0;
    const Real threshold = sv(0) * static_cast<Real>(1e-9);
    int r = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv(i) > threshold) ++r;
    return r;
}

bool positive_definite(const Matrix& m) {
    Eigen::LLT<Matrix> llt(m);
    return llt.info() == Eigen::Success;
}

Matrix submatrix(const Matrix& m, std::span<const Vertex> rows, std::span<const Vertex> cols) {
    Matrix out(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(rows[r], cols[c]);
    return out;
}

CertificateValue evaluate_certificate(const MixedGraph& g, const Certificate& cert, const Matrix& sigma,
                                      const Matrix& known_lambda) {
    const std::vector<Vertex> cols = cert.columns();
    const auto k = static_cast<Eigen::Index>(cert.sources.size());
    const auto [x, y] = cert.target;

    Matrix rows(k, sigma.cols());
    for (Eigen::Index r = 0; r < k; ++r) {
        const SourceRef& s = cert.sources[r];
        rows.row(r) = sigma.row(s.vertex);
        for (Vertex j : cert.subtracted(g, s)) rows.row(r) -= known_lambda(j, s.vertex) * sigma.row(j);
    }
    Matrix ycol = rows.col(y);
    for (auto e : cert.corrections) ycol -= known_lambda(e.from, e.to) * rows.col(e.from);

    Matrix den(k, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) den.col(c) = rows.col(cols[c]);
    Matrix num = den;
    auto xpos = std::find(cols.begin(), cols.end(), x) - cols.begin();
    num.col(xpos) = ycol;

    CertificateValue v;
    v.numerator = determinant(num);
    v.denominator = determinant(den);
    Real scale = 1;
    for (Eigen::Index r = 0; r < den.rows(); ++r) scale *= den.row(r).norm();
    v.degenerate = den.rows() != den.cols() || scale == 0 ||
                   std::fabs(v.denominator) < static_cast<Real>(1e-12) * scale;
    v.value = v.degenerate ? 0 : v.numerator / v.denominator;
    return v;
}

const char* status_name(Verdict::Status s) {
    switch (s) {
        case Verdict::Status::pass: return "PASS";
        case Verdict::Status::fail: return "FAIL";
        case Verdict::Status::degenerate: return "DegenerateDenominator";
    }
    return "?";
}

namespace {
void record(Verdict& v, const CertificateValue& cv, Real truth, double tol, std::uint64_t seed) {
    ++v.trials;
    if (cv.degenerate) {
        if (v.status != Verdict::Status::degenerate) v.worst_seed = seed;
        v.status = Verdict::Status::degenerate;
        return;
    }
    double err = static_cast<double>(std::fabs(cv.value - truth) / std::max(std::fabs(truth), Real(1e-300)));
    if (std::isnan(err)) err = INFINITY;
    if (err > v.max_rel_error || v.trials == 1) {
        v.max_rel_error = std::max(v.max_rel_error, err);
        v.worst_seed = seed;
    }
    if (err > tol && v.status == Verdict::Status::pass) v.status = Verdict::Status::fail;
}
}  // namespace

Verdict verify_certificate(const MixedGraph& g, const Certificate& cert, int trials, double tol,
                           std::uint64_t first_seed) {
    Verdict v;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(t);
        const Parameterization p = random_parameterization(g, seed);
        const CovarianceMatrix c = covariance(g, p);
        const CertificateValue cv = evaluate_certificate(g, cert, c.sigma, p.lambda);
        record(v, cv, p.lambda(cert.target.from, cert.target.to), tol, seed);
    }
    return v;
}

std::vector<Verdict> verify_chained(const MixedGraph& g, const IdentificationResult& r,
                                    const KnownEdges& seed_known, int trials, double tol,
                                    std::uint64_t first_seed) {
    std::vector<Verdict> out(r.identified.size());
    const auto n = static_cast<Eigen::Index>(g.size());
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t seed = first_seed + static_cast<std::uint64_t>(t);
        const Parameterization p = random_parameterization(g, seed);
        const CovarianceMatrix c = covariance(g, p);
        Matrix recovered = Matrix::Zero(n, n);
        for (const auto& e : seed_known) recovered(e.from, e.to) = p.lambda(e.from, e.to);
        for (std::size_t i = 0; i < r.identified.size(); ++i) {
            const Certificate& cert = r.identified[i];
            const CertificateValue cv = evaluate_certificate(g, cert, c.sigma, recovered);
            recovered(cert.target.from, cert.target.to) = cv.value;
            record(out[i], cv, p.lambda(cert.target.from, cert.target.to), tol, seed);
        }
    }
    return out;
}

}  // namespace ivcut
