#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ivcut/flowgraph.hpp"
#include "ivcut/graph.hpp"

namespace ivcut {

enum class Method { is, avs, ic };

const char* method_name(Method m);

/// A source row of a certificate: a variable, or its auxiliary copy when star is set.
struct SourceRef {
    Vertex vertex = 0;
    bool star = false;
    auto operator<=>(const SourceRef&) const = default;
};

/// Witness that λ_xy equals
///   det Σ[S; T∪{y*}] / det Σ[S; T∪{x}]
/// where the y* column is σ_·y − Σ_w λ_wy σ_·w over the corrections w -> y, and a star
/// row s* is σ_s· − Σ_j λ_js σ_j· over the known edges j -> s in `context`.
struct Certificate {
    DirectedEdge target;
    Method method = Method::ic;
    std::vector<SourceRef> sources;     // |T| + 1 rows, plain before star, by vertex
    std::vector<Vertex> sinks;          // T, sorted, never contains target.from
    std::vector<DirectedEdge> corrections;
    KnownEdges context;                 // Λ* the certificate was derived under

    /// T ∪ {x} in vertex order; the numerator swaps x for y* in place.
    std::vector<Vertex> columns() const;
    /// Known parents subtracted from a star row.
    std::vector<Vertex> subtracted(const MixedGraph& g, const SourceRef& s) const;
    std::string formula(const MixedGraph& g) const;
};

/// Outcome of one criterion applied at a single vertex y.
struct CriterionResult {
    std::vector<SourceRef> sources;   // Z_f, S_m or S_f
    std::vector<Vertex> sinks;        // X_f, T_m or T_f ∪ T_m
    std::vector<Vertex> identified;   // parents p with λ_py identified
    std::vector<FlowNode> cut;        // IC only: the closest min cut C
    std::vector<Certificate> certificates;  // one per identified parent, in parent order
};

CriterionResult instrumental_subsets(const MixedGraph& g, Vertex y);
CriterionResult avs(const MixedGraph& g, Vertex y, const KnownEdges& known);
CriterionResult ic(const MixedGraph& g, Vertex y, const KnownEdges& known);

struct IdentificationResult {
    std::vector<Certificate> identified;
    KnownEdges known_after;
    int iterations = 0;
};

/// Fixpoint drivers. Each round applies the criterion to every vertex against the Λ*
/// in force at the start of the round, then merges everything found.
IdentificationResult icid(const MixedGraph& g, const KnownEdges& seed_known = {});
IdentificationResult avsid(const MixedGraph& g, const KnownEdges& seed_known = {});

/// IS at every vertex with nothing known.
IdentificationResult is_all(const MixedGraph& g);

struct SubsumptionReport {
    std::vector<DirectedEdge> avsid;
    std::vector<DirectedEdge> icid;
    std::vector<DirectedEdge> missing;  // in avsid but not icid; empty unless broken
    bool holds() const { return missing.empty(); }
};

SubsumptionReport subsumption_check(const MixedGraph& g);

/// Direct re-check of a certificate against the flow conditions in G_aux built from its
/// context.
struct FlowCheck {
    int k = 0;
    int flow_to_x = 0;        // flow(S, T' ∪ {x'})
    int flow_to_y = 0;        // flow(S, T' ∪ {y'*}) with x' -> y'* removed
    bool sizes_ok = false;    // |S| = |T| + 1, x ∉ T, T ⊆ unknown parents of y
    bool sources_ok = false;  // no source reaches y or a sibling of y
    bool ok() const { return sizes_ok && sources_ok && flow_to_x == k && flow_to_y < k; }
};

FlowCheck check_flow_conditions(const MixedGraph& g, const Certificate& cert);

/// Sorted edge list of all certificate targets.
std::vector<DirectedEdge> identified_edges(const IdentificationResult& r);

}  // namespace ivcut
