#include "ivcut/identify.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "ivcut/matchblock.hpp"

namespace ivcut {

const char* method_name(Method m) {
    switch (m) {
        case Method::is: return "IS";
        case Method::avs: return "AVS";
        case Method::ic: return "IC";
    }
    return "?";
}

std::vector<Vertex> Certificate::columns() const {
    std::vector<Vertex> cols = sinks;
    cols.insert(std::lower_bound(cols.begin(), cols.end(), target.from), target.from);
    return cols;
}

std::vector<Vertex> Certificate::subtracted(const MixedGraph& g, const SourceRef& s) const {
    if (!s.star) return {};
    return context.known_parents(g, s.vertex);
}

std::string Certificate::formula(const MixedGraph& g) const {
    const std::string& x = g.name(target.from);
    const std::string& y = g.name(target.to);
    const std::string ystar = corrections.empty() ? y : y + "*";
    std::string rows;
    for (std::size_t i = 0; i < sources.size(); ++i) {
        if (i) rows += ", ";
        rows += g.name(sources[i].vertex) + (sources[i].star ? "*" : "");
    }
    auto minor = [&](bool numerator) {
        std::string cols;
        bool first = true;
        for (Vertex c : columns()) {
            if (!first) cols += ", ";
            first = false;
            cols += (c == target.from && numerator) ? ystar : g.name(c);
        }
        return "det Sigma[{" + rows + "}; {" + cols + "}]";
    };
    std::ostringstream os;
    os << "lambda[" << x << "->" << y << "] = " << minor(true) << " / " << minor(false);
    auto expand = [&](const std::string& v, const std::vector<Vertex>& known) {
        os << "; " << v << "* = " << v;
        for (Vertex j : known) os << " - lambda[" << g.name(j) << "->" << v << "] " << g.name(j);
    };
    if (!corrections.empty()) {
        std::vector<Vertex> w;
        for (auto e : corrections) w.push_back(e.from);
        expand(y, w);
    }
    for (const auto& s : sources)
        if (s.star) expand(g.name(s.vertex), subtracted(g, s));
    return os.str();
}

namespace {

SourceRef to_ref(const WeightedFlowGraph& fg, NodeId id) {
    FlowNode f = fg.info(id);
    return {f.vertex, f.role == Role::star};
}

std::vector<SourceRef> to_refs(const WeightedFlowGraph& fg, std::span<const NodeId> ids) {
    std::vector<SourceRef> out;
    for (NodeId id : ids) out.push_back(to_ref(fg, id));
    std::sort(out.begin(), out.end(), [](const SourceRef& a, const SourceRef& b) {
        return std::pair{a.star, a.vertex} < std::pair{b.star, b.vertex};
    });
    return out;
}

std::vector<Vertex> to_vertices(const WeightedFlowGraph& fg, std::span<const NodeId> ids) {
    std::vector<Vertex> out;
    for (NodeId id : ids) out.push_back(fg.info(id).vertex);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Vertex> unknown_parents(const MixedGraph& g, Vertex y, const KnownEdges& known) {
    std::vector<Vertex> out;
    for (Vertex p : g.parents(y))
        if (!known.contains(p, y)) out.push_back(p);
    return out;
}

std::vector<DirectedEdge> known_incoming(const MixedGraph& g, Vertex y, const KnownEdges& known) {
    std::vector<DirectedEdge> out;
    for (Vertex p : known.known_parents(g, y)) out.push_back({p, y});
    return out;
}

/// Source nodes of G_aux that may serve as instruments for y: not ancestors of y'* once
/// the unknown-parent edges into y'* are cut, and not ancestors of y* (which would give
/// them treks through y itself).
std::vector<bool> admissible_mask(const WeightedFlowGraph& aux, Vertex y, std::span<const NodeId> T) {
    const NodeId ysink = aux.node(y, Role::sink_star);
    const Dag& d = aux.dag();
    std::vector<bool> to_sink(d.size(), false);
    {
        std::vector<NodeId> stack{ysink};
        to_sink[ysink] = true;
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId p : d.in(u)) {
                if (u == ysink && std::binary_search(T.begin(), T.end(), p)) continue;
                if (!to_sink[p]) {
                    to_sink[p] = true;
                    stack.push_back(p);
                }
            }
        }
    }
    const NodeId ystar = aux.node(y, Role::star);
    std::vector<bool> to_star = d.ancestors_of(std::span<const NodeId>(&ystar, 1));
    std::vector<bool> ok(d.size(), false);
    for (Vertex v = 0; v < aux.vertex_count(); ++v) {
        for (Role r : {Role::plain, Role::star}) {
            NodeId id = aux.node(v, r);
            ok[id] = !to_sink[id] && !to_star[id];
        }
    }
    return ok;
}

std::vector<NodeId> admissible_sources(const WeightedFlowGraph& aux, Vertex y, std::span<const NodeId> T) {
    std::vector<bool> ok = admissible_mask(aux, y, T);
    std::vector<NodeId> S;
    for (NodeId id = 0; id < ok.size(); ++id)
        if (ok[id]) S.push_back(id);
    return S;
}

std::vector<NodeId> sink_parents(const WeightedFlowGraph& aux, const MixedGraph& g, Vertex y,
                                 const KnownEdges& known) {
    std::vector<NodeId> T;
    for (Vertex p : unknown_parents(g, y, known)) T.push_back(aux.node(p, Role::sink));
    return T;
}

Certificate make_certificate(Method m, Vertex x, Vertex y, std::vector<SourceRef> sources,
                             const std::vector<Vertex>& parents_with_x, const MixedGraph& g,
                             const KnownEdges& known) {
    Certificate c;
    c.target = {x, y};
    c.method = m;
    // A star copy with nothing subtracted has the same row as the plain variable.
    for (auto& s : sources)
        if (s.star && known.known_parents(g, s.vertex).empty()) s.star = false;
    std::sort(sources.begin(), sources.end(), [](const SourceRef& a, const SourceRef& b) {
        return std::pair{a.star, a.vertex} < std::pair{b.star, b.vertex};
    });
    c.sources = std::move(sources);
    for (Vertex p : parents_with_x)
        if (p != x) c.sinks.push_back(p);
    c.corrections = known_incoming(g, y, known);
    c.context = known;
    return c;
}

CriterionResult avs_in(const WeightedFlowGraph& aux, const MixedGraph& g, Vertex y, const KnownEdges& known) {
    CriterionResult r;
    std::vector<NodeId> T = sink_parents(aux, g, y, known);
    if (T.empty()) return r;
    std::vector<NodeId> S = admissible_sources(aux, y, T);
    MatchBlock mb = max_match_block(aux.dag(), S, T);
    r.sources = to_refs(aux, mb.sources);
    r.sinks = to_vertices(aux, mb.sinks);
    r.identified = r.sinks;
    for (Vertex x : r.identified)
        r.certificates.push_back(make_certificate(Method::avs, x, y, r.sources, r.sinks, g, known));
    return r;
}

CriterionResult ic_in(const WeightedFlowGraph& aux, const MixedGraph& g, Vertex y, const KnownEdges& known) {
    CriterionResult r;
    std::vector<NodeId> T = sink_parents(aux, g, y, known);
    if (T.empty()) return r;
    std::vector<NodeId> S = admissible_sources(aux, y, T);
    if (S.empty()) return r;

    VertexFlowNetwork net(aux.dag());
    std::vector<NodeId> C = net.closest_min_cut(S, T).cut;
    if (C.empty()) return r;
    for (NodeId c : C) r.cut.push_back(aux.info(c));
    FlowResult to_cut = net.max_flow(S, C);
    r.sources = to_refs(aux, to_cut.saturated_sources);

    Dag reduced = aux.dag().without_edges_into(C);
    MatchBlock mb = max_match_block(reduced, C, T);
    if (mb.empty()) return r;

    std::vector<NodeId> rest_c, rest_t;
    std::set_difference(C.begin(), C.end(), mb.sources.begin(), mb.sources.end(), std::back_inserter(rest_c));
    std::set_difference(T.begin(), T.end(), mb.sinks.begin(), mb.sinks.end(), std::back_inserter(rest_t));
    FlowResult tail = max_vertex_flow(reduced, rest_c, rest_t);

    r.identified = to_vertices(aux, mb.sinks);
    std::vector<NodeId> all_t = tail.saturated_sinks;
    all_t.insert(all_t.end(), mb.sinks.begin(), mb.sinks.end());
    r.sinks = to_vertices(aux, all_t);
    for (Vertex x : r.identified)
        r.certificates.push_back(make_certificate(Method::ic, x, y, r.sources, r.sinks, g, known));
    return r;
}

using Criterion = std::function<CriterionResult(const WeightedFlowGraph&, const MixedGraph&, Vertex,
                                                const KnownEdges&)>;

IdentificationResult fixpoint(const MixedGraph& g, const KnownEdges& seed, const Criterion& criterion) {
    IdentificationResult out;
    out.known_after = seed;
    for (;;) {
        ++out.iterations;
        const KnownEdges round_known = out.known_after;
        const WeightedFlowGraph aux = build_aux_flow_graph(g, round_known);
        std::vector<Certificate> found;
        for (Vertex y = 0; y < g.size(); ++y) {
            CriterionResult r = criterion(aux, g, y, round_known);
            for (auto& c : r.certificates) found.push_back(std::move(c));
        }
        if (found.empty()) break;
        for (auto& c : found) {
            out.known_after.insert(c.target);
            out.identified.push_back(std::move(c));
        }
    }
    return out;
}

}  // namespace

CriterionResult instrumental_subsets(const MixedGraph& g, Vertex y) {
    if (y >= g.size()) throw GraphError("unknown vertex index " + std::to_string(y));
    CriterionResult r;
    WeightedFlowGraph fg = build_flow_graph(g);
    std::vector<NodeId> T;
    for (Vertex p : g.parents(y)) T.push_back(fg.node(p, Role::sink));
    if (T.empty()) return r;
    std::vector<Vertex> roots{y};
    for (Vertex s : g.siblings(y)) roots.push_back(s);
    std::vector<bool> excluded = descendants_of(g, roots);
    std::vector<NodeId> Z;
    for (Vertex v = 0; v < g.size(); ++v)
        if (!excluded[v]) Z.push_back(fg.node(v, Role::plain));
    MatchBlock mb = max_match_block(fg.dag(), Z, T);
    r.sources = to_refs(fg, mb.sources);
    r.sinks = to_vertices(fg, mb.sinks);
    r.identified = r.sinks;
    for (Vertex x : r.identified)
        r.certificates.push_back(make_certificate(Method::is, x, y, r.sources, r.sinks, g, KnownEdges{}));
    return r;
}

CriterionResult avs(const MixedGraph& g, Vertex y, const KnownEdges& known) {
    if (y >= g.size()) throw GraphError("unknown vertex index " + std::to_string(y));
    return avs_in(build_aux_flow_graph(g, known), g, y, known);
}

CriterionResult ic(const MixedGraph& g, Vertex y, const KnownEdges& known) {
    if (y >= g.size()) throw GraphError("unknown vertex index " + std::to_string(y));
    return ic_in(build_aux_flow_graph(g, known), g, y, known);
}

IdentificationResult icid(const MixedGraph& g, const KnownEdges& seed_known) {
    return fixpoint(g, seed_known, ic_in);
}

IdentificationResult avsid(const MixedGraph& g, const KnownEdges& seed_known) {
    return fixpoint(g, seed_known, avs_in);
}

IdentificationResult is_all(const MixedGraph& g) {
    IdentificationResult out;
    out.iterations = 1;
    for (Vertex y = 0; y < g.size(); ++y) {
        for (auto& c : instrumental_subsets(g, y).certificates) {
            out.known_after.insert(c.target);
            out.identified.push_back(std::move(c));
        }
    }
    return out;
}

std::vector<DirectedEdge> identified_edges(const IdentificationResult& r) {
    std::vector<DirectedEdge> out;
    for (const auto& c : r.identified) out.push_back(c.target);
    std::sort(out.begin(), out.end());
    return out;
}

SubsumptionReport subsumption_check(const MixedGraph& g) {
    SubsumptionReport rep;
    rep.avsid = identified_edges(avsid(g));
    rep.icid = identified_edges(icid(g));
    std::set_difference(rep.avsid.begin(), rep.avsid.end(), rep.icid.begin(), rep.icid.end(),
                        std::back_inserter(rep.missing));
    return rep;
}

FlowCheck check_flow_conditions(const MixedGraph& g, const Certificate& cert) {
    FlowCheck fc;
    const auto [x, y] = cert.target;
    fc.k = static_cast<int>(cert.sources.size());
    if (x >= g.size() || y >= g.size() || !g.has_directed(x, y)) return fc;

    const WeightedFlowGraph aux = build_aux_flow_graph(g, cert.context);
    std::vector<Vertex> unknown = unknown_parents(g, y, cert.context);
    auto is_unknown = [&](Vertex p) { return std::binary_search(unknown.begin(), unknown.end(), p); };
    fc.sizes_ok = cert.sources.size() == cert.sinks.size() + 1 && is_unknown(x) &&
                  std::is_sorted(cert.sinks.begin(), cert.sinks.end()) &&
                  std::adjacent_find(cert.sinks.begin(), cert.sinks.end()) == cert.sinks.end() &&
                  std::all_of(cert.sinks.begin(), cert.sinks.end(),
                              [&](Vertex t) { return t != x && is_unknown(t); });
    if (!fc.sizes_ok) return fc;

    std::vector<NodeId> S;
    for (const auto& s : cert.sources) S.push_back(aux.node(s.vertex, s.star ? Role::star : Role::plain));
    std::vector<NodeId> T = sink_parents(aux, g, y, cert.context);
    std::vector<bool> ok = admissible_mask(aux, y, T);
    fc.sources_ok = std::all_of(S.begin(), S.end(), [&](NodeId s) { return ok[s]; });

    std::vector<NodeId> sinks;
    for (Vertex t : cert.sinks) sinks.push_back(aux.node(t, Role::sink));
    sinks.push_back(aux.node(x, Role::sink));
    fc.flow_to_x = max_vertex_flow(aux.dag(), S, sinks).value;
    sinks.back() = aux.node(y, Role::sink_star);
    Dag cut = aux.dag().without_edge(aux.node(x, Role::sink), aux.node(y, Role::sink_star));
    fc.flow_to_y = max_vertex_flow(cut, S, sinks).value;
    return fc;
}

}  // namespace ivcut
