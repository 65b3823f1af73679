#include "ivcut/flowgraph.hpp"

#include <sstream>

namespace ivcut {

const char* role_suffix(Role r) {
    switch (r) {
        case Role::plain: return "";
        case Role::sink: return "'";
        case Role::star: return "*";
        case Role::sink_star: return "'*";
    }
    return "";
}

NodeId WeightedFlowGraph::node(Vertex v, Role r) const {
    const auto n = static_cast<NodeId>(names_.size());
    if (v >= n) throw GraphError("flow graph: vertex " + std::to_string(v) + " out of range");
    if (!auxiliary_ && (r == Role::star || r == Role::sink_star))
        throw GraphError("flow graph: auxiliary role requested on G_flow");
    return static_cast<NodeId>(static_cast<std::uint32_t>(r) * n + v);
}

FlowNode WeightedFlowGraph::info(NodeId id) const {
    const auto n = static_cast<NodeId>(names_.size());
    if (id >= dag_.size()) throw GraphError("flow graph: node " + std::to_string(id) + " out of range");
    return {id % n, static_cast<Role>(id / n)};
}

std::string WeightedFlowGraph::node_name(NodeId id) const {
    FlowNode f = info(id);
    return names_[f.vertex] + role_suffix(f.role);
}

const EdgeLabel& WeightedFlowGraph::label(NodeId from, NodeId to) const {
    auto it = labels_.find({from, to});
    if (it == labels_.end()) throw GraphError("flow graph: no edge " + node_name(from) + " -> " + node_name(to));
    return it->second;
}

std::vector<LabeledEdge> WeightedFlowGraph::edges() const {
    std::vector<LabeledEdge> out;
    out.reserve(labels_.size());
    for (const auto& [k, l] : labels_) out.push_back({k.first, k.second, l});
    return out;
}

void WeightedFlowGraph::add(NodeId from, NodeId to, EdgeLabel label) {
    dag_.add_edge(from, to);
    labels_.emplace(std::pair{from, to}, label);
}

std::string WeightedFlowGraph::to_dot() const {
    std::ostringstream os;
    os << "digraph " << (auxiliary_ ? "G_aux" : "G_flow") << " {\n";
    for (NodeId id = 0; id < node_count(); ++id) os << "  n" << id << " [label=\"" << node_name(id) << "\"];\n";
    for (const auto& e : edges()) {
        os << "  n" << e.from << " -> n" << e.to << " [label=\"";
        switch (e.label.kind) {
            case EdgeLabel::Kind::lambda: os << "l_" << names_[e.label.i] << "," << names_[e.label.j]; break;
            case EdgeLabel::Kind::epsilon: os << "e_" << names_[e.label.i] << "," << names_[e.label.j]; break;
            case EdgeLabel::Kind::unit: os << "1"; break;
        }
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

namespace {
EdgeLabel lam(Vertex i, Vertex j) { return {EdgeLabel::Kind::lambda, i, j}; }
EdgeLabel eps(Vertex i, Vertex j) { return {EdgeLabel::Kind::epsilon, std::min(i, j), std::max(i, j)}; }
constexpr EdgeLabel kUnit{EdgeLabel::Kind::unit, 0, 0};
}  // namespace

WeightedFlowGraph build_flow_graph(const MixedGraph& g) {
    WeightedFlowGraph fg;
    fg.names_ = g.names();
    fg.dag_ = Dag(2 * g.size());
    auto top = [&](Vertex v) { return fg.node(v, Role::plain); };
    auto bot = [&](Vertex v) { return fg.node(v, Role::sink); };
    for (auto [i, j] : g.directed_edges()) {
        fg.add(top(j), top(i), lam(i, j));
        fg.add(bot(i), bot(j), lam(i, j));
    }
    for (Vertex v = 0; v < g.size(); ++v) fg.add(top(v), bot(v), eps(v, v));
    for (auto [a, b] : g.bidirected_edges()) {
        fg.add(top(a), bot(b), eps(a, b));
        fg.add(top(b), bot(a), eps(a, b));
    }
    return fg;
}

WeightedFlowGraph build_aux_flow_graph(const MixedGraph& g, const KnownEdges& known) {
    WeightedFlowGraph fg;
    fg.auxiliary_ = true;
    fg.names_ = g.names();
    fg.dag_ = Dag(4 * g.size());
    auto node = [&](Vertex v, Role r) { return fg.node(v, r); };
    for (auto e : g.directed_edges()) {
        auto [i, j] = e;
        if (known.contains(e)) {
            fg.add(node(j, Role::plain), node(i, Role::plain), lam(i, j));
            fg.add(node(i, Role::sink), node(j, Role::sink), lam(i, j));
        } else {
            fg.add(node(j, Role::star), node(i, Role::plain), lam(i, j));
            fg.add(node(i, Role::sink), node(j, Role::sink_star), lam(i, j));
        }
    }
    for (Vertex v = 0; v < g.size(); ++v) {
        fg.add(node(v, Role::plain), node(v, Role::star), kUnit);
        fg.add(node(v, Role::sink_star), node(v, Role::sink), kUnit);
        fg.add(node(v, Role::star), node(v, Role::sink), eps(v, v));
    }
    for (auto [a, b] : g.bidirected_edges()) {
        fg.add(node(a, Role::star), node(b, Role::sink_star), eps(a, b));
        fg.add(node(b, Role::star), node(a, Role::sink_star), eps(a, b));
    }
    return fg;
}

std::string format_label(const MixedGraph& g, const EdgeLabel& l) {
    switch (l.kind) {
        case EdgeLabel::Kind::lambda: return "lambda[" + g.name(l.i) + "->" + g.name(l.j) + "]";
        case EdgeLabel::Kind::epsilon: return "epsilon[" + g.name(l.i) + "," + g.name(l.j) + "]";
        case EdgeLabel::Kind::unit: return "1";
    }
    return "";
}

}  // namespace ivcut
