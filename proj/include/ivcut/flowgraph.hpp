#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ivcut/graph.hpp"
#include "ivcut/maxflow.hpp"

namespace ivcut {

/// Node roles: v (top), v' (bottom), v* and v'* (auxiliary copies, G_aux only).
enum class Role : std::uint8_t { plain, sink, star, sink_star };

const char* role_suffix(Role r);

struct FlowNode {
    Vertex vertex = 0;
    Role role = Role::plain;
    auto operator<=>(const FlowNode&) const = default;
};

/// Symbolic edge weight. lambda: λ_ij for i -> j. epsilon: ε_ij with i <= j. unit: 1.
struct EdgeLabel {
    enum class Kind : std::uint8_t { lambda, epsilon, unit };
    Kind kind = Kind::unit;
    Vertex i = 0;
    Vertex j = 0;
    auto operator<=>(const EdgeLabel&) const = default;
};

struct LabeledEdge {
    NodeId from = 0;
    NodeId to = 0;
    EdgeLabel label;
};

/// G_flow or G_aux. Node ids are role-major: node(v, role) = role_index * |V| + v.
class WeightedFlowGraph {
public:
    WeightedFlowGraph() = default;

    bool auxiliary() const { return auxiliary_; }
    std::size_t vertex_count() const { return names_.size(); }
    std::size_t node_count() const { return dag_.size(); }
    const Dag& dag() const { return dag_; }

    /// Throws GraphError for star roles on a plain flow graph.
    NodeId node(Vertex v, Role r) const;
    FlowNode info(NodeId id) const;
    std::string node_name(NodeId id) const;

    const EdgeLabel& label(NodeId from, NodeId to) const;
    /// Sorted by (from, to).
    std::vector<LabeledEdge> edges() const;

    std::string to_dot() const;

private:
    friend WeightedFlowGraph build_flow_graph(const MixedGraph& g);
    friend WeightedFlowGraph build_aux_flow_graph(const MixedGraph& g, const KnownEdges& known);

    void add(NodeId from, NodeId to, EdgeLabel label);

    bool auxiliary_ = false;
    std::vector<std::string> names_;
    Dag dag_;
    std::map<std::pair<NodeId, NodeId>, EdgeLabel> labels_;
};

WeightedFlowGraph build_flow_graph(const MixedGraph& g);
WeightedFlowGraph build_aux_flow_graph(const MixedGraph& g, const KnownEdges& known);

std::string format_label(const MixedGraph& g, const EdgeLabel& l);

}  // namespace ivcut
