#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace ivcut {

using NodeId = std::uint32_t;

/// Plain directed graph over nodes 0..n-1. Adjacency lists are kept sorted so every
/// traversal visits neighbours in index order.
class Dag {
public:
    Dag() = default;
    explicit Dag(std::size_t n) : out_(n), in_(n) {}

    std::size_t size() const { return out_.size(); }
    std::size_t edge_count() const { return edges_; }

    /// Duplicate edges are ignored.
    void add_edge(NodeId from, NodeId to);
    bool has_edge(NodeId from, NodeId to) const;

    std::span<const NodeId> out(NodeId v) const { return out_[v]; }
    std::span<const NodeId> in(NodeId v) const { return in_[v]; }

    Dag without_edge(NodeId from, NodeId to) const;
    Dag without_edges_into(std::span<const NodeId> targets) const;

    /// Reflexive closures as membership masks.
    std::vector<bool> ancestors_of(std::span<const NodeId> nodes) const;
    std::vector<bool> descendants_of(std::span<const NodeId> nodes) const;

    bool is_acyclic() const;

private:
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
    std::size_t edges_ = 0;
};

/// Vertex-disjoint max flow. Each path runs from a source to a sink; a path starts at
/// the last source it visits and ends at the first sink it visits.
struct FlowResult {
    int value = 0;
    std::vector<std::vector<NodeId>> paths;
    std::vector<NodeId> saturated_sources;  // sorted
    std::vector<NodeId> saturated_sinks;    // sorted
};

struct VertexCut {
    std::vector<NodeId> cut;  // sorted
};

/// Unit vertex-capacity flow network over a fixed DAG, reusable across queries with
/// different source and sink sets. Vertices are split into in/out halves internally;
/// augmenting paths are found breadth-first with neighbours explored in index order.
class VertexFlowNetwork {
public:
    explicit VertexFlowNetwork(const Dag& dag);

    /// Flow value only; stops augmenting once `limit` is reached.
    int max_flow_value(std::span<const NodeId> sources, std::span<const NodeId> sinks,
                       int limit = std::numeric_limits<int>::max());

    FlowResult max_flow(std::span<const NodeId> sources, std::span<const NodeId> sinks);

    /// The minimum vertex cut closest to the sinks.
    VertexCut closest_min_cut(std::span<const NodeId> sources, std::span<const NodeId> sinks);

    /// Incremental use: begin() clears the flow and fixes the sinks, add_source() inserts
    /// one source and returns true if the flow value grew, rollback() undoes everything
    /// after a checkpoint. Sources must be added in a stack discipline.
    void begin(std::span<const NodeId> sinks);
    bool add_source(NodeId s);
    int value() const { return value_; }
    std::size_t checkpoint() const { return log_.size(); }
    void rollback(std::size_t mark);

private:
    void reset(std::span<const NodeId> sources, std::span<const NodeId> sinks);
    bool augment(std::span<const NodeId> starts);
    void set(std::vector<std::uint8_t>& field, std::size_t index, std::uint8_t v);
    int run(int limit);
    FlowResult decompose() const;

    std::size_t n_;
    // CSR of the DAG: out-edges of v are [out_begin_[v], out_begin_[v+1]).
    std::vector<std::uint32_t> out_begin_;
    std::vector<NodeId> out_target_;
    // In-edges reference the out-edge index they mirror.
    std::vector<std::uint32_t> in_begin_;
    std::vector<NodeId> in_source_;
    std::vector<std::uint32_t> in_edge_;

    std::vector<std::uint8_t> edge_flow_;
    std::vector<std::uint8_t> through_;
    std::vector<std::uint8_t> is_source_, is_sink_;
    std::vector<std::uint8_t> source_flow_, sink_flow_;
    std::vector<NodeId> sources_;
    int value_ = 0;

    struct Change {
        std::vector<std::uint8_t>* field;
        std::uint32_t index;
        std::uint8_t old;
    };
    std::vector<Change> log_;
    bool logging_ = false;

    // BFS scratch over split nodes: 2v = in(v), 2v+1 = out(v).
    std::vector<std::uint32_t> pred_;
    std::vector<std::uint32_t> pred_edge_;
    std::vector<std::uint8_t> pred_kind_;  // 0 = unvisited
    std::vector<std::uint32_t> queue_;
};

FlowResult max_vertex_flow(const Dag& g, std::span<const NodeId> sources,
                           std::span<const NodeId> sinks);

/// Among all minimum vertex cuts between `sources` and `sinks` (every vertex, including
/// sources and sinks, has capacity 1), the unique one nearest the sinks.
VertexCut closest_min_vertex_cut(const Dag& g, std::span<const NodeId> sources,
                                 std::span<const NodeId> sinks);

}  // namespace ivcut
