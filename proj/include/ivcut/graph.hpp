#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ivcut {

/// Index of a vertex in a MixedGraph. Indices follow first-mention order.
using Vertex = std::uint32_t;

struct DirectedEdge {
    Vertex from = 0;
    Vertex to = 0;
    auto operator<=>(const DirectedEdge&) const = default;
};

/// Unordered pair, stored with a < b.
struct BidirectedEdge {
    Vertex a = 0;
    Vertex b = 0;
    BidirectedEdge() = default;
    BidirectedEdge(Vertex u, Vertex v) : a(u < v ? u : v), b(u < v ? v : u) {}
    auto operator<=>(const BidirectedEdge&) const = default;
};

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised by parse_graph; `line()` is 1-based, 0 when not tied to a line.
class ParseError : public GraphError {
public:
    ParseError(std::size_t line, const std::string& what)
        : GraphError(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Causal graph G = (V, D, B). Immutable once constructed; directed part is a DAG.
class MixedGraph {
public:
    MixedGraph() = default;

    /// Validates: unique names, endpoints in range, no self-loops, no duplicates, acyclic D.
    MixedGraph(std::vector<std::string> names,
               std::vector<DirectedEdge> directed,
               std::vector<BidirectedEdge> bidirected);

    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }

    const std::string& name(Vertex v) const { return names_.at(v); }
    const std::vector<std::string>& names() const { return names_; }
    std::optional<Vertex> find(std::string_view name) const;
    /// Throws GraphError for an unknown name.
    Vertex vertex(std::string_view name) const;

    /// Sorted by (from, to).
    const std::vector<DirectedEdge>& directed_edges() const { return directed_; }
    /// Sorted by (a, b).
    const std::vector<BidirectedEdge>& bidirected_edges() const { return bidirected_; }

    std::span<const Vertex> parents(Vertex v) const { return parents_.at(v); }
    std::span<const Vertex> children(Vertex v) const { return children_.at(v); }
    std::span<const Vertex> siblings(Vertex v) const { return siblings_.at(v); }

    bool has_directed(Vertex from, Vertex to) const;
    bool has_bidirected(Vertex u, Vertex v) const;

    /// Topological order of D, ties broken by vertex index.
    const std::vector<Vertex>& topological_order() const { return topo_; }

    bool operator==(const MixedGraph& other) const {
        return names_ == other.names_ && directed_ == other.directed_ &&
               bidirected_ == other.bidirected_;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, Vertex> index_;
    std::vector<DirectedEdge> directed_;
    std::vector<BidirectedEdge> bidirected_;
    std::vector<std::vector<Vertex>> parents_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<std::vector<Vertex>> siblings_;
    std::vector<Vertex> topo_;
};

enum class Relation { parents, ancestors, descendants, siblings };

/// Parents / reflexive-transitive ancestors or descendants over D / bidirected
/// neighbours. Sorted by vertex index.
std::vector<Vertex> relatives(const MixedGraph& g, Vertex v, Relation kind);

/// Membership mask of the descendants (reflexive) of every vertex in `roots`.
std::vector<bool> descendants_of(const MixedGraph& g, std::span<const Vertex> roots);

/// Line-oriented text format: `a -> b`, `a <-> b`, `node a b c`, `# comment`.
MixedGraph parse_graph(std::string_view text);

/// Canonical text form: a `node` line, then directed, then bidirected edges in index order.
std::string serialize_graph(const MixedGraph& g);

/// The set Λ* of directed coefficients already identified. Every member is an edge of
/// the host graph it was validated against.
class KnownEdges {
public:
    KnownEdges() = default;
    KnownEdges(const MixedGraph& g, std::span<const DirectedEdge> edges);

    bool contains(DirectedEdge e) const { return edges_.contains(e); }
    bool contains(Vertex from, Vertex to) const { return edges_.contains({from, to}); }
    /// Caller guarantees `e` is an edge of the host graph.
    bool insert(DirectedEdge e) { return edges_.insert(e).second; }
    std::size_t size() const { return edges_.size(); }
    bool empty() const { return edges_.empty(); }
    auto begin() const { return edges_.begin(); }
    auto end() const { return edges_.end(); }

    /// Known parents of v, sorted.
    std::vector<Vertex> known_parents(const MixedGraph& g, Vertex v) const;

    bool operator==(const KnownEdges&) const = default;

private:
    std::set<DirectedEdge> edges_;
};

/// Parses `a->b,c->d` against g.
KnownEdges parse_known_edges(const MixedGraph& g, std::string_view spec);

std::string format_edge(const MixedGraph& g, DirectedEdge e);

/// Random DAG with confounding: vertex order is a topological order; each ordered pair
/// i < j gets i -> j with probability `edge_density`, each pair a bidirected edge with
/// probability `confounder_density`. Names are v0, v1, ...
MixedGraph random_mixed_graph(std::size_t n, double edge_density, double confounder_density,
                              std::uint64_t seed);

/// Random graph with exactly the requested numbers of directed and bidirected edges.
MixedGraph random_mixed_graph_exact(std::size_t n, std::size_t n_directed,
                                    std::size_t n_bidirected, std::uint64_t seed);

}  // namespace ivcut
