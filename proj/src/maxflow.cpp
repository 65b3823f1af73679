#include "ivcut/maxflow.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace ivcut {

void Dag::add_edge(NodeId from, NodeId to) {
    if (from >= size() || to >= size()) throw std::out_of_range("Dag::add_edge: node out of range");
    auto& o = out_[from];
    auto it = std::lower_bound(o.begin(), o.end(), to);
    if (it != o.end() && *it == to) return;
    o.insert(it, to);
    auto& i = in_[to];
    i.insert(std::lower_bound(i.begin(), i.end(), from), from);
    ++edges_;
}

bool Dag::has_edge(NodeId from, NodeId to) const {
    const auto& o = out_.at(from);
    return std::binary_search(o.begin(), o.end(), to);
}

Dag Dag::without_edge(NodeId from, NodeId to) const {
    Dag d = *this;
    auto& o = d.out_[from];
    auto it = std::lower_bound(o.begin(), o.end(), to);
    if (it == o.end() || *it != to) return d;
    o.erase(it);
    auto& i = d.in_[to];
    i.erase(std::lower_bound(i.begin(), i.end(), from));
    --d.edges_;
    return d;
}

Dag Dag::without_edges_into(std::span<const NodeId> targets) const {
    Dag d = *this;
    for (NodeId t : targets) {
        for (NodeId p : d.in_[t]) {
            auto& o = d.out_[p];
            o.erase(std::lower_bound(o.begin(), o.end(), t));
            --d.edges_;
        }
        d.in_[t].clear();
    }
    return d;
}

namespace {
std::vector<bool> closure(const std::vector<std::vector<NodeId>>& adj, std::span<const NodeId> seeds) {
    std::vector<bool> seen(adj.size(), false);
    std::vector<NodeId> stack;
    for (NodeId s : seeds) {
        if (!seen.at(s)) {
            seen[s] = true;
            stack.push_back(s);
        }
    }
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId w : adj[u]) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return seen;
}
}  // namespace

std::vector<bool> Dag::ancestors_of(std::span<const NodeId> nodes) const { return closure(in_, nodes); }

std::vector<bool> Dag::descendants_of(std::span<const NodeId> nodes) const { return closure(out_, nodes); }

bool Dag::is_acyclic() const {
    std::vector<std::size_t> indeg(size());
    for (NodeId v = 0; v < size(); ++v) indeg[v] = in_[v].size();
    std::vector<NodeId> ready;
    for (NodeId v = 0; v < size(); ++v)
        if (indeg[v] == 0) ready.push_back(v);
    std::size_t seen = 0;
    while (!ready.empty()) {
        NodeId v = ready.back();
        ready.pop_back();
        ++seen;
        for (NodeId w : out_[v])
            if (--indeg[w] == 0) ready.push_back(w);
    }
    return seen == size();
}

// ---------------------------------------------------------------------------

namespace {
enum ArcKind : std::uint8_t { kNone, kFromSource, kThrough, kThroughBack, kEdge, kEdgeBack, kToSink };
}  // namespace

VertexFlowNetwork::VertexFlowNetwork(const Dag& dag) : n_(dag.size()) {
    out_begin_.assign(n_ + 1, 0);
    for (NodeId v = 0; v < n_; ++v) out_begin_[v + 1] = out_begin_[v] + static_cast<std::uint32_t>(dag.out(v).size());
    out_target_.reserve(out_begin_[n_]);
    for (NodeId v = 0; v < n_; ++v)
        for (NodeId w : dag.out(v)) out_target_.push_back(w);

    in_begin_.assign(n_ + 1, 0);
    for (NodeId v = 0; v < n_; ++v) in_begin_[v + 1] = in_begin_[v] + static_cast<std::uint32_t>(dag.in(v).size());
    in_source_.resize(in_begin_[n_]);
    in_edge_.resize(in_begin_[n_]);
    std::vector<std::uint32_t> fill(in_begin_.begin(), in_begin_.end() - 1);
    for (NodeId v = 0; v < n_; ++v) {
        for (std::uint32_t e = out_begin_[v]; e < out_begin_[v + 1]; ++e) {
            NodeId w = out_target_[e];
            in_source_[fill[w]] = v;
            in_edge_[fill[w]] = e;
            ++fill[w];
        }
    }
    // Sources of in-edges were appended in increasing v, so each in-list is sorted.

    edge_flow_.assign(out_target_.size(), 0);
    through_.assign(n_, 0);
    is_source_.assign(n_, 0);
    is_sink_.assign(n_, 0);
    source_flow_.assign(n_, 0);
    sink_flow_.assign(n_, 0);
    pred_.assign(2 * n_ + 2, 0);
    pred_edge_.assign(2 * n_ + 2, 0);
    pred_kind_.assign(2 * n_ + 2, kNone);
    queue_.reserve(2 * n_ + 2);
}

void VertexFlowNetwork::reset(std::span<const NodeId> sources, std::span<const NodeId> sinks) {
    std::fill(edge_flow_.begin(), edge_flow_.end(), 0);
    std::fill(through_.begin(), through_.end(), 0);
    std::fill(is_source_.begin(), is_source_.end(), 0);
    std::fill(is_sink_.begin(), is_sink_.end(), 0);
    std::fill(source_flow_.begin(), source_flow_.end(), 0);
    std::fill(sink_flow_.begin(), sink_flow_.end(), 0);
    for (NodeId s : sources) {
        if (s >= n_) throw std::out_of_range("max flow: source " + std::to_string(s) + " not in graph");
        is_source_[s] = 1;
    }
    for (NodeId t : sinks) {
        if (t >= n_) throw std::out_of_range("max flow: sink " + std::to_string(t) + " not in graph");
        is_sink_[t] = 1;
    }
    sources_.clear();
    for (NodeId v = 0; v < n_; ++v)
        if (is_source_[v]) sources_.push_back(v);
    value_ = 0;
    log_.clear();
    logging_ = false;
}

void VertexFlowNetwork::set(std::vector<std::uint8_t>& field, std::size_t index, std::uint8_t v) {
    if (logging_ && field[index] != v) log_.push_back({&field, static_cast<std::uint32_t>(index), field[index]});
    field[index] = v;
}

bool VertexFlowNetwork::augment(std::span<const NodeId> starts) {
    const std::uint32_t super_source = static_cast<std::uint32_t>(2 * n_);
    const std::uint32_t super_sink = super_source + 1;
    std::fill(pred_kind_.begin(), pred_kind_.end(), kNone);
    queue_.clear();
    pred_kind_[super_source] = kFromSource;
    for (NodeId s : starts) {
        std::uint32_t node = 2 * s;
        pred_[node] = super_source;
        pred_kind_[node] = kFromSource;
        queue_.push_back(node);
    }
    bool found = false;
    for (std::size_t head = 0; head < queue_.size() && !found; ++head) {
        const std::uint32_t a = queue_[head];
        const NodeId v = a / 2;
        auto visit = [&](std::uint32_t b, std::uint32_t edge, ArcKind kind) {
            if (pred_kind_[b] != kNone) return;
            pred_[b] = a;
            pred_edge_[b] = edge;
            pred_kind_[b] = kind;
            if (b == super_sink) {
                found = true;
                return;
            }
            queue_.push_back(b);
        };
        if ((a & 1u) == 0) {
            // in(v): forward through the vertex, or back along an incoming edge carrying flow.
            if (!through_[v]) visit(a + 1, 0, kThrough);
            for (std::uint32_t k = in_begin_[v]; k < in_begin_[v + 1] && !found; ++k) {
                std::uint32_t e = in_edge_[k];
                if (edge_flow_[e]) visit(2 * in_source_[k] + 1, e, kEdgeBack);
            }
        } else {
            // out(v): to the super sink, along out-edges, or back through the vertex.
            if (is_sink_[v]) visit(super_sink, 0, kToSink);
            for (std::uint32_t e = out_begin_[v]; e < out_begin_[v + 1] && !found; ++e)
                visit(2 * out_target_[e], e, kEdge);
            if (!found && through_[v]) visit(a - 1, 0, kThroughBack);
        }
    }
    if (!found) return false;

    std::uint32_t b = super_sink;
    while (b != super_source) {
        const std::uint32_t a = pred_[b];
        switch (pred_kind_[b]) {
            case kFromSource: set(source_flow_, b / 2, 1); break;
            case kThrough: set(through_, b / 2, 1); break;
            case kThroughBack: set(through_, b / 2, 0); break;
            case kEdge: set(edge_flow_, pred_edge_[b], 1); break;
            case kEdgeBack: set(edge_flow_, pred_edge_[b], 0); break;
            case kToSink: set(sink_flow_, a / 2, 1); break;
            case kNone: throw std::logic_error("max flow: broken augmenting path");
        }
        b = a;
    }
    return true;
}

int VertexFlowNetwork::run(int limit) {
    while (value_ < limit && augment(sources_)) ++value_;
    return value_;
}

void VertexFlowNetwork::begin(std::span<const NodeId> sinks) {
    reset({}, sinks);
    logging_ = true;
}

bool VertexFlowNetwork::add_source(NodeId s) {
    if (s >= n_) throw std::out_of_range("max flow: source " + std::to_string(s) + " not in graph");
    if (is_source_[s]) return false;
    set(is_source_, s, 1);
    // The flow was maximal before, so any new augmenting path starts at s.
    const NodeId start[1] = {s};
    if (!augment(start)) return false;
    ++value_;
    log_.push_back({nullptr, 0, 0});  // marks one unit of value
    return true;
}

void VertexFlowNetwork::rollback(std::size_t mark) {
    while (log_.size() > mark) {
        const Change c = log_.back();
        log_.pop_back();
        if (c.field) (*c.field)[c.index] = c.old;
        else --value_;
    }
}

int VertexFlowNetwork::max_flow_value(std::span<const NodeId> sources, std::span<const NodeId> sinks, int limit) {
    reset(sources, sinks);
    return run(limit);
}

FlowResult VertexFlowNetwork::decompose() const {
    FlowResult r;
    for (NodeId s : sources_) {
        if (!source_flow_[s]) continue;
        std::vector<NodeId> path{s};
        NodeId v = s;
        while (!sink_flow_[v]) {
            bool moved = false;
            for (std::uint32_t e = out_begin_[v]; e < out_begin_[v + 1]; ++e) {
                if (edge_flow_[e]) {
                    v = out_target_[e];
                    moved = true;
                    break;
                }
            }
            if (!moved) throw std::logic_error("max flow: flow does not reach a sink");
            path.push_back(v);
        }
        auto first_sink = std::find_if(path.begin(), path.end(), [&](NodeId u) { return is_sink_[u] != 0; });
        path.erase(first_sink + 1, path.end());
        auto last_source = std::find_if(path.rbegin(), path.rend(), [&](NodeId u) { return is_source_[u] != 0; });
        path.erase(path.begin(), last_source.base() - 1);
        r.saturated_sources.push_back(path.front());
        r.saturated_sinks.push_back(path.back());
        r.paths.push_back(std::move(path));
    }
    r.value = static_cast<int>(r.paths.size());
    std::sort(r.paths.begin(), r.paths.end());
    std::sort(r.saturated_sources.begin(), r.saturated_sources.end());
    std::sort(r.saturated_sinks.begin(), r.saturated_sinks.end());
    return r;
}

FlowResult VertexFlowNetwork::max_flow(std::span<const NodeId> sources, std::span<const NodeId> sinks) {
    reset(sources, sinks);
    run(std::numeric_limits<int>::max());
    return decompose();
}

VertexCut VertexFlowNetwork::closest_min_cut(std::span<const NodeId> sources, std::span<const NodeId> sinks) {
    reset(sources, sinks);
    run(std::numeric_limits<int>::max());

    // Split nodes that can still reach the super sink in the residual network.
    std::vector<std::uint8_t> reach(2 * n_, 0);
    std::vector<std::uint32_t> stack;
    for (NodeId t = 0; t < n_; ++t) {
        if (is_sink_[t]) {
            reach[2 * t + 1] = 1;
            stack.push_back(2 * t + 1);
        }
    }
    auto mark = [&](std::uint32_t a) {
        if (!reach[a]) {
            reach[a] = 1;
            stack.push_back(a);
        }
    };
    while (!stack.empty()) {
        const std::uint32_t b = stack.back();
        stack.pop_back();
        const NodeId v = b / 2;
        if (b & 1u) {
            // Residual arcs entering out(v).
            if (!through_[v]) mark(b - 1);
            for (std::uint32_t e = out_begin_[v]; e < out_begin_[v + 1]; ++e)
                if (edge_flow_[e]) mark(2 * out_target_[e]);
        } else {
            // Residual arcs entering in(v).
            for (std::uint32_t k = in_begin_[v]; k < in_begin_[v + 1]; ++k) mark(2 * in_source_[k] + 1);
            if (through_[v]) mark(b + 1);
        }
    }
    VertexCut c;
    for (NodeId v = 0; v < n_; ++v)
        if (reach[2 * v + 1] && !reach[2 * v]) c.cut.push_back(v);
    return c;
}

FlowResult max_vertex_flow(const Dag& g, std::span<const NodeId> sources, std::span<const NodeId> sinks) {
    VertexFlowNetwork net(g);
    return net.max_flow(sources, sinks);
}

VertexCut closest_min_vertex_cut(const Dag& g, std::span<const NodeId> sources, std::span<const NodeId> sinks) {
    VertexFlowNetwork net(g);
    return net.closest_min_cut(sources, sinks);
}

}  // namespace ivcut
