#include "ivcut/graph.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

namespace ivcut {

namespace {

bool valid_name(std::string_view s) {
    if (s.empty()) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
    });
}

// Kahn's algorithm; smallest available index first. Empty result on a cycle.
std::vector<Vertex> topo_sort(std::size_t n, const std::vector<std::vector<Vertex>>& children) {
    std::vector<std::size_t> indeg(n, 0);
    for (const auto& cs : children)
        for (Vertex c : cs) ++indeg[c];
    std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> ready;
    for (Vertex v = 0; v < n; ++v)
        if (indeg[v] == 0) ready.push(v);
    std::vector<Vertex> order;
    order.reserve(n);
    while (!ready.empty()) {
        Vertex v = ready.top();
        ready.pop();
        order.push_back(v);
        for (Vertex c : children[v])
            if (--indeg[c] == 0) ready.push(c);
    }
    if (order.size() != n) order.clear();
    return order;
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

}  // namespace

MixedGraph::MixedGraph(std::vector<std::string> names,
                       std::vector<DirectedEdge> directed,
                       std::vector<BidirectedEdge> bidirected)
    : names_(std::move(names)), directed_(std::move(directed)), bidirected_(std::move(bidirected)) {
    const std::size_t n = names_.size();
    for (Vertex v = 0; v < n; ++v) {
        if (!index_.emplace(names_[v], v).second)
            throw GraphError("duplicate vertex name '" + names_[v] + "'");
    }
    std::sort(directed_.begin(), directed_.end());
    std::sort(bidirected_.begin(), bidirected_.end());
    if (std::adjacent_find(directed_.begin(), directed_.end()) != directed_.end())
        throw GraphError("duplicate directed edge");
    if (std::adjacent_find(bidirected_.begin(), bidirected_.end()) != bidirected_.end())
        throw GraphError("duplicate bidirected edge");

    parents_.assign(n, {});
    children_.assign(n, {});
    siblings_.assign(n, {});
    for (const auto& e : directed_) {
        if (e.from >= n || e.to >= n) throw GraphError("directed edge endpoint out of range");
        if (e.from == e.to) throw GraphError("self-loop on '" + names_[e.from] + "'");
        parents_[e.to].push_back(e.from);
        children_[e.from].push_back(e.to);
    }
    for (const auto& e : bidirected_) {
        if (e.b >= n) throw GraphError("bidirected edge endpoint out of range");
        if (e.a == e.b) throw GraphError("bidirected self-loop on '" + names_[e.a] + "'");
        siblings_[e.a].push_back(e.b);
        siblings_[e.b].push_back(e.a);
    }
    for (auto* lists : {&parents_, &children_, &siblings_})
        for (auto& l : *lists) std::sort(l.begin(), l.end());

    topo_ = topo_sort(n, children_);
    if (topo_.size() != n) throw GraphError("directed edges contain a cycle");
}

std::optional<Vertex> MixedGraph::find(std::string_view name) const {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

Vertex MixedGraph::vertex(std::string_view name) const {
    if (auto v = find(name)) return *v;
    throw GraphError("unknown vertex '" + std::string(name) + "'");
}

bool MixedGraph::has_directed(Vertex from, Vertex to) const {
    return std::binary_search(directed_.begin(), directed_.end(), DirectedEdge{from, to});
}

bool MixedGraph::has_bidirected(Vertex u, Vertex v) const {
    return std::binary_search(bidirected_.begin(), bidirected_.end(), BidirectedEdge{u, v});
}

std::vector<Vertex> relatives(const MixedGraph& g, Vertex v, Relation kind) {
    if (v >= g.size()) throw GraphError("unknown vertex index " + std::to_string(v));
    switch (kind) {
        case Relation::parents: {
            auto p = g.parents(v);
            return {p.begin(), p.end()};
        }
        case Relation::siblings: {
            auto s = g.siblings(v);
            return {s.begin(), s.end()};
        }
        case Relation::ancestors:
        case Relation::descendants: break;
    }
    const bool up = kind == Relation::ancestors;
    std::vector<bool> seen(g.size(), false);
    std::vector<Vertex> stack{v};
    seen[v] = true;
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex w : up ? g.parents(u) : g.children(u)) {
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    std::vector<Vertex> out;
    for (Vertex u = 0; u < g.size(); ++u)
        if (seen[u]) out.push_back(u);
    return out;
}

std::vector<bool> descendants_of(const MixedGraph& g, std::span<const Vertex> roots) {
    std::vector<bool> seen(g.size(), false);
    std::vector<Vertex> stack;
    for (Vertex r : roots) {
        if (!seen[r]) {
            seen[r] = true;
            stack.push_back(r);
        }
    }
    while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        for (Vertex c : g.children(u)) {
            if (!seen[c]) {
                seen[c] = true;
                stack.push_back(c);
            }
        }
    }
    return seen;
}

MixedGraph parse_graph(std::string_view text) {
    std::vector<std::string> names;
    std::unordered_map<std::string, Vertex> index;
    std::vector<DirectedEdge> directed;
    std::vector<BidirectedEdge> bidirected;
    std::set<DirectedEdge> seen_directed;
    std::set<BidirectedEdge> seen_bidirected;
    std::vector<std::vector<Vertex>> children;

    auto intern = [&](std::string_view tok, std::size_t line) -> Vertex {
        if (!valid_name(tok)) throw ParseError(line, "unknown token '" + std::string(tok) + "'");
        auto [it, inserted] = index.emplace(std::string(tok), static_cast<Vertex>(names.size()));
        if (inserted) {
            names.emplace_back(tok);
            children.emplace_back();
        }
        return it->second;
    };

    auto reaches = [&](Vertex from, Vertex to) {
        std::vector<bool> seen(names.size(), false);
        std::vector<Vertex> stack{from};
        seen[from] = true;
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            if (u == to) return true;
            for (Vertex c : children[u])
                if (!seen[c]) {
                    seen[c] = true;
                    stack.push_back(c);
                }
        }
        return false;
    };

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        std::string_view line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        // Arrows need not be surrounded by spaces.
        std::string spaced;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line.compare(i, 3, "<->") == 0) {
                spaced += " <-> ";
                i += 2;
            } else if (line.compare(i, 2, "->") == 0) {
                spaced += " -> ";
                i += 1;
            } else {
                spaced += line[i];
            }
        }
        auto toks = split_ws(spaced);
        if (toks.empty()) continue;
        if (toks[0] == "node") {
            for (std::size_t i = 1; i < toks.size(); ++i) intern(toks[i], line_no);
        } else if (toks.size() == 3 && (toks[1] == "->" || toks[1] == "<->")) {
            Vertex a = intern(toks[0], line_no);
            Vertex b = intern(toks[2], line_no);
            if (a == b) throw ParseError(line_no, "self-loop on '" + names[a] + "'");
            if (toks[1] == "->") {
                if (!seen_directed.insert({a, b}).second)
                    throw ParseError(line_no, "duplicate edge " + names[a] + " -> " + names[b]);
                if (reaches(b, a))
                    throw ParseError(line_no, "cycle through " + names[a] + " -> " + names[b]);
                children[a].push_back(b);
                directed.push_back({a, b});
            } else {
                if (!seen_bidirected.insert({a, b}).second)
                    throw ParseError(line_no, "duplicate edge " + names[a] + " <-> " + names[b]);
                bidirected.emplace_back(a, b);
            }
        } else {
            std::string_view bad = toks.size() >= 2 ? toks[1] : toks[0];
            throw ParseError(line_no, "unknown token '" + std::string(bad) + "'");
        }
    }
    return MixedGraph(std::move(names), std::move(directed), std::move(bidirected));
}

std::string serialize_graph(const MixedGraph& g) {
    if (g.empty()) return {};
    std::ostringstream os;
    os << "node";
    for (const auto& n : g.names()) os << ' ' << n;
    os << '\n';
    for (const auto& e : g.directed_edges()) os << g.name(e.from) << " -> " << g.name(e.to) << '\n';
    for (const auto& e : g.bidirected_edges()) os << g.name(e.a) << " <-> " << g.name(e.b) << '\n';
    return os.str();
}

KnownEdges::KnownEdges(const MixedGraph& g, std::span<const DirectedEdge> edges) {
    for (const auto& e : edges) {
        if (!g.has_directed(e.from, e.to))
            throw GraphError("known edge " + std::to_string(e.from) + "->" + std::to_string(e.to) +
                             " is not a directed edge of the graph");
        edges_.insert(e);
    }
}

std::vector<Vertex> KnownEdges::known_parents(const MixedGraph& g, Vertex v) const {
    std::vector<Vertex> out;
    for (Vertex p : g.parents(v))
        if (contains(p, v)) out.push_back(p);
    return out;
}

KnownEdges parse_known_edges(const MixedGraph& g, std::string_view spec) {
    std::vector<DirectedEdge> edges;
    std::size_t pos = 0;
    while (pos < spec.size()) {
        std::size_t comma = spec.find(',', pos);
        if (comma == std::string_view::npos) comma = spec.size();
        std::string_view item = spec.substr(pos, comma - pos);
        pos = comma + 1;
        auto arrow = item.find("->");
        if (arrow == std::string_view::npos) throw GraphError("malformed known edge '" + std::string(item) + "'");
        auto trim = [](std::string_view s) {
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
            while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
            return s;
        };
        Vertex a = g.vertex(trim(item.substr(0, arrow)));
        Vertex b = g.vertex(trim(item.substr(arrow + 2)));
        if (!g.has_directed(a, b))
            throw GraphError("known edge '" + std::string(item) + "' is not in the graph");
        edges.push_back({a, b});
    }
    return KnownEdges(g, edges);
}

std::string format_edge(const MixedGraph& g, DirectedEdge e) {
    return g.name(e.from) + "->" + g.name(e.to);
}

namespace {
std::vector<std::string> default_names(std::size_t n) {
    std::vector<std::string> names(n);
    for (std::size_t i = 0; i < n; ++i) names[i] = "v" + std::to_string(i);
    return names;
}
}  // namespace

MixedGraph random_mixed_graph(std::size_t n, double edge_density, double confounder_density,
                              std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution directed(edge_density);
    std::bernoulli_distribution bidirected(confounder_density);
    std::vector<DirectedEdge> d;
    std::vector<BidirectedEdge> b;
    for (Vertex i = 0; i < n; ++i) {
        for (Vertex j = i + 1; j < n; ++j) {
            if (directed(rng)) d.push_back({i, j});
            if (bidirected(rng)) b.emplace_back(i, j);
        }
    }
    return MixedGraph(default_names(n), std::move(d), std::move(b));
}

MixedGraph random_mixed_graph_exact(std::size_t n, std::size_t n_directed,
                                    std::size_t n_bidirected, std::uint64_t seed) {
    const std::size_t pairs = n < 2 ? 0 : n * (n - 1) / 2;
    if (n_directed > pairs || n_bidirected > pairs)
        throw GraphError("requested more edges than vertex pairs");
    std::mt19937_64 rng(seed);
    std::vector<BidirectedEdge> all;
    all.reserve(pairs);
    for (Vertex i = 0; i < n; ++i)
        for (Vertex j = i + 1; j < n; ++j) all.emplace_back(i, j);
    auto pick = [&](std::size_t count) {
        std::vector<BidirectedEdge> sample;
        std::sample(all.begin(), all.end(), std::back_inserter(sample), count, rng);
        return sample;
    };
    std::vector<DirectedEdge> d;
    for (const auto& p : pick(n_directed)) d.push_back({p.a, p.b});
    return MixedGraph(default_names(n), std::move(d), pick(n_bidirected));
}

}  // namespace ivcut
