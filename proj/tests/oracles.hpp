#pragma once

// Exhaustive reference implementations. Exponential by design; only for tiny inputs.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "ivcut/maxflow.hpp"

namespace oracle {

using ivcut::Dag;
using ivcut::NodeId;

inline std::vector<NodeId> members(std::uint64_t mask, const std::vector<NodeId>& pool) {
    std::vector<NodeId> out;
    for (std::size_t i = 0; i < pool.size(); ++i)
        if (mask >> i & 1u) out.push_back(pool[i]);
    return out;
}

/// Largest number of pairwise vertex-disjoint paths from `sources` to `sinks`, found by
/// trying every way to route each source (or leave it unused).
inline int max_disjoint_paths(const Dag& g, const std::vector<NodeId>& sources, const std::vector<NodeId>& sinks) {
    std::vector<char> is_sink(g.size(), 0), used(g.size(), 0);
    for (NodeId t : sinks) is_sink[t] = 1;
    int best = 0;
    std::function<void(std::size_t, int)> route;
    std::function<void(std::size_t, NodeId, int)> walk = [&](std::size_t i, NodeId u, int count) {
        if (is_sink[u]) route(i + 1, count + 1);
        for (NodeId v : g.out(u)) {
            if (used[v]) continue;
            used[v] = 1;
            walk(i, v, count);
            used[v] = 0;
        }
    };
    route = [&](std::size_t i, int count) {
        if (count + static_cast<int>(sources.size() - std::min(i, sources.size())) <= best) return;
        if (i == sources.size()) {
            best = std::max(best, count);
            return;
        }
        route(i + 1, count);
        NodeId s = sources[i];
        if (used[s]) return;
        used[s] = 1;
        walk(i, s, count);
        used[s] = 0;
    };
    route(0, 0);
    return best;
}

/// True if every source -> sink path meets `cut` (endpoints included).
inline bool separates(const Dag& g, const std::vector<NodeId>& sources, const std::vector<NodeId>& sinks,
                      const std::vector<NodeId>& cut) {
    std::vector<char> blocked(g.size(), 0), seen(g.size(), 0), is_sink(g.size(), 0);
    for (NodeId c : cut) blocked[c] = 1;
    for (NodeId t : sinks) is_sink[t] = 1;
    std::vector<NodeId> stack;
    for (NodeId s : sources)
        if (!blocked[s] && !seen[s]) {
            seen[s] = 1;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        if (is_sink[u]) return false;
        for (NodeId v : g.out(u))
            if (!blocked[v] && !seen[v]) {
                seen[v] = 1;
                stack.push_back(v);
            }
    }
    return true;
}

/// Every minimum separating vertex set, by enumeration of all subsets of g's nodes.
inline std::vector<std::vector<NodeId>> minimum_cuts(const Dag& g, const std::vector<NodeId>& sources,
                                                     const std::vector<NodeId>& sinks) {
    std::vector<NodeId> all(g.size());
    for (NodeId v = 0; v < g.size(); ++v) all[v] = v;
    for (std::size_t size = 0; size <= g.size(); ++size) {
        std::vector<std::vector<NodeId>> found;
        std::vector<NodeId> pick;
        std::function<void(std::size_t)> choose = [&](std::size_t from) {
            if (pick.size() == size) {
                if (separates(g, sources, sinks, pick)) found.push_back(pick);
                return;
            }
            for (std::size_t i = from; i < all.size(); ++i) {
                pick.push_back(all[i]);
                choose(i + 1);
                pick.pop_back();
            }
        };
        choose(0);
        if (!found.empty()) return found;
    }
    return {};
}

struct BlockUnion {
    std::vector<NodeId> sources;
    std::vector<NodeId> sinks;
};

/// Union of every pair (Sm, Tm) meeting the match-block definition, by enumeration.
inline BlockUnion match_block_union(const Dag& g, const std::vector<NodeId>& S, const std::vector<NodeId>& T) {
    std::vector<char> in_s(g.size(), 0), in_t(g.size(), 0);
    for (std::uint64_t sm = 1; sm < (std::uint64_t{1} << S.size()); ++sm) {
        std::vector<NodeId> Sm = members(sm, S);
        std::vector<bool> reach = g.descendants_of(Sm);
        std::uint64_t required = 0;
        for (std::size_t j = 0; j < T.size(); ++j)
            if (reach[T[j]]) required |= std::uint64_t{1} << j;
        // Tm must contain every reachable sink; it cannot contain an unreachable one
        // and still carry a full flow, so Tm is exactly the reachable set.
        std::vector<NodeId> Tm = members(required, T);
        if (Tm.size() != Sm.size()) continue;
        if (max_disjoint_paths(g, Sm, Tm) != static_cast<int>(Tm.size())) continue;
        for (NodeId s : Sm) in_s[s] = 1;
        for (NodeId t : Tm) in_t[t] = 1;
    }
    BlockUnion u;
    for (NodeId v = 0; v < g.size(); ++v) {
        if (in_s[v]) u.sources.push_back(v);
        if (in_t[v]) u.sinks.push_back(v);
    }
    return u;
}

/// Random DAG on n nodes: i -> j (i < j) with probability p, then nodes relabeled by a
/// random permutation so index order is not a topological order.
inline Dag random_dag(std::size_t n, double p, std::mt19937_64& rng) {
    std::vector<NodeId> perm(n);
    for (NodeId v = 0; v < n; ++v) perm[v] = v;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::bernoulli_distribution coin(p);
    Dag d(n);
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j = i + 1; j < n; ++j)
            if (coin(rng)) d.add_edge(perm[i], perm[j]);
    return d;
}

inline std::vector<NodeId> random_subset(std::size_t n, std::size_t max_size, std::mt19937_64& rng) {
    std::vector<NodeId> all(n);
    for (NodeId v = 0; v < n; ++v) all[v] = v;
    std::shuffle(all.begin(), all.end(), rng);
    std::size_t k = std::uniform_int_distribution<std::size_t>(1, std::min(max_size, n))(rng);
    all.resize(k);
    std::sort(all.begin(), all.end());
    return all;
}

}  // namespace oracle
