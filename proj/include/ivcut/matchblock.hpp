#pragma once

#include <span>
#include <vector>

#include "ivcut/maxflow.hpp"

namespace ivcut {

struct MatchBlock {
    std::vector<NodeId> sources;  // S_m, sorted
    std::vector<NodeId> sinks;    // T_m, sorted
    FlowResult witness_flow;
    /// Every surviving source that still reaches a surviving sink. Equals the union of
    /// the source sides of all match-blocks; `sources` is one saturated choice of it.
    std::vector<NodeId> candidate_sources;
    int iterations = 0;

    bool empty() const { return sinks.empty(); }
};

/// Largest match-block between S and T in g (every other match-block's sinks are
/// contained in the result's sinks).
MatchBlock max_match_block(const Dag& g, std::span<const NodeId> S, std::span<const NodeId> T);

/// Checks the two defining conditions directly: full vertex-disjoint flow from Sm to Tm,
/// and every T-vertex reachable from Sm lies in Tm.
bool is_match_block(const Dag& g, std::span<const NodeId> T, std::span<const NodeId> Sm,
                    std::span<const NodeId> Tm);

}  // namespace ivcut
