#include "ivcut/matchblock.hpp"

#include <algorithm>

namespace ivcut {

namespace {
std::vector<NodeId> sorted_unique(std::span<const NodeId> xs) {
    std::vector<NodeId> v(xs.begin(), xs.end());
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}
}  // namespace

MatchBlock max_match_block(const Dag& g, std::span<const NodeId> S_in, std::span<const NodeId> T_in) {
    VertexFlowNetwork net(g);
    std::vector<NodeId> S = sorted_unique(S_in);
    std::vector<NodeId> T = sorted_unique(T_in);
    MatchBlock mb;
    for (;;) {
        ++mb.iterations;
        FlowResult flow = net.max_flow(S, T);
        std::vector<NodeId> dropped;
        std::set_difference(T.begin(), T.end(), flow.saturated_sinks.begin(), flow.saturated_sinks.end(),
                            std::back_inserter(dropped));
        if (dropped.empty()) {
            mb.sources = flow.saturated_sources;
            mb.sinks = T;
            mb.witness_flow = std::move(flow);
            break;
        }
        T = std::move(flow.saturated_sinks);
        std::vector<bool> anc = g.ancestors_of(dropped);
        std::erase_if(S, [&](NodeId s) { return anc[s]; });
    }
    if (!mb.sinks.empty()) {
        std::vector<bool> anc = g.ancestors_of(mb.sinks);
        for (NodeId s : S)
            if (anc[s]) mb.candidate_sources.push_back(s);
    }
    return mb;
}

bool is_match_block(const Dag& g, std::span<const NodeId> T, std::span<const NodeId> Sm,
                    std::span<const NodeId> Tm) {
    if (Sm.size() != Tm.size()) return false;
    FlowResult f = max_vertex_flow(g, Sm, Tm);
    if (f.value != static_cast<int>(Tm.size())) return false;
    std::vector<bool> reach = g.descendants_of(Sm);
    for (NodeId t : T) {
        if (reach[t] && std::find(Tm.begin(), Tm.end(), t) == Tm.end()) return false;
    }
    return true;
}

}  // namespace ivcut
