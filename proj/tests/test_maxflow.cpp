#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "ivcut/flowgraph.hpp"
#include "ivcut/maxflow.hpp"
#include "oracles.hpp"

using namespace ivcut;

namespace {

// Checks the structural invariants of a decomposition.
void check_paths(const Dag& g, const std::vector<NodeId>& S, const std::vector<NodeId>& T, const FlowResult& f) {
    auto in = [](const std::vector<NodeId>& xs, NodeId v) { return std::find(xs.begin(), xs.end(), v) != xs.end(); };
    CHECK(static_cast<int>(f.paths.size()) == f.value);
    std::set<NodeId> seen;
    std::vector<NodeId> starts, ends;
    for (const auto& p : f.paths) {
        REQUIRE(!p.empty());
        CHECK(in(S, p.front()));
        CHECK(in(T, p.back()));
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(seen.insert(p[i]).second);
            if (i + 1 < p.size()) {
                CHECK(g.has_edge(p[i], p[i + 1]));
                CHECK_FALSE(in(T, p[i]));
            }
            if (i > 0) CHECK_FALSE(in(S, p[i]));
        }
        starts.push_back(p.front());
        ends.push_back(p.back());
    }
    std::sort(starts.begin(), starts.end());
    std::sort(ends.begin(), ends.end());
    CHECK(starts == f.saturated_sources);
    CHECK(ends == f.saturated_sinks);
}

// Side reachable from S once the cut is removed.
std::vector<bool> source_side(const Dag& g, const std::vector<NodeId>& S, const std::vector<NodeId>& cut) {
    std::vector<bool> side(g.size(), false), blocked(g.size(), false);
    for (NodeId c : cut) blocked[c] = true;
    std::vector<NodeId> stack;
    for (NodeId s : S)
        if (!blocked[s] && !side[s]) {
            side[s] = true;
            stack.push_back(s);
        }
    while (!stack.empty()) {
        NodeId u = stack.back();
        stack.pop_back();
        for (NodeId v : g.out(u))
            if (!blocked[v] && !side[v]) {
                side[v] = true;
                stack.push_back(v);
            }
    }
    return side;
}

// The minimum cut whose source side contains every other minimum cut's source side.
std::vector<NodeId> brute_closest_cut(const Dag& g, const std::vector<NodeId>& S, const std::vector<NodeId>& T) {
    auto cuts = oracle::minimum_cuts(g, S, T);
    std::vector<std::vector<NodeId>> extreme;
    for (const auto& c : cuts) {
        std::vector<bool> mine = source_side(g, S, c);
        bool ok = true;
        for (const auto& other : cuts) {
            std::vector<bool> theirs = source_side(g, S, other);
            for (NodeId v = 0; v < g.size(); ++v) ok = ok && (!theirs[v] || mine[v]);
        }
        if (ok) extreme.push_back(c);
    }
    REQUIRE(extreme.size() == 1);
    return extreme.front();
}

}  // namespace

TEST_SUITE("maxflow") {

TEST_CASE("diamond has unit flow from a single source") {
    Dag d(4);
    d.add_edge(0, 1);
    d.add_edge(0, 2);
    d.add_edge(1, 3);
    d.add_edge(2, 3);
    std::vector<NodeId> S{0}, T{3};
    FlowResult f = max_vertex_flow(d, S, T);
    CHECK(f.value == 1);
    check_paths(d, S, T, f);
    CHECK(f.paths.front() == std::vector<NodeId>{0, 1, 3});
}

TEST_CASE("two disjoint chains") {
    Dag d(4);
    d.add_edge(0, 1);
    d.add_edge(2, 3);
    std::vector<NodeId> S{0, 2}, T{1, 3};
    FlowResult f = max_vertex_flow(d, S, T);
    CHECK(f.value == 2);
    CHECK(f.paths == std::vector<std::vector<NodeId>>{{0, 1}, {2, 3}});
}

TEST_CASE("source that is also a sink gives a zero-length path") {
    Dag d(1);
    std::vector<NodeId> S{0};
    FlowResult f = max_vertex_flow(d, S, S);
    CHECK(f.value == 1);
    CHECK(f.paths == std::vector<std::vector<NodeId>>{{0}});
    CHECK(closest_min_vertex_cut(d, S, S).cut == std::vector<NodeId>{0});
}

TEST_CASE("closest cut on a chain is the sink") {
    Dag d(3);
    d.add_edge(0, 1);
    d.add_edge(1, 2);
    std::vector<NodeId> S{0}, T{2};
    CHECK(closest_min_vertex_cut(d, S, T).cut == std::vector<NodeId>{2});
}

TEST_CASE("paths trim at the last source and first sink") {
    Dag d(4);
    d.add_edge(0, 1);
    d.add_edge(1, 2);
    d.add_edge(2, 3);
    std::vector<NodeId> S{0, 1}, T{2, 3};
    FlowResult f = max_vertex_flow(d, S, T);
    CHECK(f.value == 1);
    check_paths(d, S, T, f);
}

TEST_CASE("bottleneck example flow graph") {
    MixedGraph g = load_fixture("fig2b.scm");
    WeightedFlowGraph fg = build_flow_graph(g);
    auto top = [&](const char* v) { return fg.node(g.vertex(v), Role::plain); };
    auto bot = [&](const char* v) { return fg.node(g.vertex(v), Role::sink); };
    std::vector<NodeId> S{top("z1"), top("z2")};
    std::vector<NodeId> T{bot("x1"), bot("x2")};
    FlowResult f = max_vertex_flow(fg.dag(), S, T);
    CHECK(f.value == oracle::max_disjoint_paths(fg.dag(), S, T));
    CHECK(f.value == 2);
    check_paths(fg.dag(), S, T, f);
}

TEST_CASE("bottleneck example closest cut in the auxiliary graph") {
    MixedGraph g = load_fixture("fig2b.scm");
    WeightedFlowGraph aux = build_aux_flow_graph(g, {});
    auto node = [&](const char* v, Role r) { return aux.node(g.vertex(v), r); };
    std::vector<NodeId> S{node("z1", Role::plain), node("z2", Role::plain)};
    std::vector<NodeId> T{node("x1", Role::sink), node("x2", Role::sink), node("x3", Role::sink)};
    std::sort(T.begin(), T.end());
    VertexCut c = closest_min_vertex_cut(aux.dag(), S, T);
    CHECK(c.cut.size() == 2);
    CHECK(c.cut == brute_closest_cut(aux.dag(), S, T));
    std::vector<std::string> names;
    for (NodeId v : c.cut) names.push_back(aux.node_name(v));
    // x1's path is cut at x1' itself, the w-bottleneck at the lower copy of w.
    CHECK(names == std::vector<std::string>{"w'", "x1'"});
}

TEST_CASE("random DAGs agree with exhaustive oracles") {
    std::mt19937_64 rng(2024);
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t n = 2 + rng() % 9;
        Dag d = oracle::random_dag(n, 0.35, rng);
        std::vector<NodeId> S = oracle::random_subset(n, 4, rng);
        std::vector<NodeId> T = oracle::random_subset(n, 4, rng);
        FlowResult f = max_vertex_flow(d, S, T);
        CAPTURE(iter);
        REQUIRE(f.value == oracle::max_disjoint_paths(d, S, T));
        check_paths(d, S, T, f);

        // The decomposition alone carries the whole flow.
        Dag only_paths(n);
        for (const auto& p : f.paths)
            for (std::size_t i = 0; i + 1 < p.size(); ++i) only_paths.add_edge(p[i], p[i + 1]);
        CHECK(max_vertex_flow(only_paths, S, T).value == f.value);

        VertexCut c = closest_min_vertex_cut(d, S, T);
        CHECK(static_cast<int>(c.cut.size()) == f.value);
        CHECK(oracle::separates(d, S, T, c.cut));
        CHECK(c.cut == brute_closest_cut(d, S, T));
    }
}

TEST_CASE("reused network matches fresh queries and honours the limit") {
    std::mt19937_64 rng(99);
    Dag d = oracle::random_dag(12, 0.3, rng);
    VertexFlowNetwork net(d);
    for (int iter = 0; iter < 50; ++iter) {
        std::vector<NodeId> S = oracle::random_subset(12, 5, rng);
        std::vector<NodeId> T = oracle::random_subset(12, 5, rng);
        FlowResult fresh = max_vertex_flow(d, S, T);
        CHECK(net.max_flow_value(S, T) == fresh.value);
        CHECK(net.max_flow(S, T).paths == fresh.paths);
        CHECK(net.max_flow_value(S, T, 1) == std::min(fresh.value, 1));
        CHECK(net.closest_min_cut(S, T).cut == closest_min_vertex_cut(d, S, T).cut);
    }
}

TEST_CASE("incremental sources with rollback match fresh flows") {
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 100; ++iter) {
        const std::size_t n = 4 + rng() % 10;
        Dag d = oracle::random_dag(n, 0.3, rng);
        std::vector<NodeId> T = oracle::random_subset(n, 4, rng);
        VertexFlowNetwork net(d);
        net.begin(T);
        std::vector<NodeId> S;
        std::vector<std::size_t> marks;
        for (int step = 0; step < 20; ++step) {
            if (!S.empty() && (rng() % 3 == 0)) {
                net.rollback(marks.back());
                marks.pop_back();
                S.pop_back();
            } else {
                NodeId s = static_cast<NodeId>(rng() % n);
                if (std::find(S.begin(), S.end(), s) != S.end()) continue;
                marks.push_back(net.checkpoint());
                const int before = net.value();
                S.push_back(s);
                const bool grew = net.add_source(s);
                CHECK(grew == (net.value() == before + 1));
            }
            CAPTURE(iter);
            CHECK(net.value() == max_vertex_flow(d, S, T).value);
        }
    }
}

TEST_CASE("dag utilities") {
    Dag d(4);
    d.add_edge(0, 1);
    d.add_edge(0, 1);
    d.add_edge(1, 2);
    d.add_edge(3, 2);
    CHECK(d.edge_count() == 3);
    CHECK(d.is_acyclic());
    std::vector<NodeId> two{2};
    CHECK(d.ancestors_of(two) == std::vector<bool>{true, true, true, true});
    Dag cut = d.without_edges_into(two);
    CHECK(cut.edge_count() == 1);
    CHECK(d.without_edge(0, 1).edge_count() == 2);
    d.add_edge(2, 0);
    CHECK_FALSE(d.is_acyclic());
    std::vector<NodeId> bad{7};
    CHECK_THROWS_AS(max_vertex_flow(cut, bad, two), std::out_of_range);
}

}  // TEST_SUITE
