#include <doctest.h>

#include <algorithm>
#include <random>

#include "fixtures.hpp"
#include "ivcut/graph.hpp"

using namespace ivcut;

namespace {
std::vector<std::string> names_of(const MixedGraph& g, const std::vector<Vertex>& vs) {
    std::vector<std::string> out;
    for (Vertex v : vs) out.push_back(g.name(v));
    return out;
}
}  // namespace

TEST_SUITE("graph") {

TEST_CASE("parse three-vertex instrument graph") {
    MixedGraph g = parse_graph("a -> b\nb -> c\nb <-> c");
    REQUIRE(g.size() == 3);
    CHECK(g.names() == std::vector<std::string>{"a", "b", "c"});
    CHECK(g.directed_edges() == std::vector<DirectedEdge>{{0, 1}, {1, 2}});
    REQUIRE(g.bidirected_edges().size() == 1);
    CHECK(g.has_bidirected(2, 1));
    CHECK(names_of(g, relatives(g, g.vertex("c"), Relation::parents)) == std::vector<std::string>{"b"});
}

TEST_CASE("empty input gives empty graph") {
    MixedGraph g = parse_graph("");
    CHECK(g.empty());
    CHECK(serialize_graph(g).empty());
    CHECK(parse_graph("# only a comment\n\n").empty());
}

TEST_CASE("parse errors carry line numbers") {
    auto line_of = [](std::string_view text) -> std::size_t {
        try {
            parse_graph(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("a -> b\nb -> a") == 2);
    CHECK(line_of("a -> b\n\na -> b") == 3);
    CHECK(line_of("a <-> b\nb <-> a") == 2);
    CHECK(line_of("x -> x") == 1);
    CHECK(line_of("a => b") == 1);
    CHECK(line_of("a -> b\nc d") == 2);
    CHECK(line_of("a -> b -> c") == 1);
    CHECK_THROWS_WITH_AS(parse_graph("a -> b\nb -> a"), doctest::Contains("line 2"), ParseError);
}

TEST_CASE("arrows without spaces, comments and node declarations") {
    MixedGraph g = parse_graph("node c b a\na->b # trailing\nb<->c\n");
    CHECK(g.names() == std::vector<std::string>{"c", "b", "a"});
    CHECK(g.has_directed(2, 1));
    CHECK(g.has_bidirected(1, 0));
}

TEST_CASE("directed and bidirected edge may share a pair") {
    MixedGraph g = parse_graph("x -> y\nx <-> y");
    CHECK(g.has_directed(0, 1));
    CHECK(g.has_bidirected(0, 1));
}

TEST_CASE("siblings in the cutset chain example") {
    MixedGraph g = load_fixture("fig2c.scm");
    CHECK(names_of(g, relatives(g, g.vertex("y"), Relation::siblings)) == std::vector<std::string>{"a", "x"});
    CHECK(names_of(g, relatives(g, g.vertex("x"), Relation::ancestors)) ==
          std::vector<std::string>{"a", "b", "x"});
    CHECK(names_of(g, relatives(g, g.vertex("x"), Relation::descendants)) ==
          std::vector<std::string>{"x", "y", "c"});
    CHECK_THROWS_AS(relatives(g, 99, Relation::parents), GraphError);
}

TEST_CASE("constructor validation") {
    CHECK_THROWS_AS(MixedGraph({"a", "a"}, {}, {}), GraphError);
    CHECK_THROWS_AS(MixedGraph({"a", "b"}, {{0, 1}, {1, 0}}, {}), GraphError);
    CHECK_THROWS_AS(MixedGraph({"a", "b"}, {{0, 0}}, {}), GraphError);
    CHECK_THROWS_AS(MixedGraph({"a", "b"}, {{0, 2}}, {}), GraphError);
    CHECK_THROWS_AS(MixedGraph({"a", "b"}, {}, {BidirectedEdge{1, 1}}), GraphError);
    CHECK_THROWS_AS(MixedGraph({"a", "b"}, {{0, 1}, {0, 1}}, {}), GraphError);
}

TEST_CASE("known edge parsing") {
    MixedGraph g = load_fixture("fig2c.scm");
    KnownEdges k = parse_known_edges(g, "b->x, y -> c");
    CHECK(k.size() == 2);
    CHECK(k.contains(g.vertex("b"), g.vertex("x")));
    CHECK(k.known_parents(g, g.vertex("c")) == std::vector<Vertex>{g.vertex("y")});
    CHECK(parse_known_edges(g, "").empty());
    CHECK_THROWS_AS(parse_known_edges(g, "a->c"), GraphError);
    CHECK_THROWS_AS(parse_known_edges(g, "a-c"), GraphError);
    CHECK_THROWS_AS(parse_known_edges(g, "q->a"), GraphError);
}

TEST_CASE("random graphs: round trip and relation consistency") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        MixedGraph g = random_mixed_graph(2 + seed % 9, 0.3, 0.2, seed);
        CHECK(parse_graph(serialize_graph(g)) == g);
        CHECK(serialize_graph(parse_graph(serialize_graph(g))) == serialize_graph(g));
        for (Vertex u = 0; u < g.size(); ++u) {
            auto anc = relatives(g, u, Relation::ancestors);
            CHECK(std::binary_search(anc.begin(), anc.end(), u));
            for (Vertex v = 0; v < g.size(); ++v) {
                auto de = relatives(g, v, Relation::descendants);
                auto an_u = relatives(g, u, Relation::ancestors);
                CHECK(std::binary_search(an_u.begin(), an_u.end(), v) ==
                      std::binary_search(de.begin(), de.end(), u));
                auto sib = relatives(g, u, Relation::siblings);
                auto sib_v = relatives(g, v, Relation::siblings);
                CHECK(std::binary_search(sib.begin(), sib.end(), v) ==
                      std::binary_search(sib_v.begin(), sib_v.end(), u));
            }
        }
        const auto& topo = g.topological_order();
        std::vector<std::size_t> pos(g.size());
        for (std::size_t i = 0; i < topo.size(); ++i) pos[topo[i]] = i;
        for (auto e : g.directed_edges()) CHECK(pos[e.from] < pos[e.to]);
    }
}

TEST_CASE("exact random graph has requested edge counts") {
    MixedGraph g = random_mixed_graph_exact(200, 600, 60, 7);
    CHECK(g.size() == 200);
    CHECK(g.directed_edges().size() == 600);
    CHECK(g.bidirected_edges().size() == 60);
    CHECK(random_mixed_graph_exact(200, 600, 60, 7) == g);
}

}  // TEST_SUITE
