#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "../support/fixtures.hpp"
#include "rpqshap/errors.hpp"
#include "rpqshap/graph.hpp"

using namespace rpqshap;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::InvalidArgument;
}

std::set<std::string> edge_ids(const LabeledGraph& g) {
    std::set<std::string> out;
    for (const auto& e : g.edges()) out.insert(e.id);
    return out;
}

}  // namespace

TEST_CASE("example graph file loads with six vertices and nine edges") {
    const auto g = load_graph_file(RPQSHAP_DATA_DIR "/example.tsv");
    CHECK(g.vertex_count() == 6);
    CHECK(g.edge_count() == 9);
    CHECK(g == fixtures::example_graph());
    CHECK(g.labels() == std::set<Label>{"a", "b", "c"});
}

TEST_CASE("empty text gives the empty graph") {
    const auto g = load_graph("");
    CHECK(g.vertex_count() == 0);
    CHECK(g.edge_count() == 0);
    CHECK(load_graph("# only a comment\n\n").edge_count() == 0);
}

TEST_CASE("malformed input") {
    CHECK(kind_of([] { load_graph("v1 a v2 n\nv1 b v2 n\n"); }) == ErrorKind::MalformedGraph);
    CHECK(kind_of([] { load_graph("v1 a v2 q\n"); }) == ErrorKind::MalformedGraph);
    CHECK(kind_of([] { load_graph("v v1 maybe\n"); }) == ErrorKind::MalformedGraph);
    CHECK(kind_of([] { load_graph("v1 a\n"); }) == ErrorKind::MalformedGraph);
    CHECK(kind_of([] { load_graph("v1 a v2 n e\nv2 a v3 n e\n"); }) == ErrorKind::MalformedGraph);
    CHECK(kind_of([] { load_graph_file("/nonexistent/graph.tsv"); }) == ErrorKind::MalformedGraph);
}

TEST_CASE("vertex lines classify and declare isolated vertices") {
    const auto g = load_graph("v s x\nv iso n\ns a u n\nu b t x\n");
    CHECK(g.vertex_count() == 4);
    CHECK(g.vertex(*g.find_vertex("s")).origin == Origin::Exogenous);
    CHECK(g.vertex(*g.find_vertex("u")).origin == Origin::Endogenous);
    CHECK(g.vertex(*g.find_vertex("iso")).origin == Origin::Endogenous);
    CHECK(g.find_edge("s->u").has_value());
    CHECK(g.edge(*g.find_edge("u->t")).origin == Origin::Exogenous);
    CHECK(g.endogenous_edges().size() == 1);
}

TEST_CASE("self loops are accepted") {
    const auto g = load_graph("u a u n\n");
    CHECK(g.edge_count() == 1);
    CHECK(g.source_index(0) == g.target_index(0));
}

TEST_CASE("edge_subgraph") {
    const auto g = fixtures::example_graph();
    CHECK(edge_subgraph(g, {}).edge_count() == 0);
    CHECK(edge_subgraph(g, {}).vertex_count() == 6);
    CHECK(edge_subgraph(g, edge_ids(g)) == g);

    const auto x = fixtures::example_graph({"e13"});
    CHECK(edge_ids(edge_subgraph(x, {"e35", "e56"})) == std::set<std::string>{"e13", "e35", "e56"});
    CHECK(kind_of([&] { edge_subgraph(x, {"e13"}); }) == ErrorKind::InvalidPlayerSet);
    CHECK(kind_of([&] { edge_subgraph(x, {"nope"}); }) == ErrorKind::InvalidPlayerSet);
}

TEST_CASE("vertex_subgraph") {
    const auto chain = load_graph("v s x\nv t x\ns a u n\nu b t n\n");
    const auto cut = vertex_subgraph(chain, {});
    CHECK(cut.vertex_count() == 2);
    CHECK(cut.edge_count() == 0);
    CHECK(vertex_subgraph(chain, {"u"}) == chain);

    const auto all_x = load_graph("v s x\nv t x\ns a t x\n");
    CHECK(vertex_subgraph(all_x, {}) == all_x);
    CHECK(kind_of([&] { vertex_subgraph(chain, {"s"}); }) == ErrorKind::InvalidPlayerSet);
}

TEST_CASE("subgraphs are monotone in the coalition") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 50; ++round) {
        const auto g = fixtures::random_graph(rng, 5, 10, {"a", "b"}, 0.3);
        std::vector<std::string> players;
        for (auto e : g.endogenous_edges()) players.push_back(g.edge(e).id);
        std::set<std::string> small, large;
        for (const auto& p : players) {
            const auto r = rng() % 3;
            if (r == 0) small.insert(p);
            if (r != 2) large.insert(p);
        }
        large.insert(small.begin(), small.end());
        const auto a = edge_ids(edge_subgraph(g, small));
        const auto b = edge_ids(edge_subgraph(g, large));
        CHECK(std::includes(b.begin(), b.end(), a.begin(), a.end()));
    }
}

TEST_CASE("serialize round-trips") {
    std::mt19937_64 rng(11);
    for (int round = 0; round < 50; ++round) {
        const auto g = fixtures::random_graph(rng, 6, 12, {"a", "b", "knows"}, 0.4, true);
        CHECK(load_graph(serialize(g)) == g);
    }
    const auto f = fixtures::example_graph({"e13"});
    CHECK(load_graph(serialize(f)) == f);
}

TEST_CASE("derived graphs") {
    const auto g = fixtures::example_graph();
    const auto e = *g.find_edge("e35");
    CHECK(with_edge_origin(g, e, Origin::Exogenous).exogenous_edges().size() == 1);
    const auto removed = without_edge(g, e);
    CHECK(removed.edge_count() == 8);
    CHECK(removed.vertex_count() == 6);
    CHECK_FALSE(removed.find_edge("e35").has_value());
}
