#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"
#include "tokennet/error.hpp"
#include "tokennet/graph.hpp"
#include "tokennet/modularity.hpp"
#include "tokennet/rng.hpp"
#include "tokennet/synth.hpp"

using namespace tokennet;

namespace {

const Day kDay = 18628;

DailyGraph two_triangles() {
    return graph_from_edges(kDay, {{"a", "b", 1}, {"b", "c", 1}, {"a", "c", 1},
                                   {"d", "e", 1}, {"e", "f", 1}, {"d", "f", 1}});
}

DailyGraph ring_of_cliques(int cliques, int size) {
    std::vector<WeightedEdge> es;
    for (int c = 0; c < cliques; ++c)
        for (int i = 0; i < size; ++i)
            for (int j = i + 1; j < size; ++j)
                es.push_back({slot_address(c * size + i), slot_address(c * size + j), 1.0});
    for (int c = 0; c < cliques; ++c)
        es.push_back({slot_address(c * size),
                      slot_address(((c + 1) % cliques) * size + 1), 1.0});
    return graph_from_edges(kDay, es);
}

}  // namespace

TEST_CASE("the score of a hand partition matches the closed form") {
    const auto g = two_triangles();
    // triangles as communities: each has 3 of 6 edges and half the degree
    std::vector<int> part(6);
    for (int v = 0; v < 6; ++v) part[static_cast<std::size_t>(v)] = v < 3 ? 0 : 1;
    CHECK(modularity_score(g, part) == 0.5);
    // everything in one community scores zero by definition
    CHECK(modularity_score(g, std::vector<int>(6, 0)) == 0.0);
}

TEST_CASE("two disjoint triangles resolve to their halves at Q of one half") {
    for (auto method : {ModularityMethod::greedy, ModularityMethod::multilevel}) {
        const auto part = detect_communities(two_triangles(), 1, method);
        CHECK(part.q == 0.5);
        CHECK(part.community_count == 2);
        CHECK(part.assignments == std::vector<int>{0, 0, 0, 1, 1, 1});
    }
}

TEST_CASE("a complete graph stays one community at Q zero") {
    std::vector<WeightedEdge> es;
    for (int i = 0; i < 5; ++i)
        for (int j = i + 1; j < 5; ++j)
            es.push_back({slot_address(i), slot_address(j), 1.0});
    const auto g = graph_from_edges(kDay, es);
    const auto part = detect_communities(g, 3);
    CHECK(part.community_count == 1);
    CHECK(part.q == 0.0);
}

TEST_CASE("the score agrees with plain-loop recomputation on random partitions") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto g = oracle::er_graph(18, 0.2, seed + 11);
        if (g.num_nodes() < 6 || g.num_edges() < 3) continue;
        Rng rng(seed);
        for (int trial = 0; trial < 4; ++trial) {
            std::vector<int> part;
            for (int v = 0; v < g.num_nodes(); ++v)
                part.push_back(static_cast<int>(rng.uniform(4)));
            CHECK(modularity_score(g, part) ==
                  doctest::Approx(oracle::modularity_of(g, part)).epsilon(1e-12));
        }
    }
}

TEST_CASE("small graphs attain the exhaustive partition maximum") {
    int tested = 0;
    for (std::uint64_t seed = 0; seed < 80 && tested < 50; ++seed) {
        const int n = 4 + static_cast<int>(seed % 5);
        const double p = 0.25 + 0.1 * static_cast<double>(seed % 4);
        DailyGraph g;
        try {
            g = oracle::er_graph(n, p, seed * 7 + 1);
        } catch (const EmptyDay&) {
            continue;  // a sparse draw can come up with no edges at all
        }
        ++tested;
        const double best = oracle::modularity_best(g);
        for (auto method : {ModularityMethod::greedy, ModularityMethod::multilevel}) {
            const auto part = detect_communities(g, seed, method);
            CHECK(part.q == doctest::Approx(best).epsilon(1e-12));
            CHECK(part.q == modularity_score(g, part.assignments));
            // community ids are consecutive from zero in first-appearance order
            int seen = 0;
            for (int c : part.assignments) {
                CHECK(c <= seen);
                if (c == seen) ++seen;
            }
            CHECK(seen == part.community_count);
        }
    }
    CHECK(tested == 50);
}

TEST_CASE("both heuristics recover a planted ring of cliques") {
    const auto g = ring_of_cliques(4, 5);  // 20 nodes, above the exact cutoff
    REQUIRE(g.num_nodes() == 20);
    std::vector<int> cliques(20);
    for (int v = 0; v < 20; ++v) cliques[static_cast<std::size_t>(v)] = v / 5;
    const double planted_q = modularity_score(g, cliques);
    CHECK(planted_q == doctest::Approx(29.0 / 44.0).epsilon(1e-12));
    for (auto method : {ModularityMethod::greedy, ModularityMethod::multilevel}) {
        const auto part = detect_communities(g, 42, method);
        CHECK(part.community_count == 4);
        CHECK(part.q == doctest::Approx(planted_q).epsilon(1e-12));
        CHECK(part.assignments == cliques);
    }
}

TEST_CASE("detection is deterministic and bounded on larger graphs") {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const auto g = oracle::er_graph(40, 0.1, seed + 21);
        if (g.num_nodes() < 12 || g.num_edges() < 6) continue;
        for (auto method : {ModularityMethod::greedy, ModularityMethod::multilevel}) {
            const auto p1 = detect_communities(g, seed, method);
            const auto p2 = detect_communities(g, seed, method);
            CHECK(p1.assignments == p2.assignments);
            CHECK(p1.q == p2.q);
            CHECK(p1.q >= -0.5);
            CHECK(p1.q <= 1.0);
            CHECK(p1.q == modularity_score(g, p1.assignments));
        }
    }
}

TEST_CASE("degenerate inputs are refused") {
    DailyGraph empty;
    CHECK_THROWS_AS(detect_communities(empty, 0), DegenerateGraph);
    const auto g = two_triangles();
    CHECK_THROWS_AS(modularity_score(g, std::vector<int>(3, 0)), InvalidParams);
}
