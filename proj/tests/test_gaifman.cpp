#include <doctest.h>

#include <numeric>

#include "fomc/gaifman.hpp"
#include "fomc/oracles.hpp"

using namespace fomc;
using oracle::complete_graph;
using oracle::path_graph;
using oracle::star_graph;

namespace {

std::vector<Vertex> all_vertices(std::size_t n) {
    std::vector<Vertex> v(n);
    std::iota(v.begin(), v.end(), Vertex{0});
    return v;
}

LabeledGraph disjoint_edges(std::size_t k) {
    std::vector<Edge> e;
    for (Vertex i = 0; i < k; ++i) e.emplace_back(2 * i, 2 * i + 1);
    return LabeledGraph(Graph(2 * k, e));
}

}  // namespace

TEST_CASE("local evaluation") {
    RepresentativeCache cache;
    auto has_neighbor = parse_formula("exists y. E(x,y)", std::set<std::string>{"x"});
    for (bool kernel : {false, true}) {
        LocalConfig config;
        config.use_kernel = kernel;
        auto star = star_graph(5);
        CHECK(eval_local(star, 0, has_neighbor, 1, config, cache));
        LabeledGraph isolated(Graph(3, std::vector<Edge>{{0, 1}}));
        CHECK_FALSE(eval_local(isolated, 2, has_neighbor, 1, config, cache));
        CHECK(satisfying_set(isolated, has_neighbor, 1, config, cache) == std::vector<Vertex>{0, 1});

        // Degree at least two, seen inside a radius-1 ball.
        auto two = parse_formula("exists y. exists z. (E(x,y) & E(x,z) & ~y=z)", std::set<std::string>{"x"});
        CHECK(satisfying_set(path_graph(5), two, 1, config, cache) == std::vector<Vertex>{1, 2, 3});
        // Radius 0 sees no neighbours at all.
        CHECK(satisfying_set(path_graph(5), has_neighbor, 0, config, cache).empty());
    }
    CHECK_THROWS_AS(eval_local(path_graph(3), 0, parse_formula("exists x. E(x,x)"), 1, {}, cache),
                    std::invalid_argument);
}

TEST_CASE("local evaluation with and without the kernel agree") {
    RepresentativeCache cache;
    Rng rng(57);
    oracle::FormulaShape shape;
    shape.labels = 1;
    LocalConfig with, without;
    without.use_kernel = false;
    for (int t = 0; t < 40; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 10 + rng.below(25), 1);
        auto omega = oracle::random_omega(rng, shape);
        const unsigned r = static_cast<unsigned>(rng.below(3));
        CHECK(satisfying_set(g, omega, r, with, cache) == satisfying_set(g, omega, r, without, cache));
    }
}

TEST_CASE("scattered sets on paths") {
    auto p9 = path_graph(9).graph();
    CHECK(max_scattered(p9, all_vertices(9), 1, 9).count == 3);
    CHECK(max_scattered(p9, all_vertices(9), 1, 2).count == 2);
    CHECK(max_scattered(p9, {}, 1, 3).count == 0);
    CHECK(max_scattered(p9, all_vertices(9), 0, 9).count == 9);
    CHECK(max_scattered(p9, {0, 8}, 4, 2).count == 1);
    CHECK(max_scattered(complete_graph(6).graph(), all_vertices(6), 1, 3).count == 1);
}

TEST_CASE("long components fire the shortcut") {
    auto p = path_graph(200).graph();
    auto res = max_scattered(p, all_vertices(200), 1, 3);
    CHECK(res.count == 3);
    CHECK(res.shortcut_fired);
    auto exact = max_scattered(p, all_vertices(200), 1, 3, false);
    CHECK(exact.count == 3);
    CHECK_FALSE(exact.shortcut_fired);
    CHECK_FALSE(max_scattered(p, all_vertices(200), 0, 3).shortcut_fired);
}

TEST_CASE("scattered counts match brute force") {
    Rng rng(61);
    for (int t = 0; t < 150; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 8 + rng.below(20), 0).graph();
        std::vector<Vertex> w;
        for (Vertex v = 0; v < g.vertex_count() && w.size() < 14; ++v) {
            if (rng.uniform() < 0.5) w.push_back(v);
        }
        const unsigned r = 1 + static_cast<unsigned>(rng.below(2));
        const unsigned s = 1 + static_cast<unsigned>(rng.below(4));
        const unsigned brute = std::min(s, oracle::brute_max_scattered(g, w, r));
        CHECK(max_scattered(g, w, r, s).count == brute);
        CHECK(max_scattered(g, w, r, s, false).count == brute);
    }
}

TEST_CASE("check_gnf examples") {
    RepresentativeCache cache;
    LocalConfig config;
    auto two_edges = parse_gnf("bls b1 r 1 s 2 omega \"exists y. E(x,y)\"\nsentence b1\n");
    CHECK(check_gnf(disjoint_edges(2), two_edges, config, cache).verdict);
    auto outcome = check_gnf(disjoint_edges(1), two_edges, config, cache);
    CHECK_FALSE(outcome.verdict);
    REQUIRE(outcome.leaves.size() == 1);
    CHECK(outcome.leaves[0].satisfying == 2);
    CHECK(outcome.leaves[0].scattered.count == 1);

    auto contradiction = parse_gnf("bls b1 r 0 s 1 omega \"x=x\"\nsentence (b1 & ~b1)\n");
    CHECK_FALSE(check_gnf(path_graph(4), contradiction, config, cache).verdict);
}

TEST_CASE("check_gnf agrees with the expanded sentence") {
    RepresentativeCache cache;
    Rng rng(67);
    oracle::GnfShape shape;
    shape.omega.labels = 1;
    shape.omega.max_rank = 1;
    for (int t = 0; t < 30; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 6 + rng.below(10), 1);
        auto psi = oracle::random_gnf(rng, shape);
        const bool expect = naive_check(g, oracle::expand_gnf(psi));
        for (bool kernel : {false, true}) {
            for (bool shortcut : {false, true}) {
                LocalConfig config;
                config.use_kernel = kernel;
                config.diameter_shortcut = shortcut;
                CHECK(check_gnf(g, psi, config, cache).verdict == expect);
            }
        }
    }
}
