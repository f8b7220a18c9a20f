#include <doctest.h>

#include "fomc/decomp.hpp"
#include "fomc/formula.hpp"
#include "fomc/kernel.hpp"
#include "fomc/oracles.hpp"

using namespace fomc;
using oracle::complete_graph;
using oracle::cycle_graph;
using oracle::path_graph;
using oracle::star_graph;

namespace {

bool same_type(TypeCache& cache, const LabeledGraph& a, const LabeledGraph& b, unsigned q) {
    return qtype_equal(compute_qtype(cache, a, {}, q), compute_qtype(cache, b, {}, q));
}

// C_6 with a pendant path of `tail` vertices on every other cycle vertex.
LabeledGraph hexagon_with_tails(std::size_t tail) {
    std::vector<Edge> e;
    for (Vertex i = 0; i < 6; ++i) e.emplace_back(i, (i + 1) % 6);
    Vertex next = 6;
    for (Vertex anchor : {0U, 2U, 4U}) {
        Vertex prev = anchor;
        for (std::size_t k = 0; k < tail; ++k) {
            e.emplace_back(prev, next);
            prev = next++;
        }
    }
    return LabeledGraph(Graph(next, e));
}

std::vector<LabeledGraph> tree_corpus(Rng& rng) {
    std::vector<LabeledGraph> out;
    for (std::size_t n : {1, 2, 3, 5, 8, 13, 40, 60}) {
        out.push_back(path_graph(n));
        out.push_back(star_graph(n));
    }
    for (int t = 0; t < 60; ++t) out.push_back(oracle::random_tree(rng, 2 + rng.below(59)));
    return out;
}

}  // namespace

TEST_CASE("config validation") {
    KernelConfig c;
    CHECK_NOTHROW(c.validate());
    c.rep_cap = 0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.rep_cap = 8;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.rep_cap = 6;
    c.tree_chunk = 1;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("rank-1 representative of a connected unlabeled graph is K_1") {
    RepresentativeCache cache;
    for (unsigned n = 1; n <= 6; ++n) {
        for (const auto& g : oracle::connected_graphs(n)) {
            auto rep = minimal_representative(cache, LabeledGraph(g), {}, 1, 6);
            CHECK(rep.graph.vertex_count() == 1);
        }
    }
}

TEST_CASE("rank-2 representative of a long path has four vertices") {
    RepresentativeCache cache;
    auto p100 = path_graph(100);
    auto rep = minimal_representative(cache, p100, {}, 2, 6);
    CHECK(rep.graph.vertex_count() == 4);
    CHECK_FALSE(rep.is_input);
    CHECK(same_type(cache.types(), rep.graph, p100, 2));
}

TEST_CASE("representatives are idempotent up to type") {
    RepresentativeCache cache;
    Rng rng(3);
    for (int t = 0; t < 30; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 5 + rng.below(6), t % 2);
        auto comps = connected_components(g.graph());
        auto h = induced_subgraph(g, comps.front()).graph;
        const Vertex u = 0;
        auto rep = cache.minimal(h, std::span<const Vertex>(&u, 1), 2, 5);
        auto again = cache.minimal(rep.graph, rep.tuple, 2, 5);
        CHECK(again.graph.vertex_count() == rep.graph.vertex_count());
        auto a = compute_qtype(cache.types(), h, std::span<const Vertex>(&u, 1), 2);
        auto b = compute_qtype(cache.types(), rep.graph, rep.tuple, 2);
        CHECK(qtype_equal(a, b));
    }
}

TEST_CASE("minimal rejects bad input") {
    RepresentativeCache cache;
    std::vector<Edge> two{{0, 1}, {2, 3}};
    LabeledGraph disconnected(Graph(4, two));
    CHECK_THROWS_AS(cache.minimal(disconnected, {}, 1, 4), std::invalid_argument);
    const std::vector<Vertex> repeated{0, 0};
    CHECK_THROWS_AS(cache.minimal(path_graph(3), repeated, 1, 4), std::invalid_argument);
}

TEST_CASE("replace_part on a pendant edge") {
    // Triangle 0-1-2 with pendant vertex 3 on 2.
    std::vector<Edge> e{{0, 1}, {0, 2}, {1, 2}, {2, 3}};
    LabeledGraph g(Graph(4, e));
    RepresentativeCache cache;
    KernelConfig config;
    config.q = 1;
    const std::vector<Vertex> part{2, 3}, u{2};
    auto out = replace_part(g, part, u, config, cache);
    CHECK(out.graph.vertex_count() <= 4);
    CHECK(same_type(cache.types(), out.graph, g, 1));

    const std::vector<Vertex> only_u{2};
    auto same = replace_part(g, only_u, only_u, config, cache);
    CHECK_FALSE(same.changed);
    CHECK(same.graph == g);

    const std::vector<Vertex> leaky{1, 2, 3};
    CHECK_THROWS_AS(replace_part(g, leaky, u, config, cache), std::invalid_argument);
}

TEST_CASE("identity fallback when the cap equals the arity") {
    auto g = path_graph(8);
    RepresentativeCache cache;
    KernelConfig config;
    config.q = 2;
    config.rep_cap = 1;
    std::vector<Vertex> part{0, 1, 2, 3, 4, 5, 6, 7};
    const std::vector<Vertex> u{7};
    auto out = replace_part(g, part, u, config, cache);
    CHECK_FALSE(out.changed);
    CHECK(out.fallback);
    CHECK(out.graph == g);
}

TEST_CASE("reduce_trees examples") {
    RepresentativeCache cache;
    KernelConfig config;

    config.q = 1;
    auto star = star_graph(1000);
    auto small = reduce_trees(star, peel_degree_one(star.graph()), config, cache);
    CHECK(small.vertex_count() <= 7);
    CHECK(same_type(cache.types(), small, star, 1));

    auto c5 = cycle_graph(5);
    CHECK(reduce_trees(c5, peel_degree_one(c5.graph()), config, cache) == c5);

    config.q = 2;
    auto p = path_graph(10000);
    KernelReport report;
    auto reduced = reduce_trees(p, peel_degree_one(p.graph()), config, cache, &report);
    CHECK(reduced.vertex_count() <= 7);
    CHECK(report.fallbacks == 0);
    CHECK(same_type(cache.types(), reduced, path_graph(4), 2));

    CHECK_THROWS_AS(reduce_trees(p, std::vector<Vertex>{}, config, cache), std::invalid_argument);
}

TEST_CASE("trees kernelize to bounded trees of equal type without fallbacks") {
    RepresentativeCache cache;
    Rng rng(41);
    for (unsigned q : {0U, 1U, 2U}) {
        for (unsigned cap : {5U, 6U}) {
            KernelConfig config;
            config.q = q;
            config.rep_cap = cap;
            for (const auto& t : tree_corpus(rng)) {
                auto result = replace_protrusions(t, config, cache);
                CHECK(result.report.fallbacks == 0);
                CHECK(result.graph.vertex_count() <= t.vertex_count());
                CHECK(result.graph.vertex_count() <= 7);
                CHECK(result.graph.graph().edge_count() + 1 == result.graph.vertex_count());
                CHECK(same_type(cache.types(), result.graph, t, q));
            }
        }
    }
}

TEST_CASE("dense graphs with no protrusions are unchanged") {
    RepresentativeCache cache;
    KernelConfig config;
    config.q = 2;
    auto k10 = complete_graph(10);
    auto result = replace_protrusions(k10, config, cache);
    CHECK(result.graph == k10);
    CHECK(result.report.protrusions_replaced == 0);
}

TEST_CASE("cycle with long pendant paths") {
    RepresentativeCache cache;
    KernelConfig config;
    config.q = 2;
    auto g = hexagon_with_tails(50);
    auto result = replace_protrusions(g, config, cache);
    CHECK(result.graph.vertex_count() < g.vertex_count());
    CHECK(edge_excess(result.graph.graph()) == 0);
    CHECK(same_type(cache.types(), result.graph, g, 2));
}

TEST_CASE("kernel preserves rank-q sentences on fuzzed graphs") {
    RepresentativeCache cache;
    Rng rng(77);
    oracle::FormulaShape shape;
    shape.labels = 1;
    for (int t = 0; t < 40; ++t) {
        const unsigned q = 1 + static_cast<unsigned>(t % 2);
        auto g = oracle::random_model_graph(rng, t % 4, 10 + rng.below(30), t % 3 == 0 ? 1 : 0);
        KernelConfig config;
        config.q = q;
        auto result = replace_protrusions(g, config, cache);
        CHECK(result.graph.vertex_count() <= g.vertex_count());
        CHECK(same_type(cache.types(), result.graph, g, q));
        shape.labels = g.label_count();
        shape.max_rank = q;
        for (int k = 0; k < 5; ++k) {
            auto phi = oracle::random_formula(rng, {}, shape);
            CHECK(naive_check(result.graph, phi) == naive_check(g, phi));
        }
    }
}

TEST_CASE("kernelization is deterministic") {
    Rng rng(5);
    for (int t = 0; t < 10; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 50, 1);
        KernelConfig config;
        RepresentativeCache a, b;
        CHECK(replace_protrusions(g, config, a).graph == replace_protrusions(g, config, b).graph);
    }
}
