#include <doctest.h>

#include <climits>
#include <cmath>
#include <numeric>

#include "fomc/decomp.hpp"
#include "fomc/oracles.hpp"
#include "fomc/random_models.hpp"

using namespace fomc;
using oracle::complete_graph;
using oracle::cycle_graph;
using oracle::path_graph;
using oracle::star_graph;

namespace {

std::vector<Vertex> all_vertices(std::size_t n) {
    std::vector<Vertex> v(n);
    std::iota(v.begin(), v.end(), Vertex{0});
    return v;
}

Graph triangle_with_tail() {
    std::vector<Edge> e{{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
    return Graph(6, e);
}

}  // namespace

TEST_CASE("saturating power and threshold") {
    CHECK(saturating_pow(2, 10, 5000) == 1024);
    CHECK(saturating_pow(2, 20, 5000) == 5000);
    CHECK(saturating_pow(10, 30, UINT64_MAX) == UINT64_MAX);
    CHECK(protrusion_degree_threshold(1, 1) == 2);
    CHECK(protrusion_degree_threshold(1, 5) == 78130);
}

TEST_CASE("canonical partition boundaries") {
    auto p = CanonicalPartition::build(10, {2, 1, 5});
    CHECK(p.a_end == 2);
    CHECK(p.b_end == 10);
    auto q = CanonicalPartition::build(1000, {2, 1, 3});
    CHECK(q.a_end == 2);
    CHECK(q.b_end == 8);
    CHECK(q.in_a(1));
    CHECK(q.in_b(2));
    CHECK(q.in_c(8));
}

TEST_CASE("forests pass at b = 1") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
        auto tree = oracle::random_tree(rng, 1 + rng.below(80));
        for (std::uint64_t mu : {1, 2, 5}) {
            CHECK(verify_brmu_partition(tree.graph(), {1, 1, mu}).pass);
            CHECK(minimal_b(tree.graph(), 1, mu) == 1);
        }
    }
    for (std::size_t n : {1, 2, 10, 300}) CHECK(minimal_b(path_graph(n).graph(), 1, 5) == 1);
    CHECK(minimal_b(Graph(7, std::vector<Edge>{}), 1, 5) == 1);
}

TEST_CASE("complete graph K_10") {
    auto k10 = complete_graph(10).graph();
    CHECK(verify_brmu_partition(k10, {10, 1, 5}).pass);
    auto fail = verify_brmu_partition(k10, {1, 1, 5});
    CHECK_FALSE(fail.pass);
    CHECK(fail.property == 3);
    CHECK(fail.measured == 27);
    CHECK(fail.limit == 25);
    CHECK(verify_brmu_partition(k10, {2, 1, 5}).pass);
    CHECK(minimal_b(k10, 1, 5) == 2);
}

TEST_CASE("A = V always verifies") {
    Rng rng(6);
    for (int t = 0; t < 20; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 40, 0).graph();
        CHECK(verify_brmu_partition(g, {g.vertex_count(), 1, 1}).pass);
    }
}

TEST_CASE("property 4 detects edges into A") {
    // A hub joined to every vertex of a path; with b = mu = 1, C is everything but the hub.
    std::vector<Edge> e;
    for (Vertex v = 1; v < 40; ++v) {
        e.emplace_back(0, v);
        if (v + 1 < 40) e.emplace_back(v, v + 1);
    }
    Graph g(40, e);
    auto verdict = verify_brmu_partition(g, {1, 1, 1});
    CHECK_FALSE(verdict.pass);
    CHECK(verdict.property == 4);
}

TEST_CASE("ball measures match brute force on small graphs") {
    Rng rng(13);
    for (int t = 0; t < 60; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 6 + rng.below(7), 0).graph();
        const auto n = g.vertex_count();
        std::vector<char> allowed(n), target(n);
        for (Vertex v = 0; v < n; ++v) {
            allowed[v] = rng.uniform() < 0.8;
            target[v] = !allowed[v];
        }
        for (std::uint64_t radius : {0, 1, 2, 5}) {
            long long best_excess = LLONG_MIN, best_edges = LLONG_MIN;
            for (Vertex v = 0; v < n; ++v) {
                if (!allowed[v]) continue;
                best_excess = std::max(best_excess, ball_excess(g, allowed, v, radius));
                best_edges = std::max(best_edges, ball_edges_to(g, allowed, target, v, radius));
            }
            auto brute_excess = oracle::brute_max_excess(g, allowed, static_cast<unsigned>(radius));
            auto brute_edges = oracle::brute_max_edges_to(g, allowed, target, static_cast<unsigned>(radius));
            if (!brute_excess) continue;
            CHECK(best_excess == *brute_excess);
            CHECK(best_edges == *brute_edges);
        }
    }
}

TEST_CASE("first violations agree with per-center scans") {
    Rng rng(19);
    for (int t = 0; t < 20; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 60, 0).graph();
        const auto n = g.vertex_count();
        std::vector<char> allowed(n, 1), target(n, 0);
        for (Vertex v = 0; v < 5; ++v) {
            allowed[v] = 0;
            target[v] = 1;
        }
        for (long long limit : {-1LL, 0LL, 1LL, 3LL}) {
            std::optional<Vertex> expect;
            for (Vertex v = 0; v < n && !expect; ++v) {
                if (allowed[v] && ball_excess(g, allowed, v, 2) > limit) expect = v;
            }
            auto got = first_excess_violation(g, allowed, 2, limit);
            CHECK(got.has_value() == expect.has_value());
            if (got && expect) CHECK(got->center == *expect);

            std::optional<Vertex> expect_to;
            for (Vertex v = 0; v < n && !expect_to; ++v) {
                if (allowed[v] && ball_edges_to(g, allowed, target, v, 1) > limit) expect_to = v;
            }
            auto got_to = first_edges_to_violation(g, allowed, target, 1, limit);
            CHECK(got_to.has_value() == expect_to.has_value());
            if (got_to && expect_to) CHECK(got_to->center == *expect_to);
        }
    }
}

TEST_CASE("degree-one peel") {
    CHECK(peel_degree_one(path_graph(5).graph()) == all_vertices(5));
    CHECK(peel_degree_one(cycle_graph(5).graph()).empty());
    CHECK(peel_degree_one(triangle_with_tail()) == std::vector<Vertex>{3, 4, 5});
    // A star is a tree, so it peels away completely.
    CHECK(peel_degree_one(star_graph(6).graph()) == all_vertices(7));
    CHECK(peel_degree_one(Graph(3, std::vector<Edge>{})) == all_vertices(3));
}

TEST_CASE("peel is order independent and idempotent") {
    Rng rng(23);
    for (int t = 0; t < 50; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 50, 0).graph();
        auto z = peel_degree_one(g);
        CHECK(oracle::peel_random_order(g, rng) == z);
        std::vector<Vertex> rest;
        std::vector<char> in_z(g.vertex_count(), 0);
        for (Vertex v : z) in_z[v] = 1;
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (!in_z[v]) rest.push_back(v);
        }
        auto core = induced_subgraph(LabeledGraph(g), rest);
        CHECK(peel_degree_one(core.graph.graph()).empty());
    }
}

TEST_CASE("protrusion skeleton examples") {
    auto c = protrusion_skeleton(cycle_graph(9).graph(), 1, 1);
    CHECK(c.z.empty());
    CHECK(c.p == all_vertices(9));
    CHECK(c.components.size() == 1);
    CHECK(c.s_family == std::vector<std::vector<Vertex>>{{}});

    auto k = protrusion_skeleton(complete_graph(10).graph(), 1, 1);
    CHECK(k.z.empty());
    CHECK(k.p.empty());
    CHECK(k.s_family.empty());

    auto t = protrusion_skeleton(triangle_with_tail(), 1, 1);
    CHECK(t.z == std::vector<Vertex>{3, 4, 5});
    CHECK(t.p == std::vector<Vertex>{0, 1, 2});
    CHECK(t.max_component_size() == 3);
}

TEST_CASE("protrusion skeleton invariants on generated graphs") {
    for (const char* text : {"model=chung-lu alpha=3 c=1", "model=er p=2/n", "model=config alpha=3 c=1",
                             "model=pa m=2"}) {
        for (std::size_t n : {100, 2000}) {
            auto spec = parse_model_description(text);
            spec.seed = n;
            auto g = generate(spec, n).graph;
            for (std::uint64_t mu : {1, 2}) {
                auto sk = protrusion_skeleton(g, 1, mu);
                std::vector<Vertex> outside;
                for (Vertex v = 0; v < g.vertex_count(); ++v) {
                    if (!sk.in_z[v] && !sk.in_p[v]) outside.push_back(v);
                    CHECK_FALSE((sk.in_z[v] && sk.in_p[v]));
                }
                for (const auto& comp : sk.components) {
                    for (Vertex v : comp.boundary) CHECK((!sk.in_p[v] && !sk.in_z[v]));
                }
                for (const auto& s : sk.s_family) CHECK(s.size() <= mu);
                LocalProtrusionPartition part{outside, sk.p, sk.z};
                // Z is always a union of pendant trees.
                auto verdict = verify_protrusion_partition(g, part, g.vertex_count(), 1, mu);
                if (!verdict.pass) CHECK(verdict.property != 4);
            }
        }
    }
}

TEST_CASE("local-protrusion-partition verifier") {
    Rng rng(29);
    for (int t = 0; t < 10; ++t) {
        auto tree = oracle::random_tree(rng, 2 + rng.below(30)).graph();
        CHECK(verify_protrusion_partition(tree, {{}, {}, all_vertices(tree.vertex_count())}, 1, 1, 1).pass);
    }
    CHECK(verify_protrusion_partition(complete_graph(5).graph(), {all_vertices(5), {}, {}}, 5, 1, 1).pass);
    auto bad = verify_protrusion_partition(cycle_graph(5).graph(), {{}, {}, all_vertices(5)}, 1, 1, 1);
    CHECK_FALSE(bad.pass);
    CHECK(bad.property == 4);
    auto big_x = verify_protrusion_partition(complete_graph(5).graph(), {all_vertices(5), {}, {}}, 2, 1, 1);
    CHECK_FALSE(big_x.pass);
    CHECK(big_x.property == 2);
}

TEST_CASE("degree regimes") {
    CHECK(d_hat(3.5, 100) == doctest::Approx(2.0));
    CHECK(d_hat(3.5, 1000000) == doctest::Approx(2.0));
    CHECK(d_hat(3.0, 1000) == doctest::Approx(6.9078).epsilon(1e-4));
    CHECK(d_hat(2.5, 10000) == doctest::Approx(100.0));
    CHECK(d_tilde_regime(3.5) == DegreeRegime::Constant);
    CHECK(d_tilde_regime(3.0) == DegreeRegime::Logarithmic);
    CHECK(d_tilde_regime(2.5) == DegreeRegime::Polynomial);
    CHECK_THROWS_AS(d_hat(2.0, 10), std::invalid_argument);
}
