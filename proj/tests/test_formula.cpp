#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "fomc/formula.hpp"
#include "fomc/gnf.hpp"
#include "fomc/graph_io.hpp"
#include "fomc/oracles.hpp"
#include "fomc/qtype.hpp"

using namespace fomc;
using oracle::complete_graph;
using oracle::cycle_graph;
using oracle::path_graph;

TEST_CASE("parser builds ASTs with quantifier rank") {
    auto a = parse_formula("exists x. E(x,x)");
    CHECK(a.kind() == FormulaKind::Exists);
    CHECK(a.qrank() == 1);
    CHECK(parse_formula("forall x. exists y. E(x,y)").qrank() == 2);
    CHECK(parse_formula("P2(x)").label_bound() == 2);
    CHECK(parse_formula("(E(x,y) & ~x=y)").free_variables() == std::set<std::string>{"x", "y"});
}

TEST_CASE("parser rejects malformed input with a position") {
    CHECK_THROWS_AS(parse_formula("exists x E(x,x)"), FormulaSyntaxError);
    CHECK_THROWS_AS(parse_formula("E(x,"), FormulaSyntaxError);
    CHECK_THROWS_AS(parse_formula("P0(x)"), FormulaSyntaxError);
    CHECK_THROWS_AS(parse_formula("E(x,y)", std::set<std::string>{"x"}), FormulaSyntaxError);
}

TEST_CASE("distgt sugar expands to pure FO") {
    auto near = parse_formula("~distgt 2 (x,y)");
    auto p3 = path_graph(3);
    CHECK(naive_check(p3, near, {{"x", 0}, {"y", 2}}));
    auto p4 = path_graph(4);
    CHECK_FALSE(naive_check(p4, near, {{"x", 0}, {"y", 3}}));

    Rng rng(8);
    for (int t = 0; t < 10; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 12, 0);
        for (unsigned k = 0; k <= 4; ++k) {
            auto f = parse_formula("distgt " + std::to_string(k) + " (x,y)");
            for (Vertex u = 0; u < g.vertex_count(); u += 3) {
                auto d = bfs_distances(g.graph(), u);
                for (Vertex v = 0; v < g.vertex_count(); ++v) {
                    CHECK(naive_check(g, f, {{"x", u}, {"y", v}}) == (d[v] == kUnreachable || d[v] > k));
                }
            }
        }
    }
}

TEST_CASE("distance formula rank") {
    CHECK(distance_formula_rank(0) == 0);
    CHECK(distance_formula_rank(1) == 0);
    CHECK(distance_formula_rank(2) == 1);
    CHECK(distance_formula_rank(3) == 2);
    CHECK(distance_formula_rank(4) == 2);
    CHECK(distance_formula_rank(5) == 3);
    for (unsigned k = 0; k <= 12; ++k) {
        CHECK(distance_at_most(k, "x", "y", "d").qrank() == distance_formula_rank(k));
        CHECK(parse_formula("distgt " + std::to_string(k) + " (x,y)").qrank() == distance_formula_rank(k));
    }
}

TEST_CASE("printer round trip") {
    Rng rng(21);
    oracle::FormulaShape shape;
    shape.labels = 2;
    shape.max_rank = 3;
    for (int t = 0; t < 300; ++t) {
        auto f = oracle::random_formula(rng, t % 2 ? std::vector<std::string>{"x"} : std::vector<std::string>{},
                                        shape);
        CHECK(parse_formula(to_string(f)) == f);
    }
}

TEST_CASE("naive checker examples") {
    CHECK(naive_check(complete_graph(3), parse_formula("exists x. exists y. E(x,y)")));
    LabeledGraph empty(Graph(3, std::vector<Edge>{}));
    CHECK(naive_check(empty, parse_formula("forall x. forall y. ~E(x,y)")));
    auto induced_p3 = parse_formula("exists x. exists y. exists z. (E(x,y) & E(y,z) & ~E(x,z) & ~x=z)");
    CHECK(naive_check(path_graph(3), induced_p3));
    CHECK_FALSE(naive_check(complete_graph(3), induced_p3));
}

TEST_CASE("naive checker errors") {
    CHECK_THROWS_AS(naive_check(path_graph(3), parse_formula("E(x,y)")), std::invalid_argument);
    CHECK_THROWS_AS(naive_check(path_graph(3), parse_formula("exists x. P1(x)")), std::invalid_argument);
}

TEST_CASE("naive checker is invariant under relabeling") {
    Rng rng(4);
    oracle::FormulaShape shape;
    shape.labels = 1;
    for (int t = 0; t < 60; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 9, 1);
        const auto n = g.vertex_count();
        std::vector<Vertex> perm(n);
        std::iota(perm.begin(), perm.end(), Vertex{0});
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        std::vector<Edge> edges;
        for (auto [a, b] : g.graph().edges()) edges.emplace_back(perm[a], perm[b]);
        std::vector<std::vector<Vertex>> labels(1);
        for (Vertex v : g.label_set(0)) labels[0].push_back(perm[v]);
        LabeledGraph h(Graph(n, edges), labels);
        auto phi = oracle::random_formula(rng, {}, shape);
        CHECK(naive_check(g, phi) == naive_check(h, phi));
    }
}

TEST_CASE("substitution and fresh prefixes") {
    auto f = parse_formula("(E(x,y) & exists x. P1(x))");
    auto g = substitute_free(f, "x", "w");
    CHECK(g.free_variables() == std::set<std::string>{"w", "y"});
    auto prefix = fresh_prefix({"d1", "d2", "dd"}, "d");
    CHECK(prefix != "d");
    CHECK(prefix.rfind("d", 0) == 0);
}

TEST_CASE("q-type examples") {
    TypeCache cache;
    auto k2 = complete_graph(2);
    auto p3 = path_graph(3);
    CHECK(qtype_equal(compute_qtype(cache, k2, {}, 1), compute_qtype(cache, p3, {}, 1)));
    CHECK_FALSE(qtype_equal(compute_qtype(cache, k2, {}, 2), compute_qtype(cache, p3, {}, 2)));
    CHECK(qtype_equal(compute_qtype(cache, path_graph(100), {}, 2), compute_qtype(cache, path_graph(4), {}, 2)));
    CHECK(qtype_equal(compute_qtype(cache, cycle_graph(4), {}, 2), compute_qtype(cache, path_graph(4), {}, 2)));
    CHECK_FALSE(
        qtype_equal(compute_qtype(cache, cycle_graph(4), {}, 3), compute_qtype(cache, path_graph(4), {}, 3)));
}

TEST_CASE("q-type comparisons across ranks or caches are rejected") {
    TypeCache a, b;
    auto g = path_graph(3);
    CHECK_THROWS_AS(qtype_equal(compute_qtype(a, g, {}, 1), compute_qtype(a, g, {}, 2)), std::invalid_argument);
    CHECK_THROWS_AS(qtype_equal(compute_qtype(a, g, {}, 1), compute_qtype(b, g, {}, 1)), std::invalid_argument);
}

TEST_CASE("q-types are isomorphism invariant and serialize canonically") {
    TypeCache a, b;
    Rng rng(14);
    for (int t = 0; t < 40; ++t) {
        auto g = oracle::random_model_graph(rng, t % 4, 8, 1);
        const auto n = g.vertex_count();
        std::vector<Vertex> perm(n);
        std::iota(perm.begin(), perm.end(), Vertex{0});
        for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.below(i)]);
        std::vector<Edge> edges;
        for (auto [x, y] : g.graph().edges()) edges.emplace_back(perm[x], perm[y]);
        std::vector<std::vector<Vertex>> labels(1);
        for (Vertex v : g.label_set(0)) labels[0].push_back(perm[v]);
        LabeledGraph h(Graph(n, edges), labels);
        const Vertex u = static_cast<Vertex>(rng.below(n));
        const Vertex hu = perm[u];
        auto tg = compute_qtype(a, g, std::span<const Vertex>(&u, 1), 2);
        auto th = compute_qtype(a, h, std::span<const Vertex>(&hu, 1), 2);
        CHECK(qtype_equal(tg, th));
        CHECK(a.serialize(tg) == b.serialize(compute_qtype(b, h, std::span<const Vertex>(&hu, 1), 2)));
    }
}

TEST_CASE("q-type equality implies agreement on random sentences") {
    TypeCache cache;
    Rng rng(31);
    oracle::FormulaShape shape;
    shape.labels = 1;
    std::vector<LabeledGraph> corpus;
    for (int t = 0; t < 40; ++t) corpus.push_back(oracle::random_model_graph(rng, t % 4, 4 + rng.below(5), 1));
    std::vector<Formula> sentences;
    for (int t = 0; t < 40; ++t) sentences.push_back(oracle::random_formula(rng, {}, shape));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        for (std::size_t j = i + 1; j < corpus.size(); ++j) {
            if (!qtype_equal(compute_qtype(cache, corpus[i], {}, 2), compute_qtype(cache, corpus[j], {}, 2))) continue;
            for (const auto& phi : sentences) CHECK(naive_check(corpus[i], phi) == naive_check(corpus[j], phi));
        }
    }
}

TEST_CASE("GNF parsing") {
    auto one = parse_gnf("bls b1 r 1 s 2 omega \"exists y. E(x,y)\"\nsentence b1\n");
    REQUIRE(one.leaves.size() == 1);
    CHECK(one.leaves[0].r == 1);
    CHECK(one.leaves[0].s == 2);
    CHECK(one.tree.kind() == GnfExpr::Kind::Leaf);

    auto contradiction = parse_gnf("bls b1 r 0 s 1 omega \"x=x\"\nsentence (b1 & ~b1)\n");
    CHECK_FALSE(contradiction.tree.evaluate([](std::size_t) { return true; }));
    CHECK_FALSE(contradiction.tree.evaluate([](std::size_t) { return false; }));

    auto reparsed = parse_gnf(to_string(one));
    CHECK(to_string(reparsed) == to_string(one));
}

TEST_CASE("GNF parse errors carry line numbers") {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_gnf(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("bls b1 r 1 s 1 omega \"x=x\"\nsentence b2\n") == 2);
    CHECK(line_of("bls b1 r 1 s 0 omega \"x=x\"\nsentence b1\n") == 1);
    CHECK(line_of("bls b1 r 1 s 1 omega \"E(x,y)\"\nsentence b1\n") == 1);
}
