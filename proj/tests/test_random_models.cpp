#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fomc/random_models.hpp"

using namespace fomc;

TEST_CASE("power-law weights") {
    auto w = power_law_weights(4, 3.0, 1.0);
    REQUIRE(w.size() == 4);
    CHECK(w[0] == doctest::Approx(2.0));
    CHECK(w[1] == doctest::Approx(1.41421356));
    CHECK(w[2] == doctest::Approx(1.15470054));
    CHECK(w[3] == doctest::Approx(1.0));
    CHECK(power_law_weights(100, 3.0, 1.0)[0] == doctest::Approx(10.0));
    for (double alpha : {2.1, 2.5, 3.0, 4.0}) {
        auto v = power_law_weights(50, alpha, 2.0);
        CHECK(v.back() == doctest::Approx(2.0));
        for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] <= v[i - 1]);
    }
    CHECK_THROWS_AS(power_law_weights(10, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(power_law_weights(10, 3.0, 0.0), std::invalid_argument);
}

TEST_CASE("Erdos-Renyi extremes and determinism") {
    CHECK(gen_er(30, 0.0, 1).graph.edge_count() == 0);
    CHECK(gen_er(30, 1.0, 1).graph.edge_count() == 30 * 29 / 2);
    CHECK(gen_er(200, 0.05, 42).graph == gen_er(200, 0.05, 42).graph);
    CHECK_FALSE(gen_er(200, 0.05, 42).graph == gen_er(200, 0.05, 43).graph);
}

TEST_CASE("Erdos-Renyi mean edge count") {
    const std::size_t n = 1000;
    const double p = 2.0 / n;
    double sum = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) sum += static_cast<double>(gen_er(n, p, s + 1).graph.edge_count());
    const double pairs = n * (n - 1) / 2.0;
    const double mean = pairs * p;
    const double sigma = std::sqrt(pairs * p * (1 - p) / seeds);
    CHECK(std::abs(sum / seeds - mean) <= 3 * sigma);
}

TEST_CASE("ER probability expressions") {
    CHECK(parse_er_probability("0.25").probability(10) == doctest::Approx(0.25));
    CHECK(parse_er_probability("2/n").probability(100) == doctest::Approx(0.02));
    CHECK(parse_er_probability("1.5*n^-0.5").probability(100) == doctest::Approx(0.15));
    CHECK_THROWS(parse_er_probability("banana"));
}

TEST_CASE("Chung-Lu pair probability") {
    const double expected = 2.0 * std::sqrt(2.0) / (2.0 + std::sqrt(2.0) + 2.0 / std::sqrt(3.0) + 1.0);
    CHECK(expected == doctest::Approx(0.50782).epsilon(1e-4));
    int hits = 0;
    const int seeds = 2000;
    for (int s = 0; s < seeds; ++s) hits += gen_chung_lu(4, 3.0, 1.0, s + 1).graph.has_edge(0, 1) ? 1 : 0;
    const double sigma = std::sqrt(expected * (1 - expected) / seeds);
    CHECK(std::abs(hits / double(seeds) - expected) <= 3 * sigma);
}

TEST_CASE("Chung-Lu small scale and precondition flag") {
    int edges = 0;
    for (int s = 0; s < 50; ++s) edges += static_cast<int>(gen_chung_lu(20, 3.0, 1e-6, s).graph.edge_count());
    CHECK(edges == 0);
    CHECK(gen_chung_lu(1000, 3.0, 1.0, 1).within_precondition);
    CHECK_FALSE(gen_chung_lu(1000, 2.1, 5.0, 1).within_precondition);
}

TEST_CASE("configuration model") {
    auto two = gen_config({1, 1}, 3);
    CHECK(two.graph.edge_count() == 1);
    CHECK(two.graph.has_edge(0, 1));

    auto weights = integer_power_law_weights(500, 3.0, 1.0);
    for (int s = 0; s < 20; ++s) {
        auto gen = gen_config(weights, s);
        auto fixed = weights;
        std::uint64_t total = 0;
        for (auto w : fixed) total += w;
        if (total % 2) ++fixed.back();
        CHECK(gen.pre_erasure_degrees == fixed);
        for (Vertex v = 0; v < gen.graph.vertex_count(); ++v) CHECK(gen.graph.degree(v) <= fixed[v]);
    }
}

TEST_CASE("configuration parity fix is recorded") {
    auto gen = gen_config({2, 1, 1, 1}, 1);
    CHECK(gen.pre_erasure_degrees == std::vector<std::uint64_t>{2, 1, 1, 2});
    CHECK_FALSE(gen.notes.empty());
}

TEST_CASE("preferential attachment") {
    auto single = gen_pa(1, 1, 5);
    CHECK(single.graph.vertex_count() == 1);
    CHECK(single.graph.edge_count() == 0);
    for (std::uint32_t m : {1U, 2U, 3U}) {
        for (int s = 0; s < 10; ++s) {
            auto gen = gen_pa(300, m, s);
            CHECK(gen.pre_erasure_edges == 300ULL * m);
            std::uint64_t sum = 0;
            for (auto d : gen.pre_erasure_degrees) sum += d;
            CHECK(sum == 2ULL * 300 * m);
        }
    }
}

TEST_CASE("model descriptions round trip") {
    for (const char* text : {"model=chung-lu alpha=3 c=1", "model=er p=2/n", "model=config alpha=3 c=1",
                             "model=pa m=2", "model=chung-lu alpha=2.5 c=0.5"}) {
        auto spec = parse_model_description(text);
        CHECK(spec.describe() == text);
        CHECK(parse_model_description(spec.describe()).describe() == spec.describe());
    }
    CHECK_THROWS_AS(parse_model_description("model=chung-lu alpha=2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model_description("model=pa m=0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_model_description("model=kleinberg"), std::invalid_argument);
}

TEST_CASE("generate dispatches and is deterministic") {
    for (const char* text : {"model=chung-lu alpha=3 c=1", "model=er p=2/n", "model=config alpha=3 c=1",
                             "model=pa m=2"}) {
        auto spec = parse_model_description(text);
        spec.seed = 17;
        auto a = generate(spec, 400);
        auto b = generate(spec, 400);
        CHECK(a.graph == b.graph);
        CHECK(a.graph.vertex_count() == 400);
    }
}
