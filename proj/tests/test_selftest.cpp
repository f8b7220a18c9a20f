#include <doctest.h>

#include "fomc/decomp.hpp"
#include "fomc/selftest.hpp"

using namespace fomc;

namespace {

// Removes the vertices of degree <= 1 once instead of iterating to a fixpoint.
std::vector<Vertex> single_pass_peel(const Graph& g) {
    std::vector<Vertex> out;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (g.degree(v) <= 1) out.push_back(v);
    }
    return out;
}

}  // namespace

TEST_CASE("quick selftest passes") {
    SelftestOptions options;
    options.quick = true;
    auto results = run_selftest(options);
    CHECK(results.size() == 7);
    for (const auto& r : results) {
        INFO(r.name << ": " << r.detail);
        CHECK(r.passed());
    }
    const auto text = format_results(results);
    CHECK(text.find("FAIL") == std::string::npos);
}

TEST_CASE("the peel suite catches a single-pass peel") {
    CHECK(suite_peel(peel_degree_one, 40, 3).passed());
    auto broken = suite_peel(single_pass_peel, 40, 3);
    CHECK_FALSE(broken.passed());
    CHECK(broken.failures > 0);
    CHECK(format_results({broken}).find("FAIL") != std::string::npos);
}
