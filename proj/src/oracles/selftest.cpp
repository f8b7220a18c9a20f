#include "fomc/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "fomc/decomp.hpp"
#include "fomc/gaifman.hpp"
#include "fomc/kernel.hpp"
#include "fomc/oracles.hpp"
#include "fomc/qtype.hpp"

namespace fomc {

namespace {

class SuiteTimer {
public:
    explicit SuiteTimer(SuiteResult& result) : result_(result), start_(std::chrono::steady_clock::now()) {}
    ~SuiteTimer() {
        result_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    SuiteResult& result_;
    std::chrono::steady_clock::time_point start_;
};

void fail(SuiteResult& r, const std::string& what) {
    if (r.failures++ == 0) r.detail = what;
}

std::string describe_graph(const LabeledGraph& g) {
    std::ostringstream os;
    os << "n=" << g.vertex_count() << " edges=[";
    bool first = true;
    for (auto [a, b] : g.graph().edges()) {
        os << (first ? "" : " ") << a + 1 << "-" << b + 1;
        first = false;
    }
    os << "]";
    for (std::size_t i = 0; i < g.label_count(); ++i) {
        os << " P" << i + 1 << "={";
        for (std::size_t j = 0; j < g.label_set(i).size(); ++j) os << (j ? "," : "") << g.label_set(i)[j] + 1;
        os << "}";
    }
    return os.str();
}

// All labelings of g with `labels` label sets.
template <class Fn>
void for_each_labeling(const Graph& g, std::size_t labels, Fn&& fn) {
    const auto n = g.vertex_count();
    const std::uint64_t total = std::uint64_t{1} << (n * labels);
    for (std::uint64_t code = 0; code < total; ++code) {
        std::vector<std::vector<Vertex>> sets(labels);
        for (std::size_t b = 0; b < labels; ++b) {
            for (Vertex v = 0; v < n; ++v) {
                if ((code >> (b * n + v)) & 1U) sets[b].push_back(v);
            }
        }
        fn(LabeledGraph(g, std::move(sets)));
    }
}

}  // namespace

SuiteResult suite_qtype_faithfulness(unsigned max_n, std::size_t max_labels, std::size_t random_sentences,
                                     std::uint64_t seed) {
    SuiteResult r;
    r.name = "qtype-faithfulness";
    SuiteTimer timer(r);
    Rng rng(seed);
    for (std::size_t labels = 0; labels <= max_labels; ++labels) {
        auto sentences = oracle::hintikka_rank2_sentences(labels);
        std::vector<Formula> extra;
        for (std::size_t i = 0; i < random_sentences; ++i) {
            extra.push_back(oracle::random_formula(rng, {}, {2, 5, labels}));
        }
        TypeCache cache;
        std::map<std::uint32_t, std::pair<std::vector<bool>, LabeledGraph>> by_type;
        std::map<std::vector<bool>, std::uint32_t> by_vector;
        for (unsigned n = 0; n <= max_n; ++n) {
            oracle::for_each_graph(n, [&](const Graph& g) {
                for_each_labeling(g, labels, [&](const LabeledGraph& lg) {
                    ++r.cases;
                    const auto id = cache.compute(lg, {}, 2).id;
                    std::vector<bool> truth;
                    for (const auto& s : sentences) truth.push_back(naive_check(lg, s));
                    auto [it, fresh] = by_type.try_emplace(id, truth, lg);
                    if (!fresh) {
                        if (it->second.first != truth) {
                            fail(r, "equal rank-2 types but different normalized truth vectors: " + describe_graph(lg) +
                                        " vs " + describe_graph(it->second.second));
                        }
                        for (const auto& s : extra) {
                            if (naive_check(lg, s) != naive_check(it->second.second, s)) {
                                fail(r, "equal rank-2 types disagree on " + to_string(s) + ": " + describe_graph(lg));
                                break;
                            }
                        }
                    }
                    auto [jt, vfresh] = by_vector.try_emplace(truth, id);
                    if (!vfresh && jt->second != id) {
                        fail(r, "same normalized truth vector but different rank-2 types: " + describe_graph(lg));
                    }
                });
            });
        }
    }
    if (r.failures == 0) r.detail = std::to_string(r.cases) + " labeled graphs";
    return r;
}

SuiteResult suite_ball_reduction(unsigned max_n) {
    SuiteResult r;
    r.name = "ball-reduction";
    SuiteTimer timer(r);
    for (unsigned n = 1; n <= max_n; ++n) {
        for (const auto& g : oracle::connected_graphs(n)) {
            const LabeledGraph lg(g);
            // Partition verdicts at the definition's radii.
            for (std::uint64_t mu = 1; mu <= 2; ++mu) {
                for (std::uint64_t b = 1; b <= n; ++b) {
                    ++r.cases;
                    PartitionParams params{b, 1, mu};
                    auto verdict = verify_brmu_partition(g, params);
                    const auto& part = verdict.partition;
                    std::vector<char> bc(n, 0);
                    std::vector<char> c(n, 0);
                    std::vector<char> a(n, 0);
                    for (Vertex v = 0; v < n; ++v) {
                        bc[v] = !part.in_a(v);
                        c[v] = part.in_c(v);
                        a[v] = part.in_a(v);
                    }
                    auto m3 = oracle::brute_max_excess(g, bc, static_cast<unsigned>(40 * mu));
                    auto m4 = oracle::brute_max_edges_to(g, c, a, static_cast<unsigned>(20 * mu));
                    const bool bad3 = m3 && *m3 > static_cast<long long>(mu * mu);
                    const bool bad4 = m4 && *m4 > static_cast<long long>(mu);
                    const bool expect = !bad3 && !bad4;
                    if (verdict.pass != expect || (!expect && verdict.property != (bad3 ? 3 : 4))) {
                        fail(r, "partition verdict mismatch b=" + std::to_string(b) + " mu=" + std::to_string(mu) +
                                    " on " + describe_graph(lg));
                    }
                }
            }
            // Small radii, every suffix as the allowed set, prefixes as targets.
            for (unsigned radius = 1; radius <= 3; ++radius) {
                for (Vertex cut = 0; cut < n; ++cut) {
                    std::vector<char> allowed(n, 0);
                    std::vector<char> target(n, 0);
                    for (Vertex v = 0; v < n; ++v) (v >= cut ? allowed : target)[v] = 1;
                    auto mx = oracle::brute_max_excess(g, allowed, radius);
                    for (long long limit = -2; limit <= 3; ++limit) {
                        ++r.cases;
                        auto got = first_excess_violation(g, allowed, radius, limit);
                        const bool expect = mx && *mx > limit;
                        if (got.has_value() != expect) {
                            fail(r, "excess check mismatch radius=" + std::to_string(radius) + " limit=" +
                                        std::to_string(limit) + " on " + describe_graph(lg));
                            continue;
                        }
                        if (got && (got->measured != ball_excess(g, allowed, got->center, radius) ||
                                    got->measured <= limit)) {
                            fail(r, "reported excess witness is wrong on " + describe_graph(lg));
                        }
                        if (got) {
                            for (Vertex v = cut; v < got->center; ++v) {
                                if (ball_excess(g, allowed, v, radius) > limit) {
                                    fail(r, "excess witness is not the smallest center on " + describe_graph(lg));
                                    break;
                                }
                            }
                        }
                    }
                    if (cut == 0) continue;
                    auto me = oracle::brute_max_edges_to(g, allowed, target, radius);
                    for (long long limit = 0; limit <= 3; ++limit) {
                        ++r.cases;
                        auto got = first_edges_to_violation(g, allowed, target, radius, limit);
                        const bool expect = me && *me > limit;
                        if (got.has_value() != expect) {
                            fail(r, "edges-to check mismatch radius=" + std::to_string(radius) + " limit=" +
                                        std::to_string(limit) + " on " + describe_graph(lg));
                            continue;
                        }
                        if (got && got->measured != ball_edges_to(g, allowed, target, got->center, radius)) {
                            fail(r, "reported edges-to witness is wrong on " + describe_graph(lg));
                        }
                    }
                }
            }
        }
    }
    if (r.failures == 0) r.detail = "connected graphs up to " + std::to_string(max_n) + " vertices";
    return r;
}

SuiteResult suite_scattered(std::size_t instances, std::uint64_t seed) {
    SuiteResult r;
    r.name = "scattered-exact";
    SuiteTimer timer(r);
    Rng rng(seed);
    std::size_t fired = 0;
    for (std::size_t i = 0; i < instances; ++i) {
        ++r.cases;
        const bool long_shape = i % 6 >= 4;
        const auto n = long_shape ? 30 + rng.below(51) : 5 + rng.below(36);
        LabeledGraph g;
        switch (i % 6) {
            case 4: g = oracle::path_graph(n); break;
            case 5: g = oracle::cycle_graph(n); break;
            default: g = oracle::random_model_graph(rng, static_cast<int>(i % 4), n, 0);
        }
        const auto r_loc = static_cast<unsigned>(long_shape ? 1 + rng.below(2) : rng.below(3));
        const auto s = static_cast<unsigned>(long_shape ? 1 + rng.below(2) : 1 + rng.below(6));
        std::vector<Vertex> all;
        if (long_shape) {
            // Evenly spaced witnesses keep H connected and long.
            const auto step = 1 + rng.below(2 * r_loc + 1);
            for (Vertex v = 0; v < n && all.size() < 14; v += static_cast<Vertex>(step)) all.push_back(v);
        } else {
            all.resize(n);
            for (Vertex v = 0; v < n; ++v) all[v] = v;
            for (std::size_t k = n; k > 1; --k) std::swap(all[k - 1], all[rng.below(k)]);
            all.resize(std::min<std::size_t>(n, rng.below(15)));
            std::sort(all.begin(), all.end());
        }

        const auto brute = std::min(s, oracle::brute_max_scattered(g.graph(), all, r_loc));
        const auto exact = max_scattered(g.graph(), all, r_loc, s, false);
        const auto fast = max_scattered(g.graph(), all, r_loc, s, true);
        if (fast.shortcut_fired) ++fired;
        if (exact.count != brute || fast.count != exact.count) {
            fail(r, "n=" + std::to_string(n) + " r=" + std::to_string(r_loc) + " s=" + std::to_string(s) +
                        " |W|=" + std::to_string(all.size()) + ": brute " + std::to_string(brute) + ", exact " +
                        std::to_string(exact.count) + ", with shortcut " + std::to_string(fast.count));
        }
    }
    if (r.failures == 0) r.detail = "shortcut fired on " + std::to_string(fired) + " instances";
    return r;
}

SuiteResult suite_peel(const PeelFunction& peel, std::size_t graphs, std::uint64_t seed) {
    SuiteResult r;
    r.name = "peel";
    SuiteTimer timer(r);
    auto expect = [&](const LabeledGraph& g, std::vector<Vertex> want, const std::string& name) {
        ++r.cases;
        if (peel(g.graph()) != want) fail(r, "witness " + name + " gives the wrong peel set");
    };
    expect(oracle::path_graph(5), {0, 1, 2, 3, 4}, "P_5");
    expect(oracle::cycle_graph(5), {}, "C_5");
    {
        std::vector<Edge> e{{0, 1}, {0, 2}, {1, 2}, {2, 3}, {3, 4}, {4, 5}};
        expect(LabeledGraph(Graph(6, e)), {3, 4, 5}, "triangle with pendant path");
    }
    Rng rng(seed);
    for (std::size_t i = 0; i < graphs; ++i) {
        ++r.cases;
        const auto n = 1 + rng.below(80);
        LabeledGraph g = i % 5 == 4 ? oracle::random_tree(rng, n)
                                    : oracle::random_model_graph(rng, static_cast<int>(i % 4), n, 0);
        const auto& graph = g.graph();
        auto z = peel(graph);
        if (!std::is_sorted(z.begin(), z.end())) {
            fail(r, "peel output not sorted: " + describe_graph(g));
            continue;
        }
        for (int k = 0; k < 2; ++k) {
            if (oracle::peel_random_order(graph, rng) != z) {
                fail(r, "peel depends on the removal order: " + describe_graph(g));
                break;
            }
        }
        std::vector<char> in_z(n, 0);
        for (Vertex v : z) in_z[v] = 1;
        // Fixpoint: no vertex outside Z has degree <= 1 in G - Z.
        for (Vertex v = 0; v < n; ++v) {
            if (in_z[v]) continue;
            std::size_t deg = 0;
            for (Vertex w : graph.neighbors(v)) deg += in_z[w] ? 0 : 1;
            if (deg <= 1) {
                fail(r, "peel is not idempotent: " + describe_graph(g));
                break;
            }
        }
        LocalProtrusionPartition part;
        for (Vertex v = 0; v < n; ++v) (in_z[v] ? part.z : part.x).push_back(v);
        auto verdict = verify_protrusion_partition(graph, part, n == 0 ? 1 : n, 1, 1);
        if (!verdict.pass && verdict.property == 4) fail(r, "peel components are not pendant trees: " + describe_graph(g));
    }
    return r;
}

SuiteResult suite_kernel_soundness(std::size_t graphs, std::uint64_t seed) {
    SuiteResult r;
    r.name = "kernel-soundness";
    SuiteTimer timer(r);
    Rng rng(seed);
    RepresentativeCache cache;
    std::size_t fallbacks = 0;
    std::size_t in_total = 0;
    std::size_t out_total = 0;
    for (std::size_t i = 0; i < graphs; ++i) {
        ++r.cases;
        const std::size_t labels = (i / 8) % 2;
        LabeledGraph g;
        switch (i % 8) {
            case 4: g = oracle::random_tree(rng, 2 + rng.below(59)); break;
            case 5: {
                // Cycle with pendant paths.
                const auto k = 3 + rng.below(8);
                std::vector<Edge> e;
                for (Vertex v = 0; v < k; ++v) e.emplace_back(std::min<Vertex>(v, (v + 1) % k), std::max<Vertex>(v, (v + 1) % k));
                auto next = static_cast<Vertex>(k);
                for (Vertex v = 0; v < k && next < 60; ++v) {
                    Vertex prev = v;
                    for (std::size_t t = rng.below(8); t > 0 && next < 60; --t) {
                        e.emplace_back(prev, next);
                        prev = next++;
                    }
                }
                g = LabeledGraph(Graph(next, e));
                break;
            }
            case 6: g = oracle::lollipop_graph(3 + rng.below(3), 1 + rng.below(40)); break;
            case 7: g = oracle::path_graph(1 + rng.below(60)); break;
            default: g = oracle::random_model_graph(rng, static_cast<int>(i % 4), 5 + rng.below(56), 0);
        }
        if (labels > 0) {
            std::vector<std::vector<Vertex>> sets(1);
            for (Vertex v = 0; v < g.vertex_count(); ++v) {
                if (rng.uniform() < 0.3) sets[0].push_back(v);
            }
            g = LabeledGraph(g.graph(), std::move(sets));
        }
        KernelConfig config;
        config.q = static_cast<unsigned>(i % 3);
        config.mu = 1 + (i / 3) % 3;
        auto result = replace_protrusions(g, config, cache);
        fallbacks += result.report.fallbacks;
        in_total += g.vertex_count();
        out_total += result.graph.vertex_count();
        TypeCache types;
        const auto before = types.compute(g, {}, config.q);
        const auto after = types.compute(result.graph, {}, config.q);
        if (before.id != after.id) {
            fail(r, "rank-" + std::to_string(config.q) + " type changed by kernelization: " + describe_graph(g));
            continue;
        }
        if (result.graph.vertex_count() > g.vertex_count()) fail(r, "kernel grew: " + describe_graph(g));
        if (config.q >= 1) {
            for (int k = 0; k < 3; ++k) {
                auto phi = oracle::random_formula(rng, {}, {config.q, 5, labels});
                if (naive_check(g, phi) != naive_check(result.graph, phi)) {
                    fail(r, "kernel disagrees on " + to_string(phi) + ": " + describe_graph(g));
                    break;
                }
            }
        }
    }
    if (r.failures == 0) {
        r.detail = std::to_string(in_total) + " -> " + std::to_string(out_total) + " vertices, " +
                   std::to_string(fallbacks) + " fallbacks";
    }
    return r;
}

SuiteResult suite_oracle_equivalence(std::size_t pairs, std::uint64_t seed) {
    SuiteResult r;
    r.name = "oracle-equivalence";
    SuiteTimer timer(r);
    Rng rng(seed);
    RepresentativeCache cache;
    LocalConfig config;
    std::size_t sat = 0;
    for (std::size_t i = 0; i < pairs; ++i) {
        ++r.cases;
        const std::size_t labels = (i / 4) % 2;
        auto g = oracle::random_model_graph(rng, static_cast<int>(i % 4), 5 + rng.below(36), labels);
        oracle::GnfShape shape;
        shape.omega = {2, 4, labels};
        auto psi = oracle::random_gnf(rng, shape);
        const bool fast = check_gnf(g, psi, config, cache).verdict;
        const bool slow = naive_check(g, oracle::expand_gnf(psi));
        sat += fast ? 1 : 0;
        if (fast != slow) fail(r, "verdicts differ for\n" + to_string(psi) + "on " + describe_graph(g));
    }
    if (r.failures == 0) r.detail = std::to_string(sat) + " SAT / " + std::to_string(pairs - sat) + " UNSAT";
    return r;
}

SuiteResult suite_local_paths(std::size_t trials, std::uint64_t seed) {
    SuiteResult r;
    r.name = "local-kernel-paths";
    SuiteTimer timer(r);
    Rng rng(seed);
    RepresentativeCache cache;
    LocalConfig with_kernel;
    LocalConfig direct;
    direct.use_kernel = false;
    for (std::size_t i = 0; i < trials; ++i) {
        ++r.cases;
        const std::size_t labels = (i / 4) % 2;
        auto g = oracle::random_model_graph(rng, static_cast<int>(i % 4), 2 + rng.below(39), labels);
        auto omega = oracle::random_omega(rng, {2, 5, labels});
        const auto radius = static_cast<unsigned>(rng.below(3));
        const auto v = static_cast<Vertex>(rng.below(g.vertex_count()));
        if (eval_local(g, v, omega, radius, with_kernel, cache) != eval_local(g, v, omega, radius, direct, cache)) {
            fail(r, "kernel and direct local evaluation differ on " + to_string(omega) + " at " + std::to_string(v + 1) +
                        ": " + describe_graph(g));
        }
    }
    return r;
}

std::vector<SuiteResult> run_selftest(const SelftestOptions& options) {
    const bool quick = options.quick;
    const auto seed = options.seed;
    std::vector<SuiteResult> out;
    out.push_back(suite_qtype_faithfulness(quick ? 4 : 5, 1, quick ? 10 : 30, seed));
    out.push_back(suite_ball_reduction(quick ? 6 : 8));
    out.push_back(suite_scattered(quick ? 100 : 500, seed));
    out.push_back(suite_peel(peel_degree_one, quick ? 50 : 200, seed));
    out.push_back(suite_kernel_soundness(quick ? 30 : 100, seed));
    out.push_back(suite_local_paths(quick ? 40 : 200, seed));
    out.push_back(suite_oracle_equivalence(quick ? 40 : 200, seed));
    return out;
}

std::string format_results(const std::vector<SuiteResult>& results) {
    std::string out;
    char buf[160];
    for (const auto& r : results) {
        std::snprintf(buf, sizeof buf, "%-20s %s  cases=%zu failures=%zu time=%.2fs  ", r.name.c_str(),
                      r.passed() ? "PASS" : "FAIL", r.cases, r.failures, r.seconds);
        out += buf;
        out += r.detail;
        out += "\n";
    }
    return out;
}

}  // namespace fomc
