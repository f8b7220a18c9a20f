#include <algorithm>
#include <bit>
#include <stdexcept>

#include "fomc/oracles.hpp"

namespace fomc::oracle {

namespace {

std::vector<std::uint32_t> adjacency_masks(const Graph& g) {
    if (g.vertex_count() > 16) throw std::invalid_argument("brute-force oracles support n <= 16");
    std::vector<std::uint32_t> adj(g.vertex_count(), 0);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        for (Vertex w : g.neighbors(v)) adj[v] |= 1U << w;
    }
    return adj;
}

// Eccentricity of c inside G[set], or ~0U if G[set] is disconnected.
unsigned eccentricity(const std::vector<std::uint32_t>& adj, std::uint32_t set, unsigned c) {
    std::uint32_t seen = 1U << c;
    std::uint32_t frontier = seen;
    unsigned depth = 0;
    while (true) {
        std::uint32_t next = 0;
        for (std::uint32_t f = frontier; f; f &= f - 1) next |= adj[std::countr_zero(f)];
        next &= set & ~seen;
        if (!next) break;
        seen |= next;
        frontier = next;
        ++depth;
    }
    return seen == set ? depth : ~0U;
}

// Maximum of measure(set) over the connected induced subgraphs of
// G[allowed] with radius <= radius.
template <class Measure>
std::optional<long long> max_over_neighborhoods(const Graph& g, std::span<const char> allowed, unsigned radius,
                                                Measure&& measure) {
    auto adj = adjacency_masks(g);
    std::uint32_t universe = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (allowed[v]) universe |= 1U << v;
    }
    std::optional<long long> best;
    for (std::uint32_t set = universe; set; set = (set - 1) & universe) {
        bool ok = false;
        for (std::uint32_t c = set; c && !ok; c &= c - 1) {
            ok = eccentricity(adj, set, std::countr_zero(c)) <= radius;
        }
        if (!ok) continue;
        const long long value = measure(adj, set);
        if (!best || value > *best) best = value;
    }
    return best;
}

}  // namespace

std::optional<long long> brute_max_excess(const Graph& g, std::span<const char> allowed, unsigned radius) {
    return max_over_neighborhoods(g, allowed, radius, [&](const std::vector<std::uint32_t>& adj, std::uint32_t set) {
        long long twice = 0;
        for (std::uint32_t s = set; s; s &= s - 1) twice += std::popcount(adj[std::countr_zero(s)] & set);
        return twice / 2 - std::popcount(set);
    });
}

std::optional<long long> brute_max_edges_to(const Graph& g, std::span<const char> allowed,
                                            std::span<const char> target, unsigned radius) {
    std::uint32_t tmask = 0;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (target[v]) tmask |= 1U << v;
    }
    return max_over_neighborhoods(g, allowed, radius, [&](const std::vector<std::uint32_t>& adj, std::uint32_t set) {
        long long edges = 0;
        for (std::uint32_t s = set; s; s &= s - 1) edges += std::popcount(adj[std::countr_zero(s)] & tmask);
        return edges;
    });
}

unsigned brute_max_scattered(const Graph& g, const std::vector<Vertex>& w, unsigned r) {
    if (w.size() > 20) throw std::invalid_argument("brute_max_scattered supports |W| <= 20");
    const auto k = w.size();
    std::vector<std::uint32_t> conflict(k, 0);
    for (std::size_t i = 0; i < k; ++i) {
        auto d = bfs_distances(g, w[i], 2 * r);
        for (std::size_t j = 0; j < k; ++j) {
            if (i != j && d[w[j]] != kUnreachable) conflict[i] |= 1U << j;
        }
    }
    unsigned best = 0;
    for (std::uint32_t set = 0; set < (1U << k); ++set) {
        const auto size = static_cast<unsigned>(std::popcount(set));
        if (size <= best) continue;
        bool ok = true;
        for (std::uint32_t s = set; s && ok; s &= s - 1) ok = (conflict[std::countr_zero(s)] & set) == 0;
        if (ok) best = size;
    }
    return best;
}

}  // namespace fomc::oracle
