#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

#include "fomc/oracles.hpp"
#include "fomc/random_models.hpp"

namespace fomc::oracle {

namespace {

unsigned pair_bit(unsigned n, unsigned i, unsigned j) {
    if (i > j) std::swap(i, j);
    return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

// Stable color refinement; colors are ranks of sorted signatures.
std::vector<unsigned> refine(const Graph& g) {
    const auto n = static_cast<unsigned>(g.vertex_count());
    std::vector<unsigned> color(n, 0);
    for (unsigned round = 0; round <= n; ++round) {
        std::vector<std::vector<unsigned>> sig(n);
        for (unsigned v = 0; v < n; ++v) {
            sig[v].push_back(color[v]);
            std::vector<unsigned> nb;
            for (Vertex w : g.neighbors(v)) nb.push_back(color[w]);
            std::sort(nb.begin(), nb.end());
            sig[v].insert(sig[v].end(), nb.begin(), nb.end());
        }
        std::map<std::vector<unsigned>, unsigned> rank;
        for (const auto& s : sig) rank.emplace(s, 0);
        unsigned next = 0;
        for (auto& [s, r] : rank) r = next++;
        std::vector<unsigned> updated(n);
        for (unsigned v = 0; v < n; ++v) updated[v] = rank[sig[v]];
        if (updated == color) break;
        color = std::move(updated);
    }
    return color;
}

}  // namespace

Graph graph_from_mask(unsigned n, std::uint64_t mask) {
    std::vector<Edge> edges;
    for (unsigned i = 0; i < n; ++i) {
        for (unsigned j = i + 1; j < n; ++j) {
            if ((mask >> pair_bit(n, i, j)) & 1U) edges.emplace_back(i, j);
        }
    }
    return Graph(n, edges);
}

void for_each_graph(unsigned n, const std::function<void(const Graph&)>& fn) {
    if (n > 8) throw std::invalid_argument("for_each_graph supports n <= 8");
    const unsigned pairs = n * (n - (n > 0 ? 1 : 0)) / 2;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << pairs); ++mask) fn(graph_from_mask(n, mask));
}

std::uint64_t canonical_code(const Graph& g) {
    const auto n = static_cast<unsigned>(g.vertex_count());
    if (n > 11) throw std::invalid_argument("canonical_code supports n <= 11");
    auto color = refine(g);
    // Vertices grouped by color; permute inside each group.
    std::vector<unsigned> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](unsigned a, unsigned b) { return color[a] < color[b]; });
    std::vector<std::pair<unsigned, unsigned>> groups;
    for (unsigned i = 0; i < n;) {
        unsigned j = i;
        while (j < n && color[order[j]] == color[order[i]]) ++j;
        groups.emplace_back(i, j);
        i = j;
    }
    std::uint64_t best = ~std::uint64_t{0};
    auto evaluate = [&]() {
        std::uint64_t code = 0;
        for (unsigned i = 0; i < n; ++i) {
            for (unsigned j = i + 1; j < n; ++j) {
                if (g.has_edge(order[i], order[j])) code |= std::uint64_t{1} << pair_bit(n, i, j);
            }
        }
        best = std::min(best, code);
    };
    auto rec = [&](auto&& self, std::size_t gi) -> void {
        if (gi == groups.size()) {
            evaluate();
            return;
        }
        auto [lo, hi] = groups[gi];
        std::sort(order.begin() + lo, order.begin() + hi);
        do {
            self(self, gi + 1);
        } while (std::next_permutation(order.begin() + lo, order.begin() + hi));
    };
    rec(rec, 0);
    return n == 0 ? 0 : best;
}

std::vector<Graph> connected_graphs(unsigned n) {
    if (n < 1 || n > 8) throw std::invalid_argument("connected_graphs supports 1 <= n <= 8");
    std::vector<Graph> level{graph_from_mask(1, 0)};
    for (unsigned size = 2; size <= n; ++size) {
        std::set<std::uint64_t> seen;
        std::vector<Graph> next;
        for (const auto& g : level) {
            auto edges = g.edges();
            const unsigned prev = size - 1;
            for (std::uint32_t nb = 1; nb < (1U << prev); ++nb) {
                auto e = edges;
                for (unsigned v = 0; v < prev; ++v) {
                    if ((nb >> v) & 1U) e.emplace_back(v, prev);
                }
                Graph h(size, e);
                auto code = canonical_code(h);
                if (seen.insert(code).second) next.push_back(graph_from_mask(size, code));
            }
        }
        level = std::move(next);
    }
    return level;
}

std::vector<Vertex> peel_random_order(const Graph& g, Rng& rng) {
    const auto n = g.vertex_count();
    std::vector<char> removed(n, 0);
    std::vector<Vertex> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
    bool changed = true;
    while (changed) {
        changed = false;
        for (Vertex v : order) {
            if (removed[v]) continue;
            std::size_t deg = 0;
            for (Vertex w : g.neighbors(v)) deg += removed[w] ? 0 : 1;
            if (deg <= 1) {
                removed[v] = 1;
                changed = true;
            }
        }
    }
    std::vector<Vertex> z;
    for (Vertex v = 0; v < n; ++v) {
        if (removed[v]) z.push_back(v);
    }
    return z;
}

namespace {

LabeledGraph with_random_labels(Graph g, Rng& rng, std::size_t labels) {
    std::vector<std::vector<Vertex>> sets(labels);
    for (auto& s : sets) {
        for (Vertex v = 0; v < g.vertex_count(); ++v) {
            if (rng.uniform() < 0.3) s.push_back(v);
        }
    }
    return LabeledGraph(std::move(g), std::move(sets));
}

}  // namespace

LabeledGraph random_model_graph(Rng& rng, int model, std::size_t n, std::size_t labels) {
    const auto seed = rng.next();
    Graph g;
    switch (model) {
        case 0: g = gen_er(n, n > 0 ? 2.0 / static_cast<double>(n) : 0.0, seed).graph; break;
        case 1: g = gen_chung_lu(n, 3.0, 1.0, seed).graph; break;
        case 2: g = gen_pa(n, 2, seed).graph; break;
        case 3: g = gen_config(integer_power_law_weights(n, 3.0, 1.0), seed).graph; break;
        default: throw std::invalid_argument("model index must be 0..3");
    }
    return with_random_labels(std::move(g), rng, labels);
}

LabeledGraph path_graph(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    return LabeledGraph(Graph(n, e));
}

LabeledGraph cycle_graph(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex i = 0; i + 1 < n; ++i) e.emplace_back(i, i + 1);
    if (n >= 3) e.emplace_back(0, static_cast<Vertex>(n - 1));
    return LabeledGraph(Graph(n, e));
}

LabeledGraph star_graph(std::size_t leaves) {
    std::vector<Edge> e;
    for (Vertex i = 1; i <= leaves; ++i) e.emplace_back(0, i);
    return LabeledGraph(Graph(leaves + 1, e));
}

LabeledGraph complete_graph(std::size_t n) {
    std::vector<Edge> e;
    for (Vertex i = 0; i < n; ++i) {
        for (Vertex j = i + 1; j < n; ++j) e.emplace_back(i, j);
    }
    return LabeledGraph(Graph(n, e));
}

LabeledGraph lollipop_graph(std::size_t k, std::size_t tail) {
    std::vector<Edge> e;
    for (Vertex i = 0; i < k; ++i) {
        for (Vertex j = i + 1; j < k; ++j) e.emplace_back(i, j);
    }
    Vertex prev = 0;
    for (std::size_t t = 0; t < tail; ++t) {
        const auto v = static_cast<Vertex>(k + t);
        e.emplace_back(prev, v);
        prev = v;
    }
    return LabeledGraph(Graph(k + tail, e));
}

LabeledGraph random_tree(Rng& rng, std::size_t n) {
    if (n <= 1) return LabeledGraph(Graph(n, {}));
    if (n == 2) {
        std::vector<Edge> e{{0, 1}};
        return LabeledGraph(Graph(2, e));
    }
    std::vector<Vertex> code(n - 2);
    for (auto& c : code) c = static_cast<Vertex>(rng.below(n));
    std::vector<std::size_t> degree(n, 1);
    for (auto c : code) ++degree[c];
    std::set<Vertex> leaves;
    for (Vertex v = 0; v < n; ++v) {
        if (degree[v] == 1) leaves.insert(v);
    }
    std::vector<Edge> e;
    for (auto c : code) {
        Vertex leaf = *leaves.begin();
        leaves.erase(leaves.begin());
        e.emplace_back(std::min(leaf, c), std::max(leaf, c));
        if (--degree[c] == 1) leaves.insert(c);
    }
    Vertex a = *leaves.begin();
    Vertex b = *std::next(leaves.begin());
    e.emplace_back(a, b);
    return LabeledGraph(Graph(n, e));
}

}  // namespace fomc::oracle
