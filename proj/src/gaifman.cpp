#include "fomc/gaifman.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

namespace fomc {

bool eval_local(const LabeledGraph& g, Vertex v, const Formula& omega, unsigned r, const LocalConfig& config,
                RepresentativeCache& cache) {
    auto free = omega.free_variables();
    if (free.size() != 1) throw std::invalid_argument("omega must have exactly one free variable");
    const std::string& x = *free.begin();
    auto b = ball(g, v, r);
    const Vertex center = b.local_center();
    if (!config.use_kernel) return naive_check(b.induced, omega, {{x, center}});

    auto marked = b.induced.with_extra_label(std::span<const Vertex>(&center, 1));
    const auto marker = marked.label_count() - 1;
    auto sentence = Formula::exists(x, Formula::conjunction(Formula::label(marker, x), omega));
    KernelConfig kc = config.kernel;
    kc.q = sentence.qrank();
    auto kernel = replace_protrusions(marked, kc, cache);
    return naive_check(kernel.graph, sentence);
}

std::vector<Vertex> satisfying_set(const LabeledGraph& g, const Formula& omega, unsigned r, const LocalConfig& config,
                                   RepresentativeCache& cache) {
    std::vector<Vertex> w;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (eval_local(g, v, omega, r, config, cache)) w.push_back(v);
    }
    return w;
}

namespace {

// Maximum independent set of the conflict graph restricted to `alive`,
// capped at `cap`. Branches over the closed neighborhood of a vertex of
// minimum remaining degree.
class CappedIndependentSet {
public:
    explicit CappedIndependentSet(std::vector<std::vector<std::uint32_t>> adj)
        : adj_(std::move(adj)), alive_(adj_.size(), 1), alive_count_(adj_.size()) {}

    unsigned solve(unsigned cap) { return search(cap); }

private:
    unsigned search(unsigned cap) {
        if (cap == 0 || alive_count_ == 0) return 0;
        std::uint32_t pivot = 0;
        std::size_t best_deg = ~std::size_t{0};
        for (std::uint32_t v = 0; v < adj_.size(); ++v) {
            if (!alive_[v]) continue;
            std::size_t d = 0;
            for (auto w : adj_[v]) d += alive_[w];
            if (d < best_deg) {
                best_deg = d;
                pivot = v;
            }
        }
        std::vector<std::uint32_t> options{pivot};
        for (auto w : adj_[pivot]) {
            if (alive_[w]) options.push_back(w);
        }
        unsigned best = 0;
        for (auto u : options) {
            if (!alive_[u]) continue;
            auto removed = remove_closed(u);
            const unsigned got = 1 + search(cap - 1);
            restore(removed);
            best = std::max(best, got);
            if (best == cap) break;
        }
        return best;
    }

    std::vector<std::uint32_t> remove_closed(std::uint32_t u) {
        std::vector<std::uint32_t> removed{u};
        alive_[u] = 0;
        for (auto w : adj_[u]) {
            if (alive_[w]) {
                alive_[w] = 0;
                removed.push_back(w);
            }
        }
        alive_count_ -= removed.size();
        return removed;
    }

    void restore(const std::vector<std::uint32_t>& removed) {
        for (auto w : removed) alive_[w] = 1;
        alive_count_ += removed.size();
    }

    std::vector<std::vector<std::uint32_t>> adj_;
    std::vector<char> alive_;
    std::size_t alive_count_;
};

}  // namespace

ScatteredResult max_scattered(const Graph& g, const std::vector<Vertex>& w_in, unsigned r, unsigned s,
                              bool allow_shortcut) {
    if (s < 1) throw std::invalid_argument("s must be >= 1");
    const auto n = g.vertex_count();
    std::vector<Vertex> w = w_in;
    std::sort(w.begin(), w.end());
    w.erase(std::unique(w.begin(), w.end()), w.end());
    for (Vertex v : w) {
        if (v >= n) throw std::invalid_argument("W vertex out of range");
    }
    ScatteredResult out;
    if (w.empty()) return out;

    // H: everything within distance r of W (multi-source BFS).
    std::vector<unsigned> dist(n, kUnreachable);
    std::vector<Vertex> queue = w;
    for (Vertex v : w) dist[v] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex u = queue[head];
        if (dist[u] >= r) continue;
        for (Vertex x : g.neighbors(u)) {
            if (dist[x] == kUnreachable) {
                dist[x] = dist[u] + 1;
                queue.push_back(x);
            }
        }
    }
    std::vector<char> in_h(n, 0);
    for (Vertex v : queue) in_h[v] = 1;
    std::uint32_t count = 0;
    auto comp = component_ids(g, in_h, &count);
    std::vector<std::vector<Vertex>> w_by_comp(count);
    for (Vertex v : w) w_by_comp[comp[v]].push_back(v);

    const unsigned long long threshold = 12ULL * r * s;
    unsigned total = 0;
    for (const auto& ws : w_by_comp) {
        if (ws.empty()) continue;
        ++out.components;
        if (total >= s) continue;
        if (r == 0) {
            total += static_cast<unsigned>(std::min<std::size_t>(ws.size(), s));
            continue;
        }
        if (allow_shortcut) {
            auto d = bfs_distances(g, ws.front(), kUnreachable, in_h);
            unsigned ecc = 0;
            for (Vertex v = 0; v < n; ++v) {
                if (d[v] != kUnreachable) ecc = std::max(ecc, d[v]);
            }
            if (ecc > threshold) {
                out.shortcut_fired = true;
                total += s;
                continue;
            }
        }
        // Conflict graph: W-pairs at distance <= 2r. Such a path stays
        // within distance r of W, so distances in H are exact here.
        std::vector<std::uint32_t> local(n, ~0U);
        for (std::uint32_t i = 0; i < ws.size(); ++i) local[ws[i]] = i;
        std::vector<std::vector<std::uint32_t>> adj(ws.size());
        for (std::uint32_t i = 0; i < ws.size(); ++i) {
            for (Vertex v : ball_members(g, ws[i], 2 * r, in_h)) {
                if (local[v] != ~0U && local[v] != i) adj[i].push_back(local[v]);
            }
        }
        total += CappedIndependentSet(std::move(adj)).solve(s - std::min(total, s));
    }
    out.count = std::min(total, s);
    return out;
}

GnfOutcome check_gnf(const LabeledGraph& g, const GnfSentence& psi, const LocalConfig& config,
                     RepresentativeCache& cache) {
    const auto start = std::chrono::steady_clock::now();
    GnfOutcome out;
    for (const auto& leaf : psi.leaves) {
        LeafOutcome lo;
        lo.name = leaf.name;
        auto w = satisfying_set(g, leaf.omega, leaf.r, config, cache);
        lo.satisfying = w.size();
        lo.scattered = max_scattered(g.graph(), w, leaf.r, leaf.s, config.diameter_shortcut);
        lo.value = lo.scattered.count >= leaf.s;
        out.leaves.push_back(std::move(lo));
    }
    out.verdict = psi.tree.evaluate([&](std::size_t i) { return out.leaves[i].value; });
    out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace fomc
