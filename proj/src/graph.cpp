#include "fomc/graph.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fomc {

namespace {

void build_csr(std::size_t n, const std::vector<Edge>& sorted_edges, std::vector<std::size_t>& offsets,
               std::vector<Vertex>& adjacency) {
    offsets.assign(n + 1, 0);
    for (auto [u, v] : sorted_edges) {
        ++offsets[u + 1];
        ++offsets[v + 1];
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    adjacency.assign(offsets.back(), 0);
    std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
    for (auto [u, v] : sorted_edges) {
        adjacency[cursor[u]++] = v;
        adjacency[cursor[v]++] = u;
    }
    for (std::size_t v = 0; v < n; ++v) {
        std::sort(adjacency.begin() + static_cast<std::ptrdiff_t>(offsets[v]),
                  adjacency.begin() + static_cast<std::ptrdiff_t>(offsets[v + 1]));
    }
}

Edge normalized(Edge e) { return e.first < e.second ? e : Edge{e.second, e.first}; }

}  // namespace

Graph::Graph(std::size_t n, std::span<const Edge> edges) {
    std::vector<Edge> list;
    list.reserve(edges.size());
    for (auto e : edges) {
        if (e.first >= n || e.second >= n) {
            throw std::invalid_argument("edge endpoint out of range: " + std::to_string(e.first) + "-" +
                                        std::to_string(e.second));
        }
        if (e.first == e.second) throw std::invalid_argument("self-loop at vertex " + std::to_string(e.first));
        list.push_back(normalized(e));
    }
    std::sort(list.begin(), list.end());
    if (auto dup = std::adjacent_find(list.begin(), list.end()); dup != list.end()) {
        throw std::invalid_argument("duplicate edge " + std::to_string(dup->first) + "-" +
                                    std::to_string(dup->second));
    }
    build_csr(n, list, offsets_, adjacency_);
}

Graph Graph::erased(std::size_t n, std::vector<Edge> edges) {
    std::erase_if(edges, [](Edge e) { return e.first == e.second; });
    for (auto& e : edges) e = normalized(e);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph(n, edges);
}

bool Graph::has_edge(Vertex u, Vertex v) const noexcept {
    if (degree(u) > degree(v)) std::swap(u, v);
    auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (Vertex u = 0; u < vertex_count(); ++u) {
        for (Vertex v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

LabeledGraph::LabeledGraph(Graph g, std::size_t label_count)
    : LabeledGraph(std::move(g), std::vector<std::vector<Vertex>>(label_count)) {}

LabeledGraph::LabeledGraph(Graph g, std::vector<std::vector<Vertex>> labels)
    : graph_(std::move(g)), labels_(std::move(labels)) {
    if (labels_.size() > kMaxLabels) throw std::invalid_argument("too many labels");
    const auto n = graph_.vertex_count();
    masks_.assign(n, 0);
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        auto& set = labels_[i];
        std::sort(set.begin(), set.end());
        set.erase(std::unique(set.begin(), set.end()), set.end());
        for (Vertex v : set) {
            if (v >= n) throw std::invalid_argument("label vertex out of range: " + std::to_string(v));
            masks_[v] |= std::uint64_t{1} << i;
        }
    }
}

LabeledGraph LabeledGraph::with_extra_label(std::span<const Vertex> marked) const {
    auto labels = labels_;
    labels.emplace_back(marked.begin(), marked.end());
    return LabeledGraph(graph_, std::move(labels));
}

InducedSubgraph induced_subgraph(const LabeledGraph& g, std::span<const Vertex> members) {
    const auto& parent = g.graph();
    std::vector<Vertex> local(parent.vertex_count(), kUnreachable);
    for (std::size_t i = 0; i < members.size(); ++i) local[members[i]] = static_cast<Vertex>(i);

    std::vector<Edge> edges;
    for (std::size_t i = 0; i < members.size(); ++i) {
        for (Vertex w : parent.neighbors(members[i])) {
            if (local[w] != kUnreachable && local[w] > i) edges.emplace_back(static_cast<Vertex>(i), local[w]);
        }
    }
    std::vector<std::vector<Vertex>> labels(g.label_count());
    for (std::size_t l = 0; l < g.label_count(); ++l) {
        for (Vertex v : g.label_set(l)) {
            if (local[v] != kUnreachable) labels[l].push_back(local[v]);
        }
    }
    return {LabeledGraph(Graph(members.size(), edges), std::move(labels)),
            std::vector<Vertex>(members.begin(), members.end())};
}

Vertex Ball::local_center() const {
    auto it = std::lower_bound(back_map.begin(), back_map.end(), center);
    return static_cast<Vertex>(it - back_map.begin());
}

std::vector<unsigned> bfs_distances(const Graph& g, Vertex src, unsigned cutoff, std::span<const char> allowed) {
    std::vector<unsigned> dist(g.vertex_count(), kUnreachable);
    std::vector<Vertex> frontier{src};
    dist[src] = 0;
    for (std::size_t head = 0; head < frontier.size(); ++head) {
        const Vertex u = frontier[head];
        if (dist[u] >= cutoff) continue;
        for (Vertex w : g.neighbors(u)) {
            if (dist[w] != kUnreachable || (!allowed.empty() && !allowed[w])) continue;
            dist[w] = dist[u] + 1;
            frontier.push_back(w);
        }
    }
    return dist;
}

std::vector<Vertex> ball_members(const Graph& g, Vertex v, unsigned r, std::span<const char> allowed) {
    // Plain BFS with early cutoff; distances kept in a sparse side table so
    // small balls in large graphs stay cheap.
    std::vector<Vertex> order{v};
    std::vector<unsigned> depth{0};
    std::vector<char> seen;
    auto visited = [&](Vertex w) -> bool {
        if (seen.empty()) {
            return std::find(order.begin(), order.end(), w) != order.end();
        }
        return seen[w];
    };
    // Switch to a dense marker once the ball gets bigger than a handful.
    for (std::size_t head = 0; head < order.size(); ++head) {
        if (seen.empty() && order.size() > 32) {
            seen.assign(g.vertex_count(), 0);
            for (Vertex x : order) seen[x] = 1;
        }
        if (depth[head] >= r) continue;
        for (Vertex w : g.neighbors(order[head])) {
            if ((!allowed.empty() && !allowed[w]) || visited(w)) continue;
            order.push_back(w);
            depth.push_back(depth[head] + 1);
            if (!seen.empty()) seen[w] = 1;
        }
    }
    std::sort(order.begin(), order.end());
    return order;
}

Ball ball(const LabeledGraph& g, Vertex v, unsigned r) {
    if (v >= g.vertex_count()) throw std::out_of_range("ball center out of range: " + std::to_string(v));
    Ball b;
    b.center = v;
    b.radius = r;
    b.members = ball_members(g.graph(), v, r);
    auto sub = induced_subgraph(g, b.members);
    b.induced = std::move(sub.graph);
    b.back_map = std::move(sub.back_map);
    return b;
}

long long edge_excess(const Graph& g) {
    return static_cast<long long>(g.edge_count()) - static_cast<long long>(g.vertex_count());
}

std::vector<std::uint32_t> component_ids(const Graph& g, std::span<const char> allowed, std::uint32_t* count) {
    const auto n = g.vertex_count();
    std::vector<std::uint32_t> id(n, kNoComponent);
    std::uint32_t next = 0;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n; ++s) {
        if (id[s] != kNoComponent || (!allowed.empty() && !allowed[s])) continue;
        id[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            Vertex u = stack.back();
            stack.pop_back();
            for (Vertex w : g.neighbors(u)) {
                if (id[w] != kNoComponent || (!allowed.empty() && !allowed[w])) continue;
                id[w] = next;
                stack.push_back(w);
            }
        }
        ++next;
    }
    if (count) *count = next;
    return id;
}

std::vector<std::vector<Vertex>> connected_components(const Graph& g) {
    std::uint32_t count = 0;
    auto id = component_ids(g, {}, &count);
    std::vector<std::vector<Vertex>> out(count);
    for (Vertex v = 0; v < g.vertex_count(); ++v) out[id[v]].push_back(v);
    return out;
}

std::uint64_t triangle_count(const Graph& g) {
    // Orient edges from lower to higher (degree, index) rank and intersect
    // forward neighborhoods.
    const auto n = g.vertex_count();
    auto before = [&](Vertex a, Vertex b) {
        return g.degree(a) < g.degree(b) || (g.degree(a) == g.degree(b) && a < b);
    };
    std::vector<std::vector<Vertex>> forward(n);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex w : g.neighbors(u)) {
            if (before(u, w)) forward[u].push_back(w);
        }
    }
    std::vector<char> mark(n, 0);
    std::uint64_t count = 0;
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex w : forward[u]) mark[w] = 1;
        for (Vertex w : forward[u]) {
            for (Vertex x : forward[w]) count += mark[x];
        }
        for (Vertex w : forward[u]) mark[w] = 0;
    }
    return count;
}

DegreeStats degree_stats(const Graph& g) {
    DegreeStats s;
    const auto n = g.vertex_count();
    double sum = 0.0;
    double sum_sq = 0.0;
    for (Vertex v = 0; v < n; ++v) {
        const auto d = g.degree(v);
        s.max_degree = std::max(s.max_degree, d);
        sum += static_cast<double>(d);
        sum_sq += static_cast<double>(d) * static_cast<double>(d);
    }
    s.histogram.assign(n == 0 ? 0 : s.max_degree + 1, 0);
    for (Vertex v = 0; v < n; ++v) ++s.histogram[g.degree(v)];
    s.ccdf.assign(s.histogram.size(), 0.0);
    std::uint64_t tail = 0;
    for (std::size_t d = s.histogram.size(); d-- > 0;) {
        tail += s.histogram[d];
        s.ccdf[d] = static_cast<double>(tail) / static_cast<double>(n);
    }
    s.second_order_average = sum > 0 ? sum_sq / sum : 0.0;
    s.mean_degree = n > 0 ? sum / static_cast<double>(n) : 0.0;
    return s;
}

AdjacencyMatrix::AdjacencyMatrix(const Graph& g) : words_((g.vertex_count() + 63) / 64) {
    bits_.assign(words_ * g.vertex_count(), 0);
    for (Vertex u = 0; u < g.vertex_count(); ++u) {
        for (Vertex v : g.neighbors(u)) bits_[u * words_ + (v >> 6)] |= std::uint64_t{1} << (v & 63);
    }
}

}  // namespace fomc
