#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace fomc {

// Vertex indices are 0-based. Index i is the canonical position v_{i+1}:
// generators emit vertices in this order and the file format preserves it.
using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;

/// Immutable simple undirected graph in CSR form.
class Graph {
public:
    Graph() = default;

    /// Builds a simple graph. Throws std::invalid_argument on a self-loop,
    /// an endpoint out of range or a repeated unordered pair.
    Graph(std::size_t n, std::span<const Edge> edges);

    /// Builds the erased simple graph of a multigraph: loops are dropped
    /// and parallel edges merged.
    static Graph erased(std::size_t n, std::vector<Edge> edges);

    std::size_t vertex_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return adjacency_.size() / 2; }

    std::span<const Vertex> neighbors(Vertex v) const noexcept {
        return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
    }
    std::size_t degree(Vertex v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

    /// O(log deg) membership test on the sorted neighbor list.
    bool has_edge(Vertex u, Vertex v) const noexcept;

    /// All edges (u, v) with u < v in lexicographic order.
    std::vector<Edge> edges() const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::size_t> offsets_;
    std::vector<Vertex> adjacency_;
};

/// A graph together with label sets P_1..P_l. Label i is stored 0-based.
class LabeledGraph {
public:
    static constexpr std::size_t kMaxLabels = 64;

    LabeledGraph() = default;
    explicit LabeledGraph(Graph g, std::size_t label_count = 0);
    /// Each label set is sorted and deduplicated; throws std::invalid_argument
    /// on a vertex out of range or more than kMaxLabels labels.
    LabeledGraph(Graph g, std::vector<std::vector<Vertex>> labels);

    const Graph& graph() const noexcept { return graph_; }
    std::size_t vertex_count() const noexcept { return graph_.vertex_count(); }
    std::size_t label_count() const noexcept { return labels_.size(); }
    std::span<const Vertex> label_set(std::size_t i) const noexcept { return labels_[i]; }
    const std::vector<std::vector<Vertex>>& label_sets() const noexcept { return labels_; }

    /// Bit i is set iff v carries label i.
    std::uint64_t label_mask(Vertex v) const noexcept { return masks_.empty() ? 0 : masks_[v]; }
    bool has_label(Vertex v, std::size_t i) const noexcept { return (label_mask(v) >> i) & 1U; }

    /// Copy with one extra label holding exactly `marked`.
    LabeledGraph with_extra_label(std::span<const Vertex> marked) const;

    friend bool operator==(const LabeledGraph& a, const LabeledGraph& b) {
        return a.graph_ == b.graph_ && a.labels_ == b.labels_;
    }

private:
    Graph graph_;
    std::vector<std::vector<Vertex>> labels_;
    std::vector<std::uint64_t> masks_;
};

/// Induced subgraph on a sorted vertex subset, with the map back to the parent.
struct InducedSubgraph {
    LabeledGraph graph;
    std::vector<Vertex> back_map;
};

InducedSubgraph induced_subgraph(const LabeledGraph& g, std::span<const Vertex> members);

/// Radius-bounded ball N_r(center) and its induced labeled subgraph.
struct Ball {
    Vertex center = 0;
    unsigned radius = 0;
    std::vector<Vertex> members;  // sorted by parent index
    LabeledGraph induced;
    std::vector<Vertex> back_map;  // induced index -> parent index

    /// Position of the center inside `induced`.
    Vertex local_center() const;
};

/// Throws std::out_of_range if v is not a vertex of g.
Ball ball(const LabeledGraph& g, Vertex v, unsigned r);

/// Vertices within distance r of v (sorted). `allowed`, if non-empty, restricts
/// the search to the induced subgraph on vertices with allowed[x] set.
std::vector<Vertex> ball_members(const Graph& g, Vertex v, unsigned r,
                                 std::span<const char> allowed = {});

inline constexpr unsigned kUnreachable = ~0U;

/// BFS distances from src, truncated at `cutoff` (farther vertices get kUnreachable).
std::vector<unsigned> bfs_distances(const Graph& g, Vertex src, unsigned cutoff = kUnreachable,
                                    std::span<const char> allowed = {});

/// |E| - |V|.
long long edge_excess(const Graph& g);

/// Components sorted internally and ordered by smallest member.
std::vector<std::vector<Vertex>> connected_components(const Graph& g);

/// Component id per vertex (ids in order of smallest member); vertices with
/// allowed[v] == 0 get kNoComponent.
inline constexpr std::uint32_t kNoComponent = ~0U;
std::vector<std::uint32_t> component_ids(const Graph& g, std::span<const char> allowed,
                                         std::uint32_t* count = nullptr);

std::uint64_t triangle_count(const Graph& g);

struct DegreeStats {
    std::vector<std::uint64_t> histogram;  // histogram[d] = #vertices of degree d
    std::vector<double> ccdf;              // ccdf[d] = fraction with degree >= d
    double second_order_average = 0.0;     // sum deg^2 / sum deg, 0 when m = 0
    double mean_degree = 0.0;
    std::size_t max_degree = 0;
};

DegreeStats degree_stats(const Graph& g);

/// Dense adjacency bit matrix for repeated O(1) edge tests on small graphs.
class AdjacencyMatrix {
public:
    explicit AdjacencyMatrix(const Graph& g);
    bool operator()(Vertex u, Vertex v) const noexcept {
        return (bits_[u * words_ + (v >> 6)] >> (v & 63)) & 1U;
    }

private:
    std::size_t words_ = 0;
    std::vector<std::uint64_t> bits_;
};

}  // namespace fomc
