#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "fomc/graph.hpp"
#include "fomc/qtype.hpp"

namespace fomc {

struct KernelConfig {
    unsigned q = 2;
    std::uint64_t r = 1;
    std::uint64_t mu = 1;
    unsigned rep_cap = 6;      // largest representative tried; at most 7
    unsigned tree_chunk = 8;   // pendant accumulator size that triggers a reduction
    std::size_t max_part = 64; // protrusions larger than this are left alone

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const;
};

struct KernelReport {
    std::size_t input_vertices = 0;
    std::size_t input_edges = 0;
    std::size_t output_vertices = 0;
    std::size_t output_edges = 0;
    std::size_t protrusions_replaced = 0;
    std::size_t trees_reduced = 0;
    std::size_t fallbacks = 0;       // no representative within rep_cap
    std::size_t skipped_large = 0;   // protrusions above max_part
    double wall_seconds = 0.0;
};

enum class RepresentativeFamily : std::uint8_t { Connected, Trees };

struct Representative {
    LabeledGraph graph;
    std::vector<Vertex> tuple;
    bool is_input = false;  // no strictly smaller representative exists (or none within cap)
    bool fallback = false;  // input larger than cap and nothing within cap matched
};

/// Minimal representatives per q-type, filled lazily by enumerating small
/// connected labeled graphs in a fixed order. Owns the TypeCache its types
/// live in. Calls are serialized.
class RepresentativeCache {
public:
    RepresentativeCache();
    ~RepresentativeCache();
    RepresentativeCache(const RepresentativeCache&) = delete;
    RepresentativeCache& operator=(const RepresentativeCache&) = delete;

    TypeCache& types() noexcept { return types_; }

    /// Smallest graph (first in enumeration order) with the same rank-q type
    /// as (h, u), searched over sizes |u|..min(cap, |h|-1). Candidates have
    /// the tuple on their first |u| vertices. Returns h itself when nothing
    /// smaller matches. Throws std::invalid_argument on an invalid or
    /// repeated tuple entry or a disconnected h.
    Representative minimal(const LabeledGraph& h, std::span<const Vertex> u, unsigned q, unsigned cap,
                           RepresentativeFamily family = RepresentativeFamily::Connected);

    /// Number of candidate graphs typed so far.
    std::size_t candidates_typed() const noexcept { return typed_; }

private:
    struct Shapes;
    struct Entry;
    using Key = std::vector<std::uint64_t>;

    const Shapes& shapes(unsigned s, unsigned k, RepresentativeFamily family);
    void explore(Entry& entry, const Key& key, unsigned s);

    std::mutex mutex_;
    TypeCache types_;
    std::map<std::vector<unsigned>, std::unique_ptr<Shapes>> shapes_;
    std::map<Key, std::unique_ptr<Entry>> entries_;
    std::size_t typed_ = 0;
};

Representative minimal_representative(RepresentativeCache& cache, const LabeledGraph& h, std::span<const Vertex> u,
                                      unsigned q, unsigned cap);

struct SpliceResult {
    LabeledGraph graph;
    bool changed = false;
    bool fallback = false;
};

/// Replaces g[part] by a rank-q representative glued along u. Every edge
/// leaving `part` must start at a vertex of u (std::invalid_argument
/// otherwise). Vertices outside part-u keep their relative order; new
/// vertices are appended.
SpliceResult replace_part(const LabeledGraph& g, std::span<const Vertex> part, std::span<const Vertex> u,
                          const KernelConfig& config, RepresentativeCache& cache);

/// Shrinks every pendant tree (components of G[z]) bottom-up to rank-q
/// equivalent trees. `z` must equal peel_degree_one(g).
LabeledGraph reduce_trees(const LabeledGraph& g, std::span<const Vertex> z, const KernelConfig& config,
                          RepresentativeCache& cache, KernelReport* report = nullptr);

struct KernelResult {
    LabeledGraph graph;
    KernelReport report;
};

/// Peel, reduce pendant trees, replace small protrusions per boundary, and
/// reduce trees again. The output is rank-q equivalent to g.
KernelResult replace_protrusions(const LabeledGraph& g, const KernelConfig& config, RepresentativeCache& cache);

}  // namespace fomc
