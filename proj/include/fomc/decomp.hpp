#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fomc/graph.hpp"

namespace fomc {

/// base^exp, saturating at cap.
std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap);

/// r * mu^7 + mu, saturating at UINT64_MAX.
std::uint64_t protrusion_degree_threshold(std::uint64_t r, std::uint64_t mu);

struct PartitionParams {
    std::uint64_t b = 1;
    std::uint64_t r = 1;
    std::uint64_t mu = 5;
};

/// Prefix partition of the canonical ordering: A = [0, a_end),
/// B = [a_end, b_end), C = [b_end, n).
struct CanonicalPartition {
    std::size_t n = 0;
    std::size_t a_end = 0;
    std::size_t b_end = 0;

    static CanonicalPartition build(std::size_t n, const PartitionParams& params);

    bool in_a(Vertex v) const noexcept { return v < a_end; }
    bool in_b(Vertex v) const noexcept { return v >= a_end && v < b_end; }
    bool in_c(Vertex v) const noexcept { return v >= b_end; }
};

struct PartitionVerdict {
    bool pass = true;
    int property = 0;         // 3 (edge excess) or 4 (edges into A) on failure
    Vertex center = 0;        // smallest violating center
    long long measured = 0;   // value of the violating ball
    long long limit = 0;
    CanonicalPartition partition;
};

/// Checks the canonical partition for params.b: every radius-40*mu*r ball of
/// G[B u C] centered in B u C has edge excess <= mu^2, and every
/// radius-20*mu*r ball of G[C] centered in C has <= mu edges into A.
/// Checking maximal balls is exact: neighborhoods are connected subgraphs of
/// the ball around their center, and both measures are monotone there.
PartitionVerdict verify_brmu_partition(const Graph& g, const PartitionParams& params);

/// Smallest b for which the canonical partition verifies, by ascending scan
/// (b = n always verifies).
std::uint64_t minimal_b(const Graph& g, std::uint64_t r, std::uint64_t mu);

// Ball measures restricted to the induced subgraph on `allowed`.

/// Edge excess of the radius-`radius` ball around v inside G[allowed].
long long ball_excess(const Graph& g, std::span<const char> allowed, Vertex v, std::uint64_t radius);
/// Edges between the radius-`radius` ball around v inside G[allowed] and `target`.
long long ball_edges_to(const Graph& g, std::span<const char> allowed, std::span<const char> target, Vertex v,
                        std::uint64_t radius);

struct BallViolation {
    Vertex center = 0;
    long long measured = 0;
};

/// Smallest allowed center whose ball excess exceeds `limit`.
std::optional<BallViolation> first_excess_violation(const Graph& g, std::span<const char> allowed,
                                                    std::uint64_t radius, long long limit);
/// Smallest allowed center whose ball has more than `limit` edges into `target`.
std::optional<BallViolation> first_edges_to_violation(const Graph& g, std::span<const char> allowed,
                                                      std::span<const char> target, std::uint64_t radius,
                                                      long long limit);

/// Fixpoint of repeatedly deleting vertices of degree <= 1: the complement
/// of the 2-core. Each component of G[Z] is a tree with at most one edge
/// leaving Z. Returned sorted.
std::vector<Vertex> peel_degree_one(const Graph& g);

struct PComponent {
    std::vector<Vertex> vertices;  // sorted
    std::vector<Vertex> boundary;  // neighbors outside P and Z, sorted
};

struct ProtrusionSkeleton {
    std::vector<Vertex> z;
    std::vector<Vertex> p;
    std::vector<char> in_z;
    std::vector<char> in_p;
    std::vector<PComponent> components;               // of G[P], by smallest vertex
    std::vector<std::vector<Vertex>> s_family;        // distinct boundaries of size <= mu, sorted
    std::uint64_t degree_threshold = 0;               // r*mu^7 + mu

    std::size_t max_component_size() const;
};

/// Z from peel_degree_one; P = vertices outside Z with degree <= r*mu^7+mu
/// in G - Z; boundaries of the components of G[P] in V - (P u Z).
ProtrusionSkeleton protrusion_skeleton(const Graph& g, std::uint64_t r, std::uint64_t mu);

struct LocalProtrusionPartition {
    std::vector<Vertex> x;
    std::vector<Vertex> y;
    std::vector<Vertex> z;
};

struct ProtrusionVerdict {
    bool pass = true;
    int property = 0;  // 1..5 on failure
    std::string detail;
};

/// Literal check of the five local-protrusion-partition properties.
ProtrusionVerdict verify_protrusion_partition(const Graph& g, const LocalProtrusionPartition& part,
                                              std::uint64_t b, std::uint64_t r, std::uint64_t mu);

enum class DegreeRegime { Constant, Logarithmic, Polynomial };

/// 2 for alpha > 3, ln(n) for alpha = 3, n^(3-alpha) for alpha < 3.
double d_hat(double alpha, std::size_t n);
DegreeRegime d_tilde_regime(double alpha);
std::string to_string(DegreeRegime regime);

}  // namespace fomc
