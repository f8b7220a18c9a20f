#include "fomc/decomp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace fomc {

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp, std::uint64_t cap) {
    std::uint64_t result = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (base != 0 && result > cap / base) return cap;
        result *= base;
        if (result >= cap) return cap;
    }
    return std::min(result, cap);
}

std::uint64_t protrusion_degree_threshold(std::uint64_t r, std::uint64_t mu) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    const std::uint64_t mu7 = saturating_pow(mu, 7, kMax);
    if (r != 0 && mu7 > kMax / r) return kMax;
    const std::uint64_t prod = r * mu7;
    return prod > kMax - mu ? kMax : prod + mu;
}

CanonicalPartition CanonicalPartition::build(std::size_t n, const PartitionParams& params) {
    CanonicalPartition p;
    p.n = n;
    p.a_end = static_cast<std::size_t>(std::min<std::uint64_t>(params.b, n));
    const auto b_pow = saturating_pow(params.b, params.mu, n);
    p.b_end = std::max(p.a_end, static_cast<std::size_t>(std::min<std::uint64_t>(b_pow, n)));
    return p;
}

namespace {

// Reusable BFS state for many small ball scans over one graph.
class BallScanner {
public:
    explicit BallScanner(const Graph& g) : g_(g), depth_(g.vertex_count(), kUnreachable) {}

    // Grows the ball around v inside G[allowed] vertex by vertex and
    // accumulates `gain(w)` for each added vertex w. Returns the total, or
    // stops early once it exceeds `stop_above`.
    template <class Gain>
    long long grow(Vertex v, std::span<const char> allowed, std::uint64_t radius, long long start,
                   long long stop_above, Gain&& gain) {
        long long total = start;
        order_.clear();
        order_.push_back(v);
        depth_[v] = 0;
        total += gain(v);
        for (std::size_t head = 0; head < order_.size() && total <= stop_above; ++head) {
            const Vertex u = order_[head];
            if (depth_[u] >= radius) continue;
            for (Vertex w : g_.neighbors(u)) {
                if (!allowed[w] || depth_[w] != kUnreachable) continue;
                depth_[w] = depth_[u] + 1;
                order_.push_back(w);
                total += gain(w);
                if (total > stop_above) break;
            }
        }
        return total;
    }

    bool inside(Vertex w) const { return depth_[w] != kUnreachable; }

    void reset() {
        for (Vertex w : order_) depth_[w] = kUnreachable;
        order_.clear();
    }

private:
    const Graph& g_;
    std::vector<unsigned> depth_;
    std::vector<Vertex> order_;
};

long long scan_excess(BallScanner& scan, const Graph& g, std::span<const char> allowed, Vertex v,
                      std::uint64_t radius, long long stop_above) {
    // Each vertex joins with its edges to earlier members: -1 + #such edges.
    auto gain = [&](Vertex w) {
        long long edges = 0;
        for (Vertex x : g.neighbors(w)) {
            if (x != w && scan.inside(x)) ++edges;
        }
        // `w` itself is already marked; it never counts as its own neighbor.
        return edges - 1;
    };
    const long long value = scan.grow(v, allowed, radius, 0, stop_above, gain);
    scan.reset();
    return value;
}

long long scan_edges_to(BallScanner& scan, const Graph& g, std::span<const char> allowed,
                        std::span<const char> target, Vertex v, std::uint64_t radius, long long stop_above) {
    auto gain = [&](Vertex w) {
        long long edges = 0;
        for (Vertex x : g.neighbors(w)) edges += target[x] ? 1 : 0;
        return edges;
    };
    const long long value = scan.grow(v, allowed, radius, 0, stop_above, gain);
    scan.reset();
    return value;
}

// Shared driver: per component of G[allowed], skip it when its total
// measure is within the limit (balls are sub-structures of the component);
// when its diameter is at most the radius every ball is the component, so
// its smallest vertex violates; otherwise scan centers in order.
template <class Total, class Scan>
std::optional<BallViolation> first_violation(const Graph& g, std::span<const char> allowed, std::uint64_t radius,
                                             long long limit, Total&& component_total, Scan&& scan) {
    std::uint32_t count = 0;
    auto comp = component_ids(g, allowed, &count);
    std::vector<std::vector<Vertex>> members(count);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        if (comp[v] != kNoComponent) members[comp[v]].push_back(v);
    }
    std::optional<BallViolation> best;
    for (const auto& verts : members) {
        if (best && verts.front() > best->center) break;
        const long long total = component_total(verts);
        if (total <= limit) continue;
        auto dist = bfs_distances(g, verts.front(), kUnreachable, allowed);
        unsigned ecc = 0;
        for (Vertex v : verts) ecc = std::max(ecc, dist[v]);
        if (2ULL * ecc <= radius) {
            best = BallViolation{verts.front(), total};
            continue;
        }
        for (Vertex v : verts) {
            if (best && v > best->center) break;
            const long long value = scan(v, limit);
            if (value > limit) {
                best = BallViolation{v, scan(v, std::numeric_limits<long long>::max())};
                break;
            }
        }
    }
    return best;
}

}  // namespace

long long ball_excess(const Graph& g, std::span<const char> allowed, Vertex v, std::uint64_t radius) {
    BallScanner scan(g);
    return scan_excess(scan, g, allowed, v, radius, std::numeric_limits<long long>::max());
}

long long ball_edges_to(const Graph& g, std::span<const char> allowed, std::span<const char> target, Vertex v,
                        std::uint64_t radius) {
    BallScanner scan(g);
    return scan_edges_to(scan, g, allowed, target, v, radius, std::numeric_limits<long long>::max());
}

std::optional<BallViolation> first_excess_violation(const Graph& g, std::span<const char> allowed,
                                                    std::uint64_t radius, long long limit) {
    BallScanner scan(g);
    auto total = [&](const std::vector<Vertex>& verts) {
        long long twice_edges = 0;
        for (Vertex v : verts) {
            for (Vertex w : g.neighbors(v)) twice_edges += allowed[w] ? 1 : 0;
        }
        return twice_edges / 2 - static_cast<long long>(verts.size());
    };
    auto one = [&](Vertex v, long long stop) { return scan_excess(scan, g, allowed, v, radius, stop); };
    return first_violation(g, allowed, radius, limit, total, one);
}

std::optional<BallViolation> first_edges_to_violation(const Graph& g, std::span<const char> allowed,
                                                      std::span<const char> target, std::uint64_t radius,
                                                      long long limit) {
    BallScanner scan(g);
    auto total = [&](const std::vector<Vertex>& verts) {
        long long edges = 0;
        for (Vertex v : verts) {
            for (Vertex w : g.neighbors(v)) edges += target[w] ? 1 : 0;
        }
        return edges;
    };
    auto one = [&](Vertex v, long long stop) { return scan_edges_to(scan, g, allowed, target, v, radius, stop); };
    return first_violation(g, allowed, radius, limit, total, one);
}

PartitionVerdict verify_brmu_partition(const Graph& g, const PartitionParams& params) {
    if (params.b < 1 || params.r < 1 || params.mu < 1) throw std::invalid_argument("b, r, mu must be >= 1");
    PartitionVerdict verdict;
    const auto n = g.vertex_count();
    verdict.partition = CanonicalPartition::build(n, params);
    const auto& part = verdict.partition;
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();

    const auto mu_sq = saturating_pow(params.mu, 2, static_cast<std::uint64_t>(std::numeric_limits<long long>::max()));
    const auto radius3 = saturating_pow(40, 1, kMax) * params.mu > kMax / std::max<std::uint64_t>(params.r, 1)
                             ? kMax
                             : 40 * params.mu * params.r;
    const auto radius4 = radius3 == kMax ? kMax : 20 * params.mu * params.r;

    std::vector<char> bc(n, 0);
    for (std::size_t v = part.a_end; v < n; ++v) bc[v] = 1;
    if (auto bad = first_excess_violation(g, bc, radius3, static_cast<long long>(mu_sq))) {
        verdict.pass = false;
        verdict.property = 3;
        verdict.center = bad->center;
        verdict.measured = bad->measured;
        verdict.limit = static_cast<long long>(mu_sq);
        return verdict;
    }
    if (part.b_end < n) {
        std::vector<char> c(n, 0);
        std::vector<char> a(n, 0);
        for (std::size_t v = part.b_end; v < n; ++v) c[v] = 1;
        for (std::size_t v = 0; v < part.a_end; ++v) a[v] = 1;
        if (auto bad = first_edges_to_violation(g, c, a, radius4, static_cast<long long>(params.mu))) {
            verdict.pass = false;
            verdict.property = 4;
            verdict.center = bad->center;
            verdict.measured = bad->measured;
            verdict.limit = static_cast<long long>(params.mu);
        }
    }
    return verdict;
}

std::uint64_t minimal_b(const Graph& g, std::uint64_t r, std::uint64_t mu) {
    const std::uint64_t n = g.vertex_count();
    for (std::uint64_t b = 1; b < std::max<std::uint64_t>(n, 1); ++b) {
        if (verify_brmu_partition(g, {b, r, mu}).pass) return b;
    }
    return std::max<std::uint64_t>(n, 1);
}

std::vector<Vertex> peel_degree_one(const Graph& g) {
    const auto n = g.vertex_count();
    std::vector<std::size_t> deg(n);
    std::vector<char> removed(n, 0);
    std::vector<Vertex> queue;
    for (Vertex v = 0; v < n; ++v) {
        deg[v] = g.degree(v);
        if (deg[v] <= 1) {
            removed[v] = 1;
            queue.push_back(v);
        }
    }
    for (std::size_t head = 0; head < queue.size(); ++head) {
        for (Vertex w : g.neighbors(queue[head])) {
            if (removed[w]) continue;
            if (--deg[w] <= 1) {
                removed[w] = 1;
                queue.push_back(w);
            }
        }
    }
    std::sort(queue.begin(), queue.end());
    return queue;
}

std::size_t ProtrusionSkeleton::max_component_size() const {
    std::size_t best = 0;
    for (const auto& c : components) best = std::max(best, c.vertices.size());
    return best;
}

ProtrusionSkeleton protrusion_skeleton(const Graph& g, std::uint64_t r, std::uint64_t mu) {
    if (r < 1 || mu < 1) throw std::invalid_argument("r, mu must be >= 1");
    const auto n = g.vertex_count();
    ProtrusionSkeleton sk;
    sk.degree_threshold = protrusion_degree_threshold(r, mu);
    sk.z = peel_degree_one(g);
    sk.in_z.assign(n, 0);
    for (Vertex v : sk.z) sk.in_z[v] = 1;
    sk.in_p.assign(n, 0);
    for (Vertex v = 0; v < n; ++v) {
        if (sk.in_z[v]) continue;
        std::uint64_t deg = 0;
        for (Vertex w : g.neighbors(v)) deg += sk.in_z[w] ? 0 : 1;
        if (deg <= sk.degree_threshold) {
            sk.in_p[v] = 1;
            sk.p.push_back(v);
        }
    }
    std::uint32_t count = 0;
    auto comp = component_ids(g, sk.in_p, &count);
    sk.components.resize(count);
    for (Vertex v : sk.p) sk.components[comp[v]].vertices.push_back(v);
    std::set<std::vector<Vertex>> family;
    for (auto& c : sk.components) {
        for (Vertex v : c.vertices) {
            for (Vertex w : g.neighbors(v)) {
                if (!sk.in_p[w] && !sk.in_z[w]) c.boundary.push_back(w);
            }
        }
        std::sort(c.boundary.begin(), c.boundary.end());
        c.boundary.erase(std::unique(c.boundary.begin(), c.boundary.end()), c.boundary.end());
        if (c.boundary.size() <= mu) family.insert(c.boundary);
    }
    sk.s_family.assign(family.begin(), family.end());
    return sk;
}

ProtrusionVerdict verify_protrusion_partition(const Graph& g, const LocalProtrusionPartition& part,
                                              std::uint64_t b, std::uint64_t r, std::uint64_t mu) {
    const auto n = g.vertex_count();
    auto fail = [](int property, std::string detail) { return ProtrusionVerdict{false, property, std::move(detail)}; };

    // 1: disjoint cover.
    std::vector<char> cls(n, 0);  // 1 = X, 2 = Y, 3 = Z
    const std::vector<Vertex>* sets[] = {&part.x, &part.y, &part.z};
    for (int k = 0; k < 3; ++k) {
        for (Vertex v : *sets[k]) {
            if (v >= n) return fail(1, "vertex out of range");
            if (cls[v] != 0) return fail(1, "vertex " + std::to_string(v + 1) + " in two sets");
            cls[v] = static_cast<char>(k + 1);
        }
    }
    for (Vertex v = 0; v < n; ++v) {
        if (cls[v] == 0) return fail(1, "vertex " + std::to_string(v + 1) + " uncovered");
    }
    // 2: |X| <= b^mu.
    const auto b_mu = saturating_pow(b, mu, std::numeric_limits<std::uint64_t>::max());
    if (part.x.size() > b_mu) return fail(2, "|X| = " + std::to_string(part.x.size()));

    auto members_of = [&](char k) {
        std::vector<char> m(n, 0);
        for (Vertex v = 0; v < n; ++v) m[v] = cls[v] == k ? 1 : 0;
        return m;
    };
    // 3: components of G[Y] small with few X-neighbors.
    const auto size_limit = saturating_pow(mu, 7, std::numeric_limits<std::uint64_t>::max());
    const std::uint64_t y_size_limit = size_limit > std::numeric_limits<std::uint64_t>::max() / r
                                           ? std::numeric_limits<std::uint64_t>::max()
                                           : r * size_limit;
    {
        auto in_y = members_of(2);
        std::uint32_t count = 0;
        auto comp = component_ids(g, in_y, &count);
        std::vector<std::vector<Vertex>> comps(count);
        for (Vertex v = 0; v < n; ++v) {
            if (comp[v] != kNoComponent) comps[comp[v]].push_back(v);
        }
        for (const auto& c : comps) {
            if (c.size() > y_size_limit) return fail(3, "Y component of size " + std::to_string(c.size()));
            std::set<Vertex> xs;
            for (Vertex v : c) {
                for (Vertex w : g.neighbors(v)) {
                    if (cls[w] == 1) xs.insert(w);
                }
            }
            if (xs.size() > mu) return fail(3, "Y component with " + std::to_string(xs.size()) + " X-neighbors");
        }
    }
    // 4: components of G[Z] are trees with at most one edge leaving Z.
    {
        auto in_z = members_of(3);
        std::uint32_t count = 0;
        auto comp = component_ids(g, in_z, &count);
        std::vector<long long> verts(count, 0);
        std::vector<long long> inner(count, 0);
        std::vector<long long> out(count, 0);
        for (Vertex v = 0; v < n; ++v) {
            if (comp[v] == kNoComponent) continue;
            ++verts[comp[v]];
            for (Vertex w : g.neighbors(v)) {
                if (in_z[w]) ++inner[comp[v]];
                else ++out[comp[v]];
            }
        }
        for (std::uint32_t c = 0; c < count; ++c) {
            if (inner[c] / 2 != verts[c] - 1) return fail(4, "Z component is not a tree");
            if (out[c] > 1) return fail(4, "Z component with " + std::to_string(out[c]) + " outgoing edges");
        }
    }
    // 5: distinct X-boundaries of components of G[Y u Z].
    {
        std::vector<char> yz(n, 0);
        for (Vertex v = 0; v < n; ++v) yz[v] = cls[v] != 1 ? 1 : 0;
        std::uint32_t count = 0;
        auto comp = component_ids(g, yz, &count);
        std::vector<std::set<Vertex>> boundary(count);
        for (Vertex v = 0; v < n; ++v) {
            if (comp[v] == kNoComponent) continue;
            for (Vertex w : g.neighbors(v)) {
                if (cls[w] == 1) boundary[comp[v]].insert(w);
            }
        }
        std::set<std::set<Vertex>> distinct(boundary.begin(), boundary.end());
        if (distinct.size() > b_mu) return fail(5, std::to_string(distinct.size()) + " distinct boundaries");
    }
    return {};
}

double d_hat(double alpha, std::size_t n) {
    if (!(alpha > 2)) throw std::invalid_argument("d_hat requires alpha > 2");
    if (n < 1) throw std::invalid_argument("d_hat requires n >= 1");
    if (alpha > 3) return 2.0;
    if (alpha == 3) return std::log(static_cast<double>(n));
    return std::pow(static_cast<double>(n), 3.0 - alpha);
}

DegreeRegime d_tilde_regime(double alpha) {
    if (!(alpha > 2)) throw std::invalid_argument("regime requires alpha > 2");
    if (alpha > 3) return DegreeRegime::Constant;
    if (alpha == 3) return DegreeRegime::Logarithmic;
    return DegreeRegime::Polynomial;
}

std::string to_string(DegreeRegime regime) {
    switch (regime) {
        case DegreeRegime::Constant: return "constant";
        case DegreeRegime::Logarithmic: return "logarithmic";
        case DegreeRegime::Polynomial: return "polynomial";
    }
    return "?";
}

}  // namespace fomc
