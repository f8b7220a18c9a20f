#include "fomc/kernel.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <unordered_map>

#include "fomc/decomp.hpp"

namespace fomc {

void KernelConfig::validate() const {
    if (rep_cap < 1 || rep_cap > 7) throw std::invalid_argument("rep_cap must be in [1, 7]");
    if (tree_chunk < 2) throw std::invalid_argument("tree_chunk must be >= 2");
    if (r < 1 || mu < 1) throw std::invalid_argument("r and mu must be >= 1");
    if (q > 16) throw std::invalid_argument("q must be <= 16");
}

namespace {

constexpr unsigned kTreeRepCap = 7;

unsigned pair_index(unsigned s, unsigned i, unsigned j) {
    if (i > j) std::swap(i, j);
    // Pairs (0,1),(0,2),...,(0,s-1),(1,2),...
    return i * (2 * s - i - 1) / 2 + (j - i - 1);
}

bool mask_connected(unsigned s, std::uint32_t mask) {
    if (s == 0) return true;
    std::uint32_t seen = 1;
    std::uint32_t frontier = 1;
    while (frontier != 0) {
        std::uint32_t next = 0;
        for (unsigned v = 0; v < s; ++v) {
            if (!((frontier >> v) & 1U)) continue;
            for (unsigned w = 0; w < s; ++w) {
                if (w != v && ((mask >> pair_index(s, v, w)) & 1U) && !((seen >> w) & 1U)) next |= 1U << w;
            }
        }
        seen |= next;
        frontier = next;
    }
    return seen == (1U << s) - 1;
}

std::vector<Vertex> check_tuple(const LabeledGraph& h, std::span<const Vertex> u) {
    std::vector<Vertex> sorted(u.begin(), u.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw std::invalid_argument("tuple has a repeated vertex");
    }
    if (!sorted.empty() && sorted.back() >= h.vertex_count()) throw std::invalid_argument("tuple vertex out of range");
    return sorted;
}

}  // namespace

// Orbit representatives of adjacency masks on s vertices under permutations
// of the free vertices k..s-1, each with its automorphism group.
struct RepresentativeCache::Shapes {
    struct Shape {
        std::uint32_t mask = 0;
        std::vector<std::vector<std::uint8_t>> automorphisms;  // non-identity only
    };
    std::vector<Shape> list;
};

struct RepresentativeCache::Entry {
    unsigned explored = 0;  // sizes <= explored are fully enumerated
    std::unordered_map<std::uint32_t, Representative> found;
    // Inputs for candidate generation.
    unsigned q = 0;
    unsigned k = 0;
    std::size_t labels = 0;
    RepresentativeFamily family = RepresentativeFamily::Connected;
    std::vector<std::uint64_t> designated_colors;
    std::uint32_t designated_mask = 0;  // adjacency among the first k vertices, in s=k pair order
    std::vector<std::uint64_t> colors;  // distinct colors of the input, ascending
    std::vector<std::uint32_t> counts;  // capped count per color
    std::vector<char> exact;            // count must match exactly (below the cap)
};

RepresentativeCache::RepresentativeCache() = default;
RepresentativeCache::~RepresentativeCache() = default;

const RepresentativeCache::Shapes& RepresentativeCache::shapes(unsigned s, unsigned k, RepresentativeFamily family) {
    std::vector<unsigned> key{s, k, static_cast<unsigned>(family)};
    auto it = shapes_.find(key);
    if (it != shapes_.end()) return *it->second;

    auto out = std::make_unique<Shapes>();
    const unsigned pairs = s * (s - 1) / 2;
    std::vector<std::uint8_t> perm(s);
    std::iota(perm.begin(), perm.end(), 0);
    std::vector<std::vector<std::uint8_t>> perms;  // pair maps of non-identity permutations
    std::vector<std::vector<std::uint8_t>> vertex_perms;
    while (std::next_permutation(perm.begin() + k, perm.end())) {
        std::vector<std::uint8_t> pm(pairs);
        for (unsigned i = 0; i < s; ++i) {
            for (unsigned j = i + 1; j < s; ++j) pm[pair_index(s, i, j)] = static_cast<std::uint8_t>(pair_index(s, perm[i], perm[j]));
        }
        perms.push_back(std::move(pm));
        vertex_perms.push_back(perm);
    }
    const std::uint64_t total = std::uint64_t{1} << pairs;
    for (std::uint64_t m = 0; m < total; ++m) {
        const auto mask = static_cast<std::uint32_t>(m);
        if (family == RepresentativeFamily::Trees && std::popcount(mask) != static_cast<int>(s) - 1) continue;
        bool minimal = true;
        std::vector<std::size_t> auts;
        for (std::size_t p = 0; p < perms.size(); ++p) {
            std::uint32_t image = 0;
            for (unsigned b = 0; b < pairs; ++b) {
                if ((mask >> b) & 1U) image |= 1U << perms[p][b];
            }
            if (image < mask) {
                minimal = false;
                break;
            }
            if (image == mask) auts.push_back(p);
        }
        if (!minimal || !mask_connected(s, mask)) continue;
        Shapes::Shape shape;
        shape.mask = mask;
        for (auto p : auts) shape.automorphisms.push_back(vertex_perms[p]);
        out->list.push_back(std::move(shape));
    }
    return *shapes_.emplace(std::move(key), std::move(out)).first->second;
}

void RepresentativeCache::explore(Entry& e, const Key& /*key*/, unsigned s) {
    const auto& shape_list = shapes(s, e.k, e.family).list;
    std::vector<Vertex> tuple(e.k);
    std::iota(tuple.begin(), tuple.end(), 0);
    std::vector<std::size_t> choice(s, 0);  // index into e.colors for free vertices
    std::vector<std::uint64_t> col(s);
    for (unsigned i = 0; i < e.k; ++i) col[i] = e.designated_colors[i];
    std::vector<std::uint32_t> base_count(e.colors.size(), 0);
    for (unsigned i = 0; i < e.k; ++i) {
        auto pos = std::lower_bound(e.colors.begin(), e.colors.end(), col[i]) - e.colors.begin();
        ++base_count[pos];
    }
    const std::uint32_t cap = e.q;

    for (const auto& shape : shape_list) {
        // The designated block must carry the input's adjacency pattern.
        bool ok = true;
        for (unsigned i = 0; i < e.k && ok; ++i) {
            for (unsigned j = i + 1; j < e.k; ++j) {
                bool want = (e.designated_mask >> pair_index(e.k, i, j)) & 1U;
                bool have = (shape.mask >> pair_index(s, i, j)) & 1U;
                if (want != have) {
                    ok = false;
                    break;
                }
            }
        }
        if (!ok) continue;

        std::vector<Edge> edges;
        for (unsigned i = 0; i < s; ++i) {
            for (unsigned j = i + 1; j < s; ++j) {
                if ((shape.mask >> pair_index(s, i, j)) & 1U) edges.emplace_back(i, j);
            }
        }
        Graph graph(s, edges);

        // Lexicographic colorings of the free vertices with the input's capped color profile.
        std::vector<std::uint32_t> count = base_count;
        auto emit = [&]() {
            for (std::size_t c = 0; c < e.colors.size(); ++c) {
                std::uint32_t have = std::min(count[c], cap);
                if (have != e.counts[c]) return;
            }
            for (const auto& aut : shape.automorphisms) {
                for (unsigned i = 0; i < s; ++i) {
                    if (col[aut[i]] != col[i]) {
                        if (col[aut[i]] < col[i]) return;
                        break;
                    }
                }
            }
            std::vector<std::vector<Vertex>> labels(e.labels);
            for (unsigned v = 0; v < s; ++v) {
                for (std::size_t b = 0; b < e.labels; ++b) {
                    if ((col[v] >> b) & 1U) labels[b].push_back(v);
                }
            }
            LabeledGraph cand(graph, std::move(labels));
            ++typed_;
            auto t = types_.compute(cand, tuple, e.q);
            if (!e.found.contains(t.id)) {
                Representative rep;
                rep.graph = std::move(cand);
                rep.tuple = tuple;
                e.found.emplace(t.id, std::move(rep));
            }
        };
        auto recurse = [&](auto&& self, unsigned v) -> void {
            if (v == s) {
                emit();
                return;
            }
            for (std::size_t c = 0; c < e.colors.size(); ++c) {
                if (e.exact[c] && count[c] >= e.counts[c]) continue;
                col[v] = e.colors[c];
                ++count[c];
                self(self, v + 1);
                --count[c];
            }
        };
        recurse(recurse, e.k);
    }
}

Representative RepresentativeCache::minimal(const LabeledGraph& h, std::span<const Vertex> u, unsigned q, unsigned cap,
                                            RepresentativeFamily family) {
    check_tuple(h, u);
    const auto n = h.vertex_count();
    if (n > 0 && connected_components(h.graph()).size() != 1) throw std::invalid_argument("input graph is not connected");
    const auto k = static_cast<unsigned>(u.size());

    std::lock_guard lock(mutex_);
    const auto target = types_.compute(h, u, q);
    const auto atomic = types_.compute(h, u, 0);

    Key key{q, k, h.label_count(), static_cast<std::uint64_t>(family), atomic.id};
    std::vector<std::uint64_t> colors;
    for (Vertex v = 0; v < n; ++v) colors.push_back(h.label_mask(v));
    std::sort(colors.begin(), colors.end());
    std::vector<std::uint64_t> distinct = colors;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    std::vector<std::uint32_t> counts;
    for (auto c : distinct) {
        auto cnt = static_cast<std::uint32_t>(std::count(colors.begin(), colors.end(), c));
        counts.push_back(std::min<std::uint32_t>(cnt, q));
        key.push_back(c);
        key.push_back(counts.back());
    }

    auto& slot = entries_[key];
    if (!slot) {
        slot = std::make_unique<Entry>();
        auto& e = *slot;
        e.q = q;
        e.k = k;
        e.labels = h.label_count();
        e.family = family;
        e.colors = distinct;
        e.counts = counts;
        for (std::size_t c = 0; c < distinct.size(); ++c) e.exact.push_back(counts[c] < q ? 1 : 0);
        for (unsigned i = 0; i < k; ++i) {
            e.designated_colors.push_back(h.label_mask(u[i]));
            for (unsigned j = i + 1; j < k; ++j) {
                if (h.graph().has_edge(u[i], u[j])) e.designated_mask |= 1U << pair_index(k, i, j);
            }
        }
        e.explored = std::max(k, 1U) - 1;
    }
    auto& e = *slot;

    // Rooted trees are cheap to enumerate and some rank-2 rooted tree types
    // have no representative below 7 vertices.
    if (family == RepresentativeFamily::Trees) cap = std::max(cap, kTreeRepCap);
    const unsigned limit = static_cast<unsigned>(std::min<std::size_t>(cap, n == 0 ? 0 : n - 1));
    auto it = e.found.find(target.id);
    while ((it == e.found.end() || it->second.graph.vertex_count() > limit) && e.explored < limit) {
        explore(e, key, ++e.explored);
        it = e.found.find(target.id);
    }
    if (it != e.found.end() && it->second.graph.vertex_count() <= limit) return it->second;

    Representative self;
    self.graph = h;
    self.tuple.assign(u.begin(), u.end());
    self.is_input = true;
    self.fallback = n > cap;
    return self;
}

Representative minimal_representative(RepresentativeCache& cache, const LabeledGraph& h, std::span<const Vertex> u,
                                      unsigned q, unsigned cap) {
    return cache.minimal(h, u, q, cap, RepresentativeFamily::Connected);
}

namespace {

struct Replacement {
    std::vector<Vertex> interior;  // parent vertices removed
    std::vector<Vertex> boundary;  // parent vertices of the tuple
    Representative rep;
};

// Removes every interior and glues each representative along its boundary.
LabeledGraph apply_replacements(const LabeledGraph& g, const std::vector<Replacement>& reps) {
    const auto n = g.vertex_count();
    std::vector<char> removed(n, 0);
    for (const auto& r : reps) {
        for (Vertex v : r.interior) removed[v] = 1;
    }
    std::vector<Vertex> new_index(n, kUnreachable);
    std::vector<std::uint64_t> colors;
    Vertex next = 0;
    for (Vertex v = 0; v < n; ++v) {
        if (removed[v]) continue;
        new_index[v] = next++;
        colors.push_back(g.label_mask(v));
    }
    std::vector<Edge> edges;
    for (auto [a, b] : g.graph().edges()) {
        if (!removed[a] && !removed[b]) edges.emplace_back(new_index[a], new_index[b]);
    }
    for (const auto& r : reps) {
        const auto& rg = r.rep.graph;
        std::vector<Vertex> map(rg.vertex_count(), kUnreachable);
        std::vector<char> designated(rg.vertex_count(), 0);
        for (std::size_t i = 0; i < r.rep.tuple.size(); ++i) {
            map[r.rep.tuple[i]] = new_index[r.boundary[i]];
            designated[r.rep.tuple[i]] = 1;
        }
        for (Vertex v = 0; v < rg.vertex_count(); ++v) {
            if (map[v] != kUnreachable) continue;
            map[v] = next++;
            colors.push_back(rg.label_mask(v));
        }
        for (auto [a, b] : rg.graph().edges()) {
            if (designated[a] && designated[b]) continue;
            edges.emplace_back(map[a], map[b]);
        }
    }
    std::vector<std::vector<Vertex>> labels(g.label_count());
    for (Vertex v = 0; v < next; ++v) {
        for (std::size_t b = 0; b < labels.size(); ++b) {
            if ((colors[v] >> b) & 1U) labels[b].push_back(v);
        }
    }
    return LabeledGraph(Graph(next, edges), std::move(labels));
}

// A rooted labeled tree under construction; the root is vertex 0.
struct SmallTree {
    std::vector<std::uint64_t> color;
    std::vector<Edge> edges;

    std::size_t size() const { return color.size(); }

    void attach(const SmallTree& branch) {
        const auto offset = static_cast<Vertex>(color.size());
        color.insert(color.end(), branch.color.begin(), branch.color.end());
        for (auto [a, b] : branch.edges) edges.emplace_back(a + offset, b + offset);
        edges.emplace_back(0, offset);
    }

    LabeledGraph to_graph(std::size_t label_count) const {
        std::vector<std::vector<Vertex>> labels(label_count);
        for (Vertex v = 0; v < color.size(); ++v) {
            for (std::size_t b = 0; b < label_count; ++b) {
                if ((color[v] >> b) & 1U) labels[b].push_back(v);
            }
        }
        return LabeledGraph(Graph(color.size(), edges), std::move(labels));
    }

    // Re-roots a representative so its designated vertex becomes 0.
    static SmallTree from(const Representative& rep) {
        const auto& g = rep.graph;
        const auto s = static_cast<Vertex>(g.vertex_count());
        const Vertex root = rep.tuple.at(0);
        std::vector<Vertex> map(s);
        Vertex next = 1;
        for (Vertex v = 0; v < s; ++v) map[v] = v == root ? 0 : next++;
        SmallTree t;
        t.color.resize(s);
        for (Vertex v = 0; v < s; ++v) t.color[map[v]] = g.label_mask(v);
        for (auto [a, b] : g.graph().edges()) t.edges.emplace_back(map[a], map[b]);
        return t;
    }
};

}  // namespace

SpliceResult replace_part(const LabeledGraph& g, std::span<const Vertex> part, std::span<const Vertex> u,
                          const KernelConfig& config, RepresentativeCache& cache) {
    config.validate();
    const auto n = g.vertex_count();
    std::vector<char> in_part(n, 0);
    for (Vertex v : part) {
        if (v >= n) throw std::invalid_argument("part vertex out of range");
        in_part[v] = 1;
    }
    std::vector<char> in_u(n, 0);
    for (Vertex v : u) {
        if (v >= n || !in_part[v]) throw std::invalid_argument("tuple vertex outside the part");
        in_u[v] = 1;
    }
    for (Vertex v : part) {
        if (in_u[v]) continue;
        for (Vertex w : g.graph().neighbors(v)) {
            if (!in_part[w]) throw std::invalid_argument("an edge leaves the part away from the tuple");
        }
    }
    std::vector<Vertex> members;
    for (Vertex v = 0; v < n; ++v) {
        if (in_part[v]) members.push_back(v);
    }
    if (members.size() == u.size()) return {g, false, false};
    auto sub = induced_subgraph(g, members);
    std::vector<Vertex> local_u;
    for (Vertex v : u) local_u.push_back(static_cast<Vertex>(std::lower_bound(members.begin(), members.end(), v) - members.begin()));
    auto rep = cache.minimal(sub.graph, local_u, config.q, config.rep_cap);
    if (rep.is_input) return {g, false, rep.fallback};
    Replacement r;
    for (Vertex v : members) {
        if (!in_u[v]) r.interior.push_back(v);
    }
    r.boundary.assign(u.begin(), u.end());
    r.rep = std::move(rep);
    return {apply_replacements(g, {r}), true, false};
}

LabeledGraph reduce_trees(const LabeledGraph& g, std::span<const Vertex> z, const KernelConfig& config,
                          RepresentativeCache& cache, KernelReport* report) {
    config.validate();
    const auto& graph = g.graph();
    const auto n = graph.vertex_count();
    {
        auto expected = peel_degree_one(graph);
        if (!std::equal(expected.begin(), expected.end(), z.begin(), z.end())) {
            throw std::invalid_argument("z is not the degree-one peel of g");
        }
    }
    std::vector<char> in_z(n, 0);
    for (Vertex v : z) in_z[v] = 1;

    auto reduce = [&](SmallTree& acc) {
        auto h = acc.to_graph(g.label_count());
        const Vertex root = 0;
        auto rep = cache.minimal(h, std::span<const Vertex>(&root, 1), config.q, config.rep_cap,
                                 RepresentativeFamily::Trees);
        if (rep.fallback && report) ++report->fallbacks;
        if (rep.is_input) return;
        if (report) ++report->trees_reduced;
        acc = SmallTree::from(rep);
    };

    // Roots: attachment vertices outside z with a neighbor in z, and the
    // smallest vertex of each component lying entirely in z.
    std::vector<Vertex> roots;
    std::vector<char> visited(n, 0);
    std::uint32_t comp_count = 0;
    auto comp = component_ids(graph, in_z, &comp_count);
    std::vector<char> attached(comp_count, 0);
    for (Vertex v = 0; v < n; ++v) {
        if (in_z[v]) continue;
        bool has = false;
        for (Vertex w : graph.neighbors(v)) {
            if (in_z[w]) {
                has = true;
                attached[comp[w]] = 1;
            }
        }
        if (has) roots.push_back(v);
    }
    {
        std::vector<char> seen(comp_count, 0);
        for (Vertex v = 0; v < n; ++v) {
            if (!in_z[v] || attached[comp[v]] || seen[comp[v]]) continue;
            seen[comp[v]] = 1;
            roots.push_back(v);
        }
    }
    std::sort(roots.begin(), roots.end());

    std::vector<Replacement> replacements;
    std::vector<std::optional<SmallTree>> acc(n);
    struct Frame {
        Vertex v;
        Vertex parent;
        std::size_t next;
    };
    for (Vertex root : roots) {
        std::vector<Frame> stack{{root, kUnreachable, 0}};
        acc[root] = SmallTree{{g.label_mask(root)}, {}};
        std::vector<Vertex> interior;
        if (in_z[root]) interior.push_back(root);
        while (!stack.empty()) {
            auto& f = stack.back();
            auto nb = graph.neighbors(f.v);
            if (f.next < nb.size()) {
                Vertex w = nb[f.next++];
                if (w == f.parent || !in_z[w]) continue;
                acc[w] = SmallTree{{g.label_mask(w)}, {}};
                interior.push_back(w);
                stack.push_back({w, f.v, 0});
                continue;
            }
            const Vertex v = f.v;
            const Vertex parent = f.parent;
            stack.pop_back();
            if (parent == kUnreachable) {
                reduce(*acc[v]);
                break;
            }
            if (acc[v]->size() > config.rep_cap) reduce(*acc[v]);
            acc[parent]->attach(*acc[v]);
            acc[v].reset();
            if (acc[parent]->size() > config.tree_chunk) reduce(*acc[parent]);
        }
        Replacement r;
        r.interior = std::move(interior);
        if (!in_z[root]) r.boundary.push_back(root);
        r.rep.graph = acc[root]->to_graph(g.label_count());
        if (!in_z[root]) r.rep.tuple.push_back(0);
        acc[root].reset();
        replacements.push_back(std::move(r));
    }
    return apply_replacements(g, replacements);
}

KernelResult replace_protrusions(const LabeledGraph& g, const KernelConfig& config, RepresentativeCache& cache) {
    config.validate();
    const auto start = std::chrono::steady_clock::now();
    KernelResult out;
    out.report.input_vertices = g.vertex_count();
    out.report.input_edges = g.graph().edge_count();

    auto first = reduce_trees(g, peel_degree_one(g.graph()), config, cache, &out.report);

    const auto& graph = first.graph();
    auto sk = protrusion_skeleton(graph, config.r, config.mu);
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    const auto mu7 = saturating_pow(config.mu, 7, kMax);
    const auto size_limit = mu7 > kMax / config.r ? kMax : config.r * mu7;

    // Group the small components of G[P] by exact boundary.
    std::map<std::vector<Vertex>, std::vector<std::size_t>> by_boundary;
    for (std::size_t c = 0; c < sk.components.size(); ++c) {
        const auto& comp = sk.components[c];
        if (comp.vertices.size() > size_limit || comp.boundary.size() > config.mu) continue;
        by_boundary[comp.boundary].push_back(c);
    }

    std::vector<Replacement> replacements;
    auto consider = [&](const std::vector<Vertex>& boundary, const std::vector<std::size_t>& comps) {
        // Interior: the components plus the pendant trees hanging off them.
        std::vector<Vertex> interior;
        std::vector<char> mark(graph.vertex_count(), 0);
        for (auto c : comps) {
            for (Vertex v : sk.components[c].vertices) {
                mark[v] = 1;
                interior.push_back(v);
            }
        }
        for (std::size_t head = 0; head < interior.size(); ++head) {
            for (Vertex w : graph.neighbors(interior[head])) {
                if (sk.in_z[w] && !mark[w]) {
                    mark[w] = 1;
                    interior.push_back(w);
                }
            }
        }
        std::vector<Vertex> members = interior;
        members.insert(members.end(), boundary.begin(), boundary.end());
        std::sort(members.begin(), members.end());
        if (members.size() > config.max_part) {
            ++out.report.skipped_large;
            return;
        }
        auto sub = induced_subgraph(first, members);
        std::vector<Vertex> local_u;
        for (Vertex v : boundary) {
            local_u.push_back(static_cast<Vertex>(std::lower_bound(members.begin(), members.end(), v) - members.begin()));
        }
        auto rep = cache.minimal(sub.graph, local_u, config.q, config.rep_cap);
        if (rep.fallback) ++out.report.fallbacks;
        if (rep.is_input) return;
        std::sort(interior.begin(), interior.end());
        replacements.push_back({std::move(interior), boundary, std::move(rep)});
        ++out.report.protrusions_replaced;
    };
    for (const auto& [boundary, comps] : by_boundary) {
        if (boundary.empty()) {
            // Each such component, with its pendant trees, is a whole component of G.
            for (auto c : comps) consider(boundary, {c});
        } else {
            consider(boundary, comps);
        }
    }

    LabeledGraph second = replacements.empty() ? std::move(first) : apply_replacements(first, replacements);
    out.graph = reduce_trees(second, peel_degree_one(second.graph()), config, cache, &out.report);
    out.report.output_vertices = out.graph.vertex_count();
    out.report.output_edges = out.graph.graph().edge_count();
    out.report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

}  // namespace fomc
