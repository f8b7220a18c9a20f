#pragma once

// Brute-force reference implementations and random instance generators used
// by the test suites and `fomc selftest`. Nothing here is on the fast path.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fomc/formula.hpp"
#include "fomc/gnf.hpp"
#include "fomc/graph.hpp"
#include "fomc/rng.hpp"

namespace fomc::oracle {

/// Graph on n vertices whose edges are the set bits of `mask` in pair order
/// (0,1),(0,2),...,(0,n-1),(1,2),...
Graph graph_from_mask(unsigned n, std::uint64_t mask);

/// Calls fn for every labeled simple graph on n vertices (n <= 8).
void for_each_graph(unsigned n, const std::function<void(const Graph&)>& fn);

/// Isomorphism-invariant canonical code (minimum pair mask over the
/// refinement-respecting orderings). n <= 11.
std::uint64_t canonical_code(const Graph& g);

/// One representative per isomorphism class of connected graphs on exactly
/// n vertices (1 <= n <= 8), in canonical form.
std::vector<Graph> connected_graphs(unsigned n);

/// Largest edge excess over the connected induced subgraphs of G[allowed]
/// with radius <= radius in their own metric; nullopt when allowed is
/// empty. Exhaustive over subsets; n <= 16.
std::optional<long long> brute_max_excess(const Graph& g, std::span<const char> allowed, unsigned radius);
/// Largest number of edges into `target` over the same family.
std::optional<long long> brute_max_edges_to(const Graph& g, std::span<const char> allowed,
                                            std::span<const char> target, unsigned radius);

/// Largest subset of W with pairwise distance > 2r, by subset enumeration.
unsigned brute_max_scattered(const Graph& g, const std::vector<Vertex>& w, unsigned r);

/// Degree-one peel by repeated scans in a random vertex order.
std::vector<Vertex> peel_random_order(const Graph& g, Rng& rng);

/// A random graph from one of the four models with small parameters:
/// 0 = ER(n, 2/n), 1 = Chung-Lu alpha 3, 2 = PA m 2, 3 = configuration with
/// integer power-law-3 weights. Labels: `labels` random sets.
LabeledGraph random_model_graph(Rng& rng, int model, std::size_t n, std::size_t labels);

/// Hand-built corpus members.
LabeledGraph path_graph(std::size_t n);
LabeledGraph cycle_graph(std::size_t n);
LabeledGraph star_graph(std::size_t leaves);
LabeledGraph complete_graph(std::size_t n);
/// K_k with a path of `tail` extra vertices hanging off vertex 0.
LabeledGraph lollipop_graph(std::size_t k, std::size_t tail);
/// Uniform random labeled tree (Pruefer sequence).
LabeledGraph random_tree(Rng& rng, std::size_t n);

struct FormulaShape {
    unsigned max_rank = 2;
    unsigned max_depth = 5;  // connective depth
    std::size_t labels = 0;
};

/// Random formula whose free variables are a subset of `scope` and whose
/// quantifier rank is at most shape.max_rank. With an empty scope the result
/// is a sentence (rank >= 1 is then required).
Formula random_formula(Rng& rng, const std::vector<std::string>& scope, const FormulaShape& shape);

/// Random omega with exactly the free variable x.
Formula random_omega(Rng& rng, const FormulaShape& shape);

struct GnfShape {
    unsigned max_leaves = 3;
    unsigned max_r = 2;
    unsigned max_s = 2;
    FormulaShape omega;
};

GnfSentence random_gnf(Rng& rng, const GnfShape& shape);

/// Quantifiers of f restricted to the radius-r ball around `center`.
Formula relativize(const Formula& f, const std::string& center, unsigned r, const std::string& dist_prefix);

/// Pure FO sentence equivalent to the GNF sentence: each leaf becomes
/// exists w1..ws (pairwise dist > 2r and omega(wi) relativized to r-balls).
Formula expand_gnf(const GnfSentence& psi);

/// Normalized rank-2 sentences "exists x theta(x)", one per rank-1 Hintikka
/// formula theta over `labels` labels: the atomic type of x together with,
/// for each atomic type tau of a second vertex y != x, either exists y tau
/// or its negation. Two graphs agree on all of them iff they agree on all
/// FO sentences of rank <= 2.
std::vector<Formula> hintikka_rank2_sentences(std::size_t labels);

}  // namespace fomc::oracle
