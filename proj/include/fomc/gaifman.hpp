#pragma once

#include <string>
#include <vector>

#include "fomc/formula.hpp"
#include "fomc/gnf.hpp"
#include "fomc/graph.hpp"
#include "fomc/kernel.hpp"

namespace fomc {

struct LocalConfig {
    KernelConfig kernel;      // q is overridden per formula
    bool use_kernel = true;
    bool diameter_shortcut = true;
};

/// Decides G |= omega(v) on the radius-r ball of v. With use_kernel the ball
/// gets a marker label on v, is kernelized at rank qrank(omega)+1 and the
/// sentence "the marked vertex satisfies omega" is checked on the kernel.
/// Throws std::invalid_argument unless omega has exactly one free variable.
bool eval_local(const LabeledGraph& g, Vertex v, const Formula& omega, unsigned r, const LocalConfig& config,
                RepresentativeCache& cache);

/// All vertices satisfying omega locally, ascending.
std::vector<Vertex> satisfying_set(const LabeledGraph& g, const Formula& omega, unsigned r, const LocalConfig& config,
                                   RepresentativeCache& cache);

struct ScatteredResult {
    unsigned count = 0;          // min(s, largest subset of W with pairwise distance > 2r)
    bool shortcut_fired = false; // some component had eccentricity > 12rs
    std::size_t components = 0;  // components of H meeting W
};

/// Largest subset of W with pairwise distance > 2r, capped at s. H is the
/// subgraph induced by the vertices within distance r of W; a component of
/// H whose BFS eccentricity from a W-vertex exceeds 12rs certifies s at once
/// (r >= 1 only). Other components are solved exactly.
ScatteredResult max_scattered(const Graph& g, const std::vector<Vertex>& w, unsigned r, unsigned s,
                              bool allow_shortcut = true);

struct LeafOutcome {
    std::string name;
    std::size_t satisfying = 0;
    ScatteredResult scattered;
    bool value = false;
};

struct GnfOutcome {
    bool verdict = false;
    std::vector<LeafOutcome> leaves;
    double wall_seconds = 0.0;
};

GnfOutcome check_gnf(const LabeledGraph& g, const GnfSentence& psi, const LocalConfig& config,
                     RepresentativeCache& cache);

}  // namespace fomc
